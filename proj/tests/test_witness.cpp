#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "json.hpp"
#include "malnorm/witness.hpp"

using namespace malnorm;

namespace {

Word W(const char* text, int rank = 2) { return Word::parse(text, rank); }

SubgroupGraph gp(std::initializer_list<const char*> gens, int rank = 2) {
  std::vector<Word> words;
  for (const char* g : gens) words.push_back(Word::parse(g, rank));
  return SubgroupGraph::fold(rank, words);
}

}  // namespace

TEST_CASE("find_y") {
  const std::vector<SubgroupGraph> one{gp({"a"})};
  CHECK(find_y(2, one) == W("b"));
  CHECK(find_y(2, {}) == W("a"));
  const std::vector<SubgroupGraph> two{gp({"a"}), gp({"b"})};
  CHECK(find_y(2, two) == W("ab"));

  const std::vector<SubgroupGraph> finite{gp({"a", "b"})};
  CHECK_THROWS_AS(find_y(2, finite), hypothesis_error);
}

TEST_CASE("choose_t") {
  CHECK(choose_t(W("b")) == W("a"));
  CHECK(choose_t(W("a")) == W("b"));
  CHECK(choose_t(W("ab")) == W("a"));
  CHECK(conjugacy_disjoint(gp({"ab"}), gp({"a"})));
}

TEST_CASE("build_dn") {
  CHECK(build_dn(W("y", 25), W("t", 25), 1) ==
        std::pair{W("yttty", 25), W("tyyyt", 25)});
  CHECK(build_dn(W("a"), W("b"), 2) ==
        std::pair{W("aabbbbbbaa"), W("bbaaaaaabb")});
  // Junction reduction exercised: y=ab, t=a, n=1.
  CHECK(build_dn(W("ab"), W("a"), 1) == std::pair{W("abaaaab"), W("aabababa")});
  CHECK_THROWS_AS(build_dn(W("a"), W("b"), 0), std::invalid_argument);
}

TEST_CASE("lemma 6.3 threshold") {
  const std::vector<SubgroupGraph> one{gp({"a"})};
  const Lemma63Bounds b = lemma63_threshold(W("b"), W("a"), one);
  CHECK(b.k1 == 10);
  CHECK(b.k2 == 1);
  CHECK(b.k == 10);
  CHECK(b.m1 == 11);
  CHECK(b.ball == ball_size(2, std::size_t(10)));
  CHECK(b.m == 34 + ball_size(2, std::size_t(10)));
  CHECK(b.m == 118131);

  // Degenerate list: K = K1 branch.
  const Lemma63Bounds empty = lemma63_threshold(W("b"), W("a"), {});
  CHECK(empty.k2 == 0);
  CHECK(empty.m == b.m);

  // Enlarging a subgroup basis never decreases m.
  const std::vector<SubgroupGraph> bigger{gp({"a"}), gp({"babababababab"})};
  CHECK(lemma63_threshold(W("b"), W("a"), bigger).m >= b.m);

  CHECK_THROWS_AS(lemma63_threshold(W("ab"), W("ba"), {}), hypothesis_error);
}

TEST_CASE("prop 6.13 threshold") {
  CHECK(prop613_threshold(W("a")) == 600);
  CHECK(prop613_threshold(W("ab")) == 1800);
  CHECK_THROWS_AS(prop613_threshold(W("abab")), hypothesis_error);
}

TEST_CASE("prop 6.14 threshold") {
  const Prop614Bounds b = prop614_threshold(W("a"), W("b"));
  CHECK(b.k0 == 10);
  CHECK(b.ka == 600);
  CHECK(b.kb == 600);
  CHECK(b.n == 6000000);
  CHECK(prop614_threshold(W("ab"), W("ba")).n ==
        prop614_threshold(W("ba"), W("ab")).n);
  CHECK(prop614_threshold(W("abb"), W("a")).n ==
        prop614_threshold(W("a"), W("abb")).n);
  CHECK_THROWS_AS(prop614_threshold(W("ab"), W("BA")), hypothesis_error);
}

TEST_CASE("prop 6.15 instances") {
  for (int n : {1, 2, 3})
    for (int m : {1, 2, 3}) {
      const SubgroupGraph d = SubgroupGraph::fold(
          2, {multiply(power(W("a"), n),
                       multiply(power(W("b"), 3 * m), power(W("a"), n))),
              multiply(power(W("b"), m),
                       multiply(power(W("a"), 3 * n), power(W("b"), m)))});
      CHECK(is_malnormal(d).verdict);
    }
}

TEST_CASE("construct_witness, certified search") {
  SUBCASE("single cyclic subgroup") {
    const std::vector<SubgroupGraph> subs{gp({"a"})};
    const WitnessCertificate cert = construct_witness(2, subs);
    CHECK(cert.y == W("b"));
    CHECK(cert.t == W("a"));
    CHECK(cert.n == 1);
    REQUIRE(cert.generators.has_value());
    CHECK(cert.generators->first == W("baaab"));
    CHECK(cert.generators->second == W("abbba"));
    CHECK(cert.malnormality.verdict);
    CHECK(cert.disjointness == std::vector<bool>{true});
    CHECK(cert.verification == Verification::Certified);

    // Certificate soundness: rebuild everything from scratch.
    const auto gens = build_dn(cert.y, cert.t, 1);
    const SubgroupGraph dn = SubgroupGraph::fold(2, {gens.first, gens.second});
    CHECK(dn.basis().size() == 2);
    CHECK(is_malnormal(dn).verdict);
    for (std::size_t i = 0; i < subs.size(); ++i)
      CHECK(conjugacy_disjoint(dn, subs[i]));

    // Bound dominance: the searched n stays below the paper's.
    CHECK(cert.n <= cert.paper_bounds.lemma63.m);
    REQUIRE(cert.paper_bounds.prop615.has_value());
    CHECK(cert.n <= cert.paper_bounds.prop615->n);
    CHECK(cert.paper_bounds.prop615->n == 6000000);
  }
  SUBCASE("no constraints") {
    const WitnessCertificate cert = construct_witness(2, {});
    CHECK(cert.n == 1);
    CHECK(cert.disjointness.empty());
    CHECK(cert.malnormality.verdict);
  }
  SUBCASE("determinism") {
    const std::vector<SubgroupGraph> subs{gp({"a"}), gp({"bb", "baB"})};
    const WitnessCertificate c1 = construct_witness(2, subs);
    const WitnessCertificate c2 = construct_witness(2, subs);
    CHECK(certificate_to_json(c1) == certificate_to_json(c2));
    CHECK(c1.y == W("aba"));
    CHECK(c1.malnormality.verdict);
  }
  SUBCASE("finite index rejected") {
    const std::vector<SubgroupGraph> finite{gp({"a", "b"})};
    CHECK_THROWS_WITH_AS(construct_witness(2, finite),
                         doctest::Contains("index 1"), hypothesis_error);
  }
}

TEST_CASE("construct_witness, paper-bound mode") {
  WitnessOptions options;
  options.mode = WitnessMode::PaperBound;
  const std::vector<SubgroupGraph> subs{gp({"a"})};
  const WitnessCertificate cert = construct_witness(2, subs, options);
  CHECK(cert.n == 6000000);
  CHECK(cert.verification == Verification::BoundTrusted);
  CHECK_FALSE(cert.generators.has_value());
  CHECK(cert.malnormality.verdict);

  const auto parsed = nlohmann::json::parse(certificate_to_json(cert));
  CHECK(parsed["format"] == 1);
  CHECK(parsed["verification"] == "bound-trusted");
  CHECK(parsed["n"] == 6000000);
}

TEST_CASE("certificate json is stable and well-formed") {
  const WitnessCertificate cert = construct_witness(2, {});
  const std::string text = certificate_to_json(cert);
  const auto parsed = nlohmann::ordered_json::parse(text);
  CHECK(parsed["format"] == 1);
  CHECK(parsed["y"] == "a");
  CHECK(parsed["t"] == "b");
  CHECK(parsed["paperBounds"]["lemma63"]["m"].is_number_unsigned());
  CHECK(parsed.dump(2) == text);
}
