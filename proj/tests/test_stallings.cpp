#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>
#include <sstream>

#include "malnorm/stallings.hpp"
#include "malnorm/subgroup_io.hpp"
#include "oracles.hpp"

using namespace malnorm;

namespace {

Word W(const char* text, int rank = 2) { return Word::parse(text, rank); }

SubgroupGraph gp(std::initializer_list<const char*> gens, int rank = 2) {
  std::vector<Word> words;
  for (const char* g : gens) words.push_back(Word::parse(g, rank));
  return SubgroupGraph::fold(rank, words);
}

}  // namespace

TEST_CASE("folding small subgroups") {
  const SubgroupGraph a = gp({"a"});
  CHECK(a.vertex_count() == 1);
  CHECK(a.edge_count() == 1);

  const SubgroupGraph ab2 = gp({"a", "bb"});
  CHECK(ab2.vertex_count() == 2);
  CHECK(ab2.edge_count() == 3);

  const SubgroupGraph g = gp({"ab", "ba"});
  CHECK(g.basis().size() == g.edge_count() - g.vertex_count() + 1);
  CHECK(g.basis().size() == 2);

  CHECK(gp({}).is_trivial());
  CHECK_THROWS_AS(SubgroupGraph::fold(2, {W("a", 3)}), std::invalid_argument);
}

TEST_CASE("fold confluence under generator permutation") {
  const std::vector<Word> gens{W("abAB"), W("bab"), W("aaB")};
  std::vector<std::size_t> perm{0, 1, 2};
  const SubgroupGraph reference = SubgroupGraph::fold(2, gens);
  do {
    std::vector<Word> shuffled;
    for (const std::size_t i : perm) shuffled.push_back(gens[i]);
    CHECK(SubgroupGraph::fold(2, shuffled) == reference);
  } while (std::next_permutation(perm.begin(), perm.end()));
}

TEST_CASE("membership") {
  const SubgroupGraph g = gp({"a", "bb"});
  CHECK_FALSE(g.contains(W("b")));
  CHECK(g.contains(W("bba")));
  CHECK(g.contains(W("")));
  CHECK_THROWS_AS(g.contains(W("c", 3)), std::invalid_argument);
}

TEST_CASE("membership agrees with the product oracle") {
  std::mt19937_64 rng(20260810);
  int instances = 0;
  while (instances < 60) {
    std::vector<Word> gens;
    const int count = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < count; ++i)
      gens.push_back(oracles::random_reduced(rng, 2, 1 + rng() % 4));
    const SubgroupGraph g = SubgroupGraph::fold(2, gens);
    const auto elements = oracles::subgroup_elements(gens, 6);
    int checked = 0;
    // Oracle-true implies contains-true.
    for (const auto& letters : elements) {
      if (letters.size() > 10) continue;
      const Word w = Word::from_reduced(2, letters);
      CHECK(g.contains(w));
      ++checked;
    }
    // contains-true yields a verified decomposition over the basis.
    const std::vector<Word> basis = g.basis();
    for (int trial = 0; trial < 25; ++trial) {
      const Word w = oracles::random_reduced(rng, 2, rng() % 11);
      if (!g.contains(w)) continue;
      const auto decomposition = g.express(w);
      REQUIRE(decomposition.has_value());
      Word rebuilt(2);
      for (const std::int32_t id : *decomposition) {
        const Word& b = basis[static_cast<std::size_t>(std::abs(id)) - 1];
        rebuilt = multiply(rebuilt, id > 0 ? b : invert(b));
      }
      CHECK(rebuilt == w);
    }
    CHECK(checked > 0);
    ++instances;
  }
}

TEST_CASE("index") {
  CHECK(gp({"a", "b"}).finite_index() == 1);
  CHECK(gp({"a", "bb", "baB"}).finite_index() == 2);
  CHECK_FALSE(gp({"a"}).finite_index().has_value());
}

TEST_CASE("basis") {
  CHECK(gp({"a"}).basis() == std::vector<Word>{W("a")});
  CHECK(gp({"a", "b"}).basis() == std::vector<Word>{W("a"), W("b")});

  const SubgroupGraph g = gp({"a", "bb", "baB"});
  const std::vector<Word> basis = g.basis();
  CHECK(basis.size() == 3);
  for (const Word& w : basis) CHECK(g.contains(w));
  CHECK(SubgroupGraph::fold(2, basis) == g);  // basis regenerates the graph
}

TEST_CASE("nielsen-schreier on random covers of the rose") {
  std::mt19937_64 rng(4242);
  int built = 0;
  while (built < 100) {
    const std::size_t degree = 1 + rng() % 8;
    std::vector<std::size_t> pa(degree), pb(degree);
    std::iota(pa.begin(), pa.end(), 0);
    std::iota(pb.begin(), pb.end(), 0);
    std::shuffle(pa.begin(), pa.end(), rng);
    std::shuffle(pb.begin(), pb.end(), rng);
    std::vector<std::tuple<std::size_t, int, std::size_t>> edges;
    for (std::size_t v = 0; v < degree; ++v) {
      edges.emplace_back(v, 1, pa[v]);
      edges.emplace_back(v, 2, pb[v]);
    }
    SubgroupGraph g;
    try {
      g = SubgroupGraph::from_edges(2, degree, 0, edges);
    } catch (const std::invalid_argument&) {
      continue;  // the random cover was not connected
    }
    REQUIRE(g.finite_index() == degree);
    CHECK(g.basis().size() == degree * (2 - 1) + 1);
    CHECK(g.basis().size() == g.edge_count() - g.vertex_count() + 1);
    ++built;
  }
}

TEST_CASE("reads_path") {
  CHECK_FALSE(gp({"a"}).reads_path(W("b")));
  CHECK(gp({"a"}).reads_path(W("aaa")));
  // Elements of gp(bab^-1) are b a^k b^-1; "ab" never occurs in them.
  const SubgroupGraph g = gp({"baB"});
  CHECK_FALSE(g.reads_path(W("ab")));
  for (int k = -6; k <= 6; ++k) {
    const Word element = conjugate(power(W("a"), k), W("b"));
    CHECK_FALSE(is_subword(W("ab"), element));
  }
  CHECK(g.reads_path(W("aB")));
}

TEST_CASE("conjugate_into") {
  CHECK(gp({"abA"}).conjugate_into(W("b")));
  CHECK_FALSE(gp({"a"}).conjugate_into(W("b")));
  CHECK(gp({"aabb"}).conjugate_into(W("bbaa")));
  CHECK_THROWS_AS(gp({"a"}).conjugate_into(W("")), hypothesis_error);
}

TEST_CASE("power_conjugate_into") {
  CHECK(gp({"aa"}).power_conjugate_into(W("a")) == 2);
  CHECK_FALSE(gp({"a"}).power_conjugate_into(W("b")).has_value());
  CHECK(gp({"bbbbbb"}).power_conjugate_into(W("bbbb")) == 3);
  CHECK(gp({"abA"}).power_conjugate_into(W("b")) == 1);
  CHECK_THROWS_AS(gp({"a"}).power_conjugate_into(W("")), hypothesis_error);
}

TEST_CASE("pullback") {
  SUBCASE("disjoint letters") {
    CHECK(pullback(gp({"a"}), gp({"b"})).empty());
  }
  SUBCASE("powers of a") {
    const auto comps = pullback(gp({"aa"}), gp({"aaa"}));
    REQUIRE(comps.size() == 1);
    CHECK(comps[0].intersection == gp({"aaaaaa"}));
    CHECK(comps[0].representative.empty());
  }
  SUBCASE("self-pullback of gp(a^2)") {
    const SubgroupGraph g = gp({"aa"});
    const auto comps = pullback(g, g);
    REQUIRE(comps.size() == 2);
    CHECK(comps[0].is_diagonal);
    CHECK(comps[0].intersection == g);
    CHECK(comps[0].representative.empty());
    CHECK_FALSE(comps[1].is_diagonal);
    CHECK(comps[1].representative == W("a"));
    CHECK(comps[1].intersection == g);
  }
  SUBCASE("diagonal law with basepoint hair") {
    const SubgroupGraph g = gp({"baB", "bbb"});
    const auto comps = pullback(g, g);
    REQUIRE(!comps.empty());
    CHECK(comps[0].is_diagonal);
    CHECK(comps[0].intersection == g);
  }
  SUBCASE("component invariants") {
    const SubgroupGraph g1 = gp({"ab", "ba"});
    const SubgroupGraph g2 = gp({"aa", "b"});
    for (const PullbackComponent& c : pullback(g1, g2)) {
      for (const Word& w : c.intersection.basis()) {
        CHECK(g1.contains(w));
        CHECK(g2.contains(conjugate(w, invert(c.representative))));
      }
    }
  }
}

TEST_CASE("malnormality") {
  SUBCASE("the verified rank-two example") {
    CHECK(is_malnormal(gp({"abbba", "baaab"})).verdict);
  }
  SUBCASE("gp(a^2) violation") {
    const MalnormalityReport r = is_malnormal(gp({"aa"}));
    CHECK_FALSE(r.verdict);
    REQUIRE(!r.violations.empty());
    const MalnormalityViolation& v = r.violations.front();
    CHECK(v.z == W("a"));
    CHECK(v.h == W("aa"));
    CHECK(v.h_prime == W("aa"));
  }
  SUBCASE("gp(a^2 b^3 a^2, b a^6 b)") {
    const SubgroupGraph g = gp({"aabbbaa", "baaaaaab"});
    CHECK(is_malnormal(g).verdict);
    CHECK_FALSE(oracles::has_short_violation(g, 6, 8));
  }
  SUBCASE("violations re-verify, verdicts match brute force") {
    std::mt19937_64 rng(515);
    int instances = 0;
    while (instances < 40) {
      std::vector<Word> gens;
      for (int i = 0; i < 1 + static_cast<int>(rng() % 2); ++i)
        gens.push_back(oracles::random_reduced(rng, 2, 1 + rng() % 4));
      const SubgroupGraph g = SubgroupGraph::fold(2, gens);
      if (g.is_trivial()) continue;
      const MalnormalityReport r = is_malnormal(g);
      if (r.verdict) {
        CHECK_FALSE(oracles::has_short_violation(g, 6, 8));
      } else {
        for (const MalnormalityViolation& v : r.violations) {
          CHECK_FALSE(g.contains(v.z));
          CHECK(!v.h.empty());
          CHECK(g.contains(v.h));
          CHECK(g.contains(v.h_prime));
          CHECK(conjugate(v.h, v.z) == v.h_prime);
        }
      }
      ++instances;
    }
  }
  SUBCASE("trivial subgroup rejected") {
    CHECK_THROWS_AS(is_malnormal(gp({})), hypothesis_error);
  }
}

TEST_CASE("conjugacy disjointness") {
  CHECK(conjugacy_disjoint(gp({"a"}), gp({"b"})));
  CHECK_FALSE(conjugacy_disjoint(gp({"abA"}), gp({"bbb"})));
  CHECK(conjugacy_disjoint(gp({"abbba", "baaab"}), gp({"a"})));

  // Cross-check: cyclic words of length <= 10 conjugate into both factors.
  const SubgroupGraph m = gp({"abbba", "baaab"});
  const SubgroupGraph a = gp({"a"});
  for_each_reduced(2, 10, [&](const Word& w) {
    if (w.empty() || !is_cyclically_reduced(w)) return true;
    CHECK_FALSE((m.conjugate_into(w) && a.conjugate_into(w)));
    return true;
  });
}

TEST_CASE("violating double cosets") {
  CHECK(violating_double_cosets(gp({"abbba", "baaab"})).empty());
  CHECK(violating_double_cosets(gp({"a"})).empty());

  const SubgroupGraph g = gp({"aa", "bb"});
  const auto violations = violating_double_cosets(g);
  REQUIRE(violations.size() == 2);
  CHECK(violations[0].z == W("a"));
  CHECK(violations[0].intersection_basis == std::vector<Word>{W("aa")});
  CHECK(violations[1].z == W("b"));
  CHECK(violations[1].intersection_basis == std::vector<Word>{W("bb")});
  for (const DoubleCosetViolation& v : violations) {
    CHECK_FALSE(g.contains(v.z));
    for (const Word& h : v.intersection_basis)
      CHECK(g.contains(conjugate(h, invert(v.z))));
  }
}

TEST_CASE("lemma 6.5: intersections conjugate into the cyclic factors") {
  for (int n : {2, 3})
    for (int m : {2, 3}) {
      const SubgroupGraph g = SubgroupGraph::fold(
          2, {power(W("a"), n), power(W("b"), m)});
      const SubgroupGraph ga = SubgroupGraph::fold(2, {power(W("a"), n)});
      const SubgroupGraph gb = SubgroupGraph::fold(2, {power(W("b"), m)});
      for (const DoubleCosetViolation& v : violating_double_cosets(g))
        for (const Word& h : v.intersection_basis)
          CHECK((ga.conjugate_into(h) || gb.conjugate_into(h)));
    }
}

TEST_CASE("graph text export") {
  const SubgroupGraph g = gp({"a", "bb"});
  std::ostringstream expected;
  expected << "basepoint v0\n"
           << "v0 --a--> v0\n"
           << "v0 --b--> v1\n"
           << "v1 --b--> v0\n";
  CHECK(g.to_text() == expected.str());
}

TEST_CASE("subgroup files") {
  std::istringstream in(
      "# demo subgroup\n"
      "rank=2\n"
      "a\n"
      "bb  # tail comment\n"
      "\n"
      "baB\n");
  const SubgroupFile f = parse_subgroup_stream(in);
  CHECK(f.rank == 2);
  REQUIRE(f.generators.size() == 3);
  CHECK(f.generators[2] == W("baB"));

  std::istringstream inferred("yt\nty\n");
  CHECK(parse_subgroup_stream(inferred).rank == 25);

  std::istringstream bad("a\na1!\n");
  CHECK_THROWS_WITH_AS(parse_subgroup_stream(bad),
                       doctest::Contains("line 2"), parse_error);

  std::istringstream outside("rank=1\nab\n");
  CHECK_THROWS_AS(parse_subgroup_stream(outside), parse_error);
}
