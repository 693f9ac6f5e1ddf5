#include "malnorm/witness.hpp"

#include <algorithm>
#include <cassert>

#include "malnorm/version.hpp"
#include "json.hpp"

namespace malnorm {

namespace {

constexpr std::size_t kCandidateLengthCap = 64;

void require_infinite_index(const SubgroupGraph& g) {
  if (const auto index = g.finite_index())
    throw hypothesis_error("hypothesis violation: subgroup has finite index " +
                           std::to_string(*index) + " (index " +
                           std::to_string(*index) + ")");
}

/// Shortlex-least nontrivial cyclically reduced word accepted by pred.
template <typename Pred>
Word least_cyclically_reduced(int rank, Pred&& pred) {
  Word found;
  bool done = false;
  for_each_reduced(rank, kCandidateLengthCap, [&](const Word& w) {
    if (w.empty() || !is_cyclically_reduced(w) || !pred(w)) return true;
    found = w;
    done = true;
    return false;
  });
  if (!done)
    throw budget_error("no cyclically reduced candidate within length " +
                       std::to_string(kCandidateLengthCap));
  return found;
}

Count max_count(Count a, const Count& b) { return a < b ? b : a; }

nlohmann::ordered_json count_to_json(const Count& value) {
  if (value <= std::numeric_limits<std::uint64_t>::max())
    return static_cast<std::uint64_t>(value);
  return value.str();
}

}  // namespace

Word find_y(int rank, std::span<const SubgroupGraph> subgroups) {
  if (rank < 2) throw hypothesis_error("ambient rank must be >= 2");
  for (const SubgroupGraph& g : subgroups) {
    if (g.rank() != rank) throw std::invalid_argument("rank mismatch");
    require_infinite_index(g);
  }
  const Word y = least_cyclically_reduced(rank, [&](const Word& w) {
    return std::none_of(subgroups.begin(), subgroups.end(),
                        [&](const SubgroupGraph& g) {
                          return g.reads_path(w);
                        });
  });
  // Unreadable words are not subwords of any subgroup element, which rules
  // out conjugate powers; certify that claim directly as well.
  for (const SubgroupGraph& g : subgroups)
    if (g.power_conjugate_into(y))
      throw std::logic_error(
          "find_y: readability certificate contradicts power conjugacy");
  return y;
}

Word choose_t(const Word& y) {
  if (y.empty() || !is_cyclically_reduced(y))
    throw hypothesis_error("choose_t: y must be nontrivial cyclically reduced");
  const SubgroupGraph gp_y = SubgroupGraph::fold(y.rank(), {y});
  return least_cyclically_reduced(y.rank(), [&](const Word& w) {
    return conjugacy_disjoint(gp_y, SubgroupGraph::fold(y.rank(), {w}));
  });
}

std::pair<Word, Word> build_dn(const Word& y, const Word& t,
                               unsigned long n) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  const Word yn = power(y, static_cast<long>(n));
  const Word tn = power(t, static_cast<long>(n));
  const Word y3n = power(y, static_cast<long>(3 * n));
  const Word t3n = power(t, static_cast<long>(3 * n));
  return {multiply(yn, multiply(t3n, yn)), multiply(tn, multiply(y3n, tn))};
}

Lemma63Bounds lemma63_threshold(const Word& y, const Word& t,
                                std::span<const SubgroupGraph> subgroups) {
  if (y.empty() || t.empty() || !is_cyclically_reduced(y) ||
      !is_cyclically_reduced(t))
    throw hypothesis_error(
        "lemma63_threshold: y and t must be nontrivial cyclically reduced");
  if (!conjugacy_disjoint(SubgroupGraph::fold(y.rank(), {y}),
                          SubgroupGraph::fold(y.rank(), {t})))
    throw hypothesis_error("lemma63_threshold: y and t have conjugate powers");
  for (const SubgroupGraph& g : subgroups) require_infinite_index(g);

  const CyclicWord cy{y}, ct{t};
  Lemma63Bounds b;
  b.k1 = max_count(max_count(lemma62_bound(cy, ct), lemma62_bound(ct, cy)),
                   Count(y.length() + t.length() + 1));
  b.k2 = 0;
  for (const SubgroupGraph& g : subgroups)
    for (const Word& w : g.basis()) b.k2 = max_count(b.k2, Count(w.length()));
  b.k = max_count(b.k1, b.k2);
  const Count min_len = std::min(y.length(), t.length());
  b.m1 = b.k / min_len + 1;
  b.ball = ball_size(y.rank(), b.k);
  b.m = 3 * b.m1 + b.ball + 1;
  return b;
}

Count prop613_threshold(const Word& a) {
  if (a.empty()) throw hypothesis_error("prop613_threshold: trivial word");
  if (!is_cyclically_reduced(a))
    throw hypothesis_error("prop613_threshold: not cyclically reduced");
  if (!is_root_free(a))
    throw hypothesis_error("prop613_threshold: not root-free");
  return 100 * (ball_size(a.rank(), a.length()) + 1);
}

Prop614Bounds prop614_threshold(const Word& a, const Word& b) {
  if (a.empty() || b.empty())
    throw hypothesis_error("prop614_threshold: trivial word");
  if (!is_cyclically_reduced(a) || !is_cyclically_reduced(b))
    throw hypothesis_error("prop614_threshold: not cyclically reduced");
  if (common_power_conjugate(a, b))
    throw hypothesis_error("prop614_threshold: inputs have conjugate powers");

  const CyclicWord ca{a}, cb{b};
  const std::size_t la = a.length(), lb = b.length();
  Prop614Bounds bounds;
  bounds.k0 = max_count(
      max_count(lemma62_bound(ca, cb), lemma62_bound(cb, ca)),
      max_count(max_count(Count((lb + la - 1) / la), Count((la + lb - 1) / lb)),
                power_subword_bound(ca, cb)));
  bounds.ka = prop613_threshold(a);
  bounds.kb = prop613_threshold(b);
  bounds.n = 1000 * bounds.k0 * max_count(bounds.ka, bounds.kb) * la * lb;
  return bounds;
}

WitnessCertificate construct_witness(int rank,
                                     std::span<const SubgroupGraph> subgroups,
                                     const WitnessOptions& options) {
  if (rank < 2) throw hypothesis_error("ambient rank must be >= 2");
  for (const SubgroupGraph& g : subgroups) {
    if (g.rank() != rank) throw std::invalid_argument("rank mismatch");
    require_infinite_index(g);
  }

  WitnessCertificate cert;
  cert.mode = options.mode;
  cert.y = find_y(rank, subgroups);
  cert.t = choose_t(cert.y);
  cert.paper_bounds.lemma63 = lemma63_threshold(cert.y, cert.t, subgroups);
  try {
    cert.paper_bounds.prop615 = prop614_threshold(cert.y, cert.t);
  } catch (const hypothesis_error&) {
    cert.paper_bounds.prop615 = std::nullopt;  // y or t not root-free
  }

  const auto certify = [&](unsigned long n) -> bool {
    const auto gens = build_dn(cert.y, cert.t, n);
    const SubgroupGraph dn =
        SubgroupGraph::fold(rank, {gens.first, gens.second});
    assert(dn.basis().size() == 2);
    MalnormalityReport report = is_malnormal(dn);
    if (!report.verdict) return false;
    std::vector<bool> disjoint;
    disjoint.reserve(subgroups.size());
    for (const SubgroupGraph& g : subgroups)
      disjoint.push_back(conjugacy_disjoint(dn, g));
    if (std::find(disjoint.begin(), disjoint.end(), false) != disjoint.end())
      return false;
    cert.n = n;
    cert.generators = gens;
    cert.malnormality = std::move(report);
    cert.disjointness = std::move(disjoint);
    cert.verification = Verification::Certified;
    return true;
  };

  if (options.mode == WitnessMode::CertifiedSearch) {
    for (unsigned long n = 1; n <= options.search_cap; ++n)
      if (certify(n)) return cert;
    throw budget_error("certified search exhausted at n = " +
                       std::to_string(options.search_cap));
  }

  if (!cert.paper_bounds.prop615)
    throw hypothesis_error(
        "paper-bound mode requires root-free y and t");
  const Count n = max_count(cert.paper_bounds.lemma63.m,
                            cert.paper_bounds.prop615->n);
  cert.n = n;
  const Count letters =
      2 * (2 * n * cert.y.length() + 3 * n * cert.t.length());
  if (letters <= options.materialize_cap) {
    if (!certify(static_cast<unsigned long>(n)))
      throw std::logic_error("paper bound produced an uncertified subgroup");
    cert.n = n;
    return cert;
  }
  cert.verification = Verification::BoundTrusted;
  cert.generators = std::nullopt;
  cert.malnormality = {true, {}};
  cert.disjointness.assign(subgroups.size(), true);
  return cert;
}

std::string certificate_to_json(const WitnessCertificate& cert) {
  using json = nlohmann::ordered_json;
  json j;
  j["format"] = 1;
  j["tool"] = "malnorm " MALNORM_VERSION;
  j["mode"] = cert.mode == WitnessMode::CertifiedSearch ? "certified-search"
                                                        : "paper-bound";
  j["verification"] = cert.verification == Verification::Certified
                          ? "certified"
                          : "bound-trusted";
  j["y"] = cert.y.str();
  j["t"] = cert.t.str();
  j["n"] = count_to_json(cert.n);
  if (cert.generators)
    j["generators"] = {cert.generators->first.str(),
                       cert.generators->second.str()};
  else
    j["generators"] = nullptr;
  j["malnormal"] = cert.malnormality.verdict;
  j["violations"] = json::array();
  for (const MalnormalityViolation& v : cert.malnormality.violations)
    j["violations"].push_back(
        {{"z", v.z.str()}, {"h", v.h.str()}, {"hPrime", v.h_prime.str()}});
  j["disjoint"] = cert.disjointness;
  const Lemma63Bounds& l = cert.paper_bounds.lemma63;
  j["paperBounds"]["lemma63"] = {{"K1", count_to_json(l.k1)},
                                 {"K2", count_to_json(l.k2)},
                                 {"K", count_to_json(l.k)},
                                 {"m1", count_to_json(l.m1)},
                                 {"N", count_to_json(l.ball)},
                                 {"m", count_to_json(l.m)}};
  if (cert.paper_bounds.prop615) {
    const Prop614Bounds& p = *cert.paper_bounds.prop615;
    j["paperBounds"]["prop615"] = {{"K0", count_to_json(p.k0)},
                                   {"Ka", count_to_json(p.ka)},
                                   {"Kb", count_to_json(p.kb)},
                                   {"N", count_to_json(p.n)}};
  } else {
    j["paperBounds"]["prop615"] = nullptr;
  }
  return j.dump(2);
}

}  // namespace malnorm
