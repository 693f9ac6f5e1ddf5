#ifndef MALNORM_WITNESS_HPP
#define MALNORM_WITNESS_HPP

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "malnorm/stallings.hpp"
#include "malnorm/word.hpp"

namespace malnorm {

/// Thrown when a certified search runs out of its configured budget.
struct budget_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Shortlex-least nontrivial cyclically reduced y that is not readable in
/// any of the subgroup graphs (so no power of y is conjugate into any of
/// them; certified directly via power_conjugate_into as well). Every
/// subgroup must have infinite index and the ambient rank must be >= 2.
Word find_y(int rank, std::span<const SubgroupGraph> subgroups);

/// Shortlex-least nontrivial cyclically reduced t whose cyclic subgroup is
/// conjugacy-disjoint from gp(y).
Word choose_t(const Word& y);

/// The generator pair (y^n t^{3n} y^n, t^n y^{3n} t^n), freely reduced.
std::pair<Word, Word> build_dn(const Word& y, const Word& t, unsigned long n);

/// Constants from the proof of the conjugacy-avoidance lemma:
/// m = 3 m1 + N + 1 with m1 the least integer whose multiple of
/// min(l(y), l(t)) exceeds K = max(K1, K2), and N = ball_size(rank, K).
struct Lemma63Bounds {
  Count k1, k2, k;
  Count m1;
  Count ball;  // N
  Count m;
};
Lemma63Bounds lemma63_threshold(const Word& y, const Word& t,
                                std::span<const SubgroupGraph> subgroups);

/// K = 100 (N + 1) with N = ball_size(rank, l(a)); a must be a nontrivial
/// root-free cyclically reduced word.
Count prop613_threshold(const Word& a);

/// N = 1000 K0 max(Ka, Kb) l(a) l(b), with K0 the least integer satisfying
/// the cancellation, comparability and power-subword conditions.
struct Prop614Bounds {
  Count k0, ka, kb;
  Count n;
};
Prop614Bounds prop614_threshold(const Word& a, const Word& b);

enum class WitnessMode { CertifiedSearch, PaperBound };
enum class Verification { Certified, BoundTrusted };

struct PaperBoundsRecord {
  Lemma63Bounds lemma63;
  /// Absent when y or t is not root-free (the proposition's hypothesis).
  std::optional<Prop614Bounds> prop615;
};

struct WitnessCertificate {
  Word y, t;
  Count n;
  /// Absent only in paper-bound mode when n is too large to materialize.
  std::optional<std::pair<Word, Word>> generators;
  MalnormalityReport malnormality;
  std::vector<bool> disjointness;  // one entry per input subgroup
  PaperBoundsRecord paper_bounds;
  WitnessMode mode = WitnessMode::CertifiedSearch;
  Verification verification = Verification::Certified;
};

struct WitnessOptions {
  WitnessMode mode = WitnessMode::CertifiedSearch;
  unsigned long search_cap = 64;
  /// Paper-bound mode: largest total generator length for which the
  /// certificate checks are still executed rather than bound-trusted.
  std::size_t materialize_cap = 200000;
};

/// The full pipeline: pick y and t, then either search for the least n
/// whose D_n certifies (malnormal and conjugacy-disjoint from every input,
/// each check a complete certificate), or return the paper's n without
/// search. Throws hypothesis_error on finite-index input and budget_error
/// when the search cap is exhausted.
WitnessCertificate construct_witness(int rank,
                                     std::span<const SubgroupGraph> subgroups,
                                     const WitnessOptions& options = {});

/// Stable JSON rendering of a certificate (format 1, fixed field order).
std::string certificate_to_json(const WitnessCertificate& cert);

}  // namespace malnorm

#endif
