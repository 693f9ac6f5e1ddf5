#ifndef MALNORM_DISTORTION_HPP
#define MALNORM_DISTORTION_HPP

#include <optional>
#include <span>
#include <vector>

#include "malnorm/stallings.hpp"
#include "malnorm/word.hpp"

namespace malnorm {

/// A free-group endomorphism given by generator images. expansion_certified
/// records the structural property that the image of each x_i begins and
/// ends with x_i, which forces substitution into a reduced word to stay
/// reduced (lengths then add exactly, with every image of length >= 2
/// making the map uniformly length-expanding).
struct Endomorphism {
  int rank = 0;
  std::vector<Word> images;
  bool expansion_certified = false;
};

Endomorphism make_endomorphism(int rank, std::vector<Word> images);

/// The canonical phi on F(a, b): a -> a b^3 a, b -> b a^3 b.
Endomorphism make_phi();

/// Substitutes images and freely reduces.
Word apply_endo(const Endomorphism& phi, const Word& w);

/// Exhaustively checks l(phi(f)) >= 2 l(f) over the whole radius ball.
bool expansion_holds_on_ball(const Endomorphism& phi, std::size_t radius);

/// Structural certificate when available, exhaustive scan otherwise.
bool check_expansion(const Endomorphism& phi, std::size_t radius);

/// Malnormality of im(phi), via the folded graph of the images.
MalnormalityReport check_image_malnormal(const Endomorphism& phi);

/// One row of the distortion table for f_n = t^-n a t^n = phi^n(a):
/// the exact free length of phi^n(a) against the HNN-side upper bound
/// 2n + l_*(a) and the expansion-driven lower bound 2^n.
struct DistortionRow {
  std::size_t n = 0;
  Count inside_length;
  Count paper_lower_bound;             // 2^n
  std::uint64_t outside_upper_bound = 0;  // 2n + 1 (a is a single letter)
};

/// Rows for n = 0..n_max. For structurally certified endomorphisms the
/// inside lengths follow the exact letter-count recurrence (substitution
/// introduces no cancellation); otherwise the iterates are materialized,
/// up to a size cap.
std::vector<DistortionRow> distortion_table(const Endomorphism& phi,
                                            std::size_t n_max);

/// Smallest n in the table with 2^n > C (2n + l_*(a)), i.e. the point where
/// the lower bound beats any claimed quasiconvexity constant C. Exact
/// arithmetic (C is decomposed as an exact binary rational).
std::optional<std::size_t> refute_quasiconvexity(
    std::span<const DistortionRow> table, double C);

/// A length-3 annulus for the single-edge graph of groups of the HNN
/// extension: c0 over the edge alphabet {x, y}, a0 in F(a, b), and the
/// derived c1 with a0^-1 alpha_ebar(c0) a0 = alpha_e(c1), where alpha_e
/// renames x -> a, y -> b and alpha_ebar sends x -> phi(a), y -> phi(b).
struct Annulus {
  Word c0, a0, c1;
  std::size_t girth0 = 0, girth1 = 0, width = 0;
};

Annulus annulus_step(const Word& c0, const Word& a0);

struct AnnulusVerdict {
  bool holds = false;
  bool vacuous = false;  // girth below the H(rho) threshold
  std::uint64_t threshold = 0;
};

/// Checks girth(c1) >= (3/2) girth(c0) whenever girth(c0) >= H(rho) = 20 rho
/// (q(rho) = rho in this desk instantiation); vacuously true below the
/// threshold. Requires width <= rho.
AnnulusVerdict annulus_hyperbolicity_check(const Annulus& annulus,
                                           std::uint64_t rho);

}  // namespace malnorm

#endif
