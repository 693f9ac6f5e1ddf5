#include "malnorm/distortion.hpp"

#include <algorithm>
#include <cmath>

namespace malnorm {

namespace {

constexpr std::size_t kMaterializeCap = 20'000'000;

bool structurally_certified(int rank, std::span<const Word> images) {
  for (int g = 1; g <= rank; ++g) {
    const Word& img = images[static_cast<std::size_t>(g - 1)];
    if (img.empty() || img.letters().front() != g ||
        img.letters().back() != g)
      return false;
  }
  return true;
}

}  // namespace

Endomorphism make_endomorphism(int rank, std::vector<Word> images) {
  if (rank < 1) throw std::invalid_argument("rank must be >= 1");
  if (images.size() != static_cast<std::size_t>(rank))
    throw std::invalid_argument("need one image per generator");
  for (const Word& img : images)
    if (img.rank() != rank) throw std::invalid_argument("rank mismatch");
  const bool certified = structurally_certified(rank, images);
  return {rank, std::move(images), certified};
}

Endomorphism make_phi() {
  return make_endomorphism(2, {Word::parse("abbba", 2),
                               Word::parse("baaab", 2)});
}

Word apply_endo(const Endomorphism& phi, const Word& w) {
  if (w.rank() != phi.rank) throw std::invalid_argument("rank mismatch");
  std::vector<std::int32_t> raw;
  for (const std::int32_t letter : w.letters()) {
    const Word& img = phi.images[static_cast<std::size_t>(
        (letter > 0 ? letter : -letter) - 1)];
    if (letter > 0)
      raw.insert(raw.end(), img.letters().begin(), img.letters().end());
    else {
      const Word inv = invert(img);
      raw.insert(raw.end(), inv.letters().begin(), inv.letters().end());
    }
  }
  return Word::reduce(phi.rank, raw);
}

bool expansion_holds_on_ball(const Endomorphism& phi, std::size_t radius) {
  bool holds = true;
  for_each_reduced(phi.rank, radius, [&](const Word& f) {
    if (apply_endo(phi, f).length() < 2 * f.length()) {
      holds = false;
      return false;
    }
    return true;
  });
  return holds;
}

bool check_expansion(const Endomorphism& phi, std::size_t radius) {
  if (phi.expansion_certified) {
    const bool all_long =
        std::all_of(phi.images.begin(), phi.images.end(),
                    [](const Word& img) { return img.length() >= 2; });
    if (all_long) return true;
  }
  return expansion_holds_on_ball(phi, radius);
}

MalnormalityReport check_image_malnormal(const Endomorphism& phi) {
  return is_malnormal(SubgroupGraph::fold(phi.rank, phi.images));
}

std::vector<DistortionRow> distortion_table(const Endomorphism& phi,
                                            std::size_t n_max) {
  if (!check_expansion(phi, 4))
    throw hypothesis_error("distortion_table: endomorphism is not expanding");

  std::vector<DistortionRow> rows;
  rows.reserve(n_max + 1);
  const auto push = [&](std::size_t n, Count inside) {
    rows.push_back({n, std::move(inside),
                    boost::multiprecision::pow(Count(2), static_cast<unsigned>(n)),
                    2 * static_cast<std::uint64_t>(n) + 1});
  };

  if (phi.expansion_certified) {
    // No cancellation under substitution, so per-generator letter counts
    // follow an exact linear recurrence; lengths never need the words.
    const int r = phi.rank;
    std::vector<Count> counts(static_cast<std::size_t>(r), 0);
    counts[0] = 1;  // the word "a"
    std::vector<std::vector<Count>> mat(
        static_cast<std::size_t>(r),
        std::vector<Count>(static_cast<std::size_t>(r), 0));
    for (int h = 1; h <= r; ++h)
      for (const std::int32_t letter :
           phi.images[static_cast<std::size_t>(h - 1)].letters())
        ++mat[static_cast<std::size_t>(h - 1)]
             [static_cast<std::size_t>((letter > 0 ? letter : -letter) - 1)];
    for (std::size_t n = 0;; ++n) {
      Count total = 0;
      for (const Count& c : counts) total += c;
      push(n, total);
      if (n == n_max) break;
      std::vector<Count> next(static_cast<std::size_t>(r), 0);
      for (int h = 0; h < r; ++h)
        for (int g = 0; g < r; ++g)
          next[static_cast<std::size_t>(g)] +=
              counts[static_cast<std::size_t>(h)] *
              mat[static_cast<std::size_t>(h)][static_cast<std::size_t>(g)];
      counts = std::move(next);
    }
    return rows;
  }

  Word w = Word::parse("a", phi.rank);
  for (std::size_t n = 0;; ++n) {
    push(n, Count(w.length()));
    if (n == n_max) break;
    if (w.length() > kMaterializeCap)
      throw std::overflow_error(
          "distortion_table: iterate too large to materialize");
    w = apply_endo(phi, w);
  }
  return rows;
}

std::optional<std::size_t> refute_quasiconvexity(
    std::span<const DistortionRow> table, double C) {
  if (!(C > 0) || !std::isfinite(C))
    throw std::invalid_argument("C must be positive and finite");
  // Exact comparison: write C = mantissa * 2^exp with integer mantissa.
  int exp = 0;
  const double mantissa_d = std::frexp(C, &exp) * 9007199254740992.0;  // 2^53
  exp -= 53;
  Count num(static_cast<std::int64_t>(mantissa_d));
  Count den(1);
  if (exp >= 0)
    num <<= exp;
  else
    den <<= -exp;
  for (const DistortionRow& row : table)
    if (row.paper_lower_bound * den > num * row.outside_upper_bound)
      return row.n;
  return std::nullopt;
}

Annulus annulus_step(const Word& c0, const Word& a0) {
  if (c0.empty()) throw hypothesis_error("annulus_step: trivial c0");
  if (c0.rank() != 2 || a0.rank() != 2)
    throw std::invalid_argument("annulus words live in rank 2");
  // alpha_e is the letter renaming x -> a, y -> b, so c1 is just the
  // conjugated image read back over the edge alphabet.
  const Word image = apply_endo(make_phi(), c0);
  const Word c1 = multiply(invert(a0), multiply(image, a0));
  return {c0, a0, c1, c0.length(), c1.length(), a0.length()};
}

AnnulusVerdict annulus_hyperbolicity_check(const Annulus& annulus,
                                           std::uint64_t rho) {
  if (annulus.width > rho)
    throw hypothesis_error("annulus width exceeds rho");
  const std::uint64_t threshold = 20 * rho;  // H(rho) = 20 q(rho), q(rho) = rho
  if (annulus.girth0 < threshold) return {true, true, threshold};
  return {2 * annulus.girth1 >= 3 * annulus.girth0, false, threshold};
}

}  // namespace malnorm
