#ifndef MALNORM_WORD_HPP
#define MALNORM_WORD_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace malnorm {

/// Unbounded integer used for ball sizes and the paper-constant formulas,
/// which overflow 64 bits already on three-letter inputs.
using Count = boost::multiprecision::cpp_int;

/// Thrown when a mathematical hypothesis of an operation is violated
/// (trivial word, conjugate powers, finite index, ...).
struct hypothesis_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A freely reduced word over the basis x_1..x_r of a free group.
/// Letters are signed 1-based generator indices: +i is x_i, -i is x_i^-1.
/// The letter sequence never contains an adjacent cancelling pair.
class Word {
 public:
  Word() = default;
  explicit Word(int rank) : rank_(check_rank(rank)) {}

  /// Freely reduces a raw letter sequence (single left-to-right stack pass).
  static Word reduce(int rank, std::span<const std::int32_t> raw);

  /// Parses text form: 'a'..'z' are x_1..x_26, 'A'..'Z' their inverses,
  /// whitespace ignored, empty = identity. rank 0 infers the rank from the
  /// largest letter used.
  static Word parse(std::string_view text, int rank = 0);

  /// Same, with a caller-chosen lowercase alphabet: alphabet[i] names x_{i+1}.
  static Word parse_alphabet(std::string_view alphabet, std::string_view text);

  int rank() const { return rank_; }
  std::size_t length() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  const std::vector<std::int32_t>& letters() const { return letters_; }
  std::int32_t letter(std::size_t i) const { return letters_[i]; }

  std::string str() const;
  std::string str_alphabet(std::string_view alphabet) const;

  /// Copy of this word viewed in a larger ambient rank.
  Word with_rank(int rank) const;

  friend bool operator==(const Word&, const Word&) = default;

  /// Trusted constructor: `letters` must already be freely reduced.
  static Word from_reduced(int rank, std::vector<std::int32_t> letters);

 private:
  static int check_rank(int rank);

  int rank_ = 0;
  std::vector<std::int32_t> letters_;
};

/// A cyclically reduced word: freely reduced and first letter not the
/// inverse of the last.
class CyclicWord {
 public:
  CyclicWord() = default;
  explicit CyclicWord(Word core);

  const Word& word() const { return core_; }
  std::size_t length() const { return core_.length(); }
  bool empty() const { return core_.empty(); }
  int rank() const { return core_.rank(); }

  friend bool operator==(const CyclicWord&, const CyclicWord&) = default;

 private:
  Word core_;
};

struct CyclicReduction {
  CyclicWord core;
  Word conjugator;  // original = conjugator * core * conjugator^-1
};

struct PeriodicDecomposition {
  Word period;
  std::size_t exponent = 0;
  Word remainder;
};

struct RootPower {
  Word root;
  std::size_t exponent = 0;  // word = root^exponent, exponent maximal
};

Word multiply(const Word& u, const Word& v);
Word invert(const Word& w);
/// by * w * by^-1, freely reduced.
Word conjugate(const Word& w, const Word& by);
Word power(const Word& w, long n);

CyclicReduction cyclic_reduce(const Word& w);

/// True iff u occurs as a contiguous block of w's letter sequence.
bool is_subword(const Word& u, const Word& w);

/// Length of the maximal terminal segment of u cancelled against the
/// initial segment of v in multiply(u, v); half the total cancelled length.
std::size_t max_cancellation(const Word& u, const Word& v);

/// Number of freely reduced words of length <= n over the given rank:
/// 1 + sum_{k=1..n} 2r (2r-1)^(k-1). Throws std::overflow_error when n is
/// too large to materialize the count.
Count ball_size(int rank, const Count& n);
Count ball_size(int rank, std::size_t n);

/// Cancellation bound 2 N l(a) with N = ball_size(rank, l(b)); valid when
/// no nontrivial power of a is conjugate to a power of b (certified by the
/// caller, e.g. via conjugacy_disjoint on the cyclic subgroups).
Count lemma62_bound(const CyclicWord& a, const CyclicWord& b);

/// The exponent M = max(ball_size(rank, l(b)), ball_size(rank, l(a))) such
/// that a^M is not a subword of any power of b and vice versa. Rejects
/// pairs with a common power up to conjugacy.
Count power_subword_bound(const CyclicWord& a, const CyclicWord& b);

/// Splits v as s^n q (letter-identically, no cancellation, l(q) < l(s))
/// after verifying the shift premise s v == v alpha with l(alpha) = l(s),
/// both products reduced as written. alpha is computed as reduce(v^-1 s v).
PeriodicDecomposition periodic_decompose(const Word& s, const Word& v);

/// Maximal-exponent root: w = root^exponent. Computed on the cyclic core by
/// divisor-period scan, then re-conjugated.
RootPower primitive_root(const Word& w);

bool is_cyclically_reduced(const Word& w);
bool is_root_free(const Word& w);

/// True iff some nontrivial power of a is conjugate to a power of b;
/// decided by comparing primitive roots up to cyclic rotation and inversion.
bool common_power_conjugate(const Word& a, const Word& b);

/// Shortlex order with x_1 < x_1^-1 < x_2 < x_2^-1 < ...
bool shortlex_less(const Word& u, const Word& v);

/// Rank position of a signed letter in the order above (0-based).
inline int letter_order(std::int32_t letter) {
  const int g = letter > 0 ? letter : -letter;
  return 2 * (g - 1) + (letter < 0 ? 1 : 0);
}
inline std::int32_t letter_at_order(int pos) {
  return (pos % 2 == 0) ? (pos / 2 + 1) : -(pos / 2 + 1);
}

/// Calls fn on every freely reduced word of length <= max_len in shortlex
/// order. fn returning false stops the enumeration early.
template <typename Fn>
void for_each_reduced(int rank, std::size_t max_len, Fn&& fn);

namespace detail {
bool next_same_length(int rank, std::vector<std::int32_t>& letters);
}

template <typename Fn>
void for_each_reduced(int rank, std::size_t max_len, Fn&& fn) {
  if (!fn(Word(rank))) return;
  std::vector<std::int32_t> letters;
  for (std::size_t len = 1; len <= max_len; ++len) {
    letters.assign(len, 0);
    letters[0] = 1;
    for (std::size_t i = 1; i < len; ++i)
      letters[i] = letters[i - 1] == -1 ? -1 : 1;  // least non-cancelling
    do {
      if (!fn(Word::from_reduced(rank, letters))) return;
    } while (detail::next_same_length(rank, letters));
  }
}

}  // namespace malnorm

#endif
