#include "malnorm/word.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

namespace malnorm {

namespace {

void require_same_rank(const Word& u, const Word& v) {
  if (u.rank() != v.rank())
    throw std::invalid_argument("rank mismatch: " + std::to_string(u.rank()) +
                                " vs " + std::to_string(v.rank()));
}

void check_letter(int rank, std::int32_t letter) {
  const std::int32_t g = letter > 0 ? letter : -letter;
  if (g < 1 || g > rank)
    throw std::invalid_argument("generator index " + std::to_string(g) +
                                " out of range 1.." + std::to_string(rank));
}

}  // namespace

int Word::check_rank(int rank) {
  if (rank < 0) throw std::invalid_argument("negative rank");
  return rank;
}

Word Word::from_reduced(int rank, std::vector<std::int32_t> letters) {
  Word w(rank);
  w.letters_ = std::move(letters);
  return w;
}

Word Word::reduce(int rank, std::span<const std::int32_t> raw) {
  check_rank(rank);
  std::vector<std::int32_t> stack;
  stack.reserve(raw.size());
  for (std::int32_t letter : raw) {
    check_letter(rank, letter);
    if (!stack.empty() && stack.back() == -letter)
      stack.pop_back();
    else
      stack.push_back(letter);
  }
  return from_reduced(rank, std::move(stack));
}

Word Word::parse_alphabet(std::string_view alphabet, std::string_view text) {
  std::vector<std::int32_t> raw;
  raw.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    const char lower =
        static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    const auto pos = alphabet.find(lower);
    if (pos == std::string_view::npos)
      throw std::invalid_argument(std::string("invalid character '") + c +
                                  "' at position " + std::to_string(i + 1));
    const auto g = static_cast<std::int32_t>(pos + 1);
    raw.push_back(std::islower(static_cast<unsigned char>(c)) ? g : -g);
  }
  return reduce(static_cast<int>(alphabet.size()), raw);
}

Word Word::parse(std::string_view text, int rank) {
  static constexpr std::string_view kAlphabet = "abcdefghijklmnopqrstuvwxyz";
  Word w = parse_alphabet(kAlphabet, text);
  if (rank == 0) {
    int used = 0;
    for (std::int32_t letter : w.letters_)
      used = std::max(used, letter > 0 ? letter : -letter);
    rank = used;
  }
  return w.with_rank(rank);
}

Word Word::with_rank(int rank) const {
  check_rank(rank);
  for (std::int32_t letter : letters_) check_letter(rank, letter);
  return from_reduced(rank, letters_);
}

std::string Word::str_alphabet(std::string_view alphabet) const {
  std::string out;
  out.reserve(letters_.size());
  for (std::int32_t letter : letters_) {
    const int g = letter > 0 ? letter : -letter;
    if (g > static_cast<int>(alphabet.size()))
      throw std::invalid_argument("alphabet too small for rank");
    const char c = alphabet[static_cast<std::size_t>(g - 1)];
    out.push_back(letter > 0
                      ? c
                      : static_cast<char>(
                            std::toupper(static_cast<unsigned char>(c))));
  }
  return out;
}

std::string Word::str() const {
  return str_alphabet("abcdefghijklmnopqrstuvwxyz");
}

CyclicWord::CyclicWord(Word core) : core_(std::move(core)) {
  if (!is_cyclically_reduced(core_))
    throw std::invalid_argument("word is not cyclically reduced: " +
                                core_.str());
}

Word multiply(const Word& u, const Word& v) {
  require_same_rank(u, v);
  std::vector<std::int32_t> stack = u.letters();
  for (std::int32_t letter : v.letters()) {
    if (!stack.empty() && stack.back() == -letter)
      stack.pop_back();
    else
      stack.push_back(letter);
  }
  return Word::from_reduced(u.rank(), std::move(stack));
}

Word invert(const Word& w) {
  std::vector<std::int32_t> letters(w.letters().rbegin(), w.letters().rend());
  for (std::int32_t& letter : letters) letter = -letter;
  return Word::from_reduced(w.rank(), std::move(letters));
}

Word conjugate(const Word& w, const Word& by) {
  return multiply(by, multiply(w, invert(by)));
}

Word power(const Word& w, long n) {
  const Word base = n < 0 ? invert(w) : w;
  const unsigned long k = n < 0 ? -static_cast<unsigned long>(n) : n;
  Word out(w.rank());
  for (unsigned long i = 0; i < k; ++i) out = multiply(out, base);
  return out;
}

bool is_cyclically_reduced(const Word& w) {
  return w.length() < 2 || w.letters().front() != -w.letters().back();
}

CyclicReduction cyclic_reduce(const Word& w) {
  std::size_t lo = 0, hi = w.length();
  while (hi - lo >= 2 && w.letter(lo) == -w.letter(hi - 1)) {
    ++lo;
    --hi;
  }
  std::vector<std::int32_t> core(w.letters().begin() + lo,
                                 w.letters().begin() + hi);
  std::vector<std::int32_t> conj(w.letters().begin(),
                                 w.letters().begin() + lo);
  return {CyclicWord(Word::from_reduced(w.rank(), std::move(core))),
          Word::from_reduced(w.rank(), std::move(conj))};
}

bool is_subword(const Word& u, const Word& w) {
  if (u.rank() != w.rank()) require_same_rank(u, w);
  return std::search(w.letters().begin(), w.letters().end(),
                     u.letters().begin(),
                     u.letters().end()) != w.letters().end();
}

std::size_t max_cancellation(const Word& u, const Word& v) {
  require_same_rank(u, v);
  const Word product = multiply(u, v);
  return (u.length() + v.length() - product.length()) / 2;
}

Count ball_size(int rank, const Count& n) {
  if (rank < 1) throw std::invalid_argument("rank must be >= 1");
  // Guard: beyond this the count itself is too large to be useful.
  if (n > 1000000)
    throw std::overflow_error("ball_size: radius too large (" + n.str() + ")");
  const auto radius = static_cast<std::size_t>(n);
  if (rank == 1) return Count(2 * radius + 1);
  const Count branches = 2 * rank - 1;
  // 1 + 2r ((2r-1)^n - 1) / (2r-2)
  return 1 + 2 * rank * (boost::multiprecision::pow(branches, static_cast<unsigned>(radius)) - 1) /
                 (2 * rank - 2);
}

Count ball_size(int rank, std::size_t n) { return ball_size(rank, Count(n)); }

Count lemma62_bound(const CyclicWord& a, const CyclicWord& b) {
  if (a.empty() || b.empty())
    throw hypothesis_error("lemma62_bound: trivial input word");
  require_same_rank(a.word(), b.word());
  return 2 * ball_size(a.rank(), b.length()) * a.length();
}

Count power_subword_bound(const CyclicWord& a, const CyclicWord& b) {
  if (a.empty() || b.empty())
    throw hypothesis_error("power_subword_bound: trivial input word");
  require_same_rank(a.word(), b.word());
  if (common_power_conjugate(a.word(), b.word()))
    throw hypothesis_error(
        "power_subword_bound: inputs have conjugate powers");
  return std::max(ball_size(a.rank(), b.length()),
                  ball_size(a.rank(), a.length()));
}

PeriodicDecomposition periodic_decompose(const Word& s, const Word& v) {
  require_same_rank(s, v);
  if (s.empty() || v.empty() || v.length() <= s.length())
    throw hypothesis_error("periodic_decompose: need nontrivial s, v with l(v) > l(s)");
  const Word alpha = multiply(invert(v), multiply(s, v));
  // Premise: s v == v alpha as letter sequences with no cancellation anywhere.
  bool ok = alpha.length() == s.length();
  if (ok) {
    std::vector<std::int32_t> left = s.letters();
    left.insert(left.end(), v.letters().begin(), v.letters().end());
    std::vector<std::int32_t> right = v.letters();
    right.insert(right.end(), alpha.letters().begin(), alpha.letters().end());
    ok = left == right;
    for (std::size_t i = 0; ok && i + 1 < left.size(); ++i)
      ok = left[i] != -left[i + 1];
  }
  if (!ok) throw hypothesis_error("not an (s,alpha)-shifted word");

  const std::size_t n = v.length() / s.length();
  for (std::size_t i = 0; i < n * s.length(); ++i)
    if (v.letter(i) != s.letter(i % s.length()))
      throw hypothesis_error("not an (s,alpha)-shifted word");
  std::vector<std::int32_t> rest(v.letters().begin() + n * s.length(),
                                 v.letters().end());
  return {s, n, Word::from_reduced(v.rank(), std::move(rest))};
}

RootPower primitive_root(const Word& w) {
  if (w.empty()) throw hypothesis_error("primitive_root: trivial word");
  const CyclicReduction cr = cyclic_reduce(w);
  const Word& core = cr.core.word();
  const std::size_t len = core.length();
  for (std::size_t p = 1; p <= len; ++p) {
    if (len % p != 0) continue;
    bool periodic = true;
    for (std::size_t i = p; periodic && i < len; ++i)
      periodic = core.letter(i) == core.letter(i % p);
    if (periodic) {
      std::vector<std::int32_t> head(core.letters().begin(),
                                     core.letters().begin() + p);
      const Word root =
          conjugate(Word::from_reduced(w.rank(), std::move(head)),
                    cr.conjugator);
      return {root, len / p};
    }
  }
  return {w, 1};  // unreachable: p == len always periodic
}

bool is_root_free(const Word& w) { return primitive_root(w).exponent == 1; }

bool common_power_conjugate(const Word& a, const Word& b) {
  if (a.empty() || b.empty())
    throw hypothesis_error("common_power_conjugate: trivial word");
  require_same_rank(a, b);
  const Word ra = primitive_root(cyclic_reduce(a).core.word()).root;
  const Word rb = primitive_root(cyclic_reduce(b).core.word()).root;
  if (ra.length() != rb.length()) return false;
  // Conjugate cyclically reduced words are exactly cyclic rotations.
  const Word doubled = multiply(rb, rb);
  return is_subword(ra, doubled) || is_subword(invert(ra), doubled);
}

bool shortlex_less(const Word& u, const Word& v) {
  if (u.length() != v.length()) return u.length() < v.length();
  for (std::size_t i = 0; i < u.length(); ++i) {
    const int a = letter_order(u.letter(i));
    const int b = letter_order(v.letter(i));
    if (a != b) return a < b;
  }
  return false;
}

namespace detail {

bool next_same_length(int rank, std::vector<std::int32_t>& letters) {
  const int max_order = 2 * rank - 1;
  const auto len = letters.size();
  std::size_t pos = len;
  while (pos > 0) {
    --pos;
    const std::int32_t forbidden = pos > 0 ? -letters[pos - 1] : 0;
    int order = letter_order(letters[pos]);
    while (order < max_order) {
      ++order;
      const std::int32_t candidate = letter_at_order(order);
      if (candidate == forbidden) continue;
      letters[pos] = candidate;
      // Reset the suffix to the least valid continuation.
      for (std::size_t i = pos + 1; i < len; ++i)
        letters[i] = letters[i - 1] == -1 ? -1 : 1;
      return true;
    }
  }
  return false;
}

}  // namespace detail

}  // namespace malnorm
