#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "freeprod/series.hpp"

namespace freeprod {

class EmptyWord : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class PreconditionViolated : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotCyclicallyReduced : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Left-invariant total order on the free product: u <= w iff u^{-1}w has
// nonnegative series sign. Restricted to one factor it is the factor order.
inline Cmp compare(const Word& u, const Word& w) {
  switch (word_sign(multiply(invert(u), w))) {
    case Sign::Positive: return Cmp::LT;
    case Sign::Negative: return Cmp::GT;
    case Sign::Zero: return Cmp::EQ;
  }
  return Cmp::EQ;
}

inline bool is_positive(const Word& w) {
  return word_sign(w) == Sign::Positive;
}

// True iff every nonempty letter-aligned suffix of w is positive.
inline bool is_strongly_positive(const Word& w) {
  if (w.empty()) throw EmptyWord("is_strongly_positive: empty word");
  for (std::size_t i = w.size(); i-- > 0;) {
    Word suffix{std::vector<Letter>(w.letters.begin() + i, w.letters.end())};
    if (word_sign(suffix) != Sign::Positive) return false;
  }
  return true;
}

enum class StrongSign { StronglyPositive, StronglyNegative };

inline const char* to_string(StrongSign s) {
  return s == StrongSign::StronglyPositive ? "strongly-positive"
                                           : "strongly-negative";
}

namespace detail {

// Unchecked classification of s^{-1}t for strongly positive s, t with
// reduced concatenation; the quotient is strongly positive iff it is
// positive, so a single sign decides.
inline StrongSign classify_quotient_unchecked(const Word& s, const Word& t) {
  Sign sg = word_sign(multiply(invert(s), t));
  return sg == Sign::Positive ? StrongSign::StronglyPositive
                              : StrongSign::StronglyNegative;
}

}  // namespace detail

// Classifies s^{-1}t as strongly positive or strongly negative, for strongly
// positive s and t whose quotient is reduced letter-by-letter.
inline StrongSign classify_positive_quotient(const Word& s, const Word& t) {
  if (s.empty() || t.empty())
    throw PreconditionViolated("classify_positive_quotient: empty input");
  if (s.letters.front().factor == t.letters.front().factor)
    throw PreconditionViolated(
        "classify_positive_quotient: s^-1 t is not letter-reduced");
  if (!is_strongly_positive(s))
    throw PreconditionViolated(
        "classify_positive_quotient: s is not strongly positive");
  if (!is_strongly_positive(t))
    throw PreconditionViolated(
        "classify_positive_quotient: t is not strongly positive");
  return detail::classify_quotient_unchecked(s, t);
}

// Factors a reduced word as w = u1 * u2^{-1} with u1, u2 each empty or
// strongly positive. Works on the letterwise sign blocks, repeatedly merging
// equal-sign neighbours and resolving (-,+) adjacencies, leftmost rewrite
// first; every rewrite drops the block count by one.
inline std::pair<Word, Word> positive_factorization(const Word& w) {
  struct Block {
    Word pos;  // the strongly positive word; the block contributes pos^sign
    int sign;  // +1 or -1
  };
  std::vector<Block> blocks;
  for (const Letter& l : w) {
    Word single{{l}};
    if (word_sign(single) == Sign::Positive)
      blocks.push_back({single, +1});
    else
      blocks.push_back({invert(single), -1});
  }

  auto concat = [](const Word& a, const Word& b) {
    std::vector<Letter> cat = a.letters;
    cat.insert(cat.end(), b.letters.begin(), b.letters.end());
    return Word{std::move(cat)};
  };

  while (blocks.size() > 1) {
    std::size_t j = blocks.size();
    for (std::size_t i = 0; i + 1 < blocks.size(); ++i) {
      if (blocks[i].sign == blocks[i + 1].sign ||
          (blocks[i].sign == -1 && blocks[i + 1].sign == +1)) {
        j = i;
        break;
      }
    }
    if (j == blocks.size()) break;  // terminal: signs are (+), (-) or (+,-)

    Block merged;
    const Block& a = blocks[j];
    const Block& b = blocks[j + 1];
    if (a.sign == b.sign) {
      // Within w the two pieces are contiguous, so the concatenations below
      // are reduced and strong positivity is preserved under concatenation.
      merged.sign = a.sign;
      merged.pos = a.sign == +1 ? concat(a.pos, b.pos) : concat(b.pos, a.pos);
    } else {
      // (-,+): the subword is a.pos^{-1} * b.pos; classify it whole.
      if (detail::classify_quotient_unchecked(a.pos, b.pos) ==
          StrongSign::StronglyPositive) {
        merged = {concat(invert(a.pos), b.pos), +1};
      } else {
        merged = {concat(invert(b.pos), a.pos), -1};
      }
    }
    blocks[j] = std::move(merged);
    blocks.erase(blocks.begin() + j + 1);
  }

  if (blocks.empty()) return {Word{}, Word{}};
  if (blocks.size() == 1)
    return blocks[0].sign == +1 ? std::pair{blocks[0].pos, Word{}}
                                : std::pair{Word{}, blocks[0].pos};
  return {blocks[0].pos, blocks[1].pos};
}

// A rotation of a cyclically reduced word that is strongly positive or
// strongly negative, together with its sign.
struct SignedRotation {
  std::size_t rotation;
  StrongSign sign;
};

inline SignedRotation strongly_signed_rotation(const Word& w) {
  if (!is_cyclically_reduced(w))
    throw NotCyclicallyReduced("strongly_signed_rotation: input");
  auto [u1, u2] = positive_factorization(w);
  std::size_t rot = u1.size() % w.size();
  if (u2.empty()) return {rot, StrongSign::StronglyPositive};
  if (u1.empty()) return {rot, StrongSign::StronglyNegative};
  // Rotated word is u2^{-1} u1, reduced because w^2 is.
  return {rot, detail::classify_quotient_unchecked(u2, u1)};
}

}  // namespace freeprod
