#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "freeprod/word.hpp"

namespace freeprod {

// Monomial in noncommuting variables, one variable per factor. Stored as the
// flat variable sequence, so X1*X1*X0 is {1, 1, 0}. Degree = length.
struct Monomial {
  std::vector<FactorId> vars;

  std::size_t degree() const { return vars.size(); }
  friend bool operator==(const Monomial&, const Monomial&) = default;
};

// Total degree first, then lexicographic on the variable sequence.
struct GradedLex {
  bool operator()(const Monomial& a, const Monomial& b) const {
    if (a.vars.size() != b.vars.size()) return a.vars.size() < b.vars.size();
    return a.vars < b.vars;
  }
};

class CapMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when the degree bound of word_sign fails; indicates a bug, the
// assembly argument guarantees a nonzero coefficient at degree <= ||w||.
class InternalDegreeBoundViolated : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A noncommutative polynomial over the rationals, truncated by total degree.
// Invariant: no stored coefficient is zero, no stored degree exceeds cap.
struct TruncatedSeries {
  std::size_t cap = 0;
  std::map<Monomial, Rat, GradedLex> terms;

  friend bool operator==(const TruncatedSeries&, const TruncatedSeries&) =
      default;
};

inline TruncatedSeries series_one(std::size_t cap) {
  TruncatedSeries s;
  s.cap = cap;
  s.terms[Monomial{}] = 1;
  return s;
}

inline TruncatedSeries series_mul(const TruncatedSeries& a,
                                  const TruncatedSeries& b) {
  if (a.cap != b.cap)
    throw CapMismatch("series_mul: caps " + std::to_string(a.cap) + " vs " +
                      std::to_string(b.cap));
  TruncatedSeries out;
  out.cap = a.cap;
  for (const auto& [ma, ca] : a.terms) {
    for (const auto& [mb, cb] : b.terms) {
      if (ma.degree() + mb.degree() > out.cap) break;  // b sorted by degree
      Monomial m;
      m.vars.reserve(ma.degree() + mb.degree());
      m.vars = ma.vars;
      m.vars.insert(m.vars.end(), mb.vars.begin(), mb.vars.end());
      Rat& slot = out.terms[std::move(m)];
      slot += ca * cb;
    }
  }
  for (auto it = out.terms.begin(); it != out.terms.end();) {
    if (it->second == 0)
      it = out.terms.erase(it);
    else
      ++it;
  }
  return out;
}

// Generalized binomial coefficient C(q, j) for rational q.
inline Rat binomial(const Rat& q, std::size_t j) {
  Rat b = 1;
  for (std::size_t i = 0; i < j; ++i) {
    b *= q - Rat(Int(i));
    b /= Rat(Int(i + 1));
  }
  return b;
}

// Embedding of one letter g = (alpha, q): the image of (1 + X_alpha)^q,
// i.e. sum_{j<=cap} C(q,j) X_alpha^j.
inline TruncatedSeries letter_series(const Letter& l, std::size_t cap) {
  TruncatedSeries s;
  s.cap = cap;
  for (std::size_t j = 0; j <= cap; ++j) {
    Rat c = binomial(l.value, j);
    if (c == 0) continue;
    Monomial m;
    m.vars.assign(j, l.factor);
    s.terms[std::move(m)] = std::move(c);
  }
  return s;
}

// Multiplicative embedding of a word: product of its letter series.
inline TruncatedSeries embed_word(const Word& w, std::size_t cap) {
  TruncatedSeries s = series_one(cap);
  for (const Letter& l : w) s = series_mul(s, letter_series(l, cap));
  return s;
}

enum class Sign { Negative, Zero, Positive };

// Sign of a reduced word under the series order: the sign of the coefficient
// of the graded-lex least monomial of embed_word(w) - 1. A nonzero
// coefficient exists at degree <= ||w||: the coefficient of the full
// monomial X_{a1}...X_{an} assembles uniquely to q1*...*qn != 0. Truncation
// at a smaller cap agrees with the full series on all retained degrees, so
// the cap grows only until the first nonzero term appears.
inline Sign word_sign(const Word& w) {
  if (w.empty()) return Sign::Zero;
  const std::size_t n = w.size();
  std::size_t cap = 1;
  for (;;) {
    TruncatedSeries s = embed_word(w, cap);
    for (const auto& [m, c] : s.terms) {
      if (m.degree() == 0) continue;
      return c > 0 ? Sign::Positive : Sign::Negative;
    }
    if (cap >= n)
      throw InternalDegreeBoundViolated(
          "no nonzero coefficient at cap = syllable length");
    cap = std::min(cap * 2, n);
  }
}

}  // namespace freeprod
