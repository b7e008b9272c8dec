#pragma once

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "freeprod/factors.hpp"

namespace freeprod {

// A letter: one syllable of a reduced word. Never the identity.
struct Letter {
  FactorId factor = 0;
  Rat value = 0;

  friend bool operator==(const Letter&, const Letter&) = default;
};

// An element of the free product as a reduced word: adjacent letters lie in
// distinct factors, no letter is the identity. The empty word is 1.
struct Word {
  std::vector<Letter> letters;

  Word() = default;
  explicit Word(std::vector<Letter> ls) : letters(std::move(ls)) {}

  bool empty() const { return letters.empty(); }
  std::size_t size() const { return letters.size(); }
  const Letter& operator[](std::size_t i) const { return letters[i]; }

  auto begin() const { return letters.begin(); }
  auto end() const { return letters.end(); }

  friend bool operator==(const Word&, const Word&) = default;
  // Arbitrary strict order, only so words can key maps and sets.
  friend bool operator<(const Word& a, const Word& b) {
    auto key = [](const Letter& l) { return std::pair(l.factor, l.value); };
    return std::lexicographical_compare(
        a.letters.begin(), a.letters.end(), b.letters.begin(), b.letters.end(),
        [&](const Letter& x, const Letter& y) { return key(x) < key(y); });
  }
};

inline bool is_reduced(const std::vector<Letter>& ls) {
  for (std::size_t i = 0; i < ls.size(); ++i) {
    if (ls[i].value == 0) return false;
    if (i > 0 && ls[i].factor == ls[i - 1].factor) return false;
  }
  return true;
}

inline bool is_reduced(const Word& w) { return is_reduced(w.letters); }

// Rewrites an arbitrary letter sequence to the reduced word representing the
// same element: merges adjacent same-factor letters, drops identities.
inline Word normalize(const std::vector<Letter>& raw) {
  std::vector<Letter> out;
  for (const Letter& l : raw) {
    if (l.value == 0) continue;
    if (!out.empty() && out.back().factor == l.factor) {
      out.back().value += l.value;
      if (out.back().value == 0) out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  return Word{std::move(out)};
}

inline Word multiply(const Word& u, const Word& w) {
  std::vector<Letter> cat = u.letters;
  cat.insert(cat.end(), w.letters.begin(), w.letters.end());
  return normalize(cat);
}

inline Word invert(const Word& w) {
  std::vector<Letter> out;
  out.reserve(w.size());
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it)
    out.push_back({it->factor, -it->value});
  return Word{std::move(out)};
}

// A word is cyclically reduced when its square is reduced; single letters
// count as cyclically reduced.
inline bool is_cyclically_reduced(const Word& w) {
  if (w.empty()) return false;
  return w.size() == 1 ||
         w.letters.front().factor != w.letters.back().factor;
}

// Splits w = c v c^{-1} with v cyclically reduced or empty.
inline std::pair<Word, Word> cyclic_reduce(const Word& w) {
  std::vector<Letter> conj;
  std::vector<Letter> core = w.letters;
  while (core.size() >= 2 &&
         core.front().factor == core.back().factor) {
    Letter first = core.front();
    core.erase(core.begin());
    Rat merged = core.back().value + first.value;
    if (merged == 0) {
      core.pop_back();
    } else {
      core.back().value = merged;
    }
    conj.push_back(first);
  }
  return {Word{std::move(conj)}, Word{std::move(core)}};
}

inline Word rotate(const Word& w, std::size_t by) {
  if (w.empty()) return w;
  by %= w.size();
  std::vector<Letter> out(w.letters.begin() + by, w.letters.end());
  out.insert(out.end(), w.letters.begin(), w.letters.begin() + by);
  return Word{std::move(out)};
}

inline std::size_t syllable_length(const Word& w) { return w.size(); }

}  // namespace freeprod
