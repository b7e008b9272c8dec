#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "freeprod/rational.hpp"

namespace freeprod {

// Index into the ordered factor catalog. The total order on factors used by
// the word order and by maximal-edge types is simply the index order.
using FactorId = std::uint32_t;

// Supported factor groups: the additive integers and the additive rationals,
// both with their standard order.
enum class FactorKind { Z, Q };

enum class Cmp { LT, EQ, GT };

inline const char* to_string(Cmp c) {
  switch (c) {
    case Cmp::LT: return "LT";
    case Cmp::EQ: return "EQ";
    case Cmp::GT: return "GT";
  }
  return "?";
}

class FactorMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An element of a single factor group, tagged with the factor it lives in.
// The group operation is addition; the identity is 0.
struct FactorElement {
  FactorId factor = 0;
  Rat value = 0;

  friend bool operator==(const FactorElement&, const FactorElement&) = default;
};

inline FactorElement compose(const FactorElement& a, const FactorElement& b) {
  if (a.factor != b.factor)
    throw FactorMismatch("compose: elements of different factors");
  return {a.factor, a.value + b.value};
}

inline FactorElement inverse(const FactorElement& a) {
  return {a.factor, -a.value};
}

inline Cmp factor_compare(const FactorElement& a, const FactorElement& b) {
  if (a.factor != b.factor)
    throw FactorMismatch("factor_compare: elements of different factors");
  if (a.value < b.value) return Cmp::LT;
  if (a.value > b.value) return Cmp::GT;
  return Cmp::EQ;
}

// Ordered catalog of factor groups, as declared in an instance file.
class Factors {
 public:
  Factors() = default;
  explicit Factors(std::vector<FactorKind> kinds) : kinds_(std::move(kinds)) {}

  std::size_t size() const { return kinds_.size(); }
  FactorKind kind(FactorId f) const { return kinds_.at(f); }

  bool admits(FactorId f, const Rat& value) const {
    if (f >= kinds_.size()) return false;
    return kinds_[f] == FactorKind::Q || is_integral(value);
  }

  void require(FactorId f, const Rat& value) const {
    if (f >= kinds_.size())
      throw std::out_of_range("factor index " + std::to_string(f + 1) +
                              " outside the catalog");
    if (!admits(f, value))
      throw std::invalid_argument("value " + rat_str(value) +
                                  " is not an element of Z factor g" +
                                  std::to_string(f + 1));
  }

 private:
  std::vector<FactorKind> kinds_;
};

}  // namespace freeprod
