#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace freeprod {

// All arithmetic in the library is exact; rationals are arbitrary precision.
using Rat = boost::multiprecision::cpp_rational;
using Int = boost::multiprecision::cpp_int;

inline int rat_sign(const Rat& q) { return q < 0 ? -1 : (q > 0 ? 1 : 0); }

inline bool is_integral(const Rat& q) { return denominator(q) == 1; }

// Prints "3", "-5" or "2/7"; inverse of parse_rational.
inline std::string rat_str(const Rat& q) { return q.str(); }

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Rat parse_rational(std::string_view text) {
  if (text.empty()) throw ParseError("empty rational literal");
  for (char c : text) {
    if (!(c == '-' || c == '/' || (c >= '0' && c <= '9')))
      throw ParseError("bad character in rational literal: '" +
                       std::string(text) + "'");
  }
  try {
    Rat q{std::string(text)};
    return q;
  } catch (const std::exception&) {
    throw ParseError("cannot parse rational literal: '" + std::string(text) +
                     "'");
  }
}

}  // namespace freeprod
