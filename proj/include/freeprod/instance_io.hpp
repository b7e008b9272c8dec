#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "freeprod/stallings.hpp"
#include "freeprod/word.hpp"

namespace freeprod {

// Word literal syntax: whitespace-separated tokens gN^q with N a 1-based
// factor index and q a nonzero rational, e.g. "g1^3 g2^-1 g1^1/2". A bare gN
// means exponent 1.
inline Word parse_word(std::string_view text, const Factors& factors) {
  std::istringstream in{std::string(text)};
  std::vector<Letter> letters;
  std::string tok;
  while (in >> tok) {
    if (tok.size() < 2 || tok[0] != 'g')
      throw ParseError("bad word token '" + tok + "'");
    std::size_t caret = tok.find('^');
    std::string num = tok.substr(1, caret == std::string::npos
                                        ? std::string::npos
                                        : caret - 1);
    std::size_t idx = 0;
    try {
      idx = std::stoul(num);
    } catch (const std::exception&) {
      throw ParseError("bad factor index in token '" + tok + "'");
    }
    if (idx == 0 || idx > factors.size())
      throw ParseError("factor index out of range in token '" + tok + "'");
    Rat q = 1;
    if (caret != std::string::npos)
      q = parse_rational(tok.substr(caret + 1));
    if (q == 0) throw ParseError("zero exponent in token '" + tok + "'");
    FactorId f = static_cast<FactorId>(idx - 1);
    if (!factors.admits(f, q))
      throw ParseError("non-integer exponent on Z factor in token '" + tok +
                       "'");
    letters.push_back({f, q});
  }
  // Words are accepted unreduced and normalized here.
  return normalize(letters);
}

inline std::string format_word(const Word& w) {
  if (w.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += 'g';
    out += std::to_string(w[i].factor + 1);
    out += '^';
    out += rat_str(w[i].value);
  }
  return out;
}

// Free-group word syntax: tokens xN or xN^k with integer k != 0.
inline FreeWord parse_free_word(std::string_view text, std::size_t rank) {
  std::istringstream in{std::string(text)};
  FreeWord w;
  std::string tok;
  while (in >> tok) {
    if (tok.size() < 2 || tok[0] != 'x')
      throw ParseError("bad free-word token '" + tok + "'");
    std::size_t caret = tok.find('^');
    std::size_t idx = 0;
    try {
      idx = std::stoul(tok.substr(1, caret == std::string::npos
                                         ? std::string::npos
                                         : caret - 1));
    } catch (const std::exception&) {
      throw ParseError("bad generator index in token '" + tok + "'");
    }
    if (idx == 0 || idx > rank)
      throw ParseError("generator index out of range in token '" + tok + "'");
    long long k = 1;
    if (caret != std::string::npos) {
      Rat q = parse_rational(tok.substr(caret + 1));
      if (q == 0 || !is_integral(q))
        throw ParseError("free-word exponent must be a nonzero integer in '" +
                         tok + "'");
      k = static_cast<long long>(numerator(q));
    }
    for (long long i = 0; i < std::llabs(k); ++i)
      w.push_back(k > 0 ? static_cast<int>(idx) : -static_cast<int>(idx));
  }
  return free_reduce(w);
}

inline std::string format_free_word(const FreeWord& w) {
  if (w.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += 'x';
    out += std::to_string(std::abs(w[i]));
    if (w[i] < 0) out += "^-1";
  }
  return out;
}

// An instance file: the ordered factor list, named subgroups over those
// factors, and an optional free-group block for the free-group commands.
//
//   {
//     "factors": [{"kind": "Z"}, {"kind": "Q"}],
//     "subgroups": {"H1": ["g1^1 g2^1", "g2^1 g1^1"], "H2": ["g1^1 g2^1"]},
//     "free_group": {"rank": 2, "subgroups": {"K1": ["x1 x2^-1"]}}
//   }
struct InstanceFile {
  Factors factors;
  std::map<std::string, std::vector<Word>> subgroups;
  std::size_t free_rank = 0;
  std::map<std::string, std::vector<FreeWord>> free_subgroups;

  const std::vector<Word>& subgroup(const std::string& name) const {
    auto it = subgroups.find(name);
    if (it == subgroups.end())
      throw ParseError("no subgroup named '" + name + "' in the instance");
    return it->second;
  }
  const std::vector<FreeWord>& free_subgroup(const std::string& name) const {
    auto it = free_subgroups.find(name);
    if (it == free_subgroups.end())
      throw ParseError("no free subgroup named '" + name +
                       "' in the instance");
    return it->second;
  }
};

inline InstanceFile parse_instance(const nlohmann::json& j) {
  InstanceFile out;
  if (!j.contains("factors") || !j["factors"].is_array())
    throw ParseError("instance file needs a \"factors\" array");
  std::vector<FactorKind> kinds;
  for (const auto& f : j["factors"]) {
    std::string kind = f.at("kind").get<std::string>();
    if (kind == "Z")
      kinds.push_back(FactorKind::Z);
    else if (kind == "Q")
      kinds.push_back(FactorKind::Q);
    else
      throw ParseError("unknown factor kind '" + kind + "'");
  }
  out.factors = Factors(kinds);
  if (j.contains("subgroups")) {
    for (const auto& [name, words] : j["subgroups"].items()) {
      std::vector<Word> gens;
      for (const auto& s : words)
        gens.push_back(parse_word(s.get<std::string>(), out.factors));
      out.subgroups[name] = std::move(gens);
    }
  }
  if (j.contains("free_group")) {
    const auto& fg = j["free_group"];
    out.free_rank = fg.at("rank").get<std::size_t>();
    if (fg.contains("subgroups")) {
      for (const auto& [name, words] : fg["subgroups"].items()) {
        std::vector<FreeWord> gens;
        for (const auto& s : words)
          gens.push_back(parse_free_word(s.get<std::string>(), out.free_rank));
        out.free_subgroups[name] = std::move(gens);
      }
    }
  }
  return out;
}

inline InstanceFile load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open instance file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& ex) {
    throw ParseError("invalid JSON in '" + path + "': " + ex.what());
  }
  return parse_instance(j);
}

}  // namespace freeprod
