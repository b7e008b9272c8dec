#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "freeprod/folding.hpp"

namespace freeprod {

// SplitMix64: fixed, platform-independent 64-bit permutation generator.
// Same seed, same stream, everywhere.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::size_t below(std::size_t n) {
    return static_cast<std::size_t>(next() % n);
  }

  std::size_t in(std::size_t lo, std::size_t hi) {  // inclusive bounds
    return lo + below(hi - lo + 1);
  }

  bool coin() { return (next() & 1) != 0; }
};

inline std::vector<Rat> default_exponent_pool() {
  return {Rat(1),      Rat(-1),     Rat(2),          Rat(-2),
          Rat(3),      Rat(-3),     Rat(1) / 2,      Rat(-1) / 2,
          Rat(3) / 2,  Rat(-3) / 2};
}

// A small nonzero rational, for property tests.
inline Rat random_rational(SplitMix64& rng) {
  static const std::vector<Rat> pool = default_exponent_pool();
  return pool[rng.below(pool.size())];
}

// Random reduced words: adjacent letters in distinct factors, exponents
// drawn from a pool (restricted to integers on Z factors).
struct WordSampler {
  std::size_t factor_count = 2;
  std::vector<Rat> pool = default_exponent_pool();
  const Factors* factors = nullptr;  // when set, respects Z factors

  Rat pick_value(SplitMix64& rng, FactorId f) const {
    if (factors && factors->kind(f) == FactorKind::Z) {
      std::vector<const Rat*> ints;
      for (const Rat& q : pool)
        if (is_integral(q)) ints.push_back(&q);
      if (ints.empty())
        throw std::invalid_argument("exponent pool has no integers");
      return *ints[rng.below(ints.size())];
    }
    return pool[rng.below(pool.size())];
  }

  Word word(SplitMix64& rng, std::size_t max_syllables) const {
    return word_between(rng, 0, max_syllables);
  }

  Word nonempty(SplitMix64& rng, std::size_t max_syllables) const {
    return word_between(rng, 1, max_syllables);
  }

  Word word_between(SplitMix64& rng, std::size_t min_syllables,
                    std::size_t max_syllables) const {
    std::size_t n = rng.in(min_syllables, max_syllables);
    std::vector<Letter> ls;
    FactorId prev = static_cast<FactorId>(factor_count);  // sentinel
    for (std::size_t i = 0; i < n; ++i) {
      FactorId f;
      if (prev >= factor_count) {
        f = static_cast<FactorId>(rng.below(factor_count));
      } else {
        f = static_cast<FactorId>(rng.below(factor_count - 1));
        if (f >= prev) ++f;
      }
      ls.push_back({f, pick_value(rng, f)});
      prev = f;
    }
    return Word{std::move(ls)};
  }
};

class RetriesExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InstanceSpec {
  std::uint64_t seed = 1;
  std::size_t min_factors = 2, max_factors = 4;
  bool z_only = false;
  std::size_t min_gens = 1, max_gens = 4;  // per subgroup
  std::size_t min_syllables = 1, max_syllables = 8;
  std::vector<Rat> exponent_pool = default_exponent_pool();
  std::size_t max_retries = 64;
};

struct Instance {
  Factors factors;
  std::vector<Word> gens1, gens2;
  SubgroupGraph g1, g2;
  std::size_t rejections = 0;
};

// Deterministic instance generation; factor-freeness is enforced by
// rejection sampling against the folding builder.
inline Instance generate(const InstanceSpec& spec) {
  SplitMix64 rng(spec.seed);
  std::size_t nf = rng.in(spec.min_factors, spec.max_factors);
  std::vector<FactorKind> kinds;
  for (std::size_t i = 0; i < nf; ++i)
    kinds.push_back(spec.z_only || rng.coin() ? FactorKind::Z
                                              : FactorKind::Q);
  Instance inst;
  inst.factors = Factors(kinds);

  WordSampler sampler{nf, spec.exponent_pool, &inst.factors};
  auto sample_subgroup = [&](std::vector<Word>& gens, SubgroupGraph& g) {
    for (std::size_t attempt = 0;; ++attempt) {
      if (attempt > 0 && inst.rejections >= spec.max_retries)
        throw RetriesExhausted("factor-free rejection limit reached");
      gens.clear();
      std::size_t k = rng.in(spec.min_gens, spec.max_gens);
      for (std::size_t i = 0; i < k; ++i)
        gens.push_back(
            sampler.word_between(rng, spec.min_syllables, spec.max_syllables));
      try {
        g = build_from_generators(gens);
        return;
      } catch (const FactorFreeViolation&) {
        ++inst.rejections;
      }
    }
  };
  sample_subgroup(inst.gens1, inst.g1);
  sample_subgroup(inst.gens2, inst.g2);
  return inst;
}

}  // namespace freeprod
