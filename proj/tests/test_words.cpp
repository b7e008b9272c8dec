#include <catch2/catch_amalgamated.hpp>

#include "freeprod/instance_gen.hpp"
#include "freeprod/word.hpp"

using namespace freeprod;

namespace {

Letter L(FactorId f, const Rat& q) { return Letter{f, q}; }
Word W(std::vector<Letter> ls) { return Word{std::move(ls)}; }

}  // namespace

TEST_CASE("factor element composition") {
  CHECK(compose({0, 3}, {0, 0}).value == 3);
  CHECK(compose({0, Rat(1) / 2}, {0, Rat(1) / 3}).value == Rat(5) / 6);
  CHECK(compose({0, 2}, {0, -2}).value == 0);
  CHECK_THROWS_AS(compose({0, 1}, {1, 1}), FactorMismatch);
}

TEST_CASE("factor element order") {
  CHECK(factor_compare({0, 0}, {0, 0}) == Cmp::EQ);
  CHECK(factor_compare({0, -1}, {0, 2}) == Cmp::LT);
  CHECK(factor_compare({0, Rat(5) / 3}, {0, Rat(3) / 2}) == Cmp::GT);
  CHECK_THROWS_AS(factor_compare({0, 1}, {1, 1}), FactorMismatch);
}

TEST_CASE("factor addition properties on random triples") {
  SplitMix64 rng(11);
  for (int i = 0; i < 300; ++i) {
    Rat a = random_rational(rng), b = random_rational(rng),
        c = random_rational(rng);
    FactorElement ea{0, a}, eb{0, b}, ec{0, c};
    CHECK(compose(compose(ea, eb), ec) == compose(ea, compose(eb, ec)));
    CHECK(compose(ea, eb) == compose(eb, ea));
    CHECK(compose(ea, {0, 0}) == ea);
    CHECK(compose(ea, inverse(ea)).value == 0);
    // Translation invariance of the factor order.
    CHECK(factor_compare(ea, eb) == factor_compare(compose(ec, ea), compose(ec, eb)));
  }
}

TEST_CASE("normalize merges, cancels and cascades") {
  CHECK(normalize({L(0, 1), L(0, 2)}) == W({L(0, 3)}));
  CHECK(normalize({L(0, 1), L(0, -1)}) == W({}));
  CHECK(normalize({L(0, 1), L(1, 2), L(1, -2), L(0, 1)}) == W({L(0, 2)}));
  CHECK(normalize({}) == W({}));
}

TEST_CASE("multiply and invert") {
  CHECK(multiply(W({L(0, 1)}), W({L(0, -1)})) == W({}));
  CHECK(invert(W({L(0, 1), L(1, 1)})) == W({L(1, -1), L(0, -1)}));
  CHECK(invert(W({})) == W({}));
}

TEST_CASE("cyclic reduction") {
  auto [c, v] = cyclic_reduce(W({L(0, 1), L(1, 1), L(0, -1)}));
  CHECK(c == W({L(0, 1)}));
  CHECK(v == W({L(1, 1)}));

  auto [c2, v2] = cyclic_reduce(W({L(0, 1), L(1, 1)}));
  CHECK(c2.empty());
  CHECK(v2 == W({L(0, 1), L(1, 1)}));

  // Same-factor ends that merge instead of cancelling.
  auto [c3, v3] = cyclic_reduce(W({L(0, 1), L(1, 1), L(0, 1)}));
  CHECK(c3 == W({L(0, 1)}));
  CHECK(v3 == W({L(1, 1), L(0, 2)}));
  CHECK(is_cyclically_reduced(v3));
  CHECK(multiply(multiply(c3, v3), invert(c3)) ==
        W({L(0, 1), L(1, 1), L(0, 1)}));
}

TEST_CASE("normalize is idempotent and compatible with multiply") {
  SplitMix64 rng(7);
  WordSampler sampler{2, {Rat(1), Rat(-1), Rat(2), Rat(-2), Rat(1) / 2}};
  for (int i = 0; i < 500; ++i) {
    Word u = sampler.word(rng, 6), w = sampler.word(rng, 6);
    Word uw = multiply(u, w);
    CHECK(normalize(uw.letters) == uw);
    std::vector<Letter> cat = u.letters;
    cat.insert(cat.end(), w.letters.begin(), w.letters.end());
    CHECK(normalize(cat) == uw);
    CHECK(multiply(u, invert(u)).empty());
    auto [c, v] = cyclic_reduce(w);
    CHECK(multiply(multiply(c, v), invert(c)) == w);
    CHECK((v.empty() || is_cyclically_reduced(v)));
  }
}
