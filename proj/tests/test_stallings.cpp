#include <catch2/catch_amalgamated.hpp>

#include "freeprod/instance_gen.hpp"
#include "freeprod/stallings.hpp"

using namespace freeprod;

namespace {

FreeWord fw(std::initializer_list<int> xs) { return FreeWord(xs); }

}  // namespace

TEST_CASE("free word arithmetic") {
  CHECK(free_reduce(fw({1, -1})).empty());
  CHECK(free_reduce(fw({1, 2, -2, 1})) == fw({1, 1}));
  CHECK(free_invert(fw({1, 2})) == fw({-2, -1}));
  CHECK(free_multiply(fw({1, 2}), fw({-2, 1})) == fw({1, 1}));
}

TEST_CASE("single generator folds to a loop of rank zero") {
  StallingsGraph g = stallings_build({fw({1})});
  CHECK(g.vertex_count() == 1);
  CHECK(stallings_rank(g) == 0);
  CHECK(stallings_membership(fw({1, 1, 1}), g));
  CHECK_FALSE(stallings_membership(fw({2}), g));
}

TEST_CASE("index-two subgroup and its self-intersection") {
  std::vector<FreeWord> gens = {fw({1, 1}), fw({2, 2}), fw({1, 2})};
  StallingsGraph x = stallings_build(gens);
  CHECK(stallings_rank(x) == 2);
  // Membership is exactly even word length here.
  CHECK(stallings_membership(fw({1, 1}), x));
  CHECK(stallings_membership(fw({1, 2}), x));
  CHECK(stallings_membership(fw({2, 1}), x));
  CHECK(stallings_membership(fw({2, 1, 1, 1}), x));
  CHECK_FALSE(stallings_membership(fw({1}), x));
  CHECK_FALSE(stallings_membership(fw({2, 1, 1}), x));

  FreePullbackResult p = stallings_pullback(x, x);
  CHECK(p.components.size() == 2);
  CHECK(p.total_rank == 4);
}

TEST_CASE("disjoint cyclic subgroups have empty pullback") {
  StallingsGraph x1 = stallings_build({fw({1})});
  StallingsGraph x2 = stallings_build({fw({2})});
  FreePullbackResult p = stallings_pullback(x1, x2);
  CHECK(p.components.empty());
  CHECK(p.total_rank == 0);
}

TEST_CASE("the embedding maps generators to commutator-shaped words") {
  Word m1 = mu_embed(fw({1}));
  REQUIRE(m1.size() == 4);
  CHECK(m1[0] == Letter{0, 1});
  CHECK(m1[1] == Letter{1, 1});
  CHECK(m1[2] == Letter{0, -1});
  CHECK(m1[3] == Letter{1, -1});

  Word m2 = mu_embed(fw({2}));
  CHECK(m2[0] == Letter{0, 2});
  CHECK(m2[1] == Letter{1, 2});
  CHECK(m2[2] == Letter{0, -2});
  CHECK(m2[3] == Letter{1, -2});

  CHECK(mu_embed(FreeWord{}).empty());
}

TEST_CASE("the embedding is multiplicative and injective on samples") {
  SplitMix64 rng(71);
  auto random_free = [&](std::size_t maxlen) {
    FreeWord w;
    std::size_t n = rng.below(maxlen + 1);
    for (std::size_t i = 0; i < n; ++i) {
      int g = static_cast<int>(rng.in(1, 3));
      w.push_back(rng.coin() ? g : -g);
    }
    return free_reduce(w);
  };
  for (int i = 0; i < 300; ++i) {
    FreeWord u = random_free(8), w = random_free(8);
    CHECK(mu_embed(free_multiply(u, w)) ==
          multiply(mu_embed(u), mu_embed(w)));
    FreeWord r = free_reduce(u);
    CHECK(mu_embed(r).empty() == r.empty());
  }
}

TEST_CASE("strengthened bound on the worked instances") {
  std::vector<FreeWord> h = {fw({1, 1}), fw({2, 2}), fw({1, 2})};
  ShncReport rep = verify_shnc(h, h);
  CHECK(rep.rank1 == 2);
  CHECK(rep.rank2 == 2);
  CHECK(rep.free_total == 4);
  CHECK(rep.product_total == 4);
  CHECK(rep.holds);

  ShncReport zero = verify_shnc({fw({1})}, {fw({2})});
  CHECK(zero.free_total == 0);
  CHECK(zero.product_total == 0);
  CHECK(zero.holds);
}

TEST_CASE("strengthened bound holds on random instances") {
  SplitMix64 seeds(72);
  auto random_free = [](SplitMix64& rng, std::size_t maxlen) {
    FreeWord w;
    std::size_t n = rng.in(1, maxlen);
    for (std::size_t i = 0; i < n; ++i) {
      int g = static_cast<int>(rng.in(1, 2));
      w.push_back(rng.coin() ? g : -g);
    }
    return free_reduce(w);
  };
  int done = 0;
  for (int i = 0; i < 60 && done < 25; ++i) {
    SplitMix64 rng(seeds.next());
    std::vector<FreeWord> h1, h2;
    for (std::size_t j = rng.in(1, 3); j-- > 0;) {
      FreeWord w = random_free(rng, 6);
      if (!w.empty()) h1.push_back(w);
    }
    for (std::size_t j = rng.in(1, 3); j-- > 0;) {
      FreeWord w = random_free(rng, 6);
      if (!w.empty()) h2.push_back(w);
    }
    if (h1.empty() || h2.empty()) continue;
    ++done;
    ShncReport rep = verify_shnc(h1, h2);
    CHECK(rep.holds);
  }
  CHECK(done >= 20);
}

TEST_CASE("pullback totals agree with the classical oracle on Z instances") {
  SplitMix64 seeds(73);
  int done = 0;
  for (int i = 0; i < 60 && done < 20; ++i) {
    InstanceSpec spec;
    spec.seed = seeds.next();
    spec.z_only = true;
    spec.exponent_pool = {Rat(1), Rat(-1), Rat(2), Rat(-2), Rat(3), Rat(-3)};
    spec.max_syllables = 6;
    Instance inst;
    try {
      inst = generate(spec);
    } catch (const RetriesExhausted&) {
      continue;
    }
    ++done;
    std::vector<FreeWord> f1, f2;
    for (const Word& w : inst.gens1) f1.push_back(z_word_to_free(w));
    for (const Word& w : inst.gens2) f2.push_back(z_word_to_free(w));
    FreePullbackResult oracle =
        stallings_pullback(stallings_build(f1), stallings_build(f2));

    Pullback p = pullback(inst.g1, inst.g2);
    std::size_t total = 0, count = 0;
    for (const ComponentInfo& c : components(p)) {
      total += c.rank;
      ++count;
    }
    CHECK(total == oracle.total_rank);
    CHECK(count == oracle.components.size());
    CHECK(reduced_rank(inst.g1) == stallings_rank(stallings_build(f1)));
  }
  CHECK(done >= 15);
}
