#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "freeprod/instance_gen.hpp"
#include "freeprod/pullback.hpp"

using namespace freeprod;

namespace {

Letter L(FactorId f, const Rat& q) { return Letter{f, q}; }
Word W(std::vector<Letter> ls) { return Word{std::move(ls)}; }

const Word a = W({L(0, 1)});
const Word b = W({L(1, 1)});
const Word ab = multiply(a, b);
const Word ba = multiply(b, a);

// All reduced words over two Z factors with at most `max_syll` syllables and
// exponents in {-2,-1,1,2}; the empty word included.
std::vector<Word> small_ball(std::size_t max_syll) {
  std::vector<Word> out{Word{}};
  std::vector<Word> layer{Word{}};
  const std::vector<Rat> exps = {Rat(-2), Rat(-1), Rat(1), Rat(2)};
  for (std::size_t k = 0; k < max_syll; ++k) {
    std::vector<Word> next;
    for (const Word& w : layer) {
      for (FactorId f = 0; f < 2; ++f) {
        if (!w.empty() && w.letters.back().factor == f) continue;
        for (const Rat& q : exps) {
          Word e = w;
          e.letters.push_back({f, q});
          next.push_back(e);
        }
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

SubgroupGraph conjugate_graph(const SubgroupGraph& g, const Word& s) {
  std::vector<Word> gens;
  for (const Word& w : basis(g))
    gens.push_back(multiply(multiply(s, w), invert(s)));
  return build_from_generators(gens);
}

}  // namespace

TEST_CASE("self-intersection of a cyclic subgroup is one rank-0 component") {
  SubgroupGraph g = build_from_generators({ab});
  Pullback p = pullback(g, g);
  auto comps = components(p);
  REQUIRE(comps.size() == 1);
  CHECK(comps[0].chi == 0);
  CHECK(comps[0].rank == 0);
  CHECK(comps[0].vertices == 4);
  CHECK(euler_char(p.graph) == 0);
}

TEST_CASE("self-intersection of the rank-2 example sums to rank 1") {
  SubgroupGraph g = build_from_generators({ab, ba});
  Pullback p = pullback(g, g);
  std::size_t total = 0;
  for (const auto& c : components(p)) total += c.rank;
  CHECK(total == 1);
}

TEST_CASE("pullback against the trivial subgroup is empty") {
  SubgroupGraph g = build_from_generators({ab, ba});
  SubgroupGraph trivial = build_from_generators({});
  Pullback p = pullback(g, trivial);
  CHECK(p.graph.vertex_count() == 0);
  CHECK(components(p).empty());
}

TEST_CASE("component representatives rebuild the component") {
  SubgroupGraph g1 = build_from_generators({ab, ba});
  SubgroupGraph g2 = build_from_generators({ab});
  Pullback p = pullback(g1, g2);
  auto comps = components(p);
  REQUIRE_FALSE(comps.empty());
  for (const auto& c : comps) {
    SubgroupGraph conj = conjugate_graph(g2, c.representative);
    SubgroupGraph inter = intersection_with_base(g1, conj);
    Subgraph cored = core_of(inter);
    CHECK(isomorphic_unbased(cored.graph, c.graph));
  }
}

TEST_CASE("based intersection has conjunction membership semantics") {
  SubgroupGraph g1 = build_from_generators({ab, ba});
  SubgroupGraph g2 = build_from_generators({ab});

  SubgroupGraph self = intersection_with_base(g1, g1);
  SubgroupGraph meet = intersection_with_base(g1, g2);
  for (const Word& w : small_ball(4)) {
    CHECK(membership(w, self) == membership(w, g1));
    CHECK(membership(w, meet) == (membership(w, g1) && membership(w, g2)));
  }
  // <ab, ba> cap <ab> = <ab>.
  CHECK(isomorphic_based(meet, g2));
}

TEST_CASE("intersection of <ab> and <ba> is trivial") {
  SubgroupGraph g1 = build_from_generators({ab});
  SubgroupGraph g2 = build_from_generators({ba});
  SubgroupGraph inter = intersection_with_base(g1, g2);
  CHECK(reduced_rank(inter) == 0);
  // Brute force: no common nonempty word of up to 12 letters. Elements of
  // <ab> are powers of ab, so it suffices to test those.
  for (int k = -3; k <= 3; ++k) {
    if (k == 0) continue;
    Word p;
    Word step = k > 0 ? ab : invert(ab);
    for (int i = 0; i < std::abs(k); ++i) p = multiply(p, step);
    CHECK_FALSE(membership(p, g2));
    CHECK_FALSE(membership(p, inter));
  }
  CHECK(membership(Word{}, inter));
}

TEST_CASE("theorem inequality on the worked examples") {
  SubgroupGraph cyc = build_from_generators({ab});
  auto r0 = verify_theorem1(cyc, cyc);
  CHECK(r0.rank1 == 0);
  CHECK(r0.rank2 == 0);
  CHECK(r0.total_rank == 0);
  CHECK(r0.holds);

  SubgroupGraph g = build_from_generators({ab, ba});
  auto r1 = verify_theorem1(g, g);
  CHECK(r1.rank1 == 1);
  CHECK(r1.total_rank == 1);  // equality case
  CHECK(r1.holds);
}

TEST_CASE("double coset count matches brute-force enumeration") {
  SubgroupGraph g1 = build_from_generators({ab, ba});
  SubgroupGraph g2 = build_from_generators({ab});

  std::vector<Word> ball = small_ball(6);
  // Elements of the subgroups within the ball.
  std::vector<Word> in_h1, in_h2;
  for (const Word& w : ball) {
    if (w.empty()) continue;
    if (membership(w, g1)) in_h1.push_back(w);
    if (membership(w, g2)) in_h2.push_back(w);
  }
  REQUIRE_FALSE(in_h1.empty());

  // Representatives with nontrivial intersection, up to double cosets.
  std::vector<Word> reps;
  for (const Word& s : ball) {
    Word si = invert(s);
    bool nontrivial = false;
    for (const Word& v : in_h1) {
      if (membership(multiply(si, multiply(v, s)), g2)) {
        nontrivial = true;
        break;
      }
    }
    if (!nontrivial) continue;
    bool fresh = true;
    for (const Word& r : reps) {
      // same coset iff s^{-1} h1 r in H2 for some h1 in H1
      if (membership(multiply(si, r), g2)) { fresh = false; break; }
      for (const Word& h1 : in_h1) {
        if (membership(multiply(si, multiply(invert(h1), r)), g2)) {
          fresh = false;
          break;
        }
      }
      if (!fresh) break;
    }
    if (fresh) reps.push_back(s);
  }

  Pullback p = pullback(g1, g2);
  CHECK(components(p).size() == reps.size());
}

TEST_CASE("pullback is symmetric and projections are locally injective") {
  SplitMix64 seeds(51);
  int done = 0;
  for (int i = 0; i < 60 && done < 15; ++i) {
    InstanceSpec spec;
    spec.seed = seeds.next();
    spec.max_syllables = 5;
    Instance inst;
    try {
      inst = generate(spec);
    } catch (const RetriesExhausted&) {
      continue;
    }
    ++done;
    Pullback p = pullback(inst.g1, inst.g2);
    Pullback q = pullback(inst.g2, inst.g1);
    std::size_t tp = 0, tq = 0;
    for (const auto& c : components(p)) tp += c.rank;
    for (const auto& c : components(q)) tq += c.rank;
    CHECK(tp == tq);
    CHECK(components(p).size() == components(q).size());

    auto rep = verify_theorem1(inst.g1, inst.g2);
    CHECK(rep.holds);
    CHECK(rep.total_rank == tp);

    // Local injectivity of both projections.
    for (VertexId v = 0; v < p.graph.vertex_count(); ++v) {
      std::set<PairId> seen1, seen2;
      for (EdgeId e : p.graph.vertices[v].out) {
        PairId pr = SubgroupGraph::pair_of(e);
        CHECK(seen1.insert(p.pproj[pr].first).second);
        CHECK(seen2.insert(p.pproj[pr].second).second);
      }
    }

    // Path labels are preserved by both projections.
    if (p.graph.pair_count() > 0) {
      SplitMix64 walk(inst.rejections + 99);
      VertexId v = 0;
      while (!p.graph.vertices[v].primary) ++v;
      std::vector<EdgeId> path;
      EdgeId last = kNoEdge;
      for (int steps = 0; steps < 8; ++steps) {
        const auto& out = p.graph.vertices[v].out;
        std::vector<EdgeId> options;
        for (EdgeId e : out)
          if (last == kNoEdge || e != SubgroupGraph::inverse_edge(last))
            options.push_back(e);
        if (options.empty()) break;
        EdgeId e = options[walk.below(options.size())];
        path.push_back(e);
        last = e;
        v = p.graph.head(e);
      }
      if (v != kNoVertex && !p.graph.vertices[v].primary && !path.empty()) {
        path.pop_back();  // end at a primary vertex
      }
      auto project = [&](int side) {
        std::vector<EdgeId> out;
        for (EdgeId e : path) {
          PairId pr = SubgroupGraph::pair_of(e);
          PairId im = side == 1 ? p.pproj[pr].first : p.pproj[pr].second;
          out.push_back((im << 1) | (e & 1));
        }
        return out;
      };
      Word lp = path_label(p.graph, path);
      CHECK(lp == path_label(p.g1, project(1)));
      CHECK(lp == path_label(p.g2, project(2)));
    }
  }
  CHECK(done >= 10);
}
