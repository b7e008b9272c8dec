#include <catch2/catch_amalgamated.hpp>

#include "freeprod/instance_gen.hpp"
#include "freeprod/max_edges.hpp"

using namespace freeprod;

namespace {

Letter L(FactorId f, const Rat& q) { return Letter{f, q}; }
Word W(std::vector<Letter> ls) { return Word{std::move(ls)}; }

const Word a = W({L(0, 1)});
const Word b = W({L(1, 1)});
const Word ab = multiply(a, b);
const Word ba = multiply(b, a);

SubgroupGraph rank2_core() {
  return core_of(build_from_generators({ab, ba})).graph;
}

}  // namespace

TEST_CASE("a maximal edge exists on the rank-2 core") {
  SubgroupGraph g = rank2_core();
  REQUIRE(euler_char(g) == -1);
  auto [e, cert] = find_one_maximal_edge(g);
  std::string why;
  CHECK(check_certificate(g, e, cert, &why));
  INFO(why);

  // Stability: verifying prefixes beyond the required bound never flips the
  // verdict.
  std::size_t extra = 2 * (cert.high.cycle.size() + cert.low.cycle.size());
  CHECK(check_certificate(g, e, cert, &why, extra));

  // The certified edge leads the higher-type ray.
  EdgeId f = cert.low.spine.empty() ? cert.low.cycle.front()
                                    : cert.low.spine.front();
  CHECK(g.edge_type(e) > g.edge_type(f));
}

TEST_CASE("nonnegative characteristic means no construction") {
  SubgroupGraph cyc = build_from_generators({ab});
  CHECK_THROWS_AS(find_one_maximal_edge(cyc), ChiNonNegative);

  // Two disjoint cycles.
  SubgroupGraph two;
  for (int rep = 0; rep < 2; ++rep) {
    VertexId p1 = two.add_primary(), p2 = two.add_primary();
    VertexId s1 = two.add_secondary(0), s2 = two.add_secondary(1);
    two.add_edge(p1, s1, 1);
    two.add_edge(p2, s1, 0);
    two.add_edge(p2, s2, 1);
    two.add_edge(p1, s2, 0);
  }
  CHECK_THROWS_AS(find_one_maximal_edge(two), ChiNonNegative);
}

TEST_CASE("certificates with defects are rejected") {
  SubgroupGraph g = rank2_core();
  auto [e, cert] = find_one_maximal_edge(g);

  // Swapped sides reverse the type inequality.
  MaxEdgeCertificate swapped = make_certificate(g, cert.low, cert.high);
  EdgeId f = cert.low.spine.empty() ? cert.low.cycle.front()
                                    : cert.low.spine.front();
  std::string why;
  CHECK_FALSE(check_certificate(g, f, swapped, &why));

  // Reversing a cycle makes its label strongly positive, not negative.
  RaySpec broken = cert.high;
  std::vector<EdgeId> rev;
  for (auto it = broken.cycle.rbegin(); it != broken.cycle.rend(); ++it)
    rev.push_back(SubgroupGraph::inverse_edge(*it));
  broken.cycle = rev;
  broken.rotation = 0;
  // Re-anchor the reversed cycle only if it still closes at the spine end;
  // otherwise the certificate is structurally broken and must throw.
  bool attaches =
      broken.spine.empty()
          ? true
          : g.tail(broken.cycle.front()) == g.head(broken.spine.back());
  if (attaches) {
    MaxEdgeCertificate bad = make_certificate(g, broken, cert.low);
    CHECK_FALSE(check_certificate(g, e, bad, &why));
  } else {
    CHECK_THROWS_AS(
        [&] {
          MaxEdgeCertificate bad = make_certificate(g, broken, cert.low);
          check_certificate(g, e, bad, &why);
        }(),
        MalformedCertificate);
  }

  // Tampering with the table is malformed.
  MaxEdgeCertificate tampered = cert;
  tampered.prefix_table.pop_back();
  CHECK_THROWS_AS(check_certificate(g, e, tampered, &why),
                  MalformedCertificate);
}

TEST_CASE("good cutting sets") {
  SubgroupGraph cyc = build_from_generators({ab});
  CHECK(is_good_cut(cyc, {}));

  SubgroupGraph g = rank2_core();
  CHECK_FALSE(is_good_cut(g, {}));
  std::size_t good_singletons = 0;
  for (PairId p = 0; p < g.pair_count(); ++p)
    if (is_good_cut(g, {SubgroupGraph::forward(p)})) ++good_singletons;
  CHECK(good_singletons > 0);

  // A graph with a tree component is never cut to characteristic zero.
  SubgroupGraph with_tree = cyc;
  VertexId p = with_tree.add_primary();
  VertexId s = with_tree.add_secondary(0);
  with_tree.add_edge(p, s, 1);
  CHECK_FALSE(is_good_cut(with_tree, {}));
}

TEST_CASE("find_all on nonnegative graphs returns empty complete sets") {
  SubgroupGraph cyc = build_from_generators({ab});
  CertifiedEdges ce = find_all_certified(cyc);
  CHECK(ce.edges.empty());
  CHECK(ce.complete);
}

TEST_CASE("find_all certifies the whole set on the rank-2 core") {
  SubgroupGraph g = rank2_core();
  CertifiedEdges ce = find_all_certified(g);
  CHECK(ce.exhausted);
  CHECK(ce.edges.size() == 1);
  CHECK(ce.complete);
  std::set<EdgeId> d;
  for (const auto& [e, cert] : ce.edges) d.insert(e);
  CHECK(is_good_cut(g, d));
}

TEST_CASE("certified counts never exceed the negated characteristic") {
  SplitMix64 seeds(61);
  int done = 0;
  for (int i = 0; i < 40 && done < 10; ++i) {
    InstanceSpec spec;
    spec.seed = seeds.next();
    spec.max_syllables = 5;
    Instance inst;
    try {
      inst = generate(spec);
    } catch (const RetriesExhausted&) {
      continue;
    }
    SubgroupGraph core = core_of(inst.g1).graph;
    if (core.pair_count() == 0) continue;
    ++done;
    CertifiedEdges ce = find_all_certified(core, /*budget=*/8);
    long long chi = euler_char(core);
    CHECK(static_cast<long long>(ce.edges.size()) <= (chi < 0 ? -chi : 0));
    if (ce.complete) {
      std::set<EdgeId> d;
      for (const auto& [e, cert] : ce.edges) d.insert(e);
      CHECK(static_cast<long long>(d.size()) == -chi);
      CHECK(is_good_cut(core, d));
    }
  }
  CHECK(done >= 8);
}

TEST_CASE("maximal edges exist on random negative-characteristic cores") {
  SplitMix64 seeds(62);
  int done = 0;
  for (int i = 0; i < 60 && done < 12; ++i) {
    InstanceSpec spec;
    spec.seed = seeds.next();
    Instance inst;
    try {
      inst = generate(spec);
    } catch (const RetriesExhausted&) {
      continue;
    }
    SubgroupGraph core = core_of(inst.g1).graph;
    if (euler_char(core) >= 0) continue;
    ++done;
    auto [e, cert] = find_one_maximal_edge(core);
    std::string why;
    bool ok = check_certificate(core, e, cert, &why);
    INFO(why);
    CHECK(ok);
  }
  CHECK(done >= 10);
}

TEST_CASE("too small a budget degrades soundly") {
  SubgroupGraph g = rank2_core();
  CertifiedEdges ce = find_all_certified(g, /*budget=*/1);
  CHECK(ce.edges.empty());  // the shortest cycle needs four edges
  CHECK_FALSE(ce.complete);
  CHECK(ce.exhausted);
}

TEST_CASE("a rank-3 core certifies constructively") {
  Word a2b2 = normalize({L(0, 2), L(1, 2)});
  SubgroupGraph core = core_of(build_from_generators({ab, ba, a2b2})).graph;
  REQUIRE(euler_char(core) == -2);
  auto [e, cert] = find_one_maximal_edge(core);
  std::string why;
  CHECK(check_certificate(core, e, cert, &why));
  CertifiedEdges ce = find_all_certified(core);
  CHECK(ce.edges.size() == 2);
  CHECK(ce.complete);
  CHECK(ce.edges.count(e) == 1);  // the constructed edge is among them
}

TEST_CASE("report on a rank-zero pullback is consistent") {
  SubgroupGraph g = build_from_generators({ab});
  Pullback p = pullback(g, g);
  EdgeCountReport rep = verify_edge_count_bound(p);
  CHECK(rep.d_count == 0);
  CHECK(rep.within_bound);
  CHECK(rep.complete_p);
  CHECK(rep.chain_checked);
  CHECK(rep.chain_holds);
}

TEST_CASE("incomplete searches are inconclusive, never violations") {
  SubgroupGraph g = build_from_generators({ab, ba});
  Pullback p = pullback(g, g);
  EdgeCountReport rep = verify_edge_count_bound(p, /*budget=*/1);
  CHECK(rep.d_count == 0);
  CHECK(rep.within_bound);
  CHECK_FALSE(rep.chain_checked);
  CHECK(rep.inconclusive);
}

TEST_CASE("edge count chain on the equality instance") {
  SubgroupGraph g = build_from_generators({ab, ba});
  Pullback p = pullback(g, g);
  EdgeCountReport rep = verify_edge_count_bound(p);
  CHECK(rep.within_bound);
  CHECK(rep.projected_certs_valid);
  CHECK(rep.complete_p);
  CHECK(rep.complete_1);
  CHECK(rep.complete_2);
  CHECK(rep.chain_checked);
  CHECK(rep.chain_holds);
  CHECK_FALSE(rep.inconclusive);
  CHECK(rep.d_count == 1);
  CHECK(rep.d1_count == 1);
  CHECK(rep.d2_count == 1);
  CHECK(rep.projections_in_d1);
  CHECK(rep.projections_in_d2);
}
