#pragma once

#include <map>
#include <tuple>
#include <vector>

#include "freeprod/subgroup_graph.hpp"

namespace freeprod {

namespace detail {

struct Product {
  SubgroupGraph graph;
  // Per vertex of `graph`: image in the two inputs (primary vertex pair, or
  // the pair of secondary targets defining the class).
  std::vector<std::pair<VertexId, VertexId>> vproj;
  std::vector<std::pair<PairId, PairId>> pproj;
  VertexId base = kNoVertex;  // the (o1, o2) vertex when inputs are based
};

// Fiber product of two irreducible graphs. Primary vertices are all pairs;
// a secondary class exists for each (target1, target2, label difference)
// triple realized by a primary pair carrying a common-type edge on both
// sides. With abelian factor groups the label-difference key recovers the
// equivalence closure exactly. Classes that would require a missing edge on
// one side are never created; they could only carry degree-1 vertices.
inline Product build_product(const SubgroupGraph& g1, const SubgroupGraph& g2) {
  Product out;
  std::vector<VertexId> p1 = g1.primary_vertices();
  std::vector<VertexId> p2 = g2.primary_vertices();

  std::map<std::pair<VertexId, VertexId>, VertexId> primary_index;
  for (VertexId v1 : p1) {
    for (VertexId v2 : p2) {
      VertexId v = out.graph.add_primary();
      out.vproj.push_back({v1, v2});
      primary_index[{v1, v2}] = v;
    }
  }
  if (g1.has_base() && g2.has_base())
    out.base = primary_index[{g1.base, g2.base}];

  std::map<std::tuple<FactorId, VertexId, VertexId, Rat>, VertexId> classes;
  for (VertexId v1 : p1) {
    for (VertexId v2 : p2) {
      VertexId v = primary_index[{v1, v2}];
      for (EdgeId e1 : g1.vertices[v1].out) {
        FactorId alpha = g1.edge_type(e1);
        EdgeId e2 = g2.edge_of_type(v2, alpha);
        if (e2 == kNoEdge) continue;
        PairId q1 = SubgroupGraph::pair_of(e1);
        PairId q2 = SubgroupGraph::pair_of(e2);
        Rat delta = g1.pairs[q1].label - g2.pairs[q2].label;
        auto key = std::tuple(alpha, g1.head(e1), g2.head(e2), delta);
        auto it = classes.find(key);
        VertexId s;
        if (it == classes.end()) {
          s = out.graph.add_secondary(alpha);
          out.vproj.push_back({g1.head(e1), g2.head(e2)});
          classes.emplace(key, s);
        } else {
          s = it->second;
        }
        out.graph.add_edge(v, s, g1.pairs[q1].label);
        out.pproj.push_back({q1, q2});
      }
    }
  }
  return out;
}

}  // namespace detail

// The intersection graph of two based irreducible graphs: its connected
// components are the core graphs of the intersections with conjugates, one
// per double coset with nontrivial intersection.
struct Pullback {
  SubgroupGraph graph;  // cored, unbased
  SubgroupGraph g1, g2;
  std::vector<std::pair<VertexId, VertexId>> vproj;
  std::vector<std::pair<PairId, PairId>> pproj;
};

inline Pullback pullback(const SubgroupGraph& g1, const SubgroupGraph& g2) {
  detail::Product prod = detail::build_product(g1, g2);
  Subgraph cored = core_of(prod.graph);
  Pullback out;
  out.graph = std::move(cored.graph);
  out.g1 = g1;
  out.g2 = g2;
  for (VertexId v : cored.old_vertex) out.vproj.push_back(prod.vproj[v]);
  for (PairId p : cored.old_pair) out.pproj.push_back(prod.pproj[p]);
  return out;
}

struct ComponentInfo {
  SubgroupGraph graph;
  std::vector<VertexId> old_vertex;  // ids in the pullback graph
  long long chi = 0;
  std::size_t rank = 0;
  Word representative;  // s with component = core of H1 cap s H2 s^{-1}
  std::size_t vertices = 0, edge_pairs = 0;
};

// Connected components of the pullback with exact ranks and double-coset
// representatives. The representative for a component is read off any of its
// primary vertices w: s = label(path o1 -> tau1(w)) * label(path o2 ->
// tau2(w))^{-1}.
inline std::vector<ComponentInfo> components(const Pullback& p) {
  auto [count, labels] = component_labels(p.graph);
  std::vector<ComponentInfo> out;
  for (std::size_t c = 0; c < count; ++c) {
    Subgraph sub = component_subgraph(p.graph, labels, c);
    if (sub.graph.pair_count() == 0) continue;  // isolated vertex, not a core
    ComponentInfo info;
    info.chi = euler_char(sub.graph);
    info.rank = reduced_rank(sub.graph);
    info.vertices = sub.graph.vertex_count();
    info.edge_pairs = sub.graph.pair_count();

    VertexId w = kNoVertex;
    for (VertexId v = 0; v < sub.graph.vertex_count(); ++v) {
      if (sub.graph.vertices[v].primary) {
        w = sub.old_vertex[v];
        break;
      }
    }
    auto [w1, w2] = p.vproj[w];
    Word q1 = path_label(p.g1, bfs_path(p.g1, p.g1.base, w1));
    Word q2 = path_label(p.g2, bfs_path(p.g2, p.g2.base, w2));
    info.representative = multiply(q1, invert(q2));
    info.old_vertex = std::move(sub.old_vertex);
    info.graph = std::move(sub.graph);
    out.push_back(std::move(info));
  }
  return out;
}

// Based intersection graph for H1 cap H2: the component of (o1, o2), pruned
// of dangling vertices but keeping the base.
inline SubgroupGraph intersection_with_base(const SubgroupGraph& g1,
                                            const SubgroupGraph& g2) {
  detail::Product prod = detail::build_product(g1, g2);
  prod.graph.base = prod.base;
  auto [count, labels] = component_labels(prod.graph);
  Subgraph comp = component_subgraph(prod.graph, labels, labels[prod.base]);
  Subgraph pruned = prune_leaves(comp.graph, /*keep_base=*/true);
  return std::move(pruned.graph);
}

struct TheoremReport {
  std::size_t rank1 = 0, rank2 = 0;
  std::size_t total_rank = 0;  // sum of component ranks of the pullback
  std::size_t component_count = 0;
  bool holds = false;
};

inline TheoremReport verify_theorem1(const SubgroupGraph& g1,
                                     const SubgroupGraph& g2) {
  TheoremReport rep;
  rep.rank1 = reduced_rank(g1);
  rep.rank2 = reduced_rank(g2);
  Pullback p = pullback(g1, g2);
  for (const ComponentInfo& c : components(p)) {
    rep.total_rank += c.rank;
    ++rep.component_count;
  }
  rep.holds = rep.total_rank <= rep.rank1 * rep.rank2;
  return rep;
}

}  // namespace freeprod
