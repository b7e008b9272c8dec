#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "freeprod/word.hpp"

namespace freeprod {

using VertexId = std::uint32_t;
using PairId = std::uint32_t;
// Oriented edge id: 2*pair for the primary->secondary orientation, 2*pair+1
// for the reverse.
using EdgeId = std::uint32_t;

inline constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();
inline constexpr EdgeId kNoEdge = std::numeric_limits<EdgeId>::max();

// Bipartite labeled graph representing a factor-free subgroup: primary
// vertices on one side, typed secondary vertices on the other, every edge
// pair carrying a factor element as label. The label of the reverse
// orientation is the inverse. Irreducible graphs additionally satisfy:
//   - at a primary vertex, edge types are distinct per target (one edge of
//     each type, given there are no multiple edges),
//   - at a secondary vertex, edge labels are pairwise distinct,
//   - no multiple edges, minimum degree 1, at most one vertex of degree 1
//     and that vertex is primary (the base).
struct SubgroupGraph {
  struct Vertex {
    bool primary = true;
    FactorId type = 0;  // meaningful for secondary vertices only
    std::vector<EdgeId> out;  // outgoing oriented edges, ascending
  };
  struct EdgePair {
    VertexId primary = kNoVertex;
    VertexId secondary = kNoVertex;
    Rat label;  // label of the primary->secondary orientation
  };

  std::vector<Vertex> vertices;
  std::vector<EdgePair> pairs;
  VertexId base = kNoVertex;

  // --- construction ---
  VertexId add_primary() {
    vertices.push_back(Vertex{true, 0, {}});
    return static_cast<VertexId>(vertices.size() - 1);
  }
  VertexId add_secondary(FactorId type) {
    vertices.push_back(Vertex{false, type, {}});
    return static_cast<VertexId>(vertices.size() - 1);
  }
  PairId add_edge(VertexId primary, VertexId secondary, Rat label) {
    PairId id = static_cast<PairId>(pairs.size());
    pairs.push_back(EdgePair{primary, secondary, std::move(label)});
    vertices[primary].out.push_back(forward(id));
    vertices[secondary].out.push_back(backward(id));
    return id;
  }

  // --- oriented edge accessors ---
  static PairId pair_of(EdgeId e) { return e >> 1; }
  static bool from_primary(EdgeId e) { return (e & 1) == 0; }
  static EdgeId forward(PairId p) { return p << 1; }
  static EdgeId backward(PairId p) { return (p << 1) | 1; }
  static EdgeId inverse_edge(EdgeId e) { return e ^ 1; }

  VertexId tail(EdgeId e) const {
    const EdgePair& p = pairs[pair_of(e)];
    return from_primary(e) ? p.primary : p.secondary;
  }
  VertexId head(EdgeId e) const {
    const EdgePair& p = pairs[pair_of(e)];
    return from_primary(e) ? p.secondary : p.primary;
  }
  Rat label(EdgeId e) const {
    const EdgePair& p = pairs[pair_of(e)];
    return from_primary(e) ? p.label : -p.label;
  }
  FactorId edge_type(EdgeId e) const {
    return vertices[pairs[pair_of(e)].secondary].type;
  }
  Letter edge_letter(EdgeId e) const { return Letter{edge_type(e), label(e)}; }

  std::size_t vertex_count() const { return vertices.size(); }
  std::size_t pair_count() const { return pairs.size(); }
  std::size_t degree(VertexId v) const { return vertices[v].out.size(); }
  bool has_base() const { return base != kNoVertex; }

  // The type-alpha edge leaving a primary vertex; unique in an irreducible
  // graph. kNoEdge when absent.
  EdgeId edge_of_type(VertexId v, FactorId alpha) const {
    for (EdgeId e : vertices[v].out)
      if (edge_type(e) == alpha) return e;
    return kNoEdge;
  }

  std::vector<VertexId> primary_vertices() const {
    std::vector<VertexId> out;
    for (VertexId v = 0; v < vertices.size(); ++v)
      if (vertices[v].primary) out.push_back(v);
    return out;
  }
};

inline long long euler_char(const SubgroupGraph& g) {
  return static_cast<long long>(g.vertex_count()) -
         static_cast<long long>(g.pair_count());
}

inline std::size_t reduced_rank(const SubgroupGraph& g) {
  long long chi = euler_char(g);
  return chi < 0 ? static_cast<std::size_t>(-chi) : 0;
}

// ---------------------------------------------------------------------------
// Validation

struct ValidationIssue {
  std::string property;  // "P1", "P2", "P3-multi", "P3-degree", "structure"
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
};

inline ValidationReport validate(const SubgroupGraph& g) {
  ValidationReport rep;
  auto issue = [&](std::string prop, std::string detail) {
    rep.issues.push_back({std::move(prop), std::move(detail)});
  };

  for (PairId p = 0; p < g.pairs.size(); ++p) {
    const auto& ep = g.pairs[p];
    if (ep.primary >= g.vertex_count() || ep.secondary >= g.vertex_count() ||
        !g.vertices[ep.primary].primary || g.vertices[ep.secondary].primary)
      issue("structure", "pair " + std::to_string(p) + " endpoints");
  }
  if (!rep.ok()) return rep;

  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    const auto& vx = g.vertices[v];
    if (vx.primary) {
      // (P1): same-type edges must not reach distinct secondary vertices.
      std::map<FactorId, VertexId> seen;
      for (EdgeId e : vx.out) {
        auto [it, fresh] = seen.emplace(g.edge_type(e), g.head(e));
        if (!fresh && it->second != g.head(e))
          issue("P1", "primary " + std::to_string(v) + " type " +
                          std::to_string(g.edge_type(e)));
      }
    } else {
      // (P2): labels into a secondary vertex are pairwise distinct.
      std::map<Rat, EdgeId> seen;
      for (EdgeId e : vx.out) {
        Rat l = g.pairs[SubgroupGraph::pair_of(e)].label;
        auto [it, fresh] = seen.emplace(l, e);
        if (!fresh)
          issue("P2", "secondary " + std::to_string(v) + " label " +
                          rat_str(l));
      }
    }
  }

  // (P3): no multiple edges; degrees.
  std::map<std::pair<VertexId, VertexId>, PairId> endpoints;
  for (PairId p = 0; p < g.pairs.size(); ++p) {
    auto key = std::pair(g.pairs[p].primary, g.pairs[p].secondary);
    auto [it, fresh] = endpoints.emplace(key, p);
    if (!fresh)
      issue("P3-multi", "pairs " + std::to_string(it->second) + "," +
                            std::to_string(p));
  }
  if (!(g.vertex_count() == 1 && g.pair_count() == 0)) {
    std::size_t deg1 = 0;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      std::size_t d = g.degree(v);
      if (d == 0) issue("P3-degree", "isolated vertex " + std::to_string(v));
      if (d == 1) {
        ++deg1;
        if (!g.vertices[v].primary)
          issue("P3-degree", "degree-1 secondary " + std::to_string(v));
      }
    }
    if (deg1 > 1) issue("P3-degree", "more than one degree-1 vertex");
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Subgraphs, core, components

struct Subgraph {
  SubgroupGraph graph;
  std::vector<VertexId> old_vertex;  // new id -> old id
  std::vector<PairId> old_pair;
  std::vector<VertexId> new_vertex;  // old id -> new id or kNoVertex
  std::vector<PairId> new_pair;      // old id -> new id or kNoVertex (as PairId)
};

inline Subgraph induced_subgraph(const SubgroupGraph& g,
                                 const std::vector<bool>& keep) {
  Subgraph out;
  out.new_vertex.assign(g.vertex_count(), kNoVertex);
  out.new_pair.assign(g.pair_count(), static_cast<PairId>(kNoVertex));
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (!keep[v]) continue;
    VertexId nv = g.vertices[v].primary
                      ? out.graph.add_primary()
                      : out.graph.add_secondary(g.vertices[v].type);
    out.new_vertex[v] = nv;
    out.old_vertex.push_back(v);
  }
  for (PairId p = 0; p < g.pair_count(); ++p) {
    const auto& ep = g.pairs[p];
    if (!keep[ep.primary] || !keep[ep.secondary]) continue;
    PairId np = out.graph.add_edge(out.new_vertex[ep.primary],
                                   out.new_vertex[ep.secondary], ep.label);
    out.new_pair[p] = np;
    out.old_pair.push_back(p);
  }
  if (g.has_base() && keep[g.base]) out.graph.base = out.new_vertex[g.base];
  return out;
}

// Iteratively removes low-degree vertices. With keep_base the base vertex
// survives pruning (and isolation); without it the result is the core:
// exactly the edges lying on cyclically reduced paths.
inline Subgraph prune_leaves(const SubgroupGraph& g, bool keep_base) {
  std::vector<std::size_t> deg(g.vertex_count());
  std::vector<bool> keep(g.vertex_count(), true);
  for (VertexId v = 0; v < g.vertex_count(); ++v) deg[v] = g.degree(v);
  std::deque<VertexId> work;
  auto protected_vertex = [&](VertexId v) {
    return keep_base && g.has_base() && v == g.base;
  };
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (deg[v] <= 1 && !protected_vertex(v)) work.push_back(v);
  while (!work.empty()) {
    VertexId v = work.front();
    work.pop_front();
    if (!keep[v]) continue;
    if (deg[v] > 1) continue;
    keep[v] = false;
    for (EdgeId e : g.vertices[v].out) {
      VertexId w = g.head(e);
      if (!keep[w]) continue;
      if (deg[w] > 0) --deg[w];
      if (deg[w] <= 1 && !protected_vertex(w)) work.push_back(w);
    }
    deg[v] = 0;
  }
  return induced_subgraph(g, keep);
}

inline Subgraph core_of(const SubgroupGraph& g) {
  Subgraph s = prune_leaves(g, /*keep_base=*/false);
  s.graph.base = kNoVertex;
  return s;
}

// Connected component labels (component ids in order of least vertex).
inline std::pair<std::size_t, std::vector<std::size_t>> component_labels(
    const SubgroupGraph& g) {
  std::vector<std::size_t> label(g.vertex_count(),
                                 std::numeric_limits<std::size_t>::max());
  std::size_t count = 0;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (label[v] != std::numeric_limits<std::size_t>::max()) continue;
    std::deque<VertexId> work{v};
    label[v] = count;
    while (!work.empty()) {
      VertexId x = work.front();
      work.pop_front();
      for (EdgeId e : g.vertices[x].out) {
        VertexId y = g.head(e);
        if (label[y] == std::numeric_limits<std::size_t>::max()) {
          label[y] = count;
          work.push_back(y);
        }
      }
    }
    ++count;
  }
  return {count, std::move(label)};
}

inline Subgraph component_subgraph(const SubgroupGraph& g,
                                   const std::vector<std::size_t>& labels,
                                   std::size_t which) {
  std::vector<bool> keep(g.vertex_count());
  for (VertexId v = 0; v < g.vertex_count(); ++v) keep[v] = labels[v] == which;
  return induced_subgraph(g, keep);
}

// ---------------------------------------------------------------------------
// Paths and membership

// Word spelled by a path (edge labels merged and normalized).
inline Word path_label(const SubgroupGraph& g, const std::vector<EdgeId>& p) {
  std::vector<Letter> raw;
  raw.reserve(p.size());
  for (EdgeId e : p) raw.push_back(g.edge_letter(e));
  return normalize(raw);
}

inline std::vector<EdgeId> inverse_path(const SubgroupGraph&,
                                        const std::vector<EdgeId>& p) {
  std::vector<EdgeId> out;
  out.reserve(p.size());
  for (auto it = p.rbegin(); it != p.rend(); ++it)
    out.push_back(SubgroupGraph::inverse_edge(*it));
  return out;
}

// Shortest path by edge count, exploring edges in ascending id order.
// Returns empty path when from == to; throws when unreachable.
inline std::vector<EdgeId> bfs_path(const SubgroupGraph& g, VertexId from,
                                    VertexId to) {
  if (from == to) return {};
  std::vector<EdgeId> via(g.vertex_count(), kNoEdge);
  std::vector<bool> seen(g.vertex_count(), false);
  seen[from] = true;
  std::deque<VertexId> work{from};
  while (!work.empty()) {
    VertexId v = work.front();
    work.pop_front();
    for (EdgeId e : g.vertices[v].out) {
      VertexId w = g.head(e);
      if (seen[w]) continue;
      seen[w] = true;
      via[w] = e;
      if (w == to) {
        std::vector<EdgeId> path;
        for (VertexId x = to; x != from; x = g.tail(via[x]))
          path.push_back(via[x]);
        std::reverse(path.begin(), path.end());
        return path;
      }
      work.push_back(w);
    }
  }
  throw std::logic_error("bfs_path: unreachable vertex");
}

// Deterministic membership trace: at each primary vertex the next syllable
// fixes the outgoing edge by type and the return edge by label.
inline bool membership(const Word& w, const SubgroupGraph& g) {
  if (!g.has_base()) throw std::logic_error("membership: graph has no base");
  VertexId v = g.base;
  for (const Letter& l : w) {
    EdgeId e = g.edge_of_type(v, l.factor);
    if (e == kNoEdge) return false;
    Rat want = g.label(e) - l.value;  // label of the return pair
    VertexId s = g.head(e);
    EdgeId back = kNoEdge;
    for (EdgeId f : g.vertices[s].out) {
      if (g.pairs[SubgroupGraph::pair_of(f)].label == want) {
        back = f;
        break;
      }
    }
    if (back == kNoEdge) return false;
    v = g.head(back);
  }
  return v == g.base;
}

// ---------------------------------------------------------------------------
// Spanning-tree basis

// One generator per cotree edge pair; the generated subgroup is the graph's
// subgroup and the count is -chi + 1 on connected based graphs.
inline std::vector<Word> basis(const SubgroupGraph& g) {
  if (!g.has_base()) throw std::logic_error("basis: graph has no base");
  std::vector<EdgeId> via(g.vertex_count(), kNoEdge);
  std::vector<bool> seen(g.vertex_count(), false);
  std::vector<bool> tree_pair(g.pair_count(), false);
  seen[g.base] = true;
  std::deque<VertexId> work{g.base};
  while (!work.empty()) {
    VertexId v = work.front();
    work.pop_front();
    for (EdgeId e : g.vertices[v].out) {
      VertexId w = g.head(e);
      if (seen[w]) continue;
      seen[w] = true;
      via[w] = e;
      tree_pair[SubgroupGraph::pair_of(e)] = true;
      work.push_back(w);
    }
  }
  auto path_from_base = [&](VertexId v) {
    std::vector<EdgeId> path;
    for (VertexId x = v; x != g.base; x = g.tail(via[x]))
      path.push_back(via[x]);
    std::reverse(path.begin(), path.end());
    return path;
  };
  std::vector<Word> out;
  for (PairId p = 0; p < g.pair_count(); ++p) {
    if (tree_pair[p]) continue;
    const auto& ep = g.pairs[p];
    if (!seen[ep.primary] || !seen[ep.secondary])
      throw std::logic_error("basis: graph is not connected");
    std::vector<EdgeId> walk = path_from_base(ep.primary);
    walk.push_back(SubgroupGraph::forward(p));
    std::vector<EdgeId> back = path_from_base(ep.secondary);
    std::vector<EdgeId> inv = inverse_path(g, back);
    walk.insert(walk.end(), inv.begin(), inv.end());
    Word w = path_label(g, walk);
    if (!w.empty()) out.push_back(std::move(w));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Canonical forms (labeled isomorphism up to renumbering)

// Deterministic BFS signature from a root. Labels enter the signature
// normalized per secondary vertex (minimum label subtracted): shifting every
// label at one secondary vertex by a constant changes no path label and not
// the represented subgroup, and folding only determines labels up to such
// shifts. On irreducible graphs the sort keys are unique per vertex, so
// equal signatures mean isomorphism preserving types and all path labels.
inline std::string canonical_form(const SubgroupGraph& g, VertexId root) {
  std::vector<Rat> offset(g.vertex_count(), Rat(0));
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (g.vertices[v].primary || g.degree(v) == 0) continue;
    bool first = true;
    for (EdgeId e : g.vertices[v].out) {
      const Rat& l = g.pairs[SubgroupGraph::pair_of(e)].label;
      if (first || l < offset[v]) offset[v] = l;
      first = false;
    }
  }
  auto norm_label = [&](EdgeId e) -> Rat {
    const auto& ep = g.pairs[SubgroupGraph::pair_of(e)];
    return Rat(ep.label - offset[ep.secondary]);
  };

  std::vector<std::int64_t> index(g.vertex_count(), -1);
  std::int64_t next = 0;
  std::ostringstream os;
  std::deque<VertexId> work;
  index[root] = next++;
  work.push_back(root);
  while (!work.empty()) {
    VertexId v = work.front();
    work.pop_front();
    const auto& vx = g.vertices[v];
    if (vx.primary)
      os << "P;";
    else
      os << "S" << vx.type << ";";
    std::vector<EdgeId> edges = vx.out;
    std::sort(edges.begin(), edges.end(), [&](EdgeId a, EdgeId b) {
      auto key = [&](EdgeId e) {
        return std::tuple(g.edge_type(e), norm_label(e));
      };
      return key(a) < key(b);
    });
    for (EdgeId e : edges) {
      VertexId w = g.head(e);
      if (index[w] < 0) {
        index[w] = next++;
        work.push_back(w);
      }
      os << g.edge_type(e) << ":" << rat_str(norm_label(e)) << ">" << index[w]
         << ",";
    }
    os << "|";
  }
  return std::move(os).str();
}

inline std::string canonical_form_based(const SubgroupGraph& g) {
  if (!g.has_base()) throw std::logic_error("canonical_form_based: no base");
  return "base:" + canonical_form(g, g.base);
}

// Minimum signature over primary roots, componentwise; sorted and joined.
inline std::string canonical_form_unbased(const SubgroupGraph& g) {
  auto [count, labels] = component_labels(g);
  std::vector<std::string> forms;
  for (std::size_t c = 0; c < count; ++c) {
    std::string best;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      if (labels[v] != c || !g.vertices[v].primary) continue;
      std::string f = canonical_form(g, v);
      if (best.empty() || f < best) best = std::move(f);
    }
    if (!best.empty()) forms.push_back(std::move(best));
  }
  std::sort(forms.begin(), forms.end());
  std::string out;
  for (const auto& f : forms) {
    out += f;
    out += "#";
  }
  return out;
}

inline bool isomorphic_based(const SubgroupGraph& a, const SubgroupGraph& b) {
  return canonical_form_based(a) == canonical_form_based(b);
}

inline bool isomorphic_unbased(const SubgroupGraph& a,
                               const SubgroupGraph& b) {
  return canonical_form_unbased(a) == canonical_form_unbased(b);
}

// ---------------------------------------------------------------------------
// DOT export: primary vertices as circles, secondary as squares annotated
// with their type; deterministic ordering.

inline std::string to_dot(const SubgroupGraph& g, const std::string& name) {
  std::ostringstream os;
  os << "graph " << name << " {\n";
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (g.vertices[v].primary) {
      os << "  v" << v << " [shape=circle,label=\"" << v
         << (g.has_base() && g.base == v ? "*" : "") << "\"];\n";
    } else {
      os << "  v" << v << " [shape=square,label=\"" << v << ":g"
         << (g.vertices[v].type + 1) << "\"];\n";
    }
  }
  for (PairId p = 0; p < g.pair_count(); ++p) {
    const auto& ep = g.pairs[p];
    os << "  v" << ep.primary << " -- v" << ep.secondary << " [label=\""
       << rat_str(ep.label) << "\"];\n";
  }
  os << "}\n";
  return std::move(os).str();
}

}  // namespace freeprod
