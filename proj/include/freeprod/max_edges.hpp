#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "freeprod/order.hpp"
#include "freeprod/pullback.hpp"
#include "freeprod/subgroup_graph.hpp"

namespace freeprod {

class MalformedCertificate : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ChiNonNegative : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One eventually periodic witness ray: the infinite path spine * cycle^inf.
// `rotation` marks the aligned point: rotating the cycle by that many edges
// must start at a primary vertex and carry a label whose inverse is strongly
// positive. Constructions emit rays already aligned (rotation 0).
struct RaySpec {
  std::vector<EdgeId> spine;  // from the ray base; may be empty
  std::vector<EdgeId> cycle;  // nonempty closed walk at the spine's end
  std::size_t rotation = 0;
};

// Witness that an edge is maximal: two rays from a common primary vertex,
// the certified edge leading the high-type side, every even prefix label of
// both rays below 1. The prefix table lists the finite set of prefix labels
// that the check verifies: the empty prefix first, then the high side's even
// prefixes up to its bound, then the low side's.
struct MaxEdgeCertificate {
  RaySpec high, low;
  std::vector<Word> prefix_table;
};

namespace detail {

inline VertexId ray_base(const SubgroupGraph& g, const RaySpec& r) {
  if (!r.spine.empty()) return g.tail(r.spine.front());
  return g.tail(r.cycle.front());
}

inline EdgeId ray_first_edge(const RaySpec& r) {
  return r.spine.empty() ? r.cycle.front() : r.spine.front();
}

inline EdgeId ray_edge_at(const RaySpec& r, std::size_t i) {  // 0-based
  if (i < r.spine.size()) return r.spine[i];
  return r.cycle[(i - r.spine.size()) % r.cycle.size()];
}

inline std::size_t ray_bound(const RaySpec& r) {
  return r.spine.size() + r.rotation;
}

// Labels of the even prefixes 2, 4, ..., upto of spine * cycle^inf.
inline std::vector<Word> even_prefix_labels(const SubgroupGraph& g,
                                            const RaySpec& r,
                                            std::size_t upto) {
  std::vector<Word> out;
  std::vector<Letter> raw;
  for (std::size_t i = 0; i < upto; ++i) {
    raw.push_back(g.edge_letter(ray_edge_at(r, i)));
    if ((i + 1) % 2 == 0) out.push_back(normalize(raw));
  }
  return out;
}

inline std::vector<EdgeId> rotate_path(const std::vector<EdgeId>& p,
                                       std::size_t by) {
  std::vector<EdgeId> out(p.begin() + by, p.end());
  out.insert(out.end(), p.begin(), p.begin() + by);
  return out;
}

inline bool reduced_walk(const SubgroupGraph& g, const std::vector<EdgeId>& p,
                         bool check_connect = true) {
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    if (check_connect && g.head(p[i]) != g.tail(p[i + 1])) return false;
    if (p[i + 1] == SubgroupGraph::inverse_edge(p[i])) return false;
  }
  return true;
}

inline void require_walk(const SubgroupGraph& g, const std::vector<EdgeId>& p,
                         const char* what) {
  for (EdgeId e : p)
    if (SubgroupGraph::pair_of(e) >= g.pair_count())
      throw MalformedCertificate(std::string(what) + ": edge out of range");
  for (std::size_t i = 0; i + 1 < p.size(); ++i)
    if (g.head(p[i]) != g.tail(p[i + 1]))
      throw MalformedCertificate(std::string(what) + ": disconnected walk");
}

}  // namespace detail

inline MaxEdgeCertificate make_certificate(const SubgroupGraph& g,
                                           RaySpec high, RaySpec low) {
  MaxEdgeCertificate cert;
  cert.prefix_table.push_back(Word{});
  for (const Word& w :
       detail::even_prefix_labels(g, high, detail::ray_bound(high)))
    cert.prefix_table.push_back(w);
  for (const Word& w :
       detail::even_prefix_labels(g, low, detail::ray_bound(low)))
    cert.prefix_table.push_back(w);
  cert.high = std::move(high);
  cert.low = std::move(low);
  return cert;
}

// Finite verification that `e` is a maximal edge of `g` according to the
// certificate. Structurally broken certificates throw MalformedCertificate;
// well-formed ones that fail a maximality condition return false (the reason
// is reported through `why` when given). The check is finite: beyond the
// aligned point every even prefix factors as (checked prefix) * cycle^k *
// (cycle prefix), all three below 1 by left invariance and the prefix
// property of strongly positive inverses. `extra_steps` extends the directly
// verified prefix range past the required bound (used by stability tests).
inline bool check_certificate(const SubgroupGraph& g, EdgeId e,
                              const MaxEdgeCertificate& cert,
                              std::string* why = nullptr,
                              std::size_t extra_steps = 0) {
  auto fail = [&](const std::string& reason) {
    if (why) *why = reason;
    return false;
  };

  for (const RaySpec* r : {&cert.high, &cert.low}) {
    if (r->cycle.empty()) throw MalformedCertificate("empty cycle");
    detail::require_walk(g, r->spine, "spine");
    detail::require_walk(g, r->cycle, "cycle");
    if (g.head(r->cycle.back()) != g.tail(r->cycle.front()))
      throw MalformedCertificate("cycle is not closed");
    VertexId attach = r->spine.empty() ? detail::ray_base(g, *r)
                                       : g.head(r->spine.back());
    if (g.tail(r->cycle.front()) != attach)
      throw MalformedCertificate("cycle not attached at the spine end");
    if (r->rotation >= r->cycle.size())
      throw MalformedCertificate("rotation out of range");
  }
  if (detail::ray_first_edge(cert.high) != e)
    throw MalformedCertificate("certificate does not lead with the edge");

  VertexId base = detail::ray_base(g, cert.high);
  if (base != detail::ray_base(g, cert.low))
    throw MalformedCertificate("rays start at different vertices");
  if (!g.vertices[base].primary)
    throw MalformedCertificate("ray base is not primary");

  // Recompute the finite prefix set and compare against the table.
  std::vector<Word> table;
  table.push_back(Word{});
  for (const Word& w : detail::even_prefix_labels(
           g, cert.high, detail::ray_bound(cert.high)))
    table.push_back(w);
  for (const Word& w :
       detail::even_prefix_labels(g, cert.low, detail::ray_bound(cert.low)))
    table.push_back(w);
  if (table != cert.prefix_table)
    throw MalformedCertificate("prefix table does not match the paths");

  // Reducedness of both infinite rays and of the combined biinfinite path.
  EdgeId e1 = detail::ray_first_edge(cert.high);
  EdgeId f1 = detail::ray_first_edge(cert.low);
  if (e1 == f1) return fail("rays share their first edge");
  if (g.edge_type(e1) <= g.edge_type(f1))
    return fail("type inequality fails");
  for (const RaySpec* r : {&cert.high, &cert.low}) {
    if (!detail::reduced_walk(g, r->spine, false))
      return fail("spine not reduced");
    if (!detail::reduced_walk(g, r->cycle, false))
      return fail("cycle not reduced");
    if (!r->spine.empty() &&
        r->cycle.front() == SubgroupGraph::inverse_edge(r->spine.back()))
      return fail("spine-to-cycle junction not reduced");
    if (r->cycle.front() == SubgroupGraph::inverse_edge(r->cycle.back()))
      return fail("cycle not cyclically reduced");

    // Aligned cycle label: starts at a primary vertex, inverse strongly
    // positive.
    std::vector<EdgeId> aligned = detail::rotate_path(r->cycle, r->rotation);
    if (!g.vertices[g.tail(aligned.front())].primary)
      return fail("aligned cycle start is not primary");
    Word lambda = path_label(g, aligned);
    if (lambda.empty()) return fail("cycle label is trivial");
    if (!is_strongly_positive(invert(lambda)))
      return fail("cycle label inverse is not strongly positive");

    // Even prefixes up to the bound (plus any requested surplus) below 1.
    std::size_t upto = detail::ray_bound(*r) + extra_steps;
    for (const Word& w : detail::even_prefix_labels(g, *r, upto))
      if (word_sign(w) != Sign::Negative)
        return fail("an even prefix label is not below 1");
  }

  // The base must be the strict maximum of the finite prefix set; with every
  // nonempty entry already below 1, strictness amounts to distinctness.
  std::set<Word> distinct(table.begin(), table.end());
  if (distinct.size() != table.size())
    return fail("prefix labels are not pairwise distinct");

  return true;
}

// ---------------------------------------------------------------------------
// Constructive existence on graphs with negative Euler characteristic.

namespace detail {

// Shortest reduced path whose first edge is `first` and whose endpoint
// satisfies `goal`; BFS over (last edge) states in ascending edge order.
inline std::vector<EdgeId> shortest_ray_to(
    const SubgroupGraph& g, EdgeId first,
    const std::function<bool(VertexId)>& goal) {
  std::vector<EdgeId> prev(2 * g.pair_count(), kNoEdge);
  std::vector<bool> seen(2 * g.pair_count(), false);
  std::deque<EdgeId> work;
  seen[first] = true;
  work.push_back(first);
  while (!work.empty()) {
    EdgeId last = work.front();
    work.pop_front();
    if (goal(g.head(last))) {
      std::vector<EdgeId> path{last};
      while (prev[path.back()] != kNoEdge) path.push_back(prev[path.back()]);
      std::reverse(path.begin(), path.end());
      return path;
    }
    for (EdgeId nxt : g.vertices[g.head(last)].out) {
      if (nxt == SubgroupGraph::inverse_edge(last) || seen[nxt]) continue;
      seen[nxt] = true;
      prev[nxt] = last;
      work.push_back(nxt);
    }
  }
  throw std::logic_error("shortest_ray_to: no path");
}

// Shortest closed reduced walk at `at` with constrained first and last
// edges: first != banned_first, last != banned_last, last != first^{-1}.
inline std::vector<EdgeId> shortest_anchored_cycle(const SubgroupGraph& g,
                                                   VertexId at,
                                                   EdgeId banned_first,
                                                   EdgeId banned_last) {
  std::vector<EdgeId> best;
  for (EdgeId first : g.vertices[at].out) {
    if (first == banned_first) continue;
    std::vector<EdgeId> prev(2 * g.pair_count(), kNoEdge);
    std::vector<bool> seen(2 * g.pair_count(), false);
    std::deque<EdgeId> work;
    seen[first] = true;
    work.push_back(first);
    std::vector<EdgeId> found;
    while (!work.empty() && found.empty()) {
      EdgeId last = work.front();
      work.pop_front();
      if (g.head(last) == at && last != banned_last &&
          last != SubgroupGraph::inverse_edge(first)) {
        found.push_back(last);
        while (prev[found.back()] != kNoEdge)
          found.push_back(prev[found.back()]);
        std::reverse(found.begin(), found.end());
        break;
      }
      for (EdgeId nxt : g.vertices[g.head(last)].out) {
        if (nxt == SubgroupGraph::inverse_edge(last) || seen[nxt]) continue;
        seen[nxt] = true;
        prev[nxt] = last;
        work.push_back(nxt);
      }
    }
    if (!found.empty() && (best.empty() || found.size() < best.size()))
      best = std::move(found);
  }
  if (best.empty())
    throw std::logic_error("shortest_anchored_cycle: none found");
  return best;
}

inline std::vector<EdgeId> inverse_walk(const std::vector<EdgeId>& p) {
  std::vector<EdgeId> out;
  out.reserve(p.size());
  for (auto it = p.rbegin(); it != p.rend(); ++it)
    out.push_back(SubgroupGraph::inverse_edge(*it));
  return out;
}

// The cycle for one ray: `anchor0` rotated to a primary start, oriented and
// rotated by the strongly signed rotation so that the label's inverse is
// strongly positive. Returns the cycle based at the anchor vertex together
// with the alignment offset.
struct AlignedCycle {
  std::vector<EdgeId> based;  // closed at the anchor vertex
  std::size_t offset = 0;     // rotate(based, offset) is the aligned cycle
};

inline AlignedCycle align_cycle(const SubgroupGraph& g,
                                const std::vector<EdgeId>& anchor0) {
  std::size_t shift =
      g.vertices[g.tail(anchor0.front())].primary ? 0 : 1;
  std::vector<EdgeId> r = rotate_path(anchor0, shift);
  Word label = path_label(g, r);
  SignedRotation sr = strongly_signed_rotation(label);
  std::vector<EdgeId> aligned = rotate_path(r, 2 * sr.rotation);
  std::vector<EdgeId> based = anchor0;
  if (sr.sign == StrongSign::StronglyPositive) {
    aligned = inverse_walk(aligned);
    based = inverse_walk(based);
  }
  AlignedCycle out;
  out.based = based;
  for (std::size_t k = 0; k < based.size(); ++k) {
    if (rotate_path(based, k) == aligned) {
      out.offset = k;
      return out;
    }
  }
  throw std::logic_error("align_cycle: aligned form is not a rotation");
}

}  // namespace detail

// Constructs a maximal edge with its certificate on any graph with a
// negative-characteristic component. Deterministic tie-breaks: least ids,
// shortest paths, breadth-first exploration in id order.
inline std::pair<EdgeId, MaxEdgeCertificate> find_one_maximal_edge(
    const SubgroupGraph& g) {
  auto [count, labels] = component_labels(g);
  Subgraph comp;
  bool found = false;
  for (std::size_t c = 0; c < count && !found; ++c) {
    Subgraph s = component_subgraph(g, labels, c);
    if (euler_char(s.graph) < 0) {
      comp = std::move(s);
      found = true;
    }
  }
  if (!found)
    throw ChiNonNegative("every component has nonnegative characteristic");

  Subgraph cored = core_of(comp.graph);
  const SubgroupGraph& k = cored.graph;

  VertexId o = kNoVertex;
  for (VertexId v = 0; v < k.vertex_count(); ++v) {
    if (k.vertices[v].primary) {
      o = v;
      break;
    }
  }
  EdgeId t1 = k.vertices[o].out[0];
  EdgeId u1 = k.vertices[o].out[1];

  auto branching = [&](VertexId v) { return k.degree(v) > 2; };
  std::vector<EdgeId> t = detail::shortest_ray_to(k, t1, branching);
  std::vector<EdgeId> u = detail::shortest_ray_to(k, u1, branching);

  std::vector<EdgeId> r0 = detail::shortest_anchored_cycle(
      k, k.head(t.back()), SubgroupGraph::inverse_edge(t.back()), t.back());
  std::vector<EdgeId> s0 = detail::shortest_anchored_cycle(
      k, k.head(u.back()), SubgroupGraph::inverse_edge(u.back()), u.back());

  detail::AlignedCycle ct = detail::align_cycle(k, r0);
  detail::AlignedCycle cu = detail::align_cycle(k, s0);

  RaySpec rayT{t, ct.based, ct.offset};
  RaySpec rayU{u, cu.based, cu.offset};
  std::size_t boundT = detail::ray_bound(rayT);
  std::size_t boundU = detail::ray_bound(rayU);
  if (boundT % 2 != 0 || boundU % 2 != 0)
    throw std::logic_error("find_one_maximal_edge: odd alignment bound");

  // The finite prefix set; its maximum locates the split vertex.
  struct Entry {
    Word label;
    bool on_t;
    std::size_t pos;  // even prefix length
  };
  std::vector<Entry> entries;
  entries.push_back({Word{}, true, 0});
  {
    std::vector<Word> wt = detail::even_prefix_labels(k, rayT, boundT);
    for (std::size_t j = 0; j < wt.size(); ++j)
      entries.push_back({wt[j], true, 2 * (j + 1)});
    std::vector<Word> wu = detail::even_prefix_labels(k, rayU, boundU);
    for (std::size_t j = 0; j < wu.size(); ++j)
      entries.push_back({wu[j], false, 2 * (j + 1)});
  }
  {
    std::set<Word> distinct;
    for (const Entry& en : entries) distinct.insert(en.label);
    if (distinct.size() != entries.size())
      throw std::logic_error(
          "find_one_maximal_edge: prefix labels are not distinct");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < entries.size(); ++i)
    if (compare(entries[best].label, entries[i].label) == Cmp::LT) best = i;

  const Entry& m = entries[best];
  const RaySpec& rayM = m.on_t ? rayT : rayU;   // the ray holding the max
  const RaySpec& rayO = m.on_t ? rayU : rayT;   // the other ray
  std::size_t boundM = m.on_t ? boundT : boundU;
  std::size_t boundO = m.on_t ? boundU : boundT;

  // Ray A continues rayM past the maximum; ray B backtracks to the common
  // origin and follows the other ray.
  RaySpec rayA;
  for (std::size_t i = m.pos; i < boundM; ++i)
    rayA.spine.push_back(detail::ray_edge_at(rayM, i));
  rayA.cycle = detail::rotate_path(rayM.cycle, rayM.rotation);
  RaySpec rayB;
  for (std::size_t i = m.pos; i-- > 0;)
    rayB.spine.push_back(
        SubgroupGraph::inverse_edge(detail::ray_edge_at(rayM, i)));
  for (std::size_t i = 0; i < boundO; ++i)
    rayB.spine.push_back(detail::ray_edge_at(rayO, i));
  rayB.cycle = detail::rotate_path(rayO.cycle, rayO.rotation);

  EdgeId ea = detail::ray_first_edge(rayA);
  EdgeId eb = detail::ray_first_edge(rayB);
  if (k.edge_type(ea) == k.edge_type(eb))
    throw std::logic_error("find_one_maximal_edge: equal first-edge types");
  RaySpec high = k.edge_type(ea) > k.edge_type(eb) ? rayA : rayB;
  RaySpec low = k.edge_type(ea) > k.edge_type(eb) ? rayB : rayA;

  // Translate edge ids from the core back into g.
  auto lift = [&](const RaySpec& r) {
    auto lift_edge = [&](EdgeId e) -> EdgeId {
      PairId p = comp.old_pair[cored.old_pair[SubgroupGraph::pair_of(e)]];
      return (p << 1) | (e & 1);
    };
    RaySpec out;
    for (EdgeId e : r.spine) out.spine.push_back(lift_edge(e));
    for (EdgeId e : r.cycle) out.cycle.push_back(lift_edge(e));
    out.rotation = r.rotation;
    return out;
  };
  RaySpec ghigh = lift(high), glow = lift(low);
  MaxEdgeCertificate cert = make_certificate(g, ghigh, glow);
  EdgeId edge = detail::ray_first_edge(cert.high);
  std::string why;
  if (!check_certificate(g, edge, cert, &why))
    throw std::logic_error("find_one_maximal_edge: constructed certificate "
                           "fails: " + why);
  return {edge, cert};
}

// ---------------------------------------------------------------------------
// Sound enumeration of certified maximal edges

namespace detail {

struct RaySearch {
  std::optional<RaySpec> ray;
  bool exhausted = true;
};

// Depth-first search for a certified ray with the given first edge: even
// prefixes stay below 1, and the search closes a loop whose label has a
// strongly positive inverse. Branches whose even prefix is not below 1
// cannot begin a witness ray (prefixes inside later cycle passes are
// products of checked prefixes and cycle-prefix labels, all below 1), so
// pruning on them keeps the search shape-complete within the budget.
inline RaySearch search_certified_ray(const SubgroupGraph& g, EdgeId first,
                                      std::size_t budget,
                                      std::size_t max_nodes = 400000) {
  RaySearch result;
  if (!g.vertices[g.tail(first)].primary)
    throw std::logic_error("search_certified_ray: tail not primary");

  std::vector<EdgeId> path;          // edges so far
  std::vector<VertexId> even_at;     // vertices at even positions
  std::vector<Word> prefixes;        // labels at even positions
  even_at.push_back(g.tail(first));
  prefixes.push_back(Word{});
  std::size_t nodes = 0;

  // Explicit DFS over (position, next edge alternative).
  struct Frame {
    std::vector<EdgeId> options;
    std::size_t next = 0;
  };
  std::vector<Frame> stack;

  auto options_at = [&](VertexId v, EdgeId arrived) {
    std::vector<EdgeId> out;
    for (EdgeId e : g.vertices[v].out)
      if (arrived == kNoEdge || e != SubgroupGraph::inverse_edge(arrived))
        out.push_back(e);
    return out;
  };

  stack.push_back(Frame{{first}, 0});
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.next >= f.options.size()) {
      stack.pop_back();
      if (!path.empty()) {
        if (path.size() % 2 == 0) {
          even_at.pop_back();
          prefixes.pop_back();
        }
        path.pop_back();
      }
      continue;
    }
    EdgeId e = f.options[f.next++];
    if (++nodes > max_nodes) {
      result.exhausted = false;
      return result;
    }
    path.push_back(e);
    if (path.size() % 2 == 1) {
      // At a secondary vertex; just descend.
      if (path.size() + 1 > 2 * budget + 2) {
        path.pop_back();
        continue;
      }
      stack.push_back(Frame{options_at(g.head(e), e), 0});
      continue;
    }
    // Arrived at a primary vertex: extend the prefix label and test it.
    VertexId v = g.head(e);
    std::vector<Letter> raw = prefixes.back().letters;
    raw.push_back(g.edge_letter(path[path.size() - 2]));
    raw.push_back(g.edge_letter(e));
    Word prefix = normalize(raw);
    if (word_sign(prefix) != Sign::Negative) {
      path.pop_back();
      continue;
    }
    even_at.push_back(v);
    prefixes.push_back(prefix);

    // Try to close a certified loop at any earlier even position.
    std::size_t j = even_at.size() - 1;  // current even index
    for (std::size_t i = 0; i < j; ++i) {
      if (even_at[i] != v) continue;
      if (2 * i > budget || 2 * (j - i) > budget) continue;
      std::vector<EdgeId> cycle(path.begin() + 2 * i, path.end());
      if (cycle.front() == SubgroupGraph::inverse_edge(cycle.back()))
        continue;
      Word lambda = path_label(g, cycle);
      if (lambda.empty()) continue;
      if (!is_strongly_positive(invert(lambda))) continue;
      RaySpec ray;
      ray.spine.assign(path.begin(), path.begin() + 2 * i);
      ray.cycle = std::move(cycle);
      ray.rotation = 0;
      result.ray = std::move(ray);
      return result;
    }
    if (path.size() + 1 > 2 * budget + 2) {
      even_at.pop_back();
      prefixes.pop_back();
      path.pop_back();
      continue;
    }
    stack.push_back(Frame{options_at(v, e), 0});
  }
  return result;
}

}  // namespace detail

// True iff removing the edge set (both orientations) leaves only components
// of Euler characteristic zero. Vertices are kept, so a vertex isolated by
// the cut counts as a characteristic-1 component.
inline bool is_good_cut(const SubgroupGraph& g, const std::set<EdgeId>& d) {
  std::vector<bool> cut(g.pair_count(), false);
  for (EdgeId e : d) {
    if (SubgroupGraph::pair_of(e) >= g.pair_count())
      throw std::invalid_argument("is_good_cut: edge outside the graph");
    cut[SubgroupGraph::pair_of(e)] = true;
  }
  SubgroupGraph h;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (g.vertices[v].primary)
      h.add_primary();
    else
      h.add_secondary(g.vertices[v].type);
  }
  for (PairId p = 0; p < g.pair_count(); ++p)
    if (!cut[p]) h.add_edge(g.pairs[p].primary, g.pairs[p].secondary,
                            g.pairs[p].label);
  auto [count, labels] = component_labels(h);
  std::vector<long long> verts(count, 0), pairs(count, 0);
  for (VertexId v = 0; v < h.vertex_count(); ++v) ++verts[labels[v]];
  for (PairId p = 0; p < h.pair_count(); ++p)
    ++pairs[labels[h.pairs[p].primary]];
  for (std::size_t c = 0; c < count; ++c)
    if (verts[c] - pairs[c] != 0) return false;
  return true;
}

struct CertifiedEdges {
  std::map<EdgeId, MaxEdgeCertificate> edges;
  bool complete = false;   // the certified set provably is the whole set
  bool exhausted = true;   // no ray search hit its node cap
};

// Sound under-approximation of the set of maximal edges: every returned
// edge carries a verified certificate. Completeness is claimed only when
// corroborated: the searches ran to exhaustion, the count reaches the
// negated characteristic, and the set is good for cutting (then no further
// maximal edge can exist, since the full set has exactly that many).
inline CertifiedEdges find_all_certified(const SubgroupGraph& g,
                                         std::size_t budget = 0) {
  if (budget == 0) budget = 4 * g.pair_count();
  CertifiedEdges out;

  std::map<EdgeId, detail::RaySearch> rays;
  auto ray_of = [&](EdgeId e) -> detail::RaySearch& {
    auto it = rays.find(e);
    if (it == rays.end())
      it = rays.emplace(e, detail::search_certified_ray(g, e, budget)).first;
    return it->second;
  };

  for (PairId p = 0; p < g.pair_count(); ++p) {
    EdgeId e = SubgroupGraph::forward(p);
    FactorId te = g.edge_type(e);
    VertexId v = g.tail(e);
    if (te == 0) continue;  // no lower type can exist
    if (!ray_of(e).ray) continue;
    EdgeId partner = kNoEdge;
    for (EdgeId f : g.vertices[v].out) {
      if (f == e || g.edge_type(f) >= te) continue;
      if (ray_of(f).ray) {
        partner = f;
        break;
      }
    }
    if (partner == kNoEdge) continue;
    MaxEdgeCertificate cert =
        make_certificate(g, *ray_of(e).ray, *ray_of(partner).ray);
    std::string why;
    if (!check_certificate(g, e, cert, &why))
      throw std::logic_error("find_all_certified: search emitted an invalid "
                             "certificate: " + why);
    out.edges.emplace(e, std::move(cert));
  }
  for (auto& [e, rs] : rays) out.exhausted = out.exhausted && rs.exhausted;

  std::set<EdgeId> d;
  for (const auto& [e, c] : out.edges) d.insert(e);
  bool count_matches =
      static_cast<long long>(out.edges.size()) == -euler_char(g);
  out.complete = out.exhausted && count_matches && is_good_cut(g, d);
  return out;
}

// ---------------------------------------------------------------------------
// Edge-count route through the projections

inline RaySpec map_ray(const RaySpec& r,
                       const std::vector<PairId>& pair_map) {
  auto map_edge = [&](EdgeId e) -> EdgeId {
    PairId p = pair_map[SubgroupGraph::pair_of(e)];
    if (p == static_cast<PairId>(kNoVertex))
      throw std::logic_error("map_ray: edge has no image");
    return (p << 1) | (e & 1);
  };
  RaySpec out;
  for (EdgeId e : r.spine) out.spine.push_back(map_edge(e));
  for (EdgeId e : r.cycle) out.cycle.push_back(map_edge(e));
  out.rotation = r.rotation;
  return out;
}

struct EdgeCountReport {
  std::size_t d_count = 0, d1_count = 0, d2_count = 0;
  long long chi_p = 0, chi1 = 0, chi2 = 0;
  bool complete_p = false, complete_1 = false, complete_2 = false;
  std::size_t tau1_size = 0, tau2_size = 0;
  bool projections_in_d1 = true, projections_in_d2 = true;
  bool projected_certs_valid = true;
  bool within_bound = true;       // |D| <= -chi of the pullback
  bool chain_checked = false;     // all three searches complete
  bool chain_holds = false;       // |D| <= |tau1 D| |tau2 D| <= |D1| |D2|
  bool inconclusive = true;
};

// Counts certified maximal edges on the pullback and on the two input cores,
// projects the pullback certificates through both projections, and checks
// the counting chain when every search is complete. Incomplete searches make
// the report inconclusive, never a violation.
inline EdgeCountReport verify_edge_count_bound(const Pullback& p,
                                               std::size_t budget = 0) {
  EdgeCountReport rep;
  rep.chi_p = euler_char(p.graph);
  CertifiedEdges d = find_all_certified(p.graph, budget);
  rep.d_count = d.edges.size();
  rep.complete_p = d.complete;
  rep.within_bound = static_cast<long long>(rep.d_count) <=
                     (rep.chi_p < 0 ? -rep.chi_p : 0);

  Subgraph core1 = core_of(p.g1);
  Subgraph core2 = core_of(p.g2);
  rep.chi1 = euler_char(core1.graph);
  rep.chi2 = euler_char(core2.graph);
  CertifiedEdges d1 = find_all_certified(core1.graph, budget);
  CertifiedEdges d2 = find_all_certified(core2.graph, budget);
  rep.d1_count = d1.edges.size();
  rep.d2_count = d2.edges.size();
  rep.complete_1 = d1.complete;
  rep.complete_2 = d2.complete;

  std::set<EdgeId> tau1, tau2;
  for (const auto& [e, cert] : d.edges) {
    PairId pp = SubgroupGraph::pair_of(e);
    auto project = [&](int side) {
      const Subgraph& core = side == 1 ? core1 : core2;
      std::vector<PairId> pair_map(p.graph.pair_count());
      for (PairId q = 0; q < p.graph.pair_count(); ++q) {
        PairId img = side == 1 ? p.pproj[q].first : p.pproj[q].second;
        pair_map[q] = core.new_pair[img];
      }
      RaySpec high = map_ray(cert.high, pair_map);
      RaySpec low = map_ray(cert.low, pair_map);
      PairId img = side == 1 ? p.pproj[pp].first : p.pproj[pp].second;
      PairId cimg = core.new_pair[img];
      EdgeId edge = (cimg << 1) | (e & 1);
      MaxEdgeCertificate pc =
          make_certificate(core.graph, std::move(high), std::move(low));
      std::string why;
      bool ok = check_certificate(core.graph, edge, pc, &why);
      return std::pair(edge, ok);
    };
    auto [e1, ok1] = project(1);
    auto [e2, ok2] = project(2);
    tau1.insert(e1);
    tau2.insert(e2);
    rep.projected_certs_valid = rep.projected_certs_valid && ok1 && ok2;
    rep.projections_in_d1 = rep.projections_in_d1 && (d1.edges.count(e1) > 0);
    rep.projections_in_d2 = rep.projections_in_d2 && (d2.edges.count(e2) > 0);
  }
  rep.tau1_size = tau1.size();
  rep.tau2_size = tau2.size();

  rep.chain_checked = rep.complete_p && rep.complete_1 && rep.complete_2;
  if (rep.chain_checked) {
    rep.chain_holds = rep.d_count <= rep.tau1_size * rep.tau2_size &&
                      rep.tau1_size * rep.tau2_size <=
                          rep.d1_count * rep.d2_count &&
                      static_cast<long long>(rep.d_count) == -rep.chi_p &&
                      static_cast<long long>(rep.d1_count) == -rep.chi1 &&
                      static_cast<long long>(rep.d2_count) == -rep.chi2;
  }
  rep.inconclusive = !rep.chain_checked;
  return rep;
}

}  // namespace freeprod
