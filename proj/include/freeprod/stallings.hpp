#pragma once

#include <cstdlib>
#include <map>
#include <stdexcept>
#include <vector>

#include "freeprod/folding.hpp"
#include "freeprod/pullback.hpp"

namespace freeprod {

// Classical free-group machinery, used as an independent cross-check. It
// shares no graph code with SubgroupGraph on purpose: agreement between the
// two routes is only meaningful if they are separate implementations.

// A freely reduced word in a free group: +g / -g for the generator g >= 1.
using FreeWord = std::vector<int>;

inline FreeWord free_reduce(const FreeWord& w) {
  FreeWord out;
  for (int x : w) {
    if (x == 0) throw std::invalid_argument("free letter 0");
    if (!out.empty() && out.back() == -x)
      out.pop_back();
    else
      out.push_back(x);
  }
  return out;
}

inline FreeWord free_invert(const FreeWord& w) {
  FreeWord out;
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(-*it);
  return out;
}

inline FreeWord free_multiply(const FreeWord& u, const FreeWord& w) {
  FreeWord cat = u;
  cat.insert(cat.end(), w.begin(), w.end());
  return free_reduce(cat);
}

// Folded subgroup automaton: deterministic and co-deterministic transitions,
// one map per vertex keyed by the signed generator.
struct StallingsGraph {
  std::vector<std::map<int, int>> next;
  int base = 0;

  std::size_t vertex_count() const { return next.size(); }
  std::size_t edge_count() const {  // unoriented
    std::size_t n = 0;
    for (const auto& m : next) n += m.size();
    return n / 2;
  }
};

inline StallingsGraph stallings_build(const std::vector<FreeWord>& gens) {
  // Wedge of generator loops, then classic folding with a union-find.
  std::vector<std::map<int, std::vector<int>>> adj(1);
  auto add_vertex = [&] {
    adj.emplace_back();
    return static_cast<int>(adj.size() - 1);
  };
  auto add_arc = [&](int v, int g, int w) {
    adj[v][g].push_back(w);
    adj[w][-g].push_back(v);
  };
  for (const FreeWord& raw : gens) {
    FreeWord w = free_reduce(raw);
    if (w.empty()) continue;
    int cur = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      int nxt = i + 1 == w.size() ? 0 : add_vertex();
      add_arc(cur, w[i], nxt);
      cur = nxt;
    }
  }

  std::vector<int> parent(adj.size());
  for (std::size_t i = 0; i < adj.size(); ++i) parent[i] = static_cast<int>(i);
  std::function<int(int)> find = [&](int v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  };
  std::deque<int> dirty;
  for (std::size_t v = 0; v < adj.size(); ++v)
    dirty.push_back(static_cast<int>(v));
  while (!dirty.empty()) {
    int v = find(dirty.front());
    dirty.pop_front();
    // Two same-label arcs to distinct classes: merge those targets.
    int mx = -1, my = -1;
    for (auto& [g, targets] : adj[v]) {
      int first = -1;
      for (int t : targets) {
        int r = find(t);
        if (first < 0) {
          first = r;
        } else if (first != r) {
          mx = std::min(first, r);
          my = std::max(first, r);
          break;
        }
      }
      if (mx >= 0) break;
    }
    if (mx < 0) continue;
    parent[my] = mx;
    auto moved = std::move(adj[my]);
    adj[my].clear();
    for (auto& [h, ts] : moved) {
      auto& into = adj[mx][h];
      into.insert(into.end(), ts.begin(), ts.end());
    }
    dirty.push_back(mx);
    dirty.push_back(v);
  }

  // Compact, deduplicating arcs.
  std::vector<int> label(adj.size(), -1);
  StallingsGraph g;
  for (std::size_t v = 0; v < adj.size(); ++v) {
    if (find(static_cast<int>(v)) != static_cast<int>(v)) continue;
    label[v] = static_cast<int>(g.next.size());
    g.next.emplace_back();
  }
  for (std::size_t v = 0; v < adj.size(); ++v) {
    if (label[v] < 0) continue;
    for (auto& [h, ts] : adj[v]) {
      for (int t : ts) {
        int r = find(t);
        auto it = g.next[label[v]].find(h);
        if (it != g.next[label[v]].end() && it->second != label[r])
          throw std::logic_error("stallings_build: fold left a conflict");
        g.next[label[v]][h] = label[r];
      }
    }
  }
  g.base = label[find(0)];
  return g;
}

inline bool stallings_membership(const FreeWord& w, const StallingsGraph& g) {
  int v = g.base;
  for (int x : free_reduce(w)) {
    auto it = g.next[v].find(x);
    if (it == g.next[v].end()) return false;
    v = it->second;
  }
  return v == g.base;
}

namespace detail {

// Iteratively removes degree-1 vertices (except a kept base); remaining
// vertex mask returned, possibly all false.
inline std::vector<bool> stallings_core_mask(const StallingsGraph& g,
                                             bool keep_base) {
  std::vector<std::size_t> deg(g.vertex_count());
  std::vector<bool> keep(g.vertex_count(), true);
  for (std::size_t v = 0; v < g.vertex_count(); ++v) deg[v] = g.next[v].size();
  std::deque<int> work;
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    if (deg[v] <= 1 && !(keep_base && static_cast<int>(v) == g.base))
      work.push_back(static_cast<int>(v));
  while (!work.empty()) {
    int v = work.front();
    work.pop_front();
    if (!keep[v] || deg[v] > 1) continue;
    keep[v] = false;
    for (const auto& [h, t] : g.next[v]) {
      if (!keep[t]) continue;
      if (deg[t] > 0) --deg[t];
      if (deg[t] <= 1 && !(keep_base && t == g.base)) work.push_back(t);
    }
    deg[v] = 0;
  }
  return keep;
}

}  // namespace detail

inline std::size_t stallings_rank(const StallingsGraph& g) {
  std::vector<bool> keep = detail::stallings_core_mask(g, false);
  long long verts = 0, edges2 = 0;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (!keep[v]) continue;
    ++verts;
    for (const auto& [h, t] : g.next[v])
      if (keep[t]) ++edges2;
  }
  long long chi = verts - edges2 / 2;
  return chi < 0 ? static_cast<std::size_t>(-chi) : 0;
}

struct FreeComponent {
  long long chi = 0;
  std::size_t rank = 0;
};

struct FreePullbackResult {
  std::vector<FreeComponent> components;
  std::size_t total_rank = 0;
};

// Core of the fiber product of two folded automata; one component per double
// coset with nontrivial intersection, reduced ranks from Euler counts.
inline FreePullbackResult stallings_pullback(const StallingsGraph& x1,
                                             const StallingsGraph& x2) {
  std::size_t n2 = x2.vertex_count();
  auto id = [&](int v1, int v2) { return v1 * static_cast<int>(n2) + v2; };
  StallingsGraph prod;
  prod.next.assign(x1.vertex_count() * n2, {});
  for (std::size_t v1 = 0; v1 < x1.vertex_count(); ++v1) {
    for (const auto& [g, w1] : x1.next[v1]) {
      for (std::size_t v2 = 0; v2 < n2; ++v2) {
        auto it = x2.next[v2].find(g);
        if (it == x2.next[v2].end()) continue;
        prod.next[id(static_cast<int>(v1), static_cast<int>(v2))][g] =
            id(w1, it->second);
      }
    }
  }
  std::vector<bool> keep = detail::stallings_core_mask(prod, false);

  // Component decomposition over kept vertices.
  FreePullbackResult out;
  std::vector<int> comp(prod.vertex_count(), -1);
  int count = 0;
  for (std::size_t v = 0; v < prod.vertex_count(); ++v) {
    if (!keep[v] || comp[v] >= 0) continue;
    std::deque<int> work{static_cast<int>(v)};
    comp[v] = count;
    long long verts = 0, edges2 = 0;
    while (!work.empty()) {
      int x = work.front();
      work.pop_front();
      ++verts;
      for (const auto& [h, t] : prod.next[x]) {
        if (!keep[t]) continue;
        ++edges2;
        if (comp[t] < 0) {
          comp[t] = count;
          work.push_back(t);
        }
      }
    }
    if (edges2 == 0) continue;  // isolated vertex, pruned semantically
    FreeComponent c;
    c.chi = verts - edges2 / 2;
    c.rank = c.chi < 0 ? static_cast<std::size_t>(-c.chi) : 0;
    out.total_rank += c.rank;
    out.components.push_back(c);
    ++count;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Embedding into the rank-2 free product of two infinite cyclic groups:
// generator i maps to a^i b^i a^{-i} b^{-i}; images of subgroups are
// factor-free there.

inline Word mu_embed(const FreeWord& w) {
  std::vector<Letter> out;
  for (int x : free_reduce(w)) {
    Rat i = std::abs(x);
    if (x > 0) {
      out.push_back({0, i});
      out.push_back({1, i});
      out.push_back({0, -i});
      out.push_back({1, -i});
    } else {
      out.push_back({1, i});
      out.push_back({0, i});
      out.push_back({1, -i});
      out.push_back({0, -i});
    }
  }
  return normalize(out);
}

// Expansion of a word over Z factors into the free group on the factor
// letters: the dictionary for comparing the two pullback routes.
inline FreeWord z_word_to_free(const Word& w) {
  FreeWord out;
  for (const Letter& l : w) {
    if (!is_integral(l.value))
      throw std::invalid_argument("z_word_to_free: non-integer exponent");
    long long k = static_cast<long long>(numerator(l.value));
    int g = static_cast<int>(l.factor) + 1;
    for (long long i = 0; i < std::llabs(k); ++i)
      out.push_back(k > 0 ? g : -g);
  }
  return free_reduce(out);
}

struct ShncReport {
  std::size_t free_total = 0;     // sum of intersection ranks, free side
  std::size_t product_total = 0;  // same sum computed through the embedding
  std::size_t rank1 = 0, rank2 = 0;
  std::size_t free_components = 0, product_components = 0;
  bool holds = false;  // free_total <= product_total <= rank1 * rank2
};

// Verifies the strengthened intersection bound for two finitely generated
// subgroups of a free group along both routes: the classical pullback, and
// the embedded subgroups inside the free product of two cyclic groups. The
// embedded images must fold without a factor-freeness violation; one there
// would be a hard failure, so it propagates.
inline ShncReport verify_shnc(const std::vector<FreeWord>& h1,
                              const std::vector<FreeWord>& h2) {
  ShncReport rep;
  StallingsGraph x1 = stallings_build(h1);
  StallingsGraph x2 = stallings_build(h2);
  rep.rank1 = stallings_rank(x1);
  rep.rank2 = stallings_rank(x2);
  FreePullbackResult classical = stallings_pullback(x1, x2);
  rep.free_total = classical.total_rank;
  rep.free_components = classical.components.size();

  std::vector<Word> m1, m2;
  for (const FreeWord& w : h1) m1.push_back(mu_embed(w));
  for (const FreeWord& w : h2) m2.push_back(mu_embed(w));
  SubgroupGraph g1 = build_from_generators(m1);
  SubgroupGraph g2 = build_from_generators(m2);
  Pullback p = pullback(g1, g2);
  for (const ComponentInfo& c : components(p)) {
    rep.product_total += c.rank;
    ++rep.product_components;
  }
  rep.holds = rep.free_total <= rep.product_total &&
              rep.product_total <= rep.rank1 * rep.rank2;
  return rep;
}

}  // namespace freeprod
