#pragma once

#include <algorithm>
#include <deque>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "freeprod/subgroup_graph.hpp"

namespace freeprod {

// Raised when folding discovers that the generated subgroup meets a
// conjugate of a factor group. The witness is a word s * g * s^{-1} in the
// subgroup with g a single nontrivial factor element.
class FactorFreeViolation : public std::runtime_error {
 public:
  FactorFreeViolation(const std::string& msg, Word w)
      : std::runtime_error(msg), witness(std::move(w)) {}
  Word witness;
};

struct BuildOptions {
  // Called with a snapshot after every individual fold (tests).
  std::function<void(const SubgroupGraph&)> after_fold;
  // Worklist index chooser; n -> index in [0, n). Default: front (FIFO).
  std::function<std::size_t(std::size_t)> pick;
};

namespace detail {

class FoldingBuilder {
 public:
  explicit FoldingBuilder(const BuildOptions& opts) : opts_(opts) {}

  VertexId new_vertex(bool primary, FactorId type) {
    VertexId v = static_cast<VertexId>(parent_.size());
    parent_.push_back(v);
    primary_.push_back(primary);
    type_.push_back(type);
    incident_.emplace_back();
    return v;
  }

  PairId new_pair(VertexId p, VertexId s, Rat label) {
    PairId id = static_cast<PairId>(pairs_.size());
    pairs_.push_back({p, s, std::move(label), true});
    incident_[p].push_back(id);
    incident_[s].push_back(id);
    return id;
  }

  void set_base(VertexId b) { base_ = b; }

  VertexId find(VertexId v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }

  // Merges two vertex classes; the smaller root id survives.
  VertexId unite(VertexId a, VertexId b) {
    a = find(a);
    b = find(b);
    if (a == b) return a;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    auto& into = incident_[a];
    auto& from = incident_[b];
    into.insert(into.end(), from.begin(), from.end());
    from.clear();
    from.shrink_to_fit();
    return a;
  }

  void fold_to_irreducible() {
    for (PairId p = 0; p < pairs_.size(); ++p) enqueue(p);
    drain();
    // Safety net: rescan until the incremental pass proves clean.
    while (scan_and_enqueue()) drain();
    check_multiple_edges();
    prune();
  }

  SubgroupGraph compact() const {
    SubgroupGraph g;
    std::vector<VertexId> map(parent_.size(), kNoVertex);
    for (VertexId v = 0; v < parent_.size(); ++v) {
      if (!vertex_alive_[v]) continue;
      map[v] = primary_[v] ? g.add_primary() : g.add_secondary(type_[v]);
    }
    for (const auto& pr : pairs_) {
      if (!pr.alive) continue;
      g.add_edge(map[root_of(pr.p)], map[root_of(pr.s)], pr.label);
    }
    if (base_ != kNoVertex) g.base = map[root_of(base_)];
    return g;
  }

  std::size_t alive_pairs() const {
    std::size_t n = 0;
    for (const auto& pr : pairs_)
      if (pr.alive) ++n;
    return n;
  }

 private:
  struct P {
    VertexId p, s;
    Rat label;
    bool alive;
  };

  VertexId root_of(VertexId v) const {
    while (parent_[v] != v) v = parent_[v];
    return v;
  }

  void enqueue(PairId p) {
    if (p >= queued_.size()) queued_.resize(pairs_.size(), false);
    if (queued_[p] || !pairs_[p].alive) return;
    queued_[p] = true;
    queue_.push_back(p);
  }

  void enqueue_incident(VertexId root) {
    std::vector<PairId> ids;
    for (PairId q : incident_[root])
      if (pairs_[q].alive) ids.push_back(q);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    for (PairId q : ids) enqueue(q);
  }

  PairId pop() {
    std::size_t idx = opts_.pick ? opts_.pick(queue_.size()) : 0;
    PairId p = queue_[idx];
    queue_.erase(queue_.begin() + static_cast<std::ptrdiff_t>(idx));
    queued_[p] = false;
    return p;
  }

  void notify_fold() {
    if (opts_.after_fold) {
      mark_alive_vertices();
      opts_.after_fold(compact());
    }
  }

  void drain() {
    while (!queue_.empty()) {
      PairId p = pop();
      if (!pairs_[p].alive) continue;
      if (try_label_fold(p)) continue;
      try_type_fold(p);
    }
  }

  // Two edges with the same head and the same label are the same edge.
  bool try_label_fold(PairId p) {
    VertexId sroot = find(pairs_[p].s);
    for (PairId q : incident_[sroot]) {
      if (q == p || !pairs_[q].alive) continue;
      if (find(pairs_[q].s) != sroot) continue;
      if (pairs_[q].label != pairs_[p].label) continue;
      PairId keep = std::min(p, q), drop = std::max(p, q);
      pairs_[drop].alive = false;
      VertexId merged = unite(pairs_[keep].p, pairs_[drop].p);
      enqueue(keep);
      enqueue_incident(merged);
      notify_fold();
      return true;
    }
    return false;
  }

  // Two same-type edges leaving one primary vertex must reach the same
  // secondary vertex: shift the labels on one side to match, then identify.
  // A collision that is already parallel with distinct labels certifies a
  // factor-freeness violation.
  bool try_type_fold(PairId p) {
    VertexId proot = find(pairs_[p].p);
    FactorId ptype = type_[find(pairs_[p].s)];
    for (PairId q : incident_[proot]) {
      if (q == p || !pairs_[q].alive) continue;
      if (find(pairs_[q].p) != proot) continue;
      VertexId sp = find(pairs_[p].s), sq = find(pairs_[q].s);
      if (type_[sq] != ptype) continue;
      if (sp == sq) {
        if (pairs_[p].label == pairs_[q].label) {
          // Same edge twice; identical to a label fold.
          PairId keep = std::min(p, q), drop = std::max(p, q);
          pairs_[drop].alive = false;
          enqueue(keep);
          enqueue_incident(proot);
          notify_fold();
          return true;
        }
        report_violation(p, q);
      }
      PairId target = std::min(p, q), moved = std::max(p, q);
      Rat delta = pairs_[target].label - pairs_[moved].label;
      VertexId moved_head = find(pairs_[moved].s);
      std::vector<PairId> ids;
      for (PairId r : incident_[moved_head])
        if (pairs_[r].alive && find(pairs_[r].s) == moved_head)
          ids.push_back(r);
      std::sort(ids.begin(), ids.end());
      ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
      for (PairId r : ids) pairs_[r].label += delta;
      pairs_[moved].alive = false;
      VertexId merged = unite(pairs_[target].s, pairs_[moved].s);
      enqueue(target);
      enqueue_incident(merged);
      notify_fold();
      return true;
    }
    return false;
  }

  // Full revalidation; enqueues every pair taking part in a violation.
  bool scan_and_enqueue() {
    bool found = false;
    for (PairId p = 0; p < pairs_.size(); ++p) {
      if (!pairs_[p].alive) continue;
      VertexId sroot = find(pairs_[p].s), proot = find(pairs_[p].p);
      for (PairId q = p + 1; q < pairs_.size(); ++q) {
        if (!pairs_[q].alive) continue;
        bool same_head = find(pairs_[q].s) == sroot;
        bool same_tail = find(pairs_[q].p) == proot;
        bool same_type = type_[find(pairs_[q].s)] == type_[sroot];
        if ((same_head && pairs_[q].label == pairs_[p].label) ||
            (same_tail && same_type && !same_head)) {
          enqueue(p);
          enqueue(q);
          found = true;
        }
      }
    }
    return found;
  }

  void check_multiple_edges() {
    for (PairId p = 0; p < pairs_.size(); ++p) {
      if (!pairs_[p].alive) continue;
      for (PairId q = p + 1; q < pairs_.size(); ++q) {
        if (!pairs_[q].alive) continue;
        if (find(pairs_[p].p) == find(pairs_[q].p) &&
            find(pairs_[p].s) == find(pairs_[q].s))
          report_violation(p, q);
      }
    }
  }

  [[noreturn]] void report_violation(PairId p, PairId q) {
    // Parallel edges with distinct labels: the closed path through them
    // conjugates a nontrivial factor element into the subgroup.
    Letter g{type_[find(pairs_[p].s)], pairs_[p].label - pairs_[q].label};
    Word s = base_path_label(find(pairs_[p].p));
    std::vector<Letter> raw = s.letters;
    raw.push_back(g);
    Word si = invert(s);
    raw.insert(raw.end(), si.letters.begin(), si.letters.end());
    throw FactorFreeViolation("subgroup is not factor-free",
                              normalize(raw));
  }

  Word base_path_label(VertexId target_root) {
    VertexId start = root_of(base_);
    if (start == target_root) return Word{};
    // BFS over vertex roots through alive pairs.
    std::vector<int> seen(parent_.size(), 0);
    std::vector<std::pair<PairId, bool>> via(parent_.size(),
                                             {0, false});  // pair, entered_at_secondary
    std::vector<VertexId> from(parent_.size(), kNoVertex);
    std::deque<VertexId> work{start};
    seen[start] = 1;
    while (!work.empty()) {
      VertexId v = work.front();
      work.pop_front();
      for (PairId q : incident_[v]) {
        if (!pairs_[q].alive) continue;
        VertexId pr = find(pairs_[q].p), sr = find(pairs_[q].s);
        if (pr != v && sr != v) continue;
        VertexId other = pr == v ? sr : pr;
        if (seen[other]) continue;
        seen[other] = 1;
        via[other] = {q, pr == v};
        from[other] = v;
        work.push_back(other);
        if (other == target_root) {
          std::vector<Letter> letters;
          for (VertexId x = target_root; x != start; x = from[x]) {
            auto [pid, forward] = via[x];
            FactorId t = type_[find(pairs_[pid].s)];
            letters.push_back(
                {t, forward ? pairs_[pid].label : -pairs_[pid].label});
          }
          std::reverse(letters.begin(), letters.end());
          return normalize(letters);
        }
      }
    }
    throw std::logic_error("base_path_label: unreachable vertex");
  }

  void mark_alive_vertices() {
    vertex_alive_.assign(parent_.size(), false);
    for (const auto& pr : pairs_) {
      if (!pr.alive) continue;
      vertex_alive_[root_of(pr.p)] = true;
      vertex_alive_[root_of(pr.s)] = true;
    }
    if (base_ != kNoVertex) vertex_alive_[root_of(base_)] = true;
  }

  void prune() {
    mark_alive_vertices();
    std::vector<std::size_t> deg(parent_.size(), 0);
    for (const auto& pr : pairs_) {
      if (!pr.alive) continue;
      ++deg[root_of(pr.p)];
      ++deg[root_of(pr.s)];
    }
    VertexId base_root = base_ != kNoVertex ? find(base_) : kNoVertex;
    std::deque<VertexId> work;
    for (VertexId v = 0; v < parent_.size(); ++v)
      if (vertex_alive_[v] && deg[v] <= 1 && v != base_root)
        work.push_back(v);
    while (!work.empty()) {
      VertexId v = work.front();
      work.pop_front();
      if (!vertex_alive_[v] || deg[v] > 1 || v == base_root) continue;
      vertex_alive_[v] = false;
      for (PairId q : incident_[v]) {
        if (!pairs_[q].alive) continue;
        VertexId pr = find(pairs_[q].p), sr = find(pairs_[q].s);
        if (pr != v && sr != v) continue;
        pairs_[q].alive = false;
        VertexId other = pr == v ? sr : pr;
        if (vertex_alive_[other] && deg[other] > 0) {
          --deg[other];
          if (deg[other] <= 1 && other != base_root) work.push_back(other);
        }
      }
      deg[v] = 0;
    }
  }

  const BuildOptions& opts_;
  std::vector<VertexId> parent_;
  std::vector<bool> primary_;
  std::vector<FactorId> type_;
  std::vector<std::vector<PairId>> incident_;  // by vertex root
  std::vector<P> pairs_;
  std::vector<bool> vertex_alive_;
  VertexId base_ = kNoVertex;
  std::deque<PairId> queue_;
  std::vector<bool> queued_;
};

}  // namespace detail

// Builds the irreducible based graph of the subgroup generated by the given
// words: a wedge of subdivided loops spelling the generators, folded until
// irreducible, with dangling vertices pruned. Throws FactorFreeViolation
// when the subgroup meets a conjugate of a factor.
inline SubgroupGraph build_from_generators(const std::vector<Word>& gens,
                                           const BuildOptions& opts = {}) {
  detail::FoldingBuilder b(opts);
  VertexId o = b.new_vertex(true, 0);
  b.set_base(o);
  for (const Word& gen : gens) {
    Word w = normalize(gen.letters);
    if (w.empty()) continue;
    VertexId cur = o;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const Letter& l = w[i];
      VertexId s = b.new_vertex(false, l.factor);
      VertexId nxt = (i + 1 == w.size()) ? o : b.new_vertex(true, 0);
      b.new_pair(cur, s, l.value);  // the syllable rides on the first edge
      b.new_pair(nxt, s, 0);
      cur = nxt;
    }
  }
  b.fold_to_irreducible();
  return b.compact();
}

}  // namespace freeprod
