#pragma once

#include <algorithm>
#include <array>
#include <string>
#include <utility>
#include <vector>

#include "tailvar/common.hpp"

namespace tailvar {

// A small labeled simple graph used as the counting pattern.  Vertices are
// 0..k-1; edges are stored sorted as (lo, hi) pairs.  k is capped at 8: the
// counting and search routines are all exponential in k by design.
class SubgraphPattern {
 public:
  static constexpr int kMaxVertices = 8;

  SubgraphPattern(int k, std::vector<std::pair<int, int>> edges) : k_(k) {
    require(k >= 1 && k <= kMaxVertices,
            "SubgraphPattern: vertex count must lie in [1, 8]");
    for (auto& [a, b] : edges) {
      if (a > b) std::swap(a, b);
      require(a >= 0 && b < k && a != b, "SubgraphPattern: edge out of range");
    }
    std::sort(edges.begin(), edges.end());
    require(std::adjacent_find(edges.begin(), edges.end()) == edges.end(),
            "SubgraphPattern: duplicate edge");
    edges_ = std::move(edges);
  }

  int k() const { return k_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

  std::vector<int> degrees() const {
    std::vector<int> d(k_, 0);
    for (auto [a, b] : edges_) {
      ++d[a];
      ++d[b];
    }
    return d;
  }

  int max_degree() const {
    int m = 0;
    for (int d : degrees()) m = std::max(m, d);
    return m;
  }

  bool has_edge(int a, int b) const {
    if (a > b) std::swap(a, b);
    return std::binary_search(edges_.begin(), edges_.end(), std::make_pair(a, b));
  }

  bool is_complete() const { return edge_count() == k_ * (k_ - 1) / 2; }

  // any labeled copy of the star K_{1,k-1}
  bool is_star() const {
    if (edge_count() != k_ - 1 || k_ < 2) return false;
    return max_degree() == k_ - 1;
  }

  bool operator==(const SubgraphPattern& o) const {
    return k_ == o.k_ && edges_ == o.edges_;
  }

 private:
  int k_;
  std::vector<std::pair<int, int>> edges_;
};

namespace patterns {

inline SubgraphPattern edge() { return SubgraphPattern(2, {{0, 1}}); }

inline SubgraphPattern triangle() {
  return SubgraphPattern(3, {{0, 1}, {0, 2}, {1, 2}});
}

inline SubgraphPattern clique(int k) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) e.emplace_back(i, j);
  return SubgraphPattern(k, std::move(e));
}

inline SubgraphPattern star(int k) {
  std::vector<std::pair<int, int>> e;
  for (int i = 1; i < k; ++i) e.emplace_back(0, i);
  return SubgraphPattern(k, std::move(e));
}

// path on k vertices (k-1 edges)
inline SubgraphPattern path(int k) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i + 1 < k; ++i) e.emplace_back(i, i + 1);
  return SubgraphPattern(k, std::move(e));
}

// cycle on k vertices
inline SubgraphPattern cycle(int k) {
  require(k >= 3, "patterns::cycle: needs k >= 3");
  auto e = path(k).edges();
  e.emplace_back(0, k - 1);
  return SubgraphPattern(k, std::move(e));
}

// "cherry" = path on 3 vertices, the two-edge star
inline SubgraphPattern cherry() { return path(3); }

}  // namespace patterns

struct SpanningSubgraph {
  SubgraphPattern subgraph;
  double threshold;   // 2 e(H) / (k-1); e(H') exceeds it strictly
  bool via_fallback;  // true if the exhaustive search produced the witness
};

namespace detail {

// Longest simple cycle via path DP over vertex subsets: dp[mask] holds the
// endpoints of simple paths that cover `mask` and start at its lowest vertex
// (so every cycle is discovered once, anchored at its minimum vertex).
// Deterministic: maximum length wins, ties to the numerically smallest mask,
// and reconstruction always walks through the smallest available vertex.
inline std::vector<std::pair<int, int>> longest_cycle(const SubgraphPattern& h) {
  const int k = h.k();
  std::array<unsigned, SubgraphPattern::kMaxVertices> adj{};
  for (auto [a, b] : h.edges()) {
    adj[a] |= 1u << b;
    adj[b] |= 1u << a;
  }
  std::array<unsigned char, 1 << SubgraphPattern::kMaxVertices> dp{};
  for (int s = 0; s < k; ++s) dp[1u << s] = static_cast<unsigned char>(1u << s);
  int best_mask = 0, best_len = 0;
  for (unsigned mask = 1; mask < (1u << k); ++mask) {
    unsigned ep = dp[mask];
    if (!ep) continue;
    const int anchor = __builtin_ctz(mask);
    const int len = __builtin_popcount(mask);
    if (len > best_len && len >= 3 &&
        (ep & adj[anchor] & ~(1u << anchor)) != 0) {
      best_len = len;
      best_mask = static_cast<int>(mask);
    }
    const unsigned below = (1u << anchor) - 1;  // never extend past the anchor
    for (unsigned rest = ep; rest;) {
      const int v = __builtin_ctz(rest);
      rest &= rest - 1;
      for (unsigned ext = adj[v] & ~mask & ~below; ext;) {
        const int u = __builtin_ctz(ext);
        ext &= ext - 1;
        dp[mask | (1u << u)] |= static_cast<unsigned char>(1u << u);
      }
    }
  }
  if (!best_mask) return {};
  // walk the DP table backwards from the smallest closing endpoint
  const int anchor = __builtin_ctz(static_cast<unsigned>(best_mask));
  unsigned closers = dp[best_mask] & adj[anchor] & ~(1u << anchor);
  int cur = __builtin_ctz(closers);
  unsigned mask = static_cast<unsigned>(best_mask);
  std::vector<std::pair<int, int>> cyc;
  cyc.emplace_back(std::min(cur, anchor), std::max(cur, anchor));
  while (mask != (1u << anchor)) {
    mask &= ~(1u << cur);
    const unsigned prev = dp[mask] & adj[cur];
    const int u = __builtin_ctz(prev);
    cyc.emplace_back(std::min(cur, u), std::max(cur, u));
    cur = u;
  }
  std::sort(cyc.begin(), cyc.end());
  return cyc;
}

// Max-edge subgraph with all degrees <= 2, maximizing edge count and breaking
// ties toward the lexicographically smallest edge set.  Exponential; only for
// k <= 8 instances.
inline std::vector<std::pair<int, int>> max_bounded_degree_subgraph(
    const SubgraphPattern& h) {
  const auto& edges = h.edges();
  const int m = static_cast<int>(edges.size());
  std::vector<int> deg(h.k(), 0), chosen, best;
  bool have_best = false;
  auto rec = [&](auto&& self, int idx) -> void {
    if (idx == m) {
      if (!have_best || chosen.size() > best.size()) {
        best = chosen;
        have_best = true;
      }
      return;
    }
    if (chosen.size() + static_cast<size_t>(m - idx) < best.size()) return;
    auto [a, b] = edges[idx];
    if (deg[a] < 2 && deg[b] < 2) {  // take first: favors lex-smaller sets
      ++deg[a];
      ++deg[b];
      chosen.push_back(idx);
      self(self, idx + 1);
      chosen.pop_back();
      --deg[a];
      --deg[b];
    }
    self(self, idx + 1);
  };
  rec(rec, 0);
  std::vector<std::pair<int, int>> out;
  out.reserve(best.size());
  for (int i : best) out.push_back(edges[i]);
  return out;
}

inline std::vector<std::pair<int, int>> spanning_bd_recurse(
    const SubgraphPattern& h) {
  const int k = h.k();
  const int e = h.edge_count();
  if (e == 0) return {};
  if (h.max_degree() <= 2) return h.edges();

  auto degs = h.degrees();
  const auto cyc = longest_cycle(h);
  if (cyc.empty()) {
    // acyclic with a degree >= 3 vertex: a 2-edge path there, plus (if the
    // non-strict target 2e/(k-1) still exceeds 2) any edge avoiding it
    int v = 0;
    while (degs[v] <= 2) ++v;
    std::vector<std::pair<int, int>> out;
    for (auto ed : h.edges()) {
      if (out.size() < 2 && (ed.first == v || ed.second == v)) out.push_back(ed);
    }
    if (2.0 * e / (k - 1) >= 2.0) {
      for (auto ed : h.edges()) {
        if (ed.first != v && ed.second != v) {
          out.push_back(ed);
          break;
        }
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  const int len = static_cast<int>(cyc.size());
  if (static_cast<double>(len) >= 2.0 * e / (k - 1)) return cyc;

  // prune every edge touching the cycle, recurse on the remainder, reattach
  std::array<bool, SubgraphPattern::kMaxVertices> on_cycle{};
  for (auto [a, b] : cyc) on_cycle[a] = on_cycle[b] = true;
  std::vector<std::pair<int, int>> rest;
  for (auto ed : h.edges())
    if (!on_cycle[ed.first] && !on_cycle[ed.second]) rest.push_back(ed);
  auto sub = spanning_bd_recurse(SubgraphPattern(k, std::move(rest)));
  sub.insert(sub.end(), cyc.begin(), cyc.end());
  std::sort(sub.begin(), sub.end());
  return sub;
}

}  // namespace detail

// For any nonempty H on k >= 4 vertices other than K_k and the star
// K_{1,k-1}, produce a spanning subgraph H' with max degree <= 2 and
// e(H') > 2 e(H) / (k-1).  The constructive path mirrors the existence
// argument (longest cycle, boundary pruning, recursion); an exhaustive
// search backs it up so the routine is total for k <= 8.
inline SpanningSubgraph spanning_bounded_degree(const SubgraphPattern& h) {
  const int k = h.k();
  require(k >= 4, "spanning_bounded_degree: needs k >= 4");
  require(h.edge_count() > 0, "spanning_bounded_degree: H must be nonempty");
  require(!h.is_complete(), "spanning_bounded_degree: H = K_k is excluded");
  require(!h.is_star(), "spanning_bounded_degree: H = K_{1,k-1} is excluded");

  const double threshold = 2.0 * h.edge_count() / (k - 1);
  auto qualifies = [&](const std::vector<std::pair<int, int>>& es) {
    if (static_cast<double>(es.size()) <= threshold) return false;
    std::array<int, SubgraphPattern::kMaxVertices> deg{};
    for (auto [a, b] : es) {
      if (++deg[a] > 2 || ++deg[b] > 2) return false;
      if (!h.has_edge(a, b)) return false;
    }
    return true;
  };

  auto es = detail::spanning_bd_recurse(h);
  if (qualifies(es)) return {SubgraphPattern(k, std::move(es)), threshold, false};

  es = detail::max_bounded_degree_subgraph(h);
  if (qualifies(es)) return {SubgraphPattern(k, std::move(es)), threshold, true};
  throw resource_error("spanning_bounded_degree: search exhausted without a witness");
}

}  // namespace tailvar
