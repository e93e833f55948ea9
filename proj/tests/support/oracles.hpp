#pragma once

// Independent reference implementations used only by the tests.  These avoid
// the library's counting/summation helpers on purpose: plain nested loops,
// long-double accumulation, and explicit enumeration.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <vector>

#include <tailvar/graph.hpp>
#include <tailvar/graphon.hpp>
#include <tailvar/pattern.hpp>
#include <tailvar/rng.hpp>

namespace testsupport {

// Homomorphism density by direct odometer enumeration of all n^k maps.
inline double brute_force_hom_density(const tailvar::SubgraphPattern& h,
                                      const tailvar::WeightedGraph& g) {
  const int k = h.k();
  const int n = g.n();
  std::vector<int> map(static_cast<size_t>(k), 0);
  long double total = 0.0L;
  while (true) {
    long double prod = 1.0L;
    for (const auto& e : h.edges())
      prod *= g.weight(map[static_cast<size_t>(e.first)],
                       map[static_cast<size_t>(e.second)]);
    total += prod;
    int pos = 0;
    while (pos < k && ++map[static_cast<size_t>(pos)] == n) {
      map[static_cast<size_t>(pos)] = 0;
      ++pos;
    }
    if (pos == k) break;
  }
  long double scale = 1.0L;
  for (int i = 0; i < k; ++i) scale *= n;
  return static_cast<double>(total / scale);
}

// Same against a step graphon: product measure over parts.
inline double brute_force_hom_density(const tailvar::SubgraphPattern& h,
                                      const tailvar::StepGraphon& w) {
  const int k = h.k();
  const int m = w.parts();
  std::vector<int> map(static_cast<size_t>(k), 0);
  long double total = 0.0L;
  while (true) {
    long double prod = 1.0L;
    for (int i = 0; i < k; ++i) prod *= w.measure(map[static_cast<size_t>(i)]);
    for (const auto& e : h.edges())
      prod *= w.value(map[static_cast<size_t>(e.first)],
                      map[static_cast<size_t>(e.second)]);
    total += prod;
    int pos = 0;
    while (pos < k && ++map[static_cast<size_t>(pos)] == m) {
      map[static_cast<size_t>(pos)] = 0;
      ++pos;
    }
    if (pos == k) break;
  }
  return static_cast<double>(total);
}

// Exact upper tail P(Bin(n, p) >= r) via the full pmf in long double.
inline long double exact_binomial_tail(int n, double p, int r) {
  std::vector<long double> pmf(static_cast<size_t>(n) + 1);
  const long double q = 1.0L - static_cast<long double>(p);
  for (int s = 0; s <= n; ++s) {
    long double binom = 1.0L;
    for (int i = 0; i < s; ++i) binom = binom * (n - i) / (i + 1);
    pmf[static_cast<size_t>(s)] = binom *
                                  powl(static_cast<long double>(p), s) *
                                  powl(q, n - s);
  }
  long double tail = 0.0L;
  for (int s = n; s >= r; --s) tail += pmf[static_cast<size_t>(s)];
  return tail;
}

// Maximum edge count over all subgraphs of H with maximum degree <= 2, by
// enumerating every subset of H's edges.
inline int max_bounded_degree_edges_oracle(const tailvar::SubgraphPattern& h) {
  const auto& edges = h.edges();
  const int e = static_cast<int>(edges.size());
  int best = 0;
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << e); ++mask) {
    int deg[tailvar::SubgraphPattern::kMaxVertices] = {0};
    int count = 0;
    bool ok = true;
    for (int i = 0; i < e && ok; ++i) {
      if (!(mask & (std::uint32_t{1} << i))) continue;
      ++count;
      if (++deg[edges[static_cast<size_t>(i)].first] > 2) ok = false;
      if (++deg[edges[static_cast<size_t>(i)].second] > 2) ok = false;
    }
    if (ok && count > best) best = count;
  }
  return best;
}

// Exact cut deviation max_{S,T} |1_S' M 1_T| by direct double enumeration.
inline double cut_deviation_oracle(const Eigen::MatrixXd& m) {
  const int n = static_cast<int>(m.rows());
  double best = 0.0;
  for (std::uint32_t s = 0; s < (std::uint32_t{1} << n); ++s)
    for (std::uint32_t t = 0; t < (std::uint32_t{1} << n); ++t) {
      double sum = 0.0;
      for (int i = 0; i < n; ++i) {
        if (!(s & (std::uint32_t{1} << i))) continue;
        for (int j = 0; j < n; ++j)
          if (t & (std::uint32_t{1} << j)) sum += m(i, j);
      }
      best = std::max(best, std::abs(sum));
    }
  return best;
}

inline tailvar::WeightedGraph random_graph(int n, tailvar::CounterRng& rng,
                                           double lo = 0.0, double hi = 1.0) {
  tailvar::WeightedGraph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      g.set_weight(i, j, lo + (hi - lo) * rng.next_double());
  return g;
}

inline tailvar::StepGraphon random_graphon(int max_parts,
                                           tailvar::CounterRng& rng,
                                           double floor_value = 0.0) {
  const int m = 1 + static_cast<int>(rng.next_u64() %
                                     static_cast<std::uint64_t>(max_parts));
  Eigen::VectorXd mu(m);
  for (int i = 0; i < m; ++i) mu[i] = 0.05 + rng.next_double();
  mu /= mu.sum();
  Eigen::MatrixXd w(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      w(i, j) = floor_value + (1.0 - floor_value) * rng.next_double();
      w(j, i) = w(i, j);
    }
  return tailvar::StepGraphon(mu, w);
}

}  // namespace testsupport
