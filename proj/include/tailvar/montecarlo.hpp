#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "tailvar/common.hpp"
#include "tailvar/graph.hpp"
#include "tailvar/pattern.hpp"
#include "tailvar/rng.hpp"

namespace tailvar {

inline WeightedGraph sample_gnp(int n, double p, std::uint64_t seed) {
  require(n >= 1, "sample_gnp: n must be >= 1");
  require(p >= 0.0 && p <= 1.0, "sample_gnp: p must lie in [0, 1]");
  CounterRng rng(seed, 0);
  WeightedGraph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      g.set_weight(i, j, rng.next_bernoulli(p) ? 1.0 : 0.0);
  return g;
}

namespace detail {

// Adjacency rows as 64-bit masks; valid for n <= 64.
struct BitGraph {
  int n = 0;
  std::vector<std::uint64_t> rows;

  explicit BitGraph(int n_in) : n(n_in), rows(static_cast<size_t>(n_in), 0) {}

  void add_edge(int i, int j) {
    rows[static_cast<size_t>(i)] |= std::uint64_t{1} << j;
    rows[static_cast<size_t>(j)] |= std::uint64_t{1} << i;
  }

  std::int64_t triangle_count() const {
    std::int64_t count = 0;
    for (int u = 0; u < n; ++u) {
      std::uint64_t nbrs = rows[static_cast<size_t>(u)] >>
                           static_cast<unsigned>(u + 1) << static_cast<unsigned>(u + 1);
      while (nbrs != 0) {
        const int v = __builtin_ctzll(nbrs);
        nbrs &= nbrs - 1;
        const std::uint64_t above =
            v + 1 >= 64 ? 0 : ~std::uint64_t{0} << static_cast<unsigned>(v + 1);
        count += __builtin_popcountll(rows[static_cast<size_t>(u)] &
                                      rows[static_cast<size_t>(v)] & above);
      }
    }
    return count;
  }

  double triangle_hom_density() const {
    const double nd = n;
    return 6.0 * static_cast<double>(triangle_count()) / (nd * nd * nd);
  }
};

inline BitGraph sample_bit_gnp(int n, double p, CounterRng& rng) {
  BitGraph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.next_bernoulli(p)) g.add_edge(i, j);
  return g;
}

inline constexpr double kWilsonZ = 1.959963984540054;  // 97.5% normal quantile

struct WilsonInterval {
  double low = 0.0;
  double high = 0.0;
};

inline WilsonInterval wilson_interval(std::int64_t hits, std::int64_t trials) {
  const double t = static_cast<double>(trials);
  const double phat = static_cast<double>(hits) / t;
  const double z2 = kWilsonZ * kWilsonZ;
  const double denom = 1.0 + z2 / t;
  const double center = (phat + z2 / (2.0 * t)) / denom;
  const double half =
      kWilsonZ * std::sqrt(phat * (1.0 - phat) / t + z2 / (4.0 * t * t)) / denom;
  WilsonInterval w;
  w.low = std::max(0.0, center - half);
  w.high = std::min(1.0, center + half);
  return w;
}

// Stable log(sum(exp(v))) via max shift and compensated summation.
inline double log_sum_exp(const std::vector<double>& v) {
  if (v.empty()) return -std::numeric_limits<double>::infinity();
  const double m = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(m)) return m;
  KahanSum acc;
  for (double x : v) acc.add(std::exp(x - m));
  return m + std::log(acc.value());
}

}  // namespace detail

struct McEstimate {
  double estimate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double log_estimate = -std::numeric_limits<double>::infinity();
  std::int64_t hits = 0;
  std::int64_t trials = 0;
  bool certain = false;     // threshold <= 0: every graph qualifies
  bool impossible = false;  // threshold > 1: no graph can qualify
  std::string note;
};

namespace detail {

inline bool degenerate_threshold(double threshold, std::int64_t trials,
                                 McEstimate* out) {
  if (threshold <= 0.0) {
    out->estimate = 1.0;
    out->ci_low = 1.0;
    out->ci_high = 1.0;
    out->log_estimate = 0.0;
    out->hits = trials;
    out->certain = true;
    out->note = "threshold <= 0; event is certain";
    return true;
  }
  if (threshold > 1.0) {
    out->estimate = 0.0;
    out->ci_low = 0.0;
    out->ci_high = 0.0;
    out->impossible = true;
    out->note = "threshold exceeds 1; event is impossible";
    return true;
  }
  return false;
}

}  // namespace detail

// Plain-vanilla estimator of P(t(H, G(n,p)) >= (1+delta)p^{e(H)}).  delta may
// be negative: thresholds at or below zero and above one short-circuit with
// the certainty flags instead of burning samples.
inline McEstimate naive_tail_estimate(int n, double p, double delta,
                                      const SubgraphPattern& pattern,
                                      std::int64_t trials, std::uint64_t seed) {
  require(n >= 1, "naive_tail_estimate: n must be >= 1");
  require(p > 0.0 && p < 1.0, "naive_tail_estimate: p must lie in (0, 1)");
  require(trials >= 1, "naive_tail_estimate: trials must be >= 1");
  McEstimate out;
  out.trials = trials;
  const double threshold =
      (1.0 + delta) * std::pow(p, static_cast<double>(pattern.edge_count()));
  if (detail::degenerate_threshold(threshold, trials, &out)) return out;

  const bool triangle_fast = pattern == patterns::triangle() && n <= 64;
  std::int64_t hits = 0;
  for (std::int64_t trial = 0; trial < trials; ++trial) {
    CounterRng rng(seed, static_cast<std::uint64_t>(trial));
    double t = 0.0;
    if (triangle_fast) {
      t = detail::sample_bit_gnp(n, p, rng).triangle_hom_density();
    } else {
      WeightedGraph g(n);
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          g.set_weight(i, j, rng.next_bernoulli(p) ? 1.0 : 0.0);
      t = hom_density(pattern, g);
    }
    if (t >= threshold) ++hits;
  }
  out.hits = hits;
  out.estimate = static_cast<double>(hits) / static_cast<double>(trials);
  if (hits == 0) {
    out.ci_low = 0.0;
    out.ci_high = 3.0 / static_cast<double>(trials);  // rule of three
    out.note = "no hits; upper limit by the rule of three";
  } else {
    const detail::WilsonInterval w = detail::wilson_interval(hits, trials);
    out.ci_low = w.low;
    out.ci_high = w.high;
    out.log_estimate = std::log(out.estimate);
  }
  return out;
}

// An alternative sampling law: edge (i,j) appears independently with
// probability q(i,j).  Raising q on a planted structure steers samples into
// the tail event; the importance weights below undo the bias exactly.
struct TiltSpec {
  Eigen::MatrixXd q;
};

inline TiltSpec no_op_tilt(int n, double p) {
  require(n >= 1, "no_op_tilt: n must be >= 1");
  require(p > 0.0 && p < 1.0, "no_op_tilt: p must lie in (0, 1)");
  TiltSpec tilt;
  tilt.q = Eigen::MatrixXd::Constant(n, n, p);
  tilt.q.diagonal().setZero();
  return tilt;
}

inline TiltSpec planted_clique_tilt(int n, double p, int a) {
  require(a >= 0 && a <= n, "planted_clique_tilt: clique size out of range");
  TiltSpec tilt = no_op_tilt(n, p);
  for (int i = 0; i < a; ++i)
    for (int j = i + 1; j < a; ++j) {
      tilt.q(i, j) = 1.0;
      tilt.q(j, i) = 1.0;
    }
  return tilt;
}

namespace detail {

inline void check_tilt(const TiltSpec& tilt, int n) {
  require(tilt.q.rows() == n && tilt.q.cols() == n,
          "tilted_tail_estimate: tilt dimension mismatch");
  for (int i = 0; i < n; ++i) {
    require(tilt.q(i, i) == 0.0, "tilted_tail_estimate: tilt diagonal must be 0");
    for (int j = i + 1; j < n; ++j) {
      require(tilt.q(i, j) > 0.0 && tilt.q(i, j) <= 1.0,
              "tilted_tail_estimate: tilt entries must lie in (0, 1]");
      require(tilt.q(i, j) == tilt.q(j, i),
              "tilted_tail_estimate: tilt must be symmetric");
    }
  }
}

}  // namespace detail

// Importance-sampled tail probability under the tilted edge law.  All weight
// bookkeeping stays in log space; q(i,j) = 1 edges are deterministic presences
// whose absent-edge weight term is skipped rather than evaluated as 0 * -inf.
inline McEstimate tilted_tail_estimate(int n, double p, double delta,
                                       const SubgraphPattern& pattern,
                                       const TiltSpec& tilt, std::int64_t trials,
                                       std::uint64_t seed) {
  require(n >= 1, "tilted_tail_estimate: n must be >= 1");
  require(p > 0.0 && p < 1.0, "tilted_tail_estimate: p must lie in (0, 1)");
  require(trials >= 1, "tilted_tail_estimate: trials must be >= 1");
  detail::check_tilt(tilt, n);
  McEstimate out;
  out.trials = trials;
  const double threshold =
      (1.0 + delta) * std::pow(p, static_cast<double>(pattern.edge_count()));
  if (detail::degenerate_threshold(threshold, trials, &out)) return out;

  const bool triangle_fast = pattern == patterns::triangle() && n <= 64;
  const double log_p = std::log(p);
  const double log_1p = std::log1p(-p);
  std::vector<double> hit_logw;
  for (std::int64_t trial = 0; trial < trials; ++trial) {
    CounterRng rng(seed, static_cast<std::uint64_t>(trial));
    KahanSum logw;
    detail::BitGraph bits(triangle_fast ? n : 1);
    WeightedGraph dense_graph(triangle_fast ? 1 : n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const double q = tilt.q(i, j);
        const bool edge = rng.next_bernoulli(q);
        if (edge) {
          logw.add(log_p - std::log(q));
          if (triangle_fast)
            bits.add_edge(i, j);
          else
            dense_graph.set_weight(i, j, 1.0);
        } else {
          logw.add(log_1p - std::log1p(-q));
        }
      }
    const double t = triangle_fast ? bits.triangle_hom_density()
                                   : hom_density(pattern, dense_graph);
    if (t >= threshold) hit_logw.push_back(logw.value());
  }
  out.hits = static_cast<std::int64_t>(hit_logw.size());
  if (hit_logw.empty()) {
    out.note = "no hits under the tilt; estimate is 0 with no interval";
    return out;
  }
  const double log_trials = std::log(static_cast<double>(trials));
  out.log_estimate = detail::log_sum_exp(hit_logw) - log_trials;
  out.estimate = std::exp(out.log_estimate);
  std::vector<double> doubled(hit_logw);
  for (double& x : doubled) x *= 2.0;
  const double second_moment = std::exp(detail::log_sum_exp(doubled) - log_trials);
  const double variance =
      std::max(0.0, second_moment - out.estimate * out.estimate);
  const double half =
      detail::kWilsonZ * std::sqrt(variance / static_cast<double>(trials));
  out.ci_low = std::max(0.0, out.estimate - half);
  out.ci_high = std::min(1.0, out.estimate + half);
  return out;
}

// Exact tail probability by enumerating all graphs on n <= 5 vertices.
inline double exact_tail_probability(int n, double p, double delta,
                                     const SubgraphPattern& pattern) {
  require(n >= 1 && n <= 5, "exact_tail_probability: n must lie in [1, 5]");
  require(p > 0.0 && p < 1.0, "exact_tail_probability: p must lie in (0, 1)");
  const double threshold =
      (1.0 + delta) * std::pow(p, static_cast<double>(pattern.edge_count()));
  if (threshold <= 0.0) return 1.0;
  const int pairs = pair_count(n);
  KahanSum prob;
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << pairs); ++mask) {
    WeightedGraph g(n);
    int edges = 0;
    int bit = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j, ++bit)
        if (mask & (std::uint32_t{1} << bit)) {
          g.set_weight(i, j, 1.0);
          ++edges;
        }
    if (hom_density(pattern, g) >= threshold)
      prob.add(std::pow(p, edges) * std::pow(1.0 - p, pairs - edges));
  }
  return prob.value();
}

// How the simulated decay compares with the variational prediction and with
// the raw n^2 p^2 log(1/p) order.
struct RateComparison {
  double ratio_phi = 0.0;
  double ratio_order = 0.0;
  bool degenerate = false;  // estimate >= 1; -log is not a decay rate
};

inline RateComparison rate_comparison(int n, double p, double delta,
                                      double estimate, double phi_estimate) {
  require(n >= 1, "rate_comparison: n must be >= 1");
  require(p > 0.0 && p < 1.0, "rate_comparison: p must lie in (0, 1)");
  require(delta > 0.0, "rate_comparison: delta must be positive");
  require(estimate > 0.0, "rate_comparison: estimate must be positive");
  require(phi_estimate > 0.0, "rate_comparison: phi_estimate must be positive");
  RateComparison out;
  const double neg_log = -std::log(estimate);
  out.degenerate = estimate >= 1.0;
  out.ratio_phi = neg_log / phi_estimate;
  const double nd = n;
  out.ratio_order = neg_log / (nd * nd * p * p * std::log(1.0 / p));
  return out;
}

}  // namespace tailvar
