#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "tailvar/common.hpp"
#include "tailvar/entropy.hpp"
#include "tailvar/graph.hpp"
#include "tailvar/graphon.hpp"

namespace tailvar {

// One extremal construction, calibrated so its clique density clears the
// excess threshold.  Discrete kinds ("clique", "hub") live on n vertices with
// an integer size parameter; graphon kinds ("clique-graphon", "hub-graphon")
// are 2-block step graphons with a real size parameter.  The graph itself is
// realized on demand (n can be 10^6 in analytic sweeps).
struct ConstructionReport {
  std::string kind;
  int n = 0;  // 0 for graphon kinds
  int k = 3;
  double p = 0.0;
  double delta = 0.0;
  double size_parameter = 0.0;  // integer-valued for discrete kinds
  double objective = 0.0;       // I_p(G), or (1/2) E[I_p(W)] for graphons
  double constraint_value = 0.0;
  double target = 0.0;  // (1+delta) p^{C(k,2)}
  double normalized_rate = 0.0;
};

namespace detail {

inline double int_pow(double x, int e) {
  double out = 1.0;
  for (int i = 0; i < e; ++i) out *= x;
  return out;
}

inline double binom2(double a) { return a * (a - 1) / 2.0; }

// Exact K_k density of the planted-clique graph: sum over how many of the k
// pattern vertices land (injectively) in the planted a-set.  Every factor is
// kept <= 1 so the arithmetic stays well-scaled for n up to 10^9.
inline double planted_clique_density(std::int64_t n, std::int64_t a, double p, int k) {
  KahanSum total;
  for (int j = 0; j <= k; ++j) {
    double term = 1.0;
    for (int i = 0; i < j; ++i) term *= static_cast<double>(a - i) / n;
    for (int i = 0; i < k - j; ++i) term *= static_cast<double>(n - a - i) / n;
    if (term == 0.0) continue;
    double binom = 1.0;  // C(k, j)
    for (int i = 0; i < j; ++i) binom = binom * (k - i) / (i + 1);
    const int exponent = k * (k - 1) / 2 - j * (j - 1) / 2;
    total.add(binom * term * int_pow(p, exponent));
  }
  return total.value();
}

// Exact K_k density of the hub graph (first a vertices joined to everything):
// only the pairs among the k-j pattern vertices outside the hub cost p.
inline double planted_hub_density(std::int64_t n, std::int64_t a, double p, int k) {
  KahanSum total;
  for (int j = 0; j <= k; ++j) {
    double term = 1.0;
    for (int i = 0; i < j; ++i) term *= static_cast<double>(a - i) / n;
    for (int i = 0; i < k - j; ++i) term *= static_cast<double>(n - a - i) / n;
    if (term == 0.0) continue;
    double binom = 1.0;
    for (int i = 0; i < j; ++i) binom = binom * (k - i) / (i + 1);
    const int m = k - j;
    total.add(binom * term * int_pow(p, m * (m - 1) / 2));
  }
  return total.value();
}

// smallest a in [lo, n] with density(a) >= target (densities are monotone
// increasing in a); -1 if even a = n falls short
inline std::int64_t calibrate_size(std::int64_t n, double target, std::int64_t lo,
                                   double (*density)(std::int64_t, std::int64_t, double, int),
                                   double p, int k) {
  if (density(n, n, p, k) < target) return -1;
  std::int64_t hi = n;
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (density(n, mid, p, k) >= target) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return hi;
}

inline void check_construction_args(std::int64_t n, double p, double delta, int k) {
  require(n >= 3, "construction: n must be >= 3");
  require(p > 0.0 && p < 1.0, "construction: p must lie in (0, 1)");
  require(delta >= 0.0, "construction: delta must be >= 0");
  require(k >= 3 && k <= SubgraphPattern::kMaxVertices,
          "construction: k must lie in [3, 8]");
}

}  // namespace detail

inline double excess_target(double p, double delta, int k) {
  return (1.0 + delta) * detail::int_pow(p, k * (k - 1) / 2);
}

inline ConstructionReport clique_construction(std::int64_t n, double p, double delta,
                                              int k = 3) {
  detail::check_construction_args(n, p, delta, k);
  const double target = excess_target(p, delta, k);
  const std::int64_t a =
      detail::calibrate_size(n, target, 0, detail::planted_clique_density, p, k);
  if (a < 0)
    throw infeasible_error("clique_construction: no a <= n meets the threshold");
  ConstructionReport r;
  r.kind = "clique";
  r.n = static_cast<int>(n);
  r.k = k;
  r.p = p;
  r.delta = delta;
  r.size_parameter = static_cast<double>(a);
  r.objective = detail::binom2(static_cast<double>(a)) * relative_entropy(1.0, p);
  r.constraint_value = detail::planted_clique_density(n, a, p, k);
  r.target = target;
  r.normalized_rate = r.objective / (static_cast<double>(n) * n *
                                     detail::int_pow(p, k - 1) * std::log(1.0 / p));
  return r;
}

inline ConstructionReport hub_construction(std::int64_t n, double p, double delta,
                                           int k = 3) {
  detail::check_construction_args(n, p, delta, k);
  // The hub ceases to be viable once n p^{k-1} falls below 1 (the calibrated
  // size parameter would have to sit below one vertex).
  if (static_cast<double>(n) * detail::int_pow(p, k - 1) < 1.0)
    throw infeasible_error("hub_construction: not viable, n p^{k-1} < 1");
  const double target = excess_target(p, delta, k);
  const std::int64_t a =
      detail::calibrate_size(n, target, 1, detail::planted_hub_density, p, k);
  if (a < 0)
    throw infeasible_error("hub_construction: no a in [1, n] meets the threshold");
  ConstructionReport r;
  r.kind = "hub";
  r.n = static_cast<int>(n);
  r.k = k;
  r.p = p;
  r.delta = delta;
  r.size_parameter = static_cast<double>(a);
  const double ad = static_cast<double>(a);
  r.objective = ad * (static_cast<double>(n) - (ad + 1.0) / 2.0) * relative_entropy(1.0, p);
  r.constraint_value = detail::planted_hub_density(n, a, p, k);
  r.target = target;
  r.normalized_rate = r.objective / (static_cast<double>(n) * n *
                                     detail::int_pow(p, k - 1) * std::log(1.0 / p));
  return r;
}

inline ConstructionReport best_construction(std::int64_t n, double p, double delta,
                                            int k = 3) {
  ConstructionReport clique;
  bool clique_ok = true;
  try {
    clique = clique_construction(n, p, delta, k);
  } catch (const infeasible_error&) {
    clique_ok = false;
  }
  ConstructionReport hub;
  bool hub_ok = true;
  try {
    hub = hub_construction(n, p, delta, k);
  } catch (const infeasible_error&) {
    hub_ok = false;
  }
  if (!clique_ok && !hub_ok)
    throw infeasible_error("best_construction: both constructions infeasible");
  if (!hub_ok) return clique;
  if (!clique_ok) return hub;
  return clique.objective <= hub.objective ? clique : hub;  // ties go to clique
}

// Graphon constructions: 2-block step graphons calibrated by bisection on the
// closed-form density lower bounds (the realized graphon's true triangle
// density dominates the calibration polynomial, so feasibility is preserved).
namespace detail {

inline double clique_graphon_poly(double a, double p) {
  return a * a * a + (1 - a) * (1 - a) * (1 - a) * p * p * p;
}

inline double hub_graphon_poly(double a, double p) {
  return 3 * a * (1 - a) * (1 - a) * p + (1 - a) * (1 - a) * (1 - a) * p * p * p;
}

// minimal root of poly(a) = target on [lo, hi], with poly(lo) < target <=
// poly(hi) and poly crossing the target exactly once in the bracket
inline double bisect_min_root(double (*poly)(double, double), double p, double target,
                              double lo, double hi) {
  for (int i = 0; i < 200 && hi - lo > 1e-17 * std::max(1.0, hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (poly(mid, p) >= target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace detail

inline ConstructionReport graphon_construction(const std::string& kind, double p,
                                               double delta) {
  require(kind == "clique" || kind == "hub",
          "graphon_construction: kind must be clique or hub");
  require(p > 0.0 && p < 1.0, "graphon_construction: p must lie in (0, 1)");
  require(delta >= 0.0, "graphon_construction: delta must be >= 0");
  const double p3 = p * p * p;
  const double target = (1.0 + delta) * p3;
  ConstructionReport r;
  r.kind = kind + "-graphon";
  r.n = 0;
  r.k = 3;
  r.p = p;
  r.delta = delta;
  r.target = target;
  if (delta == 0.0) {  // the constant graphon already meets the threshold
    r.size_parameter = 0.0;
    r.objective = 0.0;
    r.constraint_value = p3;
    r.normalized_rate = 0.0;
    return r;
  }
  double a;
  if (kind == "clique") {
    if (detail::clique_graphon_poly(1.0, p) < target)
      throw infeasible_error("graphon_construction: delta forces a > 1");
    a = detail::bisect_min_root(detail::clique_graphon_poly, p, target, 0.0, 1.0);
    r.objective = 0.5 * a * a * relative_entropy(1.0, p);
  } else {
    // the hub polynomial rises to its peak and then falls; only the rising
    // branch carries minimal solutions
    const double peak = (1.0 - p * p) / (3.0 - p * p);
    if (detail::hub_graphon_poly(peak, p) < target)
      throw infeasible_error("graphon_construction: delta forces a > 1");
    a = detail::bisect_min_root(detail::hub_graphon_poly, p, target, 0.0, peak);
    r.objective = a * (1.0 - a / 2.0) * relative_entropy(1.0, p);
  }
  r.size_parameter = a;
  r.constraint_value = kind == "clique" ? detail::clique_graphon_poly(a, p)
                                        : detail::hub_graphon_poly(a, p);
  r.normalized_rate = r.objective / (p * p * std::log(1.0 / p));
  return r;
}

// Materialize the planted graph of a discrete construction report.
inline WeightedGraph realize_construction(const ConstructionReport& r) {
  require(r.kind == "clique" || r.kind == "hub",
          "realize_construction: only discrete kinds materialize to graphs");
  if (r.n > 4096)
    throw resource_error("realize_construction: n too large to materialize");
  const int a = static_cast<int>(r.size_parameter);
  WeightedGraph g = WeightedGraph::constant(r.n, r.p);
  for (int i = 0; i < a; ++i) {
    const int jmax = r.kind == "clique" ? a : r.n;
    for (int j = i + 1; j < jmax; ++j) g.set_weight(i, j, 1.0);
  }
  return g;
}

// The 2-block quotient of any construction report (exact for graphon kinds,
// the idealized block structure for discrete kinds).
inline StepGraphon quotient_graphon(const ConstructionReport& r) {
  const bool graphon = r.n == 0;
  const double a = graphon ? r.size_parameter : r.size_parameter / r.n;
  const bool clique = r.kind.rfind("clique", 0) == 0;
  if (a <= 0.0) return StepGraphon::constant(r.p);
  if (a >= 1.0) return StepGraphon::constant(1.0);
  Eigen::VectorXd mu(2);
  mu << a, 1.0 - a;
  Eigen::MatrixXd w(2, 2);
  if (clique) {
    w << 1.0, r.p, r.p, r.p;
  } else {
    w << 1.0, 1.0, 1.0, r.p;
  }
  return StepGraphon(mu, w);
}

}  // namespace tailvar
