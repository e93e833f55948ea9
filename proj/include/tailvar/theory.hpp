#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

#include "tailvar/common.hpp"
#include "tailvar/constructions.hpp"
#include "tailvar/entropy.hpp"
#include "tailvar/pattern.hpp"

namespace tailvar {

// Which side of the validity window (n^{-2/(k-1)} << p << 1, split at
// n^{-1/(k-1)}) a parameter point sits on.  "boundary" is the honest answer
// near the split; "below_validity" means the asymptotic formulas do not apply.
enum class RegimeLabel { dense_side, sparse_side, boundary, below_validity };

struct RegimeReport {
  RegimeLabel label = RegimeLabel::boundary;
  double dense_threshold = 0.0;   // n^{-1/(k-1)}
  double sparse_threshold = 0.0;  // n^{-2/(k-1)}
  double margin = 3.0;            // the finite-n stand-in for "<<"
};

// Limiting normalized rate c(delta) with
//   phi(n,p,delta) ~ c(delta) n^2 p^{k-1} log(1/p):
// the dense side takes the cheaper of the clique and hub branches, the sparse
// side loses the hub option.
inline double limit_rate(int k, double delta, RegimeLabel regime) {
  require(k >= 3, "limit_rate: k must be >= 3");
  require(delta > 0.0, "limit_rate: delta must be > 0");
  require(regime == RegimeLabel::dense_side || regime == RegimeLabel::sparse_side,
          "limit_rate: no closed form on boundary/below_validity");
  const double clique_branch = 0.5 * std::pow(delta, 2.0 / k);
  if (regime == RegimeLabel::sparse_side) return clique_branch;
  return std::min(clique_branch, delta / k);
}

// The unique delta* with delta^{2/k}/2 = delta/k: (k/2)^{k/(k-2)}.  When the
// exponent is an integer the power is multiplied out so that the advertised
// exact values (27/8 at k=3, 4 at k=4) hold bit-for-bit.
inline double crossover_delta(int k) {
  require(k >= 3, "crossover_delta: k must be >= 3");
  if (k % (k - 2) == 0) return detail::int_pow(k / 2.0, k / (k - 2));
  return std::pow(k / 2.0, static_cast<double>(k) / (k - 2));
}

inline RegimeReport regime_classify(std::int64_t n, double p, int k,
                                    double margin = 3.0) {
  require(n >= 2, "regime_classify: n must be >= 2");
  require(p > 0.0 && p < 1.0, "regime_classify: p must lie in (0, 1)");
  require(k >= 3, "regime_classify: k must be >= 3");
  require(margin >= 1.0, "regime_classify: margin must be >= 1");
  RegimeReport r;
  r.dense_threshold = std::pow(static_cast<double>(n), -1.0 / (k - 1));
  r.sparse_threshold = std::pow(static_cast<double>(n), -2.0 / (k - 1));
  r.margin = margin;
  if (p >= margin * r.dense_threshold) {
    r.label = RegimeLabel::dense_side;
  } else if (p >= r.dense_threshold / margin) {
    r.label = RegimeLabel::boundary;
  } else if (p >= r.sparse_threshold / margin) {
    r.label = RegimeLabel::sparse_side;
  } else {
    r.label = RegimeLabel::below_validity;
  }
  return r;
}

// argmin over {(delta,0), (0,delta/3)} of delta1^{2/3}/2 + delta2: how an
// excess splits between the clique channel (delta1) and the hub channel
// (delta2).  Ties go to the clique split.
inline std::pair<double, double> optimal_split(double delta) {
  require(delta > 0.0, "optimal_split: delta must be > 0");
  const double clique_value = 0.5 * std::pow(delta, 2.0 / 3.0);
  const double hub_value = delta / 3.0;
  if (hub_value < clique_value) return {0.0, delta / 3.0};
  return {delta, 0.0};
}

inline double phi_prime_limit(double delta1, double delta2) {
  require(delta1 >= 0.0 && delta2 >= 0.0,
          "phi_prime_limit: arguments must be nonnegative");
  return 0.5 * std::pow(delta1, 2.0 / 3.0) + delta2;
}

// Limiting cherry ratio lim s(G_n)/p^2 along optimal sequences: 1 + delta/3
// when the hub is the optimum (dense side, delta below the crossover), 1
// otherwise.  At the crossover both structures are optimal and the limit is
// genuinely undefined.
inline double cherry_diagnostic_limit(double delta, RegimeLabel regime) {
  require(delta > 0.0, "cherry_diagnostic_limit: delta must be > 0");
  require(regime == RegimeLabel::dense_side || regime == RegimeLabel::sparse_side,
          "cherry_diagnostic_limit: regime must be dense_side or sparse_side");
  if (regime == RegimeLabel::sparse_side) return 1.0;
  const double crossover = crossover_delta(3);
  require(delta != crossover,
          "cherry_diagnostic_limit: undefined at the crossover exactly");
  return delta < crossover ? 1.0 + delta / 3.0 : 1.0;
}

// phi_F(n,p,delta) = coefficient * n^2 p^{Delta(F)} log(1/p), with the
// coefficient bracketed between a certified entropy lower bound and the hub
// construction's cost.
struct OrderEstimate {
  double lower = 0.0;
  double upper = 0.0;
  int n_exponent = 2;
  int p_exponent = 0;    // Delta(F)
  bool log_factor = true;  // carries log(1/p)
};

// Coefficient bracket for general patterns F.  Upper: joining r = delta n
// p^{Delta} hub vertices to everything costs ~ delta n^2 p^{Delta} log(1/p).
// Lower: t(F,W) <= ||W||_Delta^{e(F)} (Hoelder), Minkowski peels off the
// constant p, and U <= 1 turns the Delta-th moment of U = W - p into a second
// moment, which the pointwise quadratic entropy bound converts to entropy.
// The entropy step is certified only for p <= 1e-2; above that the lower
// coefficient degrades to the trivial 0.
inline OrderEstimate general_H_order(const SubgraphPattern& f, std::int64_t n,
                                     double p, double delta = 1.0) {
  const int max_deg = f.max_degree();
  require(max_deg >= 1, "general_H_order: pattern must have an edge");
  require(n >= 2, "general_H_order: n must be >= 2");
  require(p > 0.0 && p < 1.0, "general_H_order: p must lie in (0, 1)");
  require(delta > 0.0, "general_H_order: delta must be > 0");
  require(p >= std::pow(static_cast<double>(n), -1.0 / max_deg),
          "general_H_order: below the validity range p >= n^{-1/Delta}");
  OrderEstimate est;
  est.p_exponent = max_deg;
  est.upper = delta;
  est.lower = 0.0;
  if (p <= kEntropyBoundMaxP && max_deg >= 2) {
    const double c = std::pow(1.0 + delta, 1.0 / f.edge_count()) - 1.0;
    const double istar = relative_entropy(1.0 - 1.0 / std::log(1.0 / p), p);
    est.lower = std::max(
        0.0, std::pow(c, max_deg) * istar / (2.0 * std::log(1.0 / p)));
  }
  return est;
}

// log R for the union bound R = M^n (1/eps)^{M^2}, eps = eta p^3 / 6 and
// M = 4^{1/eps^2} the weak-regularity part bound.
struct UnionBoundReport {
  double epsilon = 0.0;
  double log_r = 0.0;
  double ratio = 0.0;  // log R / (n^2 p^2 log(1/p))
};

inline UnionBoundReport union_bound_log_R(std::int64_t n, double p, double eta) {
  require(n >= 1, "union_bound_log_R: n must be >= 1");
  require(p > 0.0 && p < 1.0, "union_bound_log_R: p must lie in (0, 1)");
  require(eta > 0.0, "union_bound_log_R: eta must be > 0");
  const double eps = eta * p * p * p / 6.0;
  require(eps < 1.0, "union_bound_log_R: eps = eta p^3/6 must be < 1");
  const double ln_m = std::log(4.0) / (eps * eps);
  require(2.0 * ln_m <= 700.0,
          "union_bound_log_R: M^2 overflows, use union_bound_symbolic");
  UnionBoundReport r;
  r.epsilon = eps;
  r.log_r = static_cast<double>(n) * ln_m + std::exp(2.0 * ln_m) * std::log(1.0 / eps);
  r.ratio = r.log_r / (static_cast<double>(n) * n * p * p * std::log(1.0 / p));
  return r;
}

// Same bound one log deeper: ln(log R) and ln(n^2 p^2 log(1/p)), for n far
// beyond floating-point range (n enters only through ln n).
struct SymbolicUnionBound {
  double epsilon = 0.0;
  double ln_log_r = 0.0;
  double ln_denominator = 0.0;
  double log_ratio = 0.0;  // ln(log R) - ln(n^2 p^2 log(1/p))
};

inline SymbolicUnionBound union_bound_symbolic(double ln_n, double p, double eta) {
  require(ln_n > 0.0, "union_bound_symbolic: ln_n must be > 0");
  require(p > 0.0 && p < 1.0, "union_bound_symbolic: p must lie in (0, 1)");
  require(eta > 0.0, "union_bound_symbolic: eta must be > 0");
  const double eps = eta * p * p * p / 6.0;
  require(eps < 1.0, "union_bound_symbolic: eps = eta p^3/6 must be < 1");
  const double ln_m = std::log(4.0) / (eps * eps);
  SymbolicUnionBound r;
  r.epsilon = eps;
  r.ln_log_r = log_add_exp(ln_n + std::log(ln_m),
                           2.0 * ln_m + std::log(std::log(1.0 / eps)));
  r.ln_denominator = 2.0 * ln_n + 2.0 * std::log(p) + std::log(std::log(1.0 / p));
  r.log_ratio = r.ln_log_r - r.ln_denominator;
  return r;
}

// Certified lower bound on the triangle variational value phi(n,p,delta):
//   t(W) <= E[W^2]^{3/2}  =>  ||W||_2 >= (1+delta)^{1/3} p
//   =>  E[U^2] >= ((1+delta)^{1/3}-1)^2 p^2   (U = W - p after flooring at p)
//   =>  E[I_p(W)] >= I_p(1 - 1/log(1/p)) E[U^2],
// then transported from the empirical graphon back to I_p(G), which costs the
// additive n I_p(0)/2.  The entropy step needs p <= 1e-2; above that the
// certified bound degrades to the trivial 0.
inline double phi_lower_bound(std::int64_t n, double p, double delta) {
  require(n >= 1, "phi_lower_bound: n must be >= 1");
  require(p > 0.0 && p < 1.0, "phi_lower_bound: p must lie in (0, 1)");
  require(delta >= 0.0, "phi_lower_bound: delta must be >= 0");
  require((1.0 + delta) * p * p * p <= 1.0,
          "phi_lower_bound: threshold exceeds the maximal density");
  if (p > kEntropyBoundMaxP) return 0.0;
  const double x = (std::cbrt(1.0 + delta) - 1.0) * p;
  const double main = 0.5 * static_cast<double>(n) * n * quadratic_lower_bound(x, p);
  const double embed_cost = 0.5 * n * relative_entropy(0.0, p);
  return std::max(0.0, main - embed_cost);
}

}  // namespace tailvar
