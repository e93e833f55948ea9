#pragma once

#include <cmath>
#include <string>

#include "tailvar/common.hpp"

namespace tailvar {

// Bernoulli relative entropy I_p(x) = x log(x/p) + (1-x) log((1-x)/(1-p)),
// in nats, with the 0 log 0 = 0 convention at the endpoints.  This is the
// per-pair large-deviation cost of tilting an edge from density p to x.
inline double relative_entropy(double x, double p) {
  require(p > 0.0 && p < 1.0, "relative_entropy: p must lie in (0,1)");
  require(x >= 0.0 && x <= 1.0, "relative_entropy: x must lie in [0,1]");
  double v = 0.0;
  if (x > 0.0) v += x * std::log(x / p);
  if (x < 1.0) v += (1.0 - x) * std::log((1.0 - x) / (1.0 - p));
  return v;
}

// d/dx I_p(x) = log( x(1-p) / (p(1-x)) ), finite only on (0,1).
inline double entropy_derivative(double x, double p) {
  require(p > 0.0 && p < 1.0, "entropy_derivative: p must lie in (0,1)");
  require(x > 0.0 && x < 1.0, "entropy_derivative: x must lie in (0,1)");
  return std::log(x * (1.0 - p) / (p * (1.0 - x)));
}

// One-sided (upper-tail) entropy I_p^>(x) = I_p(max(x, p)); identically zero
// below p so that tail bounds never reward being under the mean.
inline double clipped_entropy(double x, double p) {
  return relative_entropy(x < p ? p : x, p);
}

// Domain constant for the chord/quadratic lower bounds.  The concavity of
// x -> I_p(p+x)/x on [0, 1-p-1/log(1/p)] is only guaranteed for small p;
// the cutoff below was verified by an offline sweep of the sign condition.
inline constexpr double kEntropyBoundMaxP = 1e-2;

inline double chord_domain_max(double p) {
  return 1.0 - p - 1.0 / std::log(1.0 / p);
}

// Chord bound: I_p(p+x) >= (x/b)^2 I_p(p+b) for 0 <= x <= b within the
// concavity window.  Used to push quadratic control all the way to the
// boundary of the admissible excess.
inline double chord_lower_bound(double x, double b, double p) {
  require(p > 0.0 && p <= kEntropyBoundMaxP,
          "chord_lower_bound: requires 0 < p <= " + std::to_string(kEntropyBoundMaxP));
  require(b > 0.0 && b <= chord_domain_max(p),
          "chord_lower_bound: b must lie in (0, 1 - p - 1/log(1/p)]");
  require(x >= 0.0 && x <= b, "chord_lower_bound: x must lie in [0, b]");
  const double r = x / b;
  return r * r * relative_entropy(p + b, p);
}

// Global quadratic bound: I_p(p+x) >= x^2 I_p(1 - 1/log(1/p)) on [0, 1-p].
inline double quadratic_lower_bound(double x, double p) {
  require(p > 0.0 && p <= kEntropyBoundMaxP,
          "quadratic_lower_bound: requires 0 < p <= " + std::to_string(kEntropyBoundMaxP));
  require(x >= 0.0 && x <= 1.0 - p, "quadratic_lower_bound: x must lie in [0, 1-p]");
  return x * x * relative_entropy(1.0 - 1.0 / std::log(1.0 / p), p);
}

// Ratio of I_p(p+x) to its asymptotic form: x^2/(2p) in the quadratic regime
// (x <= p) and x log(x/p) in the linarithmic regime (x > p).  Approaches 1 as
// the regimes separate; useful as a sanity diagnostic, not as a bound.
inline double asymptotic_ratio(double x, double p) {
  require(p > 0.0 && p < 1.0, "asymptotic_ratio: p must lie in (0,1)");
  require(x > 0.0 && x <= 1.0 - p, "asymptotic_ratio: x must lie in (0, 1-p]");
  const double value = relative_entropy(p + x, p);
  const double asym = (x <= p) ? x * x / (2.0 * p) : x * std::log(x / p);
  return value / asym;
}

// log P(Bin(N,p) >= delta*N) <= -N * I_p^>(delta); returns the exponent
// (i.e. the log of the Chernoff bound), always in log space.
inline double binomial_tail_bound(double n_trials, double p, double threshold) {
  require(n_trials >= 0.0, "binomial_tail_bound: N must be nonnegative");
  require(p > 0.0 && p < 1.0, "binomial_tail_bound: p must lie in (0,1)");
  require(threshold >= 0.0 && threshold <= 1.0,
          "binomial_tail_bound: threshold must lie in [0,1]");
  return -n_trials * clipped_entropy(threshold, p);
}

}  // namespace tailvar
