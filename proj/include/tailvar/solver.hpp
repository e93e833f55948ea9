#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "tailvar/common.hpp"
#include "tailvar/constructions.hpp"
#include "tailvar/entropy.hpp"
#include "tailvar/graph.hpp"
#include "tailvar/pattern.hpp"
#include "tailvar/rng.hpp"

namespace tailvar {

// One instance of the variational problem
//   minimize I_p(G) over G in [0,1]^{C(n,2)} subject to t(H, G) >= (1+d)p^{e(H)}.
// delta = 0 and n below the pattern order are accepted here (the brute-force
// oracle probes both); emptiness of the constraint set surfaces at solve time.
struct VariationalInstance {
  int n;
  double p;
  double delta;
  SubgraphPattern pattern;

  VariationalInstance(int n_, double p_, double delta_,
                      SubgraphPattern pattern_ = patterns::triangle())
      : n(n_), p(p_), delta(delta_), pattern(std::move(pattern_)) {
    require(n >= 1, "VariationalInstance: n must be >= 1");
    require(p > 0.0 && p < 1.0, "VariationalInstance: p must lie in (0, 1)");
    require(delta >= 0.0, "VariationalInstance: delta must be >= 0");
    require(pattern.edge_count() >= 1, "VariationalInstance: pattern needs edges");
    require(threshold() <= 1.0,
            "VariationalInstance: threshold (1+delta)p^e exceeds 1");
  }

  double threshold() const {
    return (1.0 + delta) * detail::int_pow(p, pattern.edge_count());
  }
};

struct SolverOptions {
  int perturbation_starts = 8;
  int max_iterations = 400;  // per penalty stage
  int penalty_stages = 6;
  double penalty_growth = 10.0;
  double tolerance_factor = 1e-9;  // feasibility tol = factor * threshold
  double perturbation_amplitude = 0.25;
  std::uint64_t seed = 0;
  bool record_trace = true;
};

struct TraceEntry {
  int iteration = 0;
  double objective = 0.0;
  double violation = 0.0;
  double mu = 0.0;
};

struct StartOutcome {
  std::string name;
  double objective = 0.0;
  double violation = 0.0;
  bool feasible = false;
  bool converged = false;
  int iterations = 0;
};

struct SolveReport {
  WeightedGraph minimizer;
  double objective = 0.0;
  double constraint_value = 0.0;
  double normalized_rate = 0.0;
  double cherry_ratio = 0.0;
  int starts = 0;
  bool converged = false;
  std::string winner;
  std::vector<StartOutcome> start_outcomes;
  std::vector<TraceEntry> trace;
};

namespace detail {

// Everything the iteration loop needs, bound to one instance.
class MeritModel {
 public:
  MeritModel(const VariationalInstance& inst)
      : inst_(inst),
        is_triangle_(inst.pattern == patterns::triangle()),
        mu_measure_(uniform_measure(inst.n)),
        threshold_(inst.threshold()),
        derivative_cap_(std::log(1e12)) {}

  double density(const Eigen::MatrixXd& a) const {
    if (is_triangle_) {
      const double n = inst_.n;
      return (a * a).cwiseProduct(a).sum() / (n * n * n);
    }
    return hom_density_dispatch(inst_.pattern, a, mu_measure_);
  }

  // d t / d a_ij per unordered pair (symmetric, zero diagonal)
  Eigen::MatrixXd density_gradient(const Eigen::MatrixXd& a) const {
    Eigen::MatrixXd g;
    if (is_triangle_) {
      const double n = inst_.n;
      g = 6.0 / (n * n * n) * (a * a);
    } else {
      g = hom_gradient(inst_.pattern, a, mu_measure_);
    }
    g.diagonal().setZero();
    // Matrix products round (i, j) and (j, i) independently (SIMD tails),
    // so g is symmetric only up to an ulp.  The commutative mean is bitwise
    // symmetric and keeps every later elementwise iterate exactly so.
    Eigen::MatrixXd sym = 0.5 * (g + g.transpose());
    return sym;
  }

  double entropy(const Eigen::MatrixXd& a) const {
    KahanSum acc;
    for (int i = 0; i < inst_.n; ++i)
      for (int j = i + 1; j < inst_.n; ++j)
        acc.add(relative_entropy(a(i, j), inst_.p));
    return acc.value();
  }

  double violation(const Eigen::MatrixXd& a) const {
    return std::max(0.0, threshold_ - density(a));
  }

  double merit(const Eigen::MatrixXd& a, double mu) const {
    const double v = violation(a);
    return entropy(a) + mu * v * v;
  }

  // gradient of the merit function over unordered pairs (symmetric matrix);
  // the caller supplies the current violation so density is not recomputed
  Eigen::MatrixXd merit_gradient(const Eigen::MatrixXd& a, double mu,
                                 double violation_value) const {
    Eigen::MatrixXd g(inst_.n, inst_.n);
    g.setZero();
    for (int i = 0; i < inst_.n; ++i)
      for (int j = i + 1; j < inst_.n; ++j) {
        // The entropy slope is infinite at the box walls {0, 1}, where the
        // projection parks iterates (the clique start even begins at 1).
        // Evaluate a hair inside the wall and cap: the projection absorbs
        // any outward component, so the capped slope is all that matters.
        const double w = std::clamp(a(i, j), 1e-12, 1.0 - 1e-12);
        const double d = std::clamp(entropy_derivative(w, inst_.p),
                                    -derivative_cap_, derivative_cap_);
        g(i, j) = d;
        g(j, i) = d;
      }
    if (violation_value > 0.0)
      g -= 2.0 * mu * violation_value * density_gradient(a);
    return g;
  }

  // box projection onto [p, 1] with the WLOG floor at p; diagonal stays zero
  Eigen::MatrixXd project(Eigen::MatrixXd a) const {
    a = a.cwiseMax(inst_.p).cwiseMin(1.0);
    a.diagonal().setZero();
    return a;
  }

  double threshold() const { return threshold_; }

 private:
  const VariationalInstance& inst_;
  bool is_triangle_;
  Eigen::VectorXd mu_measure_;
  double threshold_;
  double derivative_cap_;
};

inline double pair_dot(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  return 0.5 * x.cwiseProduct(y).sum();
}

// Smallest lambda (to bisection accuracy) such that mixing toward the all-ones
// graph restores feasibility; the returned point is always on the feasible
// side.  Assumes t(ones) >= threshold, which solve_phi checks up front.
inline Eigen::MatrixXd repair_feasibility(const MeritModel& model,
                                          const Eigen::MatrixXd& a, int n) {
  Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(n, n);
  ones.diagonal().setZero();
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    const Eigen::MatrixXd cand = a + mid * (ones - a);
    if (model.violation(cand) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return a + hi * (ones - a);
}

struct DescentResult {
  Eigen::MatrixXd point;
  double objective = 0.0;
  double violation = 0.0;
  bool stationary = false;
  int iterations = 0;
  std::vector<TraceEntry> trace;
};

inline DescentResult run_descent(const MeritModel& model, Eigen::MatrixXd a,
                                 const VariationalInstance& inst,
                                 const SolverOptions& opt) {
  DescentResult out;
  const double thr = model.threshold();
  double mu = 1e3 * relative_entropy(1.0, inst.p) / (thr * thr);
  int global_iter = 0;
  bool last_stage_converged = false;
  double entropy_cur = model.entropy(a);
  double density_cur = model.density(a);
  for (int stage = 0; stage < opt.penalty_stages; ++stage) {
    last_stage_converged = false;
    int stalled = 0;
    for (int iter = 0; iter < opt.max_iterations; ++iter) {
      ++global_iter;
      const double viol_cur = std::max(0.0, thr - density_cur);
      const double m0 = entropy_cur + mu * viol_cur * viol_cur;
      if (opt.record_trace)
        out.trace.push_back({global_iter, entropy_cur, thr - density_cur, mu});
      const Eigen::MatrixXd grad = model.merit_gradient(a, mu, viol_cur);
      // stationarity of the projected-gradient map
      if ((a - model.project(a - grad)).cwiseAbs().maxCoeff() <= 1e-10) {
        last_stage_converged = true;
        break;
      }
      double step = 1.0;
      bool accepted = false;
      double merit_new = m0;
      while (step >= 1e-16) {
        const Eigen::MatrixXd cand = model.project(a - step * grad);
        const double decrease_ref = pair_dot(grad, a - cand);
        const double entropy_cand = model.entropy(cand);
        const double density_cand = model.density(cand);
        const double viol_cand = std::max(0.0, thr - density_cand);
        const double merit_cand = entropy_cand + mu * viol_cand * viol_cand;
        if (merit_cand <= m0 - 1e-4 * decrease_ref && decrease_ref > 0.0) {
          a = cand;
          entropy_cur = entropy_cand;
          density_cur = density_cand;
          merit_new = merit_cand;
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) {  // line search exhausted: numerically stationary
        last_stage_converged = true;
        break;
      }
      // merit progress has flattened to rounding noise: converged in value
      if (m0 - merit_new <= 1e-13 * (1.0 + std::abs(merit_new))) {
        if (++stalled >= 5) {
          last_stage_converged = true;
          break;
        }
      } else {
        stalled = 0;
      }
    }
    mu *= opt.penalty_growth;
  }
  const double tol = opt.tolerance_factor * thr;
  if (std::max(0.0, thr - density_cur) > tol)
    a = repair_feasibility(model, a, inst.n);
  out.point = a;
  out.objective = model.entropy(a);
  out.violation = thr - model.density(a);
  out.stationary = last_stage_converged;
  out.iterations = global_iter;
  return out;
}

}  // namespace detail

// Feasibility recheck through the public density evaluator.
struct FeasibilityReport {
  bool feasible = false;
  double violation = 0.0;  // threshold - t(H, G); <= tol passes
  double value = 0.0;
  double threshold = 0.0;
};

inline FeasibilityReport verify_feasibility(const WeightedGraph& g,
                                            const VariationalInstance& inst,
                                            double tol) {
  require(g.n() == inst.n, "verify_feasibility: size mismatch");
  FeasibilityReport r;
  r.threshold = inst.threshold();
  r.value = hom_density(inst.pattern, g);
  r.violation = r.threshold - r.value;
  r.feasible = r.violation <= tol;
  return r;
}

// Projected-gradient descent on the penalty merit function, multi-started
// from the extremal constructions, the constant-p graph, and seeded random
// perturbations.  The result is an upper bound on phi(n,p,delta): the best
// feasible endpoint over the portfolio (each feasible starting point itself
// remains a candidate, so descent can never lose to its own start).
inline SolveReport solve_phi(const VariationalInstance& inst,
                             const SolverOptions& opt = SolverOptions()) {
  detail::MeritModel model(inst);
  const double thr = inst.threshold();
  Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(inst.n, inst.n);
  ones.diagonal().setZero();
  if (model.density(ones) < thr)
    throw infeasible_error("solve_phi: even the all-ones graph is infeasible");

  struct Start {
    std::string name;
    Eigen::MatrixXd point;
  };
  std::vector<Start> starts;
  const int k = inst.pattern.k();
  if (inst.pattern.is_complete() && k >= 3 && inst.n >= 3) {
    try {
      starts.push_back({"clique-construction",
                        realize_construction(clique_construction(
                                                 inst.n, inst.p, inst.delta, k))
                            .matrix()});
    } catch (const infeasible_error&) {
    }
    try {
      starts.push_back(
          {"hub-construction",
           realize_construction(hub_construction(inst.n, inst.p, inst.delta, k))
               .matrix()});
    } catch (const infeasible_error&) {
    }
  }
  Eigen::MatrixXd constant = Eigen::MatrixXd::Constant(inst.n, inst.n, inst.p);
  constant.diagonal().setZero();
  starts.push_back({"constant", constant});
  for (int s = 0; s < opt.perturbation_starts; ++s) {
    CounterRng rng(opt.seed, static_cast<std::uint64_t>(s) + 1);
    Eigen::MatrixXd a = constant;
    for (int i = 0; i < inst.n; ++i)
      for (int j = i + 1; j < inst.n; ++j) {
        const double w = inst.p + opt.perturbation_amplitude * (1.0 - inst.p) *
                                      rng.next_double();
        a(i, j) = w;
        a(j, i) = w;
      }
    starts.push_back({"perturbation-" + std::to_string(s), a});
  }

  const double tol = opt.tolerance_factor * thr;
  SolveReport report{WeightedGraph(inst.n)};
  report.starts = static_cast<int>(starts.size());
  int best = -1;
  double best_objective = std::numeric_limits<double>::infinity();
  std::vector<detail::DescentResult> results;
  results.reserve(starts.size());
  for (const auto& start : starts) {
    detail::DescentResult res = detail::run_descent(model, start.point, inst, opt);
    // a feasible start must never be beaten by its own descent endpoint
    if (thr - model.density(start.point) <= tol &&
        model.entropy(start.point) < res.objective) {
      res.point = start.point;
      res.objective = model.entropy(start.point);
      res.violation = thr - model.density(start.point);
    }
    StartOutcome outcome;
    outcome.name = start.name;
    outcome.objective = res.objective;
    outcome.violation = res.violation;
    outcome.feasible = res.violation <= tol;
    outcome.converged = res.stationary && outcome.feasible;
    outcome.iterations = res.iterations;
    report.start_outcomes.push_back(outcome);
    if (outcome.feasible && res.objective < best_objective) {
      best_objective = res.objective;
      best = static_cast<int>(results.size());
    }
    results.push_back(std::move(res));
  }
  if (best < 0)
    throw infeasible_error("solve_phi: no start produced a feasible point");
  const detail::DescentResult& win = results[static_cast<size_t>(best)];
  report.minimizer = WeightedGraph::from_matrix(win.point);
  report.objective = win.objective;
  report.constraint_value = model.density(win.point);
  const double n = inst.n;
  report.normalized_rate =
      win.objective / (n * n * detail::int_pow(inst.p, inst.pattern.max_degree()) *
                       std::log(1.0 / inst.p));
  report.cherry_ratio = cherry_density(report.minimizer) / (inst.p * inst.p);
  report.converged = report.start_outcomes[static_cast<size_t>(best)].converged;
  report.winner = report.start_outcomes[static_cast<size_t>(best)].name;
  report.trace = win.trace;
  return report;
}

// Exhaustive grid minimization for tiny instances: the independent check on
// solve_phi.  The returned value minimizes over feasible grid points, hence
// lies within [phi, phi + error_bound]: rounding every coordinate of a true
// minimizer up to the next grid value keeps it feasible (t is monotone) and
// raises each pair entropy by at most the largest adjacent grid increment.
struct GridOracleReport {
  double value = 0.0;
  double error_bound = 0.0;
  int grid_points = 0;
  std::int64_t feasible_points = 0;
  std::int64_t evaluations = 0;
  WeightedGraph best_graph{1};
};

inline GridOracleReport grid_oracle(const VariationalInstance& inst,
                                    double resolution) {
  require(pair_count(inst.n) <= 6, "grid_oracle: only n <= 4 is enumerable");
  require(resolution > 0.0 && resolution <= 0.1,
          "grid_oracle: resolution must lie in (0, 0.1]");
  detail::MeritModel model(inst);
  const double thr = inst.threshold();
  const int pairs = static_cast<int>(pair_count(inst.n));
  Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(inst.n, inst.n);
  ones.diagonal().setZero();
  if (model.density(ones) < thr)
    throw infeasible_error("grid_oracle: even the all-ones graph is infeasible");

  const int m =
      static_cast<int>(std::ceil((1.0 - inst.p) / resolution - 1e-12)) + 1;
  if (std::pow(static_cast<double>(m), pairs) > 2e8)
    throw resource_error("grid_oracle: grid exceeds the enumeration budget");
  std::vector<double> grid(static_cast<size_t>(m));
  std::vector<double> cost(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    grid[static_cast<size_t>(i)] =
        i == m - 1 ? 1.0 : inst.p + (1.0 - inst.p) * i / (m - 1);
    cost[static_cast<size_t>(i)] =
        relative_entropy(grid[static_cast<size_t>(i)], inst.p);
  }
  GridOracleReport rep;
  rep.grid_points = m;
  double max_step = 0.0;
  for (int i = 0; i + 1 < m; ++i)
    max_step = std::max(max_step, cost[static_cast<size_t>(i) + 1] -
                                      cost[static_cast<size_t>(i)]);
  rep.error_bound = pairs * max_step;

  // seed the incumbent with the cheapest feasible constant graph
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> best_idx;
  for (int i = 0; i < m; ++i) {
    Eigen::MatrixXd a =
        Eigen::MatrixXd::Constant(inst.n, inst.n, grid[static_cast<size_t>(i)]);
    a.diagonal().setZero();
    if (model.density(a) >= thr) {
      best = pairs * cost[static_cast<size_t>(i)];
      best_idx.assign(static_cast<size_t>(pairs), i);
      break;
    }
  }

  std::vector<int> idx(static_cast<size_t>(pairs), 0);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(inst.n, inst.n);
  std::vector<std::pair<int, int>> coords;
  for (int i = 0; i < inst.n; ++i)
    for (int j = i + 1; j < inst.n; ++j) coords.emplace_back(i, j);

  // depth-first over coordinates; entropy is nondecreasing along each grid
  // axis, so a partial sum at or above the incumbent prunes the whole branch
  auto dfs = [&](auto&& self, int depth, double partial) -> void {
    if (partial >= best) return;
    if (depth == pairs) {
      ++rep.evaluations;
      if (model.density(a) >= thr) {
        ++rep.feasible_points;
        best = partial;
        best_idx = idx;
      }
      return;
    }
    const auto [r, c] = coords[static_cast<size_t>(depth)];
    for (int i = 0; i < m; ++i) {
      const double next = partial + cost[static_cast<size_t>(i)];
      if (next >= best) break;
      idx[static_cast<size_t>(depth)] = i;
      a(r, c) = grid[static_cast<size_t>(i)];
      a(c, r) = grid[static_cast<size_t>(i)];
      self(self, depth + 1, next);
    }
  };
  dfs(dfs, 0, 0.0);
  if (!std::isfinite(best))
    throw infeasible_error("grid_oracle: no feasible grid point");
  rep.value = best;
  WeightedGraph g(inst.n);
  for (int d = 0; d < pairs; ++d)
    g.set_weight(coords[static_cast<size_t>(d)].first,
                 coords[static_cast<size_t>(d)].second,
                 grid[static_cast<size_t>(best_idx[static_cast<size_t>(d)])]);
  rep.best_graph = g;
  return rep;
}

// Remark-style diagnostic: s(minimizer)/p^2 against the limiting 1 + delta/3
// (hub) or 1 (clique) values.
inline double cherry_diagnostic(const SolveReport& report,
                                const VariationalInstance& inst) {
  require(report.converged, "cherry_diagnostic: report did not converge");
  return cherry_density(report.minimizer) / (inst.p * inst.p);
}

}  // namespace tailvar
