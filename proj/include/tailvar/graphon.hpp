#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "tailvar/common.hpp"
#include "tailvar/contraction.hpp"
#include "tailvar/entropy.hpp"
#include "tailvar/graph.hpp"
#include "tailvar/pattern.hpp"

namespace tailvar {

// A step function W: [0,1]^2 -> [0,1], symmetric, constant on the cells of a
// product partition.  Parts carry positive measures summing to 1.
class StepGraphon {
 public:
  StepGraphon(Eigen::VectorXd measures, Eigen::MatrixXd values)
      : mu_(std::move(measures)), w_(std::move(values)) {
    require(mu_.size() >= 1, "StepGraphon: needs at least one part");
    require(w_.rows() == mu_.size() && w_.cols() == mu_.size(),
            "StepGraphon: value matrix shape mismatch");
    double total = 0.0;
    for (int i = 0; i < mu_.size(); ++i) {
      require(mu_[i] > 0.0, "StepGraphon: part measures must be positive");
      total += mu_[i];
    }
    require(std::abs(total - 1.0) <= 1e-9, "StepGraphon: measures must sum to 1");
    for (int i = 0; i < w_.rows(); ++i)
      for (int j = 0; j < w_.cols(); ++j) {
        require(w_(i, j) == w_(j, i), "StepGraphon: values must be symmetric");
        require(w_(i, j) >= 0.0 && w_(i, j) <= 1.0,
                "StepGraphon: values outside [0, 1]");
      }
  }

  static StepGraphon constant(double value) {
    return StepGraphon(Eigen::VectorXd::Ones(1),
                       Eigen::MatrixXd::Constant(1, 1, value));
  }

  int parts() const { return static_cast<int>(mu_.size()); }
  double measure(int i) const { return mu_[i]; }
  double value(int i, int j) const { return w_(i, j); }
  const Eigen::VectorXd& measures() const { return mu_; }
  const Eigen::MatrixXd& values() const { return w_; }

 private:
  Eigen::VectorXd mu_;
  Eigen::MatrixXd w_;
};

// The empirical graphon W^G: n equal parts, W = g_ij on off-diagonal cells
// and 0 on the diagonal cells.
inline StepGraphon embed_step_graphon(const WeightedGraph& g) {
  return StepGraphon(uniform_measure(g.n()), g.matrix());
}

inline double triangle_density(const StepGraphon& w) {
  const int m = w.parts();
  KahanSum acc;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        acc.add(w.measure(i) * w.measure(j) * w.measure(k) * w.value(i, j) *
                w.value(i, k) * w.value(j, k));
  return acc.value();
}

inline double cherry_density(const StepGraphon& w) {
  const int m = w.parts();
  KahanSum acc;
  for (int i = 0; i < m; ++i) {
    double row = 0.0;
    for (int j = 0; j < m; ++j) row += w.measure(j) * w.value(i, j);
    acc.add(w.measure(i) * row * row);
  }
  return acc.value();
}

inline double edge_density(const StepGraphon& w) {
  KahanSum acc;
  for (int i = 0; i < w.parts(); ++i)
    for (int j = 0; j < w.parts(); ++j)
      acc.add(w.measure(i) * w.measure(j) * w.value(i, j));
  return acc.value();
}

// E[ I_p(W) ] over the unit square (no 1/2 factor)
inline double mean_relative_entropy(const StepGraphon& w, double p) {
  KahanSum acc;
  for (int i = 0; i < w.parts(); ++i)
    for (int j = 0; j < w.parts(); ++j)
      acc.add(w.measure(i) * w.measure(j) * relative_entropy(w.value(i, j), p));
  return acc.value();
}

// E[ W^d ] for integer d >= 1
inline double moment(const StepGraphon& w, int d) {
  require(d >= 1, "moment: exponent must be >= 1");
  KahanSum acc;
  for (int i = 0; i < w.parts(); ++i)
    for (int j = 0; j < w.parts(); ++j)
      acc.add(w.measure(i) * w.measure(j) * std::pow(w.value(i, j), d));
  return acc.value();
}

struct GraphonStats {
  double triangle;
  double cherry;
  double mean;
  double entropy_mean;  // E[I_p(W)]
};

inline GraphonStats graphon_stats(const StepGraphon& w, double p) {
  return {triangle_density(w), cherry_density(w), edge_density(w),
          mean_relative_entropy(w, p)};
}

inline double hom_density(const SubgraphPattern& h, const StepGraphon& w) {
  return detail::hom_density_dispatch(h, w.values(), w.measures());
}

// Excess densities of U = W - p >= 0:
//   t(W) - p^3 = t(U) + 3 p s(U) + 3 p^2 E[U], reported as the dimensionless
//   contributions delta_i with t(U) = delta1 p^3, s(U) = delta2 p^2,
//   E[U] = delta3 p.
struct ExcessDecomposition {
  double triangle_excess;  // t(W) - p^3
  double delta1;
  double delta2;
  double delta3;
};

inline ExcessDecomposition decompose_excess(const StepGraphon& w, double p) {
  require(p > 0.0 && p < 1.0, "decompose_excess: p must lie in (0, 1)");
  const int m = w.parts();
  Eigen::MatrixXd u = w.values().array() - p;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      require(u(i, j) >= -1e-12, "decompose_excess: W must dominate p");
  StepGraphon wu(w.measures(), u.cwiseMax(0.0));
  const double tu = triangle_density(wu);
  const double su = cherry_density(wu);
  const double eu = edge_density(wu);
  return {tu + 3.0 * p * su + 3.0 * p * p * eu, tu / (p * p * p), su / (p * p),
          eu / p};
}

// Slack of t(U) <= (E[U^2])^{3/2}; nonnegative for symmetric U >= 0.
inline double cauchy_schwarz_slack(const StepGraphon& u) {
  return std::pow(moment(u, 2), 1.5) - triangle_density(u);
}

// Slack of t(F, U) <= (E[U^d])^{e(F)/d}, valid when d >= max degree of F.
inline double holder_slack(const SubgraphPattern& f, const StepGraphon& u, int d) {
  require(d >= f.max_degree(), "holder_slack: d must be >= max degree of F");
  return std::pow(moment(u, d), static_cast<double>(f.edge_count()) / d) -
         hom_density(f, u);
}

}  // namespace tailvar
