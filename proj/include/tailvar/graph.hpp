#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <vector>

#include "tailvar/common.hpp"
#include "tailvar/contraction.hpp"
#include "tailvar/entropy.hpp"
#include "tailvar/pattern.hpp"

namespace tailvar {

inline std::int64_t pair_count(int n) {
  return static_cast<std::int64_t>(n) * (n - 1) / 2;
}

// index of the pair (i, j), i < j, in row-major upper-triangle order
inline std::int64_t pair_index(int i, int j, int n) {
  return static_cast<std::int64_t>(i) * n - static_cast<std::int64_t>(i) * (i + 1) / 2 +
         (j - i - 1);
}

// An edge-weighted undirected graph: symmetric matrix with zero diagonal and
// entries in [0, 1].  This is the optimization variable of the whole library,
// so mutation goes through a validating setter.
class WeightedGraph {
 public:
  explicit WeightedGraph(int n) : n_(n), w_(Eigen::MatrixXd::Zero(n, n)) {
    require(n >= 1, "WeightedGraph: n must be positive");
  }

  static WeightedGraph constant(int n, double value) {
    WeightedGraph g(n);
    require(value >= 0.0 && value <= 1.0, "WeightedGraph: weight outside [0, 1]");
    g.w_.setConstant(value);
    g.w_.diagonal().setZero();
    return g;
  }

  static WeightedGraph from_upper(int n, const std::vector<double>& upper) {
    WeightedGraph g(n);
    require(static_cast<std::int64_t>(upper.size()) == pair_count(n),
            "WeightedGraph: upper triangle has wrong length");
    std::int64_t idx = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) g.set_weight(i, j, upper[idx++]);
    return g;
  }

  static WeightedGraph from_matrix(const Eigen::MatrixXd& m) {
    require(m.rows() == m.cols() && m.rows() >= 1, "WeightedGraph: matrix not square");
    WeightedGraph g(static_cast<int>(m.rows()));
    for (int i = 0; i < g.n_; ++i) {
      require(m(i, i) == 0.0, "WeightedGraph: diagonal must be zero");
      for (int j = i + 1; j < g.n_; ++j) {
        require(m(i, j) == m(j, i), "WeightedGraph: matrix not symmetric");
        g.set_weight(i, j, m(i, j));
      }
    }
    return g;
  }

  int n() const { return n_; }
  double weight(int i, int j) const { return w_(i, j); }
  const Eigen::MatrixXd& matrix() const { return w_; }

  void set_weight(int i, int j, double v) {
    require(i >= 0 && j >= 0 && i < n_ && j < n_ && i != j,
            "WeightedGraph: pair out of range");
    require(v >= 0.0 && v <= 1.0, "WeightedGraph: weight outside [0, 1]");
    w_(i, j) = v;
    w_(j, i) = v;
  }

  std::vector<double> upper_triangle() const {
    std::vector<double> out;
    out.reserve(static_cast<size_t>(pair_count(n_)));
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j) out.push_back(w_(i, j));
    return out;
  }

 private:
  int n_;
  Eigen::MatrixXd w_;
};

// t(K3, G) = trace(A^3) / n^3, the (non-injective) triangle density
inline double triangle_density(const WeightedGraph& g) {
  const auto& a = g.matrix();
  const double n = g.n();
  return (a * a).cwiseProduct(a).sum() / (n * n * n);
}

// trace(A^3) / (n)_3: normalized by injective maps only
inline double injective_triangle_density(const WeightedGraph& g) {
  const double n = g.n();
  require(g.n() >= 3, "injective_triangle_density: needs n >= 3");
  const auto& a = g.matrix();
  return (a * a).cwiseProduct(a).sum() / (n * (n - 1) * (n - 2));
}

// s(G) = n^{-3} * sum_i (row degree_i)^2, the cherry (2-path) density
inline double cherry_density(const WeightedGraph& g) {
  const auto& a = g.matrix();
  const double n = g.n();
  return a.rowwise().sum().squaredNorm() / (n * n * n);
}

// mean edge weight over ordered pairs including the (zero) diagonal
inline double edge_density(const WeightedGraph& g) {
  const double n = g.n();
  return g.matrix().sum() / (n * n);
}

// I_p(G) = sum over unordered pairs of the relative entropy of the weight
inline double total_relative_entropy(const WeightedGraph& g, double p) {
  KahanSum acc;
  for (int i = 0; i < g.n(); ++i)
    for (int j = i + 1; j < g.n(); ++j)
      acc.add(relative_entropy(g.weight(i, j), p));
  return acc.value();
}

inline Eigen::VectorXd uniform_measure(int n) {
  return Eigen::VectorXd::Constant(n, 1.0 / n);
}

// t(H, G) with the uniform vertex measure.  The triangle goes through the
// trace identity; everything else through the contraction engine.
inline double hom_density(const SubgraphPattern& h, const WeightedGraph& g) {
  if (h == patterns::triangle()) return triangle_density(g);
  return detail::hom_density_dispatch(h, g.matrix(), uniform_measure(g.n()));
}

// Gradient of t(H, G) with respect to the unordered pair weights, returned as
// a symmetric matrix with zero diagonal.
inline Eigen::MatrixXd hom_density_gradient(const SubgraphPattern& h,
                                            const WeightedGraph& g) {
  Eigen::MatrixXd d = detail::hom_gradient(h, g.matrix(), uniform_measure(g.n()));
  d.diagonal().setZero();
  return d;
}

// Gradient of t(K3, G): 6 n^{-3} (A^2)_{ij} off the diagonal
inline Eigen::MatrixXd triangle_density_gradient(const WeightedGraph& g) {
  const auto& a = g.matrix();
  const double n = g.n();
  Eigen::MatrixXd d = 6.0 / (n * n * n) * (a * a);
  d.diagonal().setZero();
  return d;
}

}  // namespace tailvar
