#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "tailvar/common.hpp"
#include "tailvar/entropy.hpp"
#include "tailvar/graph.hpp"
#include "tailvar/theory.hpp"

namespace tailvar {

// A partition A_1,...,A_m of the vertex set with its block density matrix.
// Off-diagonal d_ij is the mean weight over the |A_i||A_j| cross pairs;
// diagonal d_ii is the mean over the C(|A_i|,2) unordered pairs inside A_i
// (0 for singleton parts), matching the binomial event the entropy bound
// counts.
struct VertexPartition {
  std::vector<std::vector<int>> parts;
  Eigen::MatrixXd densities;

  int part_count() const { return static_cast<int>(parts.size()); }
  std::int64_t vertex_count() const {
    std::int64_t total = 0;
    for (const auto& a : parts) total += static_cast<std::int64_t>(a.size());
    return total;
  }
};

namespace detail {

inline void check_partition_cover(const std::vector<std::vector<int>>& parts,
                                  int n) {
  std::vector<int> seen(static_cast<size_t>(n), 0);
  for (const auto& a : parts) {
    require(!a.empty(), "VertexPartition: parts must be nonempty");
    for (int v : a) {
      require(v >= 0 && v < n, "VertexPartition: vertex out of range");
      require(seen[static_cast<size_t>(v)] == 0,
              "VertexPartition: parts must be disjoint");
      seen[static_cast<size_t>(v)] = 1;
    }
  }
  for (int v = 0; v < n; ++v)
    require(seen[static_cast<size_t>(v)] == 1,
            "VertexPartition: parts must cover every vertex");
}

}  // namespace detail

inline VertexPartition build_partition(const WeightedGraph& g,
                                       std::vector<std::vector<int>> parts) {
  detail::check_partition_cover(parts, g.n());
  const int m = static_cast<int>(parts.size());
  VertexPartition p;
  p.densities = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      KahanSum acc;
      double pairs = 0.0;
      if (i == j) {
        const auto& a = parts[static_cast<size_t>(i)];
        for (size_t x = 0; x < a.size(); ++x)
          for (size_t y = x + 1; y < a.size(); ++y)
            acc.add(g.weight(a[x], a[y]));
        pairs = static_cast<double>(a.size()) * (a.size() - 1) / 2.0;
      } else {
        for (int u : parts[static_cast<size_t>(i)])
          for (int v : parts[static_cast<size_t>(j)]) acc.add(g.weight(u, v));
        pairs = static_cast<double>(parts[static_cast<size_t>(i)].size()) *
                static_cast<double>(parts[static_cast<size_t>(j)].size());
      }
      const double d = pairs > 0.0 ? acc.value() / pairs : 0.0;
      p.densities(i, j) = d;
      p.densities(j, i) = d;
    }
  }
  p.parts = std::move(parts);
  return p;
}

inline VertexPartition discrete_partition(const WeightedGraph& g) {
  std::vector<std::vector<int>> parts;
  parts.reserve(static_cast<size_t>(g.n()));
  for (int v = 0; v < g.n(); ++v) parts.push_back({v});
  return build_partition(g, std::move(parts));
}

// The stepping operator: every entry replaced by its ordered full-block mean
// (diagonal cells included), which is the averaging the cut-deviation
// argument contracts against.
inline Eigen::MatrixXd stepping_matrix(const WeightedGraph& g,
                                       const std::vector<std::vector<int>>& parts) {
  const int n = g.n();
  detail::check_partition_cover(parts, n);
  Eigen::MatrixXd out(n, n);
  const auto& a = g.matrix();
  for (size_t i = 0; i < parts.size(); ++i)
    for (size_t j = 0; j < parts.size(); ++j) {
      KahanSum acc;
      for (int u : parts[i])
        for (int v : parts[j]) acc.add(a(u, v));
      const double mean =
          acc.value() / (static_cast<double>(parts[i].size()) *
                         static_cast<double>(parts[j].size()));
      for (int u : parts[i])
        for (int v : parts[j]) out(u, v) = mean;
    }
  return out;
}

// A witnessed lower bound on max_{S,T} |1_S' D 1_T| plus an upper bound.
// Exhaustive (exact) for n <= 20 via Gray-code column sums; above that a
// spectral sign heuristic refined by alternating maximization, with the
// rank-free bound n * sigma_max as the upper estimate.
struct CutDeviation {
  double value = 0.0;
  double upper_bound = 0.0;
  bool exact = false;
  std::vector<int> s;
  std::vector<int> t;
};

namespace detail {

inline double best_t_for_columns(const Eigen::VectorXd& col,
                                 std::vector<int>* t_out) {
  double pos = 0.0, neg = 0.0;
  for (int j = 0; j < col.size(); ++j) {
    if (col[j] > 0.0) pos += col[j];
    if (col[j] < 0.0) neg += col[j];
  }
  const bool take_pos = pos >= -neg;
  if (t_out) {
    t_out->clear();
    for (int j = 0; j < col.size(); ++j)
      if ((take_pos && col[j] > 0.0) || (!take_pos && col[j] < 0.0))
        t_out->push_back(j);
  }
  return std::max(pos, -neg);
}

inline CutDeviation cut_deviation_exact(const Eigen::MatrixXd& d) {
  const int n = static_cast<int>(d.rows());
  CutDeviation best;
  best.exact = true;
  Eigen::VectorXd col = Eigen::VectorXd::Zero(n);
  std::uint32_t members = 0;
  const std::uint32_t total = 1u << n;
  for (std::uint32_t code = 1; code < total; ++code) {
    // gray(code) differs from the previous gray code in exactly one bit
    const std::uint32_t gray = code ^ (code >> 1);
    const std::uint32_t changed = gray ^ members;
    const int v = __builtin_ctz(changed);
    if (gray & (1u << v)) {
      col += d.row(v).transpose();
    } else {
      col -= d.row(v).transpose();
    }
    members = gray;
    const double value = best_t_for_columns(col, nullptr);
    if (value > best.value) {
      best.value = value;
      best.s.clear();
      for (int u = 0; u < n; ++u)
        if (gray & (1u << u)) best.s.push_back(u);
      best_t_for_columns(col, &best.t);
    }
  }
  best.upper_bound = best.value;
  return best;
}

inline CutDeviation cut_deviation_heuristic(const Eigen::MatrixXd& d) {
  const int n = static_cast<int>(d.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(d);
  const Eigen::VectorXd& ev = eig.eigenvalues();
  const double sigma = std::max(std::abs(ev[0]), std::abs(ev[n - 1]));
  const Eigen::VectorXd vec =
      std::abs(ev[0]) >= std::abs(ev[n - 1]) ? eig.eigenvectors().col(0)
                                             : eig.eigenvectors().col(n - 1);
  CutDeviation best;
  best.exact = false;
  best.upper_bound = n * sigma;
  for (int corner = 0; corner < 4; ++corner) {
    Eigen::VectorXd s(n), t(n);
    for (int i = 0; i < n; ++i) {
      s[i] = ((corner & 1) ? vec[i] < 0.0 : vec[i] >= 0.0) ? 1.0 : 0.0;
      t[i] = ((corner & 2) ? vec[i] < 0.0 : vec[i] >= 0.0) ? 1.0 : 0.0;
    }
    double value = std::abs(s.dot(d * t));
    for (int round = 0; round < 50; ++round) {
      // best S given T, then best T given S; each step is exact
      Eigen::VectorXd c = d * t;
      for (int i = 0; i < n; ++i) s[i] = 0.0;
      double pos = 0.0, neg = 0.0;
      for (int i = 0; i < n; ++i) {
        if (c[i] > 0.0) pos += c[i];
        if (c[i] < 0.0) neg += c[i];
      }
      const bool take_pos = pos >= -neg;
      for (int i = 0; i < n; ++i)
        s[i] = ((take_pos && c[i] > 0.0) || (!take_pos && c[i] < 0.0)) ? 1.0 : 0.0;
      Eigen::VectorXd r = d.transpose() * s;
      pos = neg = 0.0;
      for (int i = 0; i < n; ++i) {
        if (r[i] > 0.0) pos += r[i];
        if (r[i] < 0.0) neg += r[i];
      }
      const bool take_pos_t = pos >= -neg;
      for (int i = 0; i < n; ++i)
        t[i] = ((take_pos_t && r[i] > 0.0) || (!take_pos_t && r[i] < 0.0)) ? 1.0
                                                                           : 0.0;
      const double improved = std::abs(s.dot(d * t));
      if (improved <= value + 1e-15) {
        value = std::max(value, improved);
        break;
      }
      value = improved;
    }
    if (value > best.value) {
      best.value = value;
      best.s.clear();
      best.t.clear();
      for (int i = 0; i < n; ++i) {
        if (s[i] > 0.5) best.s.push_back(i);
        if (t[i] > 0.5) best.t.push_back(i);
      }
    }
  }
  return best;
}

}  // namespace detail

inline CutDeviation cut_deviation(const Eigen::MatrixXd& d) {
  require(d.rows() == d.cols() && d.rows() >= 1, "cut_deviation: square input");
  if (d.rows() <= 20) return detail::cut_deviation_exact(d);
  return detail::cut_deviation_heuristic(d);
}

// Frieze-Kannan refinement: while some (S,T) witnesses deviation > eps n^2
// between the graph and its stepping average, split every part by S and T
// membership.  Each genuine witness raises the block energy by more than
// eps^2, so at most ceil(1/eps^2) refinements can occur and the part count
// stays at most 4^{1/eps^2}.
inline VertexPartition weak_regular_partition(const WeightedGraph& g, double eps) {
  require(eps >= 0.25 && eps < 1.0,
          "weak_regular_partition: eps must lie in [0.25, 1)");
  const int n = g.n();
  const double n2 = static_cast<double>(n) * n;
  const double max_parts = std::pow(4.0, 1.0 / (eps * eps));
  const int max_rounds = static_cast<int>(std::ceil(1.0 / (eps * eps)));
  std::vector<std::vector<int>> parts(1);
  for (int v = 0; v < n; ++v) parts[0].push_back(v);
  for (int round = 0; /* bounded below */; ++round) {
    const Eigen::MatrixXd diff = g.matrix() - stepping_matrix(g, parts);
    const CutDeviation dev = cut_deviation(diff);
    if (dev.value <= eps * n2) break;
    if (round >= max_rounds)
      throw resource_error(
          "weak_regular_partition: refinement budget exhausted");
    std::vector<char> in_s(static_cast<size_t>(n), 0),
        in_t(static_cast<size_t>(n), 0);
    for (int v : dev.s) in_s[static_cast<size_t>(v)] = 1;
    for (int v : dev.t) in_t[static_cast<size_t>(v)] = 1;
    std::vector<std::vector<int>> refined;
    for (const auto& part : parts) {
      std::vector<int> cell[4];
      for (int v : part)
        cell[2 * in_s[static_cast<size_t>(v)] + in_t[static_cast<size_t>(v)]]
            .push_back(v);
      for (auto& c : cell)
        if (!c.empty()) refined.push_back(std::move(c));
    }
    if (static_cast<double>(refined.size()) > max_parts)
      throw resource_error("weak_regular_partition: part bound exceeded");
    parts = std::move(refined);
  }
  return build_partition(g, std::move(parts));
}

// Triangle density a partition predicts: n^{-3} sum over ordered part triples
// of |A_i||A_j||A_k| d_ij d_ik d_jk.  The loop structure mirrors
// plain_triangle_density exactly so the discrete partition reproduces it
// bit-for-bit.
inline double reduced_triangle_density(const VertexPartition& p,
                                       const Eigen::MatrixXd& d, int n) {
  const int m = p.part_count();
  require(d.rows() == m && d.cols() == m,
          "reduced_triangle_density: density matrix shape mismatch");
  KahanSum acc;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        const double size = static_cast<double>(p.parts[static_cast<size_t>(i)].size()) *
                            static_cast<double>(p.parts[static_cast<size_t>(j)].size()) *
                            static_cast<double>(p.parts[static_cast<size_t>(k)].size());
        acc.add(size * (d(i, j) * d(i, k) * d(j, k)));
      }
  const double nd = n;
  return acc.value() / (nd * nd * nd);
}

// t(G) by the same triple loop and accumulator as the reduced sum.
inline double plain_triangle_density(const WeightedGraph& g) {
  const int n = g.n();
  const auto& a = g.matrix();
  KahanSum acc;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) acc.add(1.0 * (a(i, j) * a(i, k) * a(j, k)));
  const double nd = n;
  return acc.value() / (nd * nd * nd);
}

inline double reduced_density_error(const WeightedGraph& g,
                                    const VertexPartition& p) {
  require(p.vertex_count() == g.n(), "reduced_density_error: size mismatch");
  return std::abs(plain_triangle_density(g) -
                  reduced_triangle_density(p, p.densities, g.n()));
}

// Block densities floored to the eps-grid (the rounding the union bound
// enumerates over).
inline Eigen::MatrixXd rounded_densities(const VertexPartition& p, double eps) {
  require(eps > 0.0 && eps < 1.0, "rounded_densities: eps must lie in (0, 1)");
  Eigen::MatrixXd out = p.densities;
  for (int i = 0; i < out.rows(); ++i)
    for (int j = 0; j < out.cols(); ++j)
      out(i, j) = std::floor(out(i, j) / eps) * eps;
  return out;
}

// The binomial union-bound exponent for the event that every block reaches
// its target density, plus the blow-up identity check: planting max(d, p) on
// the blocks reproduces the exponent as a graph entropy.
struct PartitionEventBound {
  double exponent = 0.0;  // -I_p^>(A, d); log-probability upper bound
  double blowup_entropy = 0.0;
  double blowup_triangle = 0.0;
  double identity_gap = 0.0;  // |exponent + blowup_entropy|
};

inline PartitionEventBound partition_event_bound(const VertexPartition& p,
                                                 const Eigen::MatrixXd& d_target,
                                                 double edge_p, int n) {
  const int m = p.part_count();
  require(d_target.rows() == m && d_target.cols() == m,
          "partition_event_bound: target matrix shape mismatch");
  require(p.vertex_count() == n, "partition_event_bound: n mismatch");
  require(edge_p > 0.0 && edge_p < 1.0,
          "partition_event_bound: p must lie in (0, 1)");
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      require(d_target(i, j) >= 0.0 && d_target(i, j) <= 1.0,
              "partition_event_bound: targets must lie in [0, 1]");
      require(d_target(i, j) == d_target(j, i),
              "partition_event_bound: targets must be symmetric");
    }
  if (n > 4096)
    throw resource_error("partition_event_bound: blow-up graph too large");
  KahanSum total;
  for (int i = 0; i < m; ++i) {
    const double ai = static_cast<double>(p.parts[static_cast<size_t>(i)].size());
    total.add(ai * (ai - 1) / 2.0 * clipped_entropy(d_target(i, i), edge_p));
    for (int j = i + 1; j < m; ++j) {
      const double aj = static_cast<double>(p.parts[static_cast<size_t>(j)].size());
      total.add(ai * aj * clipped_entropy(d_target(i, j), edge_p));
    }
  }
  PartitionEventBound out;
  out.exponent = -total.value();

  std::vector<int> part_of(static_cast<size_t>(n), -1);
  for (int i = 0; i < m; ++i)
    for (int v : p.parts[static_cast<size_t>(i)]) part_of[static_cast<size_t>(v)] = i;
  WeightedGraph blowup(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      blowup.set_weight(
          u, v,
          std::max(d_target(part_of[static_cast<size_t>(u)],
                            part_of[static_cast<size_t>(v)]),
                   edge_p));
  out.blowup_entropy = total_relative_entropy(blowup, edge_p);
  out.blowup_triangle = triangle_density(blowup);
  out.identity_gap = std::abs(out.exponent + out.blowup_entropy);
  return out;
}

// log P(t >= (1+delta)p^3) <= log R - phi_lower, where phi_lower certifies
// phi(n, p, delta - eta) from below and R = M^n (1/eps)^{M^2} prices the
// union over rounded partition outcomes.
struct TailCertificate {
  double epsilon = 0.0;
  double log_r = 0.0;
  double phi_lower = 0.0;
  double log_bound = 0.0;
  bool vacuous = false;
};

inline TailCertificate tail_certificate(std::int64_t n, double p, double delta,
                                        double eta, double phi_lower) {
  require(eta > 0.0 && eta < delta, "tail_certificate: need 0 < eta < delta");
  require(phi_lower >= 0.0, "tail_certificate: phi_lower must be >= 0");
  const UnionBoundReport ub = union_bound_log_R(n, p, eta);
  TailCertificate c;
  c.epsilon = ub.epsilon;
  c.log_r = ub.log_r;
  c.phi_lower = phi_lower;
  c.log_bound = ub.log_r - phi_lower;
  c.vacuous = c.log_bound >= 0.0;
  return c;
}

// The same certificate one log deeper, with the slowly-decaying schedule
// p = (ln n)^{-1/p_exponent}, eta = (ln n)^{-1/eta_exponent}.  The reported
// exponent_ratio = (log R - phi)/phi tends to -1: the certificate exponent
// is asymptotically -(1 - o(1)) phi.  phi enters at leading order through
// the limiting rate, as the comparison is itself asymptotic.
struct SymbolicTailCertificate {
  double p = 0.0;
  double eta = 0.0;
  double ln_log_r = 0.0;
  double ln_phi = 0.0;
  double exponent_ratio = 0.0;
};

inline SymbolicTailCertificate tail_certificate_symbolic(double ln_n, double delta,
                                                         double p_exponent = 7.0,
                                                         double eta_exponent = 100.0) {
  require(ln_n > 1.0, "tail_certificate_symbolic: ln_n must exceed 1");
  require(p_exponent > 0.0 && eta_exponent > 0.0,
          "tail_certificate_symbolic: exponents must be positive");
  SymbolicTailCertificate out;
  out.p = std::pow(ln_n, -1.0 / p_exponent);
  out.eta = std::pow(ln_n, -1.0 / eta_exponent);
  require(out.eta < delta, "tail_certificate_symbolic: need eta < delta");
  const SymbolicUnionBound ub = union_bound_symbolic(ln_n, out.p, out.eta);
  out.ln_log_r = ub.ln_log_r;
  const double rate = limit_rate(3, delta - out.eta, RegimeLabel::dense_side);
  out.ln_phi = std::log(rate) + 2.0 * ln_n + 2.0 * std::log(out.p) +
               std::log(std::log(1.0 / out.p));
  out.exponent_ratio = std::exp(out.ln_log_r - out.ln_phi) - 1.0;
  return out;
}

}  // namespace tailvar
