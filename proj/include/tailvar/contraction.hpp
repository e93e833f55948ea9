#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "tailvar/common.hpp"
#include "tailvar/pattern.hpp"

namespace tailvar::detail {

// Homomorphism densities t(H, W) = sum over maps V(H) -> [m] of
// prod_v mu(phi(v)) * prod_{ab in E(H)} w(phi(a), phi(b)), evaluated by
// variable elimination over the edge factors.  The elimination order is the
// greedy min-scope order, which is deterministic and optimal for the tiny
// patterns in scope (k <= 8).

struct Factor {
  std::vector<int> vars;      // sorted pattern-vertex ids
  std::vector<double> table;  // row-major over vars, each of size m
};

constexpr double kContractionBudget = 1e9;

inline double ipow_cost(int m, int arity) {
  double c = 1.0;
  for (int i = 0; i < arity; ++i) c *= m;
  return c;
}

// Multiply all factors touching `v`, sum `v` out against the measure, and
// push the resulting factor.  `m` is the number of states per variable.
inline void eliminate_variable(std::vector<Factor>& factors, int v,
                               const Eigen::VectorXd& mu) {
  const int m = static_cast<int>(mu.size());
  std::vector<Factor> touching;
  std::vector<Factor> rest;
  std::vector<int> scope;
  for (auto& f : factors) {
    if (std::find(f.vars.begin(), f.vars.end(), v) != f.vars.end()) {
      for (int x : f.vars)
        if (x != v) scope.push_back(x);
      touching.push_back(std::move(f));
    } else {
      rest.push_back(std::move(f));
    }
  }
  std::sort(scope.begin(), scope.end());
  scope.erase(std::unique(scope.begin(), scope.end()), scope.end());

  const int s = static_cast<int>(scope.size());
  Factor out;
  out.vars = scope;
  out.table.assign(static_cast<size_t>(std::llround(ipow_cost(m, s))), 0.0);

  std::vector<int> assign(s, 0);
  std::vector<int> full_assign;  // values for scope + v, resolved per factor
  for (size_t idx = 0; idx < out.table.size(); ++idx) {
    // decode idx into assign (row-major, scope order)
    size_t rem = idx;
    for (int i = s - 1; i >= 0; --i) {
      assign[i] = static_cast<int>(rem % m);
      rem /= m;
    }
    KahanSum acc;
    for (int xv = 0; xv < m; ++xv) {
      double prod = mu[xv];
      for (const auto& f : touching) {
        size_t fidx = 0;
        for (int var : f.vars) {
          int val;
          if (var == v) {
            val = xv;
          } else {
            int pos = static_cast<int>(
                std::lower_bound(scope.begin(), scope.end(), var) - scope.begin());
            val = assign[pos];
          }
          fidx = fidx * m + static_cast<size_t>(val);
        }
        prod *= f.table[fidx];
      }
      acc.add(prod);
    }
    out.table[idx] = acc.value();
  }
  rest.push_back(std::move(out));
  factors = std::move(rest);
}

// Greedy next variable: among `remaining`, the one whose elimination scope is
// smallest (ties to the lowest id).  Returns the scope size including v.
inline int pick_variable(const std::vector<Factor>& factors,
                         const std::vector<int>& remaining, int* scope_size) {
  int best = -1, best_scope = 1 << 20;
  for (int v : remaining) {
    std::vector<int> scope{v};
    for (const auto& f : factors)
      if (std::find(f.vars.begin(), f.vars.end(), v) != f.vars.end())
        for (int x : f.vars) scope.push_back(x);
    std::sort(scope.begin(), scope.end());
    scope.erase(std::unique(scope.begin(), scope.end()), scope.end());
    int s = static_cast<int>(scope.size());
    if (s < best_scope) {
      best_scope = s;
      best = v;
    }
  }
  *scope_size = best_scope;
  return best;
}

// Simulate the greedy order and add up the work; used to enforce the budget
// before any table is allocated.
inline double contraction_cost(const SubgraphPattern& h, int m,
                               const std::vector<int>& pinned) {
  std::vector<std::vector<int>> scopes;
  for (auto [a, b] : h.edges()) scopes.push_back({a, b});
  std::vector<int> remaining;
  for (int v = 0; v < h.k(); ++v)
    if (std::find(pinned.begin(), pinned.end(), v) == pinned.end())
      remaining.push_back(v);
  double total = 0.0;
  while (!remaining.empty()) {
    int best = -1, best_scope = 1 << 20;
    for (int v : remaining) {
      std::vector<int> scope{v};
      for (const auto& sc : scopes)
        if (std::find(sc.begin(), sc.end(), v) != sc.end())
          for (int x : sc) scope.push_back(x);
      std::sort(scope.begin(), scope.end());
      scope.erase(std::unique(scope.begin(), scope.end()), scope.end());
      if (static_cast<int>(scope.size()) < best_scope) {
        best_scope = static_cast<int>(scope.size());
        best = v;
      }
    }
    total += ipow_cost(m, best_scope);
    // apply the elimination to the scope structure
    std::vector<int> merged;
    std::vector<std::vector<int>> next;
    for (auto& sc : scopes) {
      if (std::find(sc.begin(), sc.end(), best) != sc.end()) {
        for (int x : sc)
          if (x != best) merged.push_back(x);
      } else {
        next.push_back(std::move(sc));
      }
    }
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    next.push_back(std::move(merged));
    scopes = std::move(next);
    remaining.erase(std::find(remaining.begin(), remaining.end(), best));
  }
  return total;
}

// Core driver: eliminate every non-pinned variable.  With no pins the result
// is the scalar density; with pins {a, b} it is the m x m table
// T[x, y] = sum over maps with phi(a) = x, phi(b) = y of
//           prod_{v != a,b} mu(phi(v)) * prod_{edges} w  (pin measures excluded).
inline std::vector<Factor> contract(const SubgraphPattern& h,
                                    const Eigen::MatrixXd& w,
                                    const Eigen::VectorXd& mu,
                                    const std::vector<int>& pinned) {
  const int m = static_cast<int>(mu.size());
  if (contraction_cost(h, m, pinned) > kContractionBudget)
    throw resource_error("hom_density: contraction cost exceeds budget");

  std::vector<Factor> factors;
  for (auto [a, b] : h.edges()) {
    Factor f;
    f.vars = {a, b};
    f.table.resize(static_cast<size_t>(m) * m);
    for (int x = 0; x < m; ++x)
      for (int y = 0; y < m; ++y)
        f.table[static_cast<size_t>(x) * m + y] = w(x, y);
    factors.push_back(std::move(f));
  }

  std::vector<int> remaining;
  for (int v = 0; v < h.k(); ++v)
    if (std::find(pinned.begin(), pinned.end(), v) == pinned.end())
      remaining.push_back(v);

  while (!remaining.empty()) {
    int scope_size = 0;
    int v = pick_variable(factors, remaining, &scope_size);
    eliminate_variable(factors, v, mu);
    remaining.erase(std::find(remaining.begin(), remaining.end(), v));
  }
  return factors;
}

inline double hom_density_contraction(const SubgraphPattern& h,
                                      const Eigen::MatrixXd& w,
                                      const Eigen::VectorXd& mu) {
  auto factors = contract(h, w, mu, {});
  // all remaining factors are scalars
  double out = 1.0;
  for (const auto& f : factors) {
    require(f.vars.empty(), "contraction: non-scalar factor survived");
    out *= f.table.at(0);
  }
  return out;
}

// Straight nested-loop evaluation; reference path for small patterns.
inline double hom_density_direct(const SubgraphPattern& h,
                                 const Eigen::MatrixXd& w,
                                 const Eigen::VectorXd& mu) {
  const int m = static_cast<int>(mu.size());
  const int k = h.k();
  if (ipow_cost(m, k) > kContractionBudget)
    throw resource_error("hom_density: direct cost exceeds budget");
  std::vector<int> phi(k, 0);
  KahanSum acc;
  for (;;) {
    double prod = 1.0;
    for (int v = 0; v < k; ++v) prod *= mu[phi[v]];
    for (auto [a, b] : h.edges()) {
      prod *= w(phi[a], phi[b]);
      if (prod == 0.0) break;
    }
    acc.add(prod);
    int v = k - 1;
    while (v >= 0 && ++phi[v] == m) phi[v--] = 0;
    if (v < 0) break;
  }
  return acc.value();
}

inline double hom_density_dispatch(const SubgraphPattern& h,
                                   const Eigen::MatrixXd& w,
                                   const Eigen::VectorXd& mu) {
  const int m = static_cast<int>(mu.size());
  if (h.k() <= 5 && ipow_cost(m, h.k()) <= 2e7)
    return hom_density_direct(h, w, mu);
  return hom_density_contraction(h, w, mu);
}

// d t(H, .) evaluated at w: D(u, v) = sum_{edges (a,b)} (T_ab[u,v] + T_ab[v,u])
// for u != v, and D(u, u) = sum_{edges} T_ab[u,u]; the measure weights of the
// pinned pair are folded in here.
inline Eigen::MatrixXd hom_gradient(const SubgraphPattern& h,
                                    const Eigen::MatrixXd& w,
                                    const Eigen::VectorXd& mu) {
  const int m = static_cast<int>(mu.size());
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(m, m);
  for (auto [a, b] : h.edges()) {
    std::vector<std::pair<int, int>> rest;
    for (auto ed : h.edges())
      if (ed != std::make_pair(a, b)) rest.push_back(ed);
    SubgraphPattern hm(h.k(), std::move(rest));
    auto factors = contract(hm, w, mu, {a, b});
    // join survivors into T over (a, b)
    Eigen::MatrixXd t = Eigen::MatrixXd::Ones(m, m);
    double scalar = 1.0;
    for (const auto& f : factors) {
      if (f.vars.empty()) {
        scalar *= f.table.at(0);
      } else if (f.vars.size() == 1) {
        for (int x = 0; x < m; ++x)
          for (int y = 0; y < m; ++y)
            t(x, y) *= f.table[static_cast<size_t>(f.vars[0] == a ? x : y)];
      } else {
        require(f.vars == std::vector<int>({std::min(a, b), std::max(a, b)}),
                "contraction: unexpected factor scope");
        const bool a_first = f.vars[0] == a;
        for (int x = 0; x < m; ++x)
          for (int y = 0; y < m; ++y)
            t(x, y) *= a_first ? f.table[static_cast<size_t>(x) * m + y]
                               : f.table[static_cast<size_t>(y) * m + x];
      }
    }
    for (int x = 0; x < m; ++x)
      for (int y = 0; y < m; ++y) {
        const double val = scalar * mu[x] * mu[y] * t(x, y);
        grad(x, y) += val;  // T_ab[x,y] contributes to the (x,y) slot
      }
  }
  // symmetrize off-diagonal: D(u,v) <- T[u,v] + T[v,u], diagonal stays
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m, m);
  for (int u = 0; u < m; ++u)
    for (int v = 0; v < m; ++v)
      out(u, v) = (u == v) ? grad(u, u) : grad(u, v) + grad(v, u);
  return out;
}

}  // namespace tailvar::detail
