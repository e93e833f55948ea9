#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace tailvar {

// The constraint set of an instance is empty (or a construction cannot be
// calibrated at the requested parameters).
class infeasible_error : public std::domain_error {
 public:
  explicit infeasible_error(const std::string& what) : std::domain_error(what) {}
};

// A computation would exceed a documented budget (contraction width, part
// count, enumeration size, ...).  Distinct from domain errors so callers can
// map it to a dedicated exit code.
class resource_error : public std::runtime_error {
 public:
  explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr double kPi = 3.14159265358979323846;

// Compensated (Kahan) accumulator for long sums of similar-magnitude terms.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - c_;
    const double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

// log(exp(a) + exp(b)) without overflow; tolerates -inf inputs.
inline double log_add_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double m = a > b ? a : b;
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

inline void require(bool cond, const std::string& what) {
  if (!cond) throw std::domain_error(what);
}

}  // namespace tailvar
