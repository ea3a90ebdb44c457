#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

namespace mimic {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// log(sum_i exp(x_i)) with max subtraction.
inline double logsumexp(const Eigen::Ref<const Eigen::VectorXd>& x) {
  const double m = x.maxCoeff();
  if (!std::isfinite(m)) return m;
  return m + std::log((x.array() - m).exp().sum());
}

/// log(1 - e^x) for x < 0, stable near both ends.
inline double log1mexp(double x) {
  // switch point -log 2: log(-expm1(x)) near 0, log1p(-exp(x)) otherwise
  if (x >= 0.0) throw std::domain_error("log1mexp: x must be negative");
  return x > -0.6931471805599453 ? std::log(-std::expm1(x)) : std::log1p(-std::exp(x));
}

/// softplus log(1 + e^x) without overflow.
inline double softplus(double x) {
  return x > 30.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

/// x*log(x) with the 0*log(0) = 0 convention.
inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

/// x*log(x/y), 0 when x = 0.
inline double xlogxy(double x, double y) { return x > 0.0 ? x * std::log(x / y) : 0.0; }

struct ScalarMinResult {
  double x = 0.0;
  double value = 0.0;
  int iterations = 0;
};

/// Golden-section minimization of a unimodal f. The bracket [lo, hi] is
/// expanded geometrically from the initial guess until the minimum is interior.
ScalarMinResult golden_section_minimize(const std::function<double(double)>& f, double lo,
                                        double hi, double tol = 1e-10, int max_iters = 400);

}  // namespace mimic
