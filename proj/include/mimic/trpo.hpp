// Trust-region policy step: natural gradient by conjugate gradient on the
// damped Fisher system, step length scaled to the KL radius, then a halving
// line search that accepts only surrogate improvement within the KL bound.
#pragma once

#include <functional>

#include "mimic/policy.hpp"

namespace mimic {

struct TrpoConfig {
  double max_kl = 0.01;
  int cg_iters = 10;
  double cg_damping = 0.1;
  int max_backtracks = 10;
};

struct TrpoResult {
  VectorXd params;     // updated, or the input parameters when no step was accepted
  bool accepted = false;
  double mean_kl = 0.0;
  double improvement = 0.0;  // surrogate gain of the accepted step
  int backtracks = 0;
};

// solves matvec(x) = b with plain conjugate gradient
VectorXd conjugate_gradient(const std::function<VectorXd(const VectorXd&)>& matvec,
                            const VectorXd& b, int iters, double tol = 1e-10);

// (F + damping I)^-1 grad averaged over the observation batch
VectorXd natural_gradient(const MlpPolicy& policy, const VectorXd& params, const MatrixXd& obs,
                          const VectorXd& grad, double damping, int cg_iters);

// maximizes sum_t weights[t] * pi'(a_t|s_t) / pi(a_t|s_t) over the KL ball;
// callers minimizing cost pass negated advantage weights
TrpoResult trpo_step(const MlpPolicy& policy, const VectorXd& params, const MatrixXd& obs,
                     const ActionBatch& actions, const VectorXd& weights,
                     const TrpoConfig& config = {});

}  // namespace mimic
