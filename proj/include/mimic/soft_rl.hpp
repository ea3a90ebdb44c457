// Entropy-regularized optimal control on tabular MDPs:
//   minimize over policies  -H(pi) + E_pi[c].
#pragma once

#include <optional>

#include "mimic/mdp.hpp"

namespace mimic {

struct SoftSolution {
  MatrixXd q_values;     // [S][A]
  VectorXd v_values;     // [S], V(s) = -log sum_a exp(-Q(s,a))
  TabularPolicy policy;  // pi(a|s) = exp(V(s) - Q(s,a))
  double residual = 0.0;
};

// Iterates Q <- c + gamma P V, V(s) <- -log sum_a exp(-Q(s,a)) until the
// sup-norm change of V drops to tol. The backup is a gamma-contraction, so
// the fixed point is unique and the returned policy minimizes -H(pi)+E_pi[c].
// v_init warm-starts the iteration (zeros otherwise).
SoftSolution soft_value_iteration(const TabularMdp& mdp, const MatrixXd& cost,
                                  double tol = 1e-10, int max_iters = 100000,
                                  const std::optional<VectorXd>& v_init = std::nullopt);

// -H(pi) + E_pi[c], both terms exact via occupancy_measure.
double exact_policy_objective(const TabularMdp& mdp, const TabularPolicy& policy,
                              const MatrixXd& cost);

// Plain hard-min value iteration with a greedy deterministic policy. Serves
// as the linear-minimization oracle over the occupancy polytope.
struct HardSolution {
  MatrixXd q_values;
  VectorXd v_values;
  TabularPolicy policy;
  double residual = 0.0;
};

HardSolution hard_value_iteration(const TabularMdp& mdp, const MatrixXd& cost,
                                  double tol = 1e-10, int max_iters = 100000);

}  // namespace mimic
