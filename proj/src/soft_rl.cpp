#include "mimic/soft_rl.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "mimic/numeric.hpp"

namespace mimic {

namespace {

// V(s) = -log sum_a exp(-Q(s,a)), stabilized around m = min_a Q(s,a).
VectorXd soft_backup(const MatrixXd& q) {
  VectorXd v(q.rows());
  for (int s = 0; s < q.rows(); ++s) {
    const double m = q.row(s).minCoeff();
    v(s) = m - std::log((m - q.row(s).array()).exp().sum());
  }
  return v;
}

MatrixXd q_from_v(const TabularMdp& mdp, const MatrixXd& cost, const VectorXd& v) {
  MatrixXd q = cost;
  for (int a = 0; a < mdp.n_actions; ++a) q.col(a) += mdp.discount * (mdp.transition[a] * v);
  return q;
}

void check_cost_shape(const TabularMdp& mdp, const MatrixXd& cost) {
  if (cost.rows() != mdp.n_states || cost.cols() != mdp.n_actions)
    throw std::invalid_argument("value iteration: cost table shape mismatch");
}

}  // namespace

SoftSolution soft_value_iteration(const TabularMdp& mdp, const MatrixXd& cost, double tol,
                                  int max_iters, const std::optional<VectorXd>& v_init) {
  check_cost_shape(mdp, cost);
  if (tol <= 0.0) throw std::invalid_argument("soft_value_iteration: tol must be positive");

  VectorXd v = v_init ? *v_init : VectorXd::Zero(mdp.n_states);
  double residual = kInf;
  for (int it = 0; it < max_iters; ++it) {
    const VectorXd v_next = soft_backup(q_from_v(mdp, cost, v));
    residual = (v_next - v).lpNorm<Eigen::Infinity>();
    v = v_next;
    if (residual <= tol) {
      SoftSolution sol;
      sol.q_values = q_from_v(mdp, cost, v);
      sol.v_values = soft_backup(sol.q_values);
      sol.policy.probs = ((sol.v_values.replicate(1, mdp.n_actions) - sol.q_values).array().exp());
      for (int s = 0; s < mdp.n_states; ++s) sol.policy.probs.row(s) /= sol.policy.probs.row(s).sum();
      sol.residual = residual;
      return sol;
    }
  }
  throw std::runtime_error("soft_value_iteration: no convergence after " +
                           std::to_string(max_iters) + " iterations, residual " +
                           std::to_string(residual));
}

double exact_policy_objective(const TabularMdp& mdp, const TabularPolicy& policy,
                              const MatrixXd& cost) {
  const OccupancyMeasure occ = occupancy_measure(mdp, policy);
  return -causal_entropy_policy(mdp, policy) + expected_cost(occ, cost);
}

HardSolution hard_value_iteration(const TabularMdp& mdp, const MatrixXd& cost, double tol,
                                  int max_iters) {
  check_cost_shape(mdp, cost);
  if (tol <= 0.0) throw std::invalid_argument("hard_value_iteration: tol must be positive");

  VectorXd v = VectorXd::Zero(mdp.n_states);
  double residual = kInf;
  for (int it = 0; it < max_iters; ++it) {
    const VectorXd v_next = q_from_v(mdp, cost, v).rowwise().minCoeff();
    residual = (v_next - v).lpNorm<Eigen::Infinity>();
    v = v_next;
    if (residual <= tol) {
      HardSolution sol;
      sol.q_values = q_from_v(mdp, cost, v);
      sol.v_values = sol.q_values.rowwise().minCoeff();
      sol.policy.probs = MatrixXd::Zero(mdp.n_states, mdp.n_actions);
      for (int s = 0; s < mdp.n_states; ++s) {
        int best = 0;
        sol.q_values.row(s).minCoeff(&best);
        sol.policy.probs(s, best) = 1.0;
      }
      sol.residual = residual;
      return sol;
    }
  }
  throw std::runtime_error("hard_value_iteration: no convergence after " +
                           std::to_string(max_iters) + " iterations, residual " +
                           std::to_string(residual));
}

}  // namespace mimic
