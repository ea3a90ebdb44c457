#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace mimic {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Tolerance for probability inputs (rows must sum to 1 this tightly).
inline constexpr double kProbTol = 1e-12;
/// Tolerance for derived quantities (occupancy mass, Bellman flow).
inline constexpr double kDerivedTol = 1e-9;

/// Finite MDP with dense dynamics. transition[a](s, s') = P(s' | s, a).
struct TabularMdp {
  int n_states = 0;
  int n_actions = 0;
  std::vector<MatrixXd> transition;   // one S x S row-stochastic matrix per action
  VectorXd start_dist;                // S, sums to 1
  double discount = 0.0;              // gamma in (0, 1)
  std::optional<MatrixXd> true_cost;  // S x A

  /// Throws std::invalid_argument if shapes or stochasticity constraints fail.
  void validate() const;
};

/// Unnormalized discounted state-action visitation mass.
/// A valid measure is nonnegative, has total mass 1/(1-gamma), and satisfies
/// the Bellman flow constraints sum_a rho(s,a) = p0(s) + gamma sum_{s',a} P(s|s',a) rho(s',a).
struct OccupancyMeasure {
  MatrixXd rho;  // S x A

  double mass() const { return rho.sum(); }
  VectorXd state_marginal() const { return rho.rowwise().sum(); }
};

/// Row-stochastic tabular policy.
struct TabularPolicy {
  MatrixXd probs;  // S x A, rows sum to 1

  void validate() const;
  static TabularPolicy uniform(int n_states, int n_actions);
};

/// State visitation d = p0 + gamma P_pi^T d solved exactly by dense LU,
/// then rho(s,a) = d(s) pi(a|s). Throws std::runtime_error if the solve
/// residual exceeds 1e-8 (cannot happen for gamma < 1 and valid inputs).
OccupancyMeasure occupancy_measure(const TabularMdp& mdp, const TabularPolicy& policy);

/// pi_rho(a|s) = rho(s,a) / sum_a' rho(s,a'). Zero-mass states get a uniform
/// row (the state is unreachable, any stochastic row is consistent).
/// Throws std::invalid_argument on negative entries.
TabularPolicy policy_from_occupancy(const OccupancyMeasure& rho);

/// Inner product sum_{s,a} rho(s,a) c(s,a) = discounted expected cost.
double expected_cost(const OccupancyMeasure& rho, const MatrixXd& cost);

/// Discounted causal entropy H(pi) = sum_{s,a} rho_pi(s,a) (-log pi(a|s)).
double causal_entropy_policy(const TabularMdp& mdp, const TabularPolicy& policy);

/// Entropy as a function of the measure alone:
/// Hbar(rho) = -sum_{s,a} rho(s,a) log(rho(s,a) / sum_a' rho(s,a')), 0 log 0 = 0.
double causal_entropy_occupancy(const OccupancyMeasure& rho);

/// Lagrangian -Hbar(rho) + sum_{s,a}(rho - rho_E) c. Pass rho_E = 0 for the
/// plain entropy-regularized objective.
double lagrangian_value(const OccupancyMeasure& rho, const MatrixXd& cost,
                        const OccupancyMeasure& rho_E);

/// Max-norm violation of the Bellman flow constraints; 0 for exact measures.
double bellman_flow_residual(const TabularMdp& mdp, const OccupancyMeasure& rho);

}  // namespace mimic
