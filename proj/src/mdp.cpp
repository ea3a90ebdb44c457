#include "mimic/mdp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "mimic/numeric.hpp"

namespace mimic {

void TabularMdp::validate() const {
  if (n_states <= 0 || n_actions <= 0)
    throw std::invalid_argument("TabularMdp: state and action counts must be positive");
  if (!(discount > 0.0 && discount < 1.0))
    throw std::invalid_argument("TabularMdp: discount must lie in (0, 1)");
  if (static_cast<int>(transition.size()) != n_actions)
    throw std::invalid_argument("TabularMdp: need one transition matrix per action");
  for (int a = 0; a < n_actions; ++a) {
    const MatrixXd& P = transition[a];
    if (P.rows() != n_states || P.cols() != n_states)
      throw std::invalid_argument("TabularMdp: transition matrix shape mismatch");
    if ((P.array() < 0.0).any())
      throw std::invalid_argument("TabularMdp: negative transition probability");
    for (int s = 0; s < n_states; ++s) {
      if (std::abs(P.row(s).sum() - 1.0) > kProbTol)
        throw std::invalid_argument("TabularMdp: transition row does not sum to 1 (state " +
                                    std::to_string(s) + ", action " + std::to_string(a) + ")");
    }
  }
  if (start_dist.size() != n_states)
    throw std::invalid_argument("TabularMdp: start distribution size mismatch");
  if ((start_dist.array() < 0.0).any())
    throw std::invalid_argument("TabularMdp: negative start probability");
  if (std::abs(start_dist.sum() - 1.0) > kProbTol)
    throw std::invalid_argument("TabularMdp: start distribution does not sum to 1");
  if (true_cost && (true_cost->rows() != n_states || true_cost->cols() != n_actions))
    throw std::invalid_argument("TabularMdp: true cost table shape mismatch");
}

void TabularPolicy::validate() const {
  if ((probs.array() < 0.0).any())
    throw std::invalid_argument("TabularPolicy: negative action probability");
  for (int s = 0; s < probs.rows(); ++s) {
    if (std::abs(probs.row(s).sum() - 1.0) > kProbTol)
      throw std::invalid_argument("TabularPolicy: row " + std::to_string(s) +
                                  " does not sum to 1");
  }
}

TabularPolicy TabularPolicy::uniform(int n_states, int n_actions) {
  return {MatrixXd::Constant(n_states, n_actions, 1.0 / n_actions)};
}

OccupancyMeasure occupancy_measure(const TabularMdp& mdp, const TabularPolicy& policy) {
  const int S = mdp.n_states, A = mdp.n_actions;
  if (policy.probs.rows() != S || policy.probs.cols() != A)
    throw std::invalid_argument("occupancy_measure: policy shape mismatch");

  // P_pi(s, s') = sum_a pi(a|s) P(s'|s,a)
  MatrixXd P_pi = MatrixXd::Zero(S, S);
  for (int a = 0; a < A; ++a)
    P_pi += policy.probs.col(a).asDiagonal() * mdp.transition[a];

  const MatrixXd M = MatrixXd::Identity(S, S) - mdp.discount * P_pi.transpose();
  const VectorXd d = Eigen::PartialPivLU<MatrixXd>(M).solve(mdp.start_dist);
  const double residual = (M * d - mdp.start_dist).lpNorm<Eigen::Infinity>();
  if (residual > 1e-8)
    throw std::runtime_error("occupancy_measure: linear solve residual " +
                             std::to_string(residual));

  OccupancyMeasure out;
  out.rho = d.asDiagonal() * policy.probs;
  return out;
}

TabularPolicy policy_from_occupancy(const OccupancyMeasure& occ) {
  if ((occ.rho.array() < 0.0).any())
    throw std::invalid_argument("policy_from_occupancy: negative occupancy entry");
  const int S = static_cast<int>(occ.rho.rows());
  const int A = static_cast<int>(occ.rho.cols());
  TabularPolicy policy;
  policy.probs.resize(S, A);
  for (int s = 0; s < S; ++s) {
    const double state_mass = occ.rho.row(s).sum();
    if (state_mass > 0.0)
      policy.probs.row(s) = occ.rho.row(s) / state_mass;
    else
      policy.probs.row(s).setConstant(1.0 / A);
  }
  return policy;
}

double expected_cost(const OccupancyMeasure& occ, const MatrixXd& cost) {
  if (cost.rows() != occ.rho.rows() || cost.cols() != occ.rho.cols())
    throw std::invalid_argument("expected_cost: cost table shape mismatch");
  return (occ.rho.array() * cost.array()).sum();
}

double causal_entropy_policy(const TabularMdp& mdp, const TabularPolicy& policy) {
  const OccupancyMeasure occ = occupancy_measure(mdp, policy);
  double h = 0.0;
  for (int s = 0; s < mdp.n_states; ++s)
    for (int a = 0; a < mdp.n_actions; ++a) {
      const double r = occ.rho(s, a);
      if (r > 0.0) h -= r * std::log(policy.probs(s, a));
    }
  return h;
}

double causal_entropy_occupancy(const OccupancyMeasure& occ) {
  double h = 0.0;
  for (int s = 0; s < occ.rho.rows(); ++s) {
    const double state_mass = occ.rho.row(s).sum();
    if (state_mass <= 0.0) continue;
    for (int a = 0; a < occ.rho.cols(); ++a) h -= xlogxy(occ.rho(s, a), state_mass);
  }
  return h;
}

double lagrangian_value(const OccupancyMeasure& rho, const MatrixXd& cost,
                        const OccupancyMeasure& rho_E) {
  if (cost.rows() != rho.rho.rows() || cost.cols() != rho.rho.cols() ||
      rho_E.rho.rows() != rho.rho.rows() || rho_E.rho.cols() != rho.rho.cols())
    throw std::invalid_argument("lagrangian_value: shape mismatch");
  return -causal_entropy_occupancy(rho) +
         ((rho.rho - rho_E.rho).array() * cost.array()).sum();
}

double bellman_flow_residual(const TabularMdp& mdp, const OccupancyMeasure& occ) {
  VectorXd inflow = mdp.start_dist;
  for (int a = 0; a < mdp.n_actions; ++a)
    inflow += mdp.discount * mdp.transition[a].transpose() * occ.rho.col(a);
  const VectorXd outflow = occ.rho.rowwise().sum();
  return (outflow - inflow).lpNorm<Eigen::Infinity>();
}

}  // namespace mimic
