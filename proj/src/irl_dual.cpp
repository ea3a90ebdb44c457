#include "mimic/irl_dual.hpp"

#include <cmath>
#include <random>
#include <string>

#include "mimic/numeric.hpp"
#include "mimic/rng.hpp"

namespace mimic {

double default_dual_step(const TabularMdp& mdp) { return 0.5 * (1.0 - mdp.discount); }

DualState irl_dual_ascent(const TabularMdp& mdp, const OccupancyMeasure& rho_E,
                          const Regularizer& psi, double step_size, int iters,
                          double stop_gap) {
  if (step_size < 0.0) throw std::invalid_argument("irl_dual_ascent: negative step size");
  if (!psi.has_subgradient())
    throw std::invalid_argument("irl_dual_ascent: regularizer lacks a subgradient oracle");

  DualState state;
  state.cost = MatrixXd::Zero(mdp.n_states, mdp.n_actions);
  state.history.reserve(iters + 1);

  std::optional<VectorXd> warm_v;
  double initial_gap = -1.0;
  for (int it = 0; it <= iters; ++it) {
    const SoftSolution sol = soft_value_iteration(mdp, state.cost, 1e-10, 100000, warm_v);
    warm_v = sol.v_values;
    const OccupancyMeasure rho = occupancy_measure(mdp, sol.policy);

    state.iterate = it;
    state.primal_gap = (rho.rho - rho_E.rho).cwiseAbs().sum();
    state.history.emplace_back(it, state.primal_gap);

    if (initial_gap < 0.0) initial_gap = state.primal_gap;
    if (state.primal_gap > 10.0 * initial_gap && state.primal_gap > 1e-9)
      throw DualDivergence("irl_dual_ascent: primal gap diverged to " +
                               std::to_string(state.primal_gap) + " from initial " +
                               std::to_string(initial_gap),
                           state.history);
    if (stop_gap > 0.0 && state.primal_gap <= stop_gap) break;
    if (it == iters) break;

    state.cost += step_size * (rho.rho - rho_E.rho - psi.subgradient(state.cost));
  }
  return state;
}

TabularPolicy rl_after_irl(const TabularMdp& mdp, const OccupancyMeasure& rho_E, int iters,
                           double step_size, double tol_scale) {
  if (step_size < 0.0) step_size = default_dual_step(mdp);
  const double tol = tol_scale / (1.0 - mdp.discount);
  const DualState state =
      irl_dual_ascent(mdp, rho_E, Regularizer::constant(0.0), step_size, iters, tol);
  if (state.primal_gap > tol)
    throw std::runtime_error("rl_after_irl: occupancy gap " + std::to_string(state.primal_gap) +
                             " above tolerance " + std::to_string(tol) + " after " +
                             std::to_string(state.iterate) + " iterations");
  return soft_value_iteration(mdp, state.cost).policy;
}

SaddleReport saddle_check(const TabularMdp& mdp, const OccupancyMeasure& rho_A,
                          const MatrixXd& c_tilde, const OccupancyMeasure& rho_E,
                          const Regularizer& psi, int n_probes, uint64_t seed,
                          double probe_radius) {
  const auto lagr = [&](const OccupancyMeasure& rho, const MatrixXd& c) {
    return lagrangian_value(rho, c, rho_E) - psi.eval(c);
  };
  const double center = lagr(rho_A, c_tilde);

  SaddleReport report;
  std::mt19937_64 rng = make_rng(split_seed(seed, 0x5add1e));
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int probe = 0; probe < n_probes; ++probe) {
    MatrixXd c = c_tilde;
    for (int i = 0; i < c.size(); ++i) c.data()[i] += probe_radius * unit(rng);
    const double value = lagr(rho_A, c);
    if (value != -kInf)  // perturbations that leave psi's domain carry no information
      report.max_cost_violation = std::max(report.max_cost_violation, value - center);

    MatrixXd probs(mdp.n_states, mdp.n_actions);
    for (int s = 0; s < mdp.n_states; ++s) {
      for (int a = 0; a < mdp.n_actions; ++a)
        probs(s, a) = -std::log(uniform01(rng) + 1e-12);
      probs.row(s) /= probs.row(s).sum();
    }
    const OccupancyMeasure rho = occupancy_measure(mdp, TabularPolicy{probs});
    report.max_occupancy_violation =
        std::max(report.max_occupancy_violation, center - lagr(rho, c_tilde));
  }
  report.max_violation = std::max(report.max_cost_violation, report.max_occupancy_violation);
  return report;
}

OccupancyMeasure empirical_occupancy(const MatrixXd& weighted_counts, double discount,
                                     double smoothing) {
  if ((weighted_counts.array() < 0.0).any())
    throw std::invalid_argument("empirical_occupancy: negative counts");
  MatrixXd rho = weighted_counts.array() + smoothing;
  const double mass = rho.sum();
  if (mass <= 0.0) throw std::invalid_argument("empirical_occupancy: no mass");
  rho *= 1.0 / ((1.0 - discount) * mass);
  return {rho};
}

}  // namespace mimic
