// Max-causal-entropy inverse RL as dual ascent over cost tables, and the
// RL-of-recovered-cost pipeline that certifies exact occupancy matching.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mimic/mdp.hpp"
#include "mimic/regularizers.hpp"
#include "mimic/soft_rl.hpp"

namespace mimic {

struct DualState {
  MatrixXd cost;
  int iterate = 0;
  double primal_gap = 0.0;  // ||rho_{pi(c)} - rho_E||_1
  std::vector<std::pair<int, double>> history;
};

struct DualDivergence : std::runtime_error {
  DualDivergence(const std::string& what, std::vector<std::pair<int, double>> hist)
      : std::runtime_error(what), history(std::move(hist)) {}
  std::vector<std::pair<int, double>> history;
};

// Repeats: solve the entropy-regularized control problem for the current
// cost, then c += step_size * (rho_{pi(c)} - rho_E - dpsi(c)). Stops early
// once primal_gap <= stop_gap (0 disables). Raises DualDivergence when the
// gap exceeds 10x its initial value.
DualState irl_dual_ascent(const TabularMdp& mdp, const OccupancyMeasure& rho_E,
                          const Regularizer& psi, double step_size, int iters,
                          double stop_gap = 0.0);

// default step size 0.5*(1-gamma)
double default_dual_step(const TabularMdp& mdp);

// Dual ascent with constant psi followed by one exact RL solve of the
// recovered cost. Throws if the final L1 gap exceeds tol_scale/(1-gamma).
TabularPolicy rl_after_irl(const TabularMdp& mdp, const OccupancyMeasure& rho_E,
                           int iters = 5000, double step_size = -1.0,
                           double tol_scale = 1e-3);

struct SaddleReport {
  double max_cost_violation = 0.0;       // max over c probes of L(rho_A,c) - L(rho_A,c~)
  double max_occupancy_violation = 0.0;  // max over rho probes of L(rho_A,c~) - L(rho,c~)
  double max_violation = 0.0;
};

// Probes the saddle inequalities L(rho_A,c) <= L(rho_A,c~) <= L(rho,c~) with
// L(rho,c) = -H(rho) + sum (rho-rho_E) c - psi(c). Occupancy probes come from
// random policies (always feasible); cost probes are bounded perturbations of
// c~ within [-probe_radius, probe_radius].
SaddleReport saddle_check(const TabularMdp& mdp, const OccupancyMeasure& rho_A,
                          const MatrixXd& c_tilde, const OccupancyMeasure& rho_E,
                          const Regularizer& psi, int n_probes, uint64_t seed = 0,
                          double probe_radius = 1.0);

// Empirical occupancy from a step-weighted visit count table with additive
// smoothing, rescaled to total mass 1/(1-gamma).
OccupancyMeasure empirical_occupancy(const MatrixXd& weighted_counts, double discount,
                                     double smoothing = 1e-8);

}  // namespace mimic
