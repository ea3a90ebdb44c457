// Episode collection for discrete-action environments. Each episode draws its
// environment seed and its action stream from a per-episode split of the batch
// seed, so a batch is a pure function of (policy params, seed).
#pragma once

#include <cstdint>
#include <vector>

#include "mimic/env.hpp"
#include "mimic/policy.hpp"

namespace mimic {

struct Trajectory {
  MatrixXd observations;  // obs_dim x T, the observation each action saw
  std::vector<int> actions;
  VectorXd env_costs;   // costs as returned by the environment
  VectorXd eval_costs;  // costs the learner optimizes; starts equal to env_costs
  VectorXd log_probs;   // behaviour log-probabilities recorded at sampling time
  std::uint64_t seed = 0;

  int length() const { return static_cast<int>(actions.size()); }
  double env_return() const { return -env_costs.sum(); }  // undiscounted reward total
};

struct RolloutBatch {
  std::vector<Trajectory> trajectories;

  int total_steps() const;
  MatrixXd stacked_observations() const;
  std::vector<int> stacked_actions() const;
  VectorXd stacked_log_probs() const;
  VectorXd stacked_eval_costs() const;
  VectorXd stacked_discounts(double gamma) const;  // gamma^t, t within each episode
  double mean_env_return() const;
};

RolloutBatch collect_episodes(Env& env, const MlpPolicy& policy, const VectorXd& params,
                              int n_episodes, std::uint64_t seed);

// whole episodes until at least min_pairs state-action pairs are gathered
RolloutBatch collect_pairs(Env& env, const MlpPolicy& policy, const VectorXd& params,
                           int min_pairs, std::uint64_t seed);

}  // namespace mimic
