#include "mimic/rollout.hpp"

#include <cmath>
#include <stdexcept>

namespace mimic {

namespace {

constexpr std::uint64_t kActionStream = 0xac710;

Trajectory run_episode(Env& env, const MlpPolicy& policy, const VectorXd& params,
                       std::uint64_t episode_seed) {
  const EnvSpec& spec = env.spec();
  if (spec.action_space.kind != ActionSpace::Kind::Discrete ||
      policy.config().head != PolicyConfig::Head::Categorical)
    throw std::invalid_argument("rollouts require a discrete environment and categorical policy");
  if (policy.config().obs_dim != spec.obs_dim ||
      policy.config().action_dim != spec.action_space.n)
    throw std::invalid_argument("policy shape does not match the environment");

  Rng action_rng = make_rng(split_seed(episode_seed, kActionStream));
  std::vector<VectorXd> observations;
  std::vector<int> actions;
  std::vector<double> costs, log_probs;
  observations.reserve(spec.horizon_cap);

  VectorXd obs = env.reset(episode_seed);
  while (true) {
    MlpPolicy::Sample sampled = policy.sample(params, obs, action_rng);
    StepResult step = env.step(sampled.discrete);
    observations.push_back(obs);
    actions.push_back(sampled.discrete);
    log_probs.push_back(sampled.log_prob);
    costs.push_back(step.cost);
    if (step.done) break;
    obs = step.observation;
  }

  Trajectory traj;
  const int length = static_cast<int>(actions.size());
  traj.observations.resize(spec.obs_dim, length);
  traj.env_costs.resize(length);
  traj.log_probs.resize(length);
  for (int t = 0; t < length; ++t) {
    traj.observations.col(t) = observations[t];
    traj.env_costs(t) = costs[t];
    traj.log_probs(t) = log_probs[t];
  }
  traj.actions = std::move(actions);
  traj.eval_costs = traj.env_costs;
  traj.seed = episode_seed;
  return traj;
}

}  // namespace

int RolloutBatch::total_steps() const {
  int total = 0;
  for (const Trajectory& traj : trajectories) total += traj.length();
  return total;
}

MatrixXd RolloutBatch::stacked_observations() const {
  if (trajectories.empty()) throw std::logic_error("empty rollout batch");
  MatrixXd out(trajectories.front().observations.rows(), total_steps());
  int col = 0;
  for (const Trajectory& traj : trajectories) {
    out.middleCols(col, traj.length()) = traj.observations;
    col += traj.length();
  }
  return out;
}

std::vector<int> RolloutBatch::stacked_actions() const {
  std::vector<int> out;
  out.reserve(total_steps());
  for (const Trajectory& traj : trajectories)
    out.insert(out.end(), traj.actions.begin(), traj.actions.end());
  return out;
}

VectorXd RolloutBatch::stacked_log_probs() const {
  VectorXd out(total_steps());
  int at = 0;
  for (const Trajectory& traj : trajectories) {
    out.segment(at, traj.length()) = traj.log_probs;
    at += traj.length();
  }
  return out;
}

VectorXd RolloutBatch::stacked_eval_costs() const {
  VectorXd out(total_steps());
  int at = 0;
  for (const Trajectory& traj : trajectories) {
    out.segment(at, traj.length()) = traj.eval_costs;
    at += traj.length();
  }
  return out;
}

VectorXd RolloutBatch::stacked_discounts(double gamma) const {
  VectorXd out(total_steps());
  int at = 0;
  for (const Trajectory& traj : trajectories) {
    double w = 1.0;
    for (int t = 0; t < traj.length(); ++t, w *= gamma) out(at++) = w;
  }
  return out;
}

double RolloutBatch::mean_env_return() const {
  if (trajectories.empty()) throw std::logic_error("empty rollout batch");
  double total = 0.0;
  for (const Trajectory& traj : trajectories) total += traj.env_return();
  return total / static_cast<double>(trajectories.size());
}

RolloutBatch collect_episodes(Env& env, const MlpPolicy& policy, const VectorXd& params,
                              int n_episodes, std::uint64_t seed) {
  if (n_episodes <= 0) throw std::invalid_argument("episode count must be positive");
  RolloutBatch batch;
  batch.trajectories.reserve(n_episodes);
  for (int i = 0; i < n_episodes; ++i)
    batch.trajectories.push_back(run_episode(env, policy, params, split_seed(seed, i)));
  return batch;
}

RolloutBatch collect_pairs(Env& env, const MlpPolicy& policy, const VectorXd& params,
                           int min_pairs, std::uint64_t seed) {
  if (min_pairs <= 0) throw std::invalid_argument("pair budget must be positive");
  RolloutBatch batch;
  int episode = 0;
  while (batch.total_steps() < min_pairs)
    batch.trajectories.push_back(run_episode(env, policy, params, split_seed(seed, episode++)));
  return batch;
}

}  // namespace mimic
