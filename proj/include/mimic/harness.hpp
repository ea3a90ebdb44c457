// Experiment orchestration: demonstrator training recipes, dataset sampling,
// evaluation, scaled scoring, sweep execution, and SVG charts.
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mimic/env.hpp"
#include "mimic/imitation.hpp"
#include "mimic/mdp.hpp"
#include "mimic/rollout.hpp"

namespace mimic {

struct EvalStats {
  double mean = 0.0;
  double std_dev = 0.0;  // sample standard deviation, 0 for a single episode
};

// Mean undiscounted environment return over n_episodes fresh episodes.
EvalStats evaluate(Env& env, const MlpPolicy& policy, const VectorXd& params,
                   int n_episodes = 50, std::uint64_t seed = 0);

// n full episodes from the policy; a pure function of (params, seed).
ExpertDataset sample_trajectories(Env& env, const MlpPolicy& policy, const VectorXd& params,
                                  int n, std::uint64_t seed);

// (raw - random_ref) / (expert_ref - random_ref): random maps to 0, expert
// to 1. Throws when the references (nearly) coincide.
double scaled_score(double raw, double random_ref, double expert_ref);

// Linear categorical policy whose logits reproduce a tabular policy exactly
// under one-hot observations.
std::pair<MlpPolicy, VectorXd> lift_tabular_policy(const TabularPolicy& tab);

struct TrainedExpert {
  MlpPolicy policy;
  VectorXd params;
  std::vector<IterationRecord> metrics;  // empty for the exact gridworld recipe
};

// Demonstrator recipes on the true cost: trust-region training for the
// control tasks (mountain car adds potential-based energy shaping during
// training only) and the exact soft-optimal policy for the default
// gridworld. iters <= 0 selects the recipe default.
TrainedExpert train_expert(Env& env, int iters = 0, std::uint64_t seed = 9);

struct ScoreRecord {
  std::string algorithm;
  int n_trajectories = 0;  // 0 for the exact tabular algorithms
  int n_seeds = 0;
  double raw_mean = 0.0;
  double raw_std = 0.0;  // std of the per-seed mean returns
  double scaled = 0.0;
};

struct RunConfig {
  std::string env = "cartpole";
  std::vector<std::string> algorithms;  // bc, fem, gtal, gail, exact-match, tabular-gail
  std::vector<int> dataset_sizes;       // expert trajectory counts for the learners
  std::vector<std::uint64_t> seeds;
  double lambda = 0.0;  // causal entropy bonus for gail and tabular-gail
  int iters = 300;
  int pairs_per_iter = 5000;
  std::vector<int> hidden = {64, 64};
  int expert_iters = 0;       // recipe default when 0
  std::string expert_policy;  // saved policy JSON; empty trains the recipe
  std::string dataset_path;   // fixed JSONL dataset; empty samples per seed
  int eval_episodes = 50;
  std::string out_dir = "runs/experiment";

  void validate() const;
};

struct LearnerOutput {
  MlpPolicy policy;
  VectorXd params;
  std::vector<IterationRecord> metrics;  // adversarial and matching learners
  std::vector<double> val_losses;        // behavioral cloning
};

// Trains one dataset learner (bc, fem, gtal, or gail) with the knobs carried
// by config (iters, pairs_per_iter, lambda, hidden) and environment-matched
// discount and trust-region constants.
LearnerOutput train_learner(Env& env, const std::string& algo, const ExpertDataset& data,
                            const RunConfig& config, std::uint64_t seed);

// Runs algorithms x dataset sizes x seeds with per-cell failure isolation.
// Writes resolved_config.json (config, computed references, expert source),
// per-cell metrics and policies, scores.csv, errors.csv when any cell fails,
// and scores.svg. Returns out_dir. Reruns with identical configs regenerate
// byte-identical CSV files.
std::string run_experiment(const RunConfig& config);

// Standalone SVG: one polyline per algorithm over (trajectory count, scaled
// score), y clipped to [-0.1, 1.1], reference lines at 0 and 1, legend, axes.
void emit_plot(const std::vector<ScoreRecord>& scores, const std::string& path);

}  // namespace mimic
