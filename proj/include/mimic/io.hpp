// Persistence: JSONL trajectory datasets, JSON policy and MDP snapshots, and
// CSV metric tables. All writers emit deterministic bytes for fixed inputs.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mimic/harness.hpp"
#include "mimic/imitation.hpp"
#include "mimic/mdp.hpp"
#include "mimic/policy.hpp"

namespace mimic::io {

// One trajectory per line:
// {"observations": [[f64,...],...], "actions": [...], "costs": [f64,...], "seed": u64}
// observations holds one vector per step; costs are the environment costs.
void save_dataset(const std::string& path, const ExpertDataset& data);

// Loaded trajectories carry zero log-probs (the sampling policy is not stored)
// and eval costs equal to the stored costs. source is set to the path.
ExpertDataset load_dataset(const std::string& path);

struct SavedPolicy {
  PolicyConfig config;
  VectorXd params;
};

void save_policy(const std::string& path, const PolicyConfig& config, const VectorXd& params);
SavedPolicy load_policy(const std::string& path);

void save_mdp(const std::string& path, const TabularMdp& mdp);
TabularMdp load_mdp(const std::string& path);

// header: iter,true_return,disc_loss,mean_kl,entropy
void save_metrics_csv(const std::string& path, const std::vector<IterationRecord>& metrics);

// two-column table under the given header names
void save_curve_csv(const std::string& path, const std::string& index_name,
                    const std::string& value_name,
                    const std::vector<std::pair<int, double>>& curve);

// header: algorithm,n_trajectories,n_seeds,raw_mean,raw_std,scaled_score
void save_scores_csv(const std::string& path, const std::vector<ScoreRecord>& scores);
std::vector<ScoreRecord> load_scores_csv(const std::string& path);

// JSON sweep configuration; absent keys keep the RunConfig defaults
RunConfig parse_run_config(const std::string& path);

}  // namespace mimic::io
