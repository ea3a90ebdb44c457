// Stochastic policies backed by a tanh MLP. Two heads: categorical logits for
// discrete actions and a diagonal Gaussian whose state-independent log-stds
// live at the tail of the parameter vector.
#pragma once

#include <cstdint>
#include <vector>

#include "mimic/mlp.hpp"
#include "mimic/rng.hpp"

namespace mimic {

struct PolicyConfig {
  enum class Head { Categorical, Gaussian };
  Head head = Head::Categorical;
  int obs_dim = 0;
  int action_dim = 0;
  std::vector<int> hidden = {64, 64};
};

// one batch of actions; exactly one member is used depending on the head
struct ActionBatch {
  std::vector<int> discrete;
  MatrixXd continuous;  // action_dim x B
};

class MlpPolicy {
 public:
  explicit MlpPolicy(PolicyConfig config);

  const PolicyConfig& config() const { return config_; }
  const Mlp& net() const { return net_; }
  int n_params() const { return n_params_; }

  VectorXd init_params(std::uint64_t seed) const;

  struct Sample {
    int discrete = -1;
    VectorXd continuous;
    double log_prob = 0.0;
  };
  Sample sample(const VectorXd& params, const VectorXd& obs, Rng& rng) const;

  VectorXd log_probs(const VectorXd& params, const MatrixXd& obs, const ActionBatch& actions) const;

  // categorical head only: action probabilities, one column per observation
  MatrixXd action_probabilities(const VectorXd& params, const MatrixXd& obs) const;

  // sum_t weights[t] * d log pi(a_t | s_t) / d params, via one reverse pass
  VectorXd score_gradient(const VectorXd& params, const MatrixXd& obs, const ActionBatch& actions,
                          const VectorXd& weights) const;

  double mean_kl(const VectorXd& params_old, const VectorXd& params_new, const MatrixXd& obs) const;

  // metric-weighted product: average over the batch of F(s) v under the
  // current policy, the Gauss-Newton form of the mean-KL Hessian
  VectorXd fisher_vector_product(const VectorXd& params, const MatrixXd& obs,
                                 const VectorXd& v) const;

  double mean_entropy(const VectorXd& params, const MatrixXd& obs) const;

 private:
  void check_actions(const ActionBatch& actions, Eigen::Index batch) const;

  PolicyConfig config_;
  Mlp net_;
  int n_params_ = 0;
};

}  // namespace mimic
