// Sampled policy-gradient machinery: score-function estimators with discounted
// cost-to-go weights, causal-entropy gradients, generalized advantage
// estimation, a small value-function fitter, and an Adam optimizer.
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "mimic/policy.hpp"
#include "mimic/rollout.hpp"

namespace mimic {

// from-visit discounted sums: out[t] = sum_{k>=t} gamma^(k-t) costs[k]
VectorXd discounted_cost_to_go(const VectorXd& costs, double gamma);

// stacked cost-to-go over a batch, using eval costs
VectorXd batch_cost_to_go(const RolloutBatch& batch, double gamma);

// mean over episodes of sum_t gamma^t q_hat[t] grad log pi(a_t | s_t);
// q_hat is stacked per step
VectorXd reinforce_gradient(const MlpPolicy& policy, const VectorXd& params,
                            const RolloutBatch& batch, const VectorXd& q_hat, double gamma);

// gradient of the discounted causal entropy: score weights are from-visit
// discounted sums of -log pi over the sampled actions
VectorXd entropy_gradient(const MlpPolicy& policy, const VectorXd& params,
                          const RolloutBatch& batch, double gamma);

// advantages for one episode under cost minimization, bootstrapping V = 0 past
// the recorded steps; values has one entry per step
VectorXd gae_advantages(const VectorXd& costs, const VectorXd& values, double gamma,
                        double lambda);

struct ValueFitResult {
  VectorXd params;
  std::vector<double> losses;  // one entry per epoch, non-increasing
};

// full-batch gradient descent with backtracking; never accepts a step that
// raises the fit loss
ValueFitResult fit_value_fn(const Mlp& value_net, const VectorXd& params, const MatrixXd& obs,
                            const VectorXd& targets, int epochs, double learning_rate);

class Adam {
 public:
  Adam(int dim, double learning_rate, double beta1 = 0.9, double beta2 = 0.999,
       double epsilon = 1e-8);
  void step(VectorXd& params, const VectorXd& grad);
  // same update with the stored rate replaced for this step only
  void step(VectorXd& params, const VectorXd& grad, double learning_rate);

 private:
  double lr_, beta1_, beta2_, epsilon_;
  int t_ = 0;
  VectorXd m_, v_;
};

}  // namespace mimic
