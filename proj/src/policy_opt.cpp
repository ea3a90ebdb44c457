#include "mimic/policy_opt.hpp"

#include <cmath>
#include <stdexcept>

namespace mimic {

VectorXd discounted_cost_to_go(const VectorXd& costs, double gamma) {
  VectorXd out(costs.size());
  double acc = 0.0;
  for (Eigen::Index t = costs.size() - 1; t >= 0; --t) {
    acc = costs(t) + gamma * acc;
    out(t) = acc;
  }
  return out;
}

VectorXd batch_cost_to_go(const RolloutBatch& batch, double gamma) {
  VectorXd out(batch.total_steps());
  int at = 0;
  for (const Trajectory& traj : batch.trajectories) {
    out.segment(at, traj.length()) = discounted_cost_to_go(traj.eval_costs, gamma);
    at += traj.length();
  }
  return out;
}

VectorXd reinforce_gradient(const MlpPolicy& policy, const VectorXd& params,
                            const RolloutBatch& batch, const VectorXd& q_hat, double gamma) {
  if (q_hat.size() != batch.total_steps())
    throw std::invalid_argument("per-step weights do not match the batch");
  const double n = static_cast<double>(batch.trajectories.size());
  VectorXd weights = batch.stacked_discounts(gamma).cwiseProduct(q_hat) / n;
  ActionBatch actions;
  actions.discrete = batch.stacked_actions();
  return policy.score_gradient(params, batch.stacked_observations(), actions, weights);
}

VectorXd entropy_gradient(const MlpPolicy& policy, const VectorXd& params,
                          const RolloutBatch& batch, double gamma) {
  VectorXd q_log(batch.total_steps());
  int at = 0;
  for (const Trajectory& traj : batch.trajectories) {
    q_log.segment(at, traj.length()) = discounted_cost_to_go(-traj.log_probs, gamma);
    at += traj.length();
  }
  return reinforce_gradient(policy, params, batch, q_log, gamma);
}

VectorXd gae_advantages(const VectorXd& costs, const VectorXd& values, double gamma,
                        double lambda) {
  if (costs.size() != values.size()) throw std::invalid_argument("gae size mismatch");
  const Eigen::Index horizon = costs.size();
  VectorXd advantages(horizon);
  double acc = 0.0;
  for (Eigen::Index t = horizon - 1; t >= 0; --t) {
    const double next_value = t + 1 < horizon ? values(t + 1) : 0.0;
    const double delta = costs(t) + gamma * next_value - values(t);
    acc = delta + gamma * lambda * acc;
    advantages(t) = acc;
  }
  return advantages;
}

ValueFitResult fit_value_fn(const Mlp& value_net, const VectorXd& params, const MatrixXd& obs,
                            const VectorXd& targets, int epochs, double learning_rate) {
  if (value_net.spec().out_dim != 1) throw std::invalid_argument("value net must be scalar");
  if (targets.size() != obs.cols()) throw std::invalid_argument("target batch size mismatch");
  const double batch = static_cast<double>(obs.cols());
  auto loss_and_grad = [&](const VectorXd& p, VectorXd* grad) {
    Mlp::Cache cache = value_net.forward(p, obs);
    VectorXd residual = cache.output.row(0).transpose() - targets;
    if (grad) *grad = value_net.vjp(p, cache, residual.transpose() / batch);
    return 0.5 * residual.squaredNorm() / batch;
  };

  ValueFitResult result;
  result.params = params;
  double lr = learning_rate;
  VectorXd grad;
  double loss = loss_and_grad(result.params, &grad);
  for (int epoch = 0; epoch < epochs; ++epoch) {
    result.losses.push_back(loss);
    bool stepped = false;
    for (int tries = 0; tries < 30; ++tries) {
      VectorXd candidate = result.params - lr * grad;
      const double candidate_loss = loss_and_grad(candidate, nullptr);
      if (candidate_loss <= loss) {
        result.params = std::move(candidate);
        loss = loss_and_grad(result.params, &grad);
        stepped = true;
        break;
      }
      lr *= 0.5;
    }
    if (!stepped) break;  // no admissible step at any tried scale; keep params
  }
  return result;
}

Adam::Adam(int dim, double learning_rate, double beta1, double beta2, double epsilon)
    : lr_(learning_rate), beta1_(beta1), beta2_(beta2), epsilon_(epsilon) {
  if (dim <= 0) throw std::invalid_argument("adam dimension must be positive");
  m_ = VectorXd::Zero(dim);
  v_ = VectorXd::Zero(dim);
}

void Adam::step(VectorXd& params, const VectorXd& grad) { step(params, grad, lr_); }

void Adam::step(VectorXd& params, const VectorXd& grad, double learning_rate) {
  if (params.size() != m_.size() || grad.size() != m_.size())
    throw std::invalid_argument("adam size mismatch");
  if (!grad.allFinite()) throw std::runtime_error("non-finite gradient in adam step");
  ++t_;
  m_ = beta1_ * m_ + (1.0 - beta1_) * grad;
  v_ = beta2_ * v_ + (1.0 - beta2_) * grad.cwiseProduct(grad);
  const double bias1 = 1.0 - std::pow(beta1_, t_);
  const double bias2 = 1.0 - std::pow(beta2_, t_);
  params -= (learning_rate / bias1) *
            m_.cwiseQuotient(((v_ / bias2).cwiseSqrt().array() + epsilon_).matrix());
}

}  // namespace mimic
