#include "mimic/policy.hpp"

#include <cmath>
#include <stdexcept>

#include "mimic/numeric.hpp"

namespace mimic {

namespace {

constexpr double kHalfLog2Pi = 0.9189385332046727;  // log(2*pi)/2

// column-wise log softmax
MatrixXd log_softmax(const MatrixXd& logits) {
  MatrixXd out(logits.rows(), logits.cols());
  for (Eigen::Index j = 0; j < logits.cols(); ++j) {
    out.col(j) = logits.col(j).array() - logsumexp(logits.col(j));
  }
  return out;
}

}  // namespace

MlpPolicy::MlpPolicy(PolicyConfig config)
    : config_(std::move(config)),
      net_(MlpSpec{config_.obs_dim, config_.hidden, config_.action_dim}) {
  if (config_.obs_dim <= 0 || config_.action_dim <= 0)
    throw std::invalid_argument("policy dimensions must be positive");
  n_params_ = net_.n_params() +
              (config_.head == PolicyConfig::Head::Gaussian ? config_.action_dim : 0);
}

VectorXd MlpPolicy::init_params(std::uint64_t seed) const {
  VectorXd params = VectorXd::Zero(n_params_);
  params.head(net_.n_params()) = net_.init_params(seed);
  // Gaussian log-stds start at zero, i.e. unit standard deviation
  return params;
}

void MlpPolicy::check_actions(const ActionBatch& actions, Eigen::Index batch) const {
  if (config_.head == PolicyConfig::Head::Categorical) {
    if (static_cast<Eigen::Index>(actions.discrete.size()) != batch)
      throw std::invalid_argument("action batch size mismatch");
    for (int a : actions.discrete)
      if (a < 0 || a >= config_.action_dim) throw std::invalid_argument("action out of range");
  } else {
    if (actions.continuous.rows() != config_.action_dim || actions.continuous.cols() != batch)
      throw std::invalid_argument("action batch shape mismatch");
  }
}

MlpPolicy::Sample MlpPolicy::sample(const VectorXd& params, const VectorXd& obs, Rng& rng) const {
  Mlp::Cache cache = net_.forward(params.head(net_.n_params()), obs);
  Sample out;
  if (config_.head == PolicyConfig::Head::Categorical) {
    VectorXd logp = (cache.output.col(0).array() - logsumexp(cache.output.col(0))).matrix();
    const double u = uniform01(rng);
    double acc = 0.0;
    int a = config_.action_dim - 1;
    for (int i = 0; i < config_.action_dim; ++i) {
      acc += std::exp(logp(i));
      if (u <= acc) {
        a = i;
        break;
      }
    }
    out.discrete = a;
    out.log_prob = logp(a);
  } else {
    const VectorXd mean = cache.output.col(0);
    const VectorXd log_std = params.tail(config_.action_dim);
    out.continuous.resize(config_.action_dim);
    out.log_prob = 0.0;
    for (int i = 0; i < config_.action_dim; ++i) {
      const double sigma = std::exp(log_std(i));
      const double z = gaussian(rng);
      out.continuous(i) = mean(i) + sigma * z;
      out.log_prob += -log_std(i) - kHalfLog2Pi - 0.5 * z * z;
    }
  }
  return out;
}

VectorXd MlpPolicy::log_probs(const VectorXd& params, const MatrixXd& obs,
                              const ActionBatch& actions) const {
  Mlp::Cache cache = net_.forward(params.head(net_.n_params()), obs);
  const Eigen::Index batch = obs.cols();
  check_actions(actions, batch);
  VectorXd out(batch);
  if (config_.head == PolicyConfig::Head::Categorical) {
    MatrixXd logp = log_softmax(cache.output);
    for (Eigen::Index t = 0; t < batch; ++t) out(t) = logp(actions.discrete[t], t);
  } else {
    const VectorXd log_std = params.tail(config_.action_dim);
    const VectorXd inv_var = (-2.0 * log_std.array()).exp();
    for (Eigen::Index t = 0; t < batch; ++t) {
      const VectorXd diff = actions.continuous.col(t) - cache.output.col(t);
      out(t) = -log_std.sum() - config_.action_dim * kHalfLog2Pi -
               0.5 * diff.array().square().matrix().dot(inv_var);
    }
  }
  return out;
}

MatrixXd MlpPolicy::action_probabilities(const VectorXd& params, const MatrixXd& obs) const {
  if (config_.head != PolicyConfig::Head::Categorical)
    throw std::logic_error("action probabilities are only defined for the categorical head");
  Mlp::Cache cache = net_.forward(params.head(net_.n_params()), obs);
  return log_softmax(cache.output).array().exp().matrix();
}

VectorXd MlpPolicy::score_gradient(const VectorXd& params, const MatrixXd& obs,
                                   const ActionBatch& actions, const VectorXd& weights) const {
  Mlp::Cache cache = net_.forward(params.head(net_.n_params()), obs);
  const Eigen::Index batch = obs.cols();
  check_actions(actions, batch);
  if (weights.size() != batch) throw std::invalid_argument("weight batch size mismatch");
  VectorXd grad = VectorXd::Zero(n_params_);
  if (config_.head == PolicyConfig::Head::Categorical) {
    MatrixXd probs = log_softmax(cache.output).array().exp().matrix();
    MatrixXd cot = -probs;
    for (Eigen::Index t = 0; t < batch; ++t) cot(actions.discrete[t], t) += 1.0;
    cot.array().rowwise() *= weights.transpose().array();
    grad.head(net_.n_params()) = net_.vjp(params.head(net_.n_params()), cache, cot);
  } else {
    const VectorXd log_std = params.tail(config_.action_dim);
    const VectorXd inv_var = (-2.0 * log_std.array()).exp();
    MatrixXd z2 = MatrixXd(config_.action_dim, batch);
    MatrixXd cot(config_.action_dim, batch);
    for (Eigen::Index t = 0; t < batch; ++t) {
      const VectorXd diff = actions.continuous.col(t) - cache.output.col(t);
      cot.col(t) = weights(t) * diff.cwiseProduct(inv_var);
      z2.col(t) = diff.array().square().matrix().cwiseProduct(inv_var);
    }
    grad.head(net_.n_params()) = net_.vjp(params.head(net_.n_params()), cache, cot);
    grad.tail(config_.action_dim) = (z2.array() - 1.0).matrix() * weights;
  }
  return grad;
}

double MlpPolicy::mean_kl(const VectorXd& params_old, const VectorXd& params_new,
                          const MatrixXd& obs) const {
  Mlp::Cache cache_old = net_.forward(params_old.head(net_.n_params()), obs);
  Mlp::Cache cache_new = net_.forward(params_new.head(net_.n_params()), obs);
  const Eigen::Index batch = obs.cols();
  double total = 0.0;
  if (config_.head == PolicyConfig::Head::Categorical) {
    MatrixXd lp_old = log_softmax(cache_old.output);
    MatrixXd lp_new = log_softmax(cache_new.output);
    total = (lp_old.array().exp() * (lp_old - lp_new).array()).sum();
  } else {
    const VectorXd ls_old = params_old.tail(config_.action_dim);
    const VectorXd ls_new = params_new.tail(config_.action_dim);
    const VectorXd var_old = (2.0 * ls_old.array()).exp();
    const VectorXd inv_var_new = (-2.0 * ls_new.array()).exp();
    for (Eigen::Index t = 0; t < batch; ++t) {
      const VectorXd dmean = cache_new.output.col(t) - cache_old.output.col(t);
      total += (ls_new - ls_old).sum() +
               0.5 * (var_old + dmean.array().square().matrix()).dot(inv_var_new) -
               0.5 * config_.action_dim;
    }
  }
  return total / static_cast<double>(batch);
}

VectorXd MlpPolicy::fisher_vector_product(const VectorXd& params, const MatrixXd& obs,
                                          const VectorXd& v) const {
  if (v.size() != n_params_) throw std::invalid_argument("fisher product size mismatch");
  Mlp::Cache cache = net_.forward(params.head(net_.n_params()), obs);
  const double batch = static_cast<double>(obs.cols());
  MatrixXd tangent_out = net_.jvp(params.head(net_.n_params()), cache, v.head(net_.n_params()));
  VectorXd out = VectorXd::Zero(n_params_);
  if (config_.head == PolicyConfig::Head::Categorical) {
    // distribution metric diag(p) - p p^T applied to the logit tangent
    MatrixXd probs = log_softmax(cache.output).array().exp().matrix();
    MatrixXd cot = probs.cwiseProduct(tangent_out);
    VectorXd dots = (probs.cwiseProduct(tangent_out)).colwise().sum();
    cot.noalias() -= probs * dots.asDiagonal();
    out.head(net_.n_params()) = net_.vjp(params.head(net_.n_params()), cache, cot) / batch;
  } else {
    // mean block diag(1/sigma^2), log-std block 2 I, no cross terms
    const VectorXd inv_var = (-2.0 * params.tail(config_.action_dim).array()).exp();
    MatrixXd cot = inv_var.asDiagonal() * tangent_out;
    out.head(net_.n_params()) = net_.vjp(params.head(net_.n_params()), cache, cot) / batch;
    out.tail(config_.action_dim) = 2.0 * v.tail(config_.action_dim);
  }
  return out;
}

double MlpPolicy::mean_entropy(const VectorXd& params, const MatrixXd& obs) const {
  Mlp::Cache cache = net_.forward(params.head(net_.n_params()), obs);
  if (config_.head == PolicyConfig::Head::Categorical) {
    MatrixXd lp = log_softmax(cache.output);
    return -(lp.array().exp() * lp.array()).sum() / static_cast<double>(obs.cols());
  }
  return params.tail(config_.action_dim).sum() + config_.action_dim * (kHalfLog2Pi + 0.5);
}

}  // namespace mimic
