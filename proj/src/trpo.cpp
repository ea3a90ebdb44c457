#include "mimic/trpo.hpp"

#include <cmath>
#include <stdexcept>

namespace mimic {

VectorXd conjugate_gradient(const std::function<VectorXd(const VectorXd&)>& matvec,
                            const VectorXd& b, int iters, double tol) {
  VectorXd x = VectorXd::Zero(b.size());
  VectorXd r = b;
  VectorXd p = b;
  double rs = r.squaredNorm();
  for (int i = 0; i < iters && rs > tol * tol; ++i) {
    VectorXd ap = matvec(p);
    const double pap = p.dot(ap);
    if (pap <= 0.0) break;  // matrix not positive along p; keep the current iterate
    const double alpha = rs / pap;
    x += alpha * p;
    r -= alpha * ap;
    const double rs_next = r.squaredNorm();
    p = r + (rs_next / rs) * p;
    rs = rs_next;
  }
  return x;
}

VectorXd natural_gradient(const MlpPolicy& policy, const VectorXd& params, const MatrixXd& obs,
                          const VectorXd& grad, double damping, int cg_iters) {
  auto matvec = [&](const VectorXd& v) -> VectorXd {
    return policy.fisher_vector_product(params, obs, v) + damping * v;
  };
  return conjugate_gradient(matvec, grad, cg_iters);
}

TrpoResult trpo_step(const MlpPolicy& policy, const VectorXd& params, const MatrixXd& obs,
                     const ActionBatch& actions, const VectorXd& weights,
                     const TrpoConfig& config) {
  TrpoResult result;
  result.params = params;

  const VectorXd logp_old = policy.log_probs(params, obs, actions);
  auto surrogate = [&](const VectorXd& candidate) {
    VectorXd logp = policy.log_probs(candidate, obs, actions);
    return weights.dot((logp - logp_old).array().exp().matrix());
  };

  VectorXd grad = policy.score_gradient(params, obs, actions, weights);
  if (!grad.allFinite()) throw std::runtime_error("non-finite policy gradient");
  if (grad.lpNorm<Eigen::Infinity>() < 1e-12) return result;

  auto matvec = [&](const VectorXd& v) -> VectorXd {
    return policy.fisher_vector_product(params, obs, v) + config.cg_damping * v;
  };
  VectorXd direction = conjugate_gradient(matvec, grad, config.cg_iters);
  const double dhd = direction.dot(matvec(direction));
  if (dhd <= 0.0 || !std::isfinite(dhd)) return result;

  VectorXd full_step = std::sqrt(2.0 * config.max_kl / dhd) * direction;
  const double base = surrogate(params);  // equals weights.sum()

  double scale = 1.0;
  for (int k = 0; k < config.max_backtracks; ++k, scale *= 0.5) {
    VectorXd candidate = params + scale * full_step;
    const double gain = surrogate(candidate) - base;
    const double kl = policy.mean_kl(params, candidate, obs);
    if (std::isfinite(gain) && gain > 0.0 && kl <= config.max_kl) {
      result.params = std::move(candidate);
      result.accepted = true;
      result.mean_kl = kl;
      result.improvement = gain;
      result.backtracks = k;
      return result;
    }
  }
  return result;  // every scale failed; parameters unchanged
}

}  // namespace mimic
