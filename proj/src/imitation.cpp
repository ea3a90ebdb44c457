#include "mimic/imitation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mimic/numeric.hpp"

namespace mimic {

namespace {

const double kLogClamp = std::log(kDiscClamp);

double stable_sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log D and log(1 - D) for a logit, with the output clamp folded in; the
// derivative of a clamped branch is zero
struct LogPair {
  double log_d = 0.0;
  double log_1md = 0.0;
  double dlog_d = 0.0;    // d log D / dz
  double dlog_1md = 0.0;  // d log(1 - D) / dz
};

LogPair log_sigmoid_pair(double z) {
  LogPair p;
  p.log_d = -softplus(-z);
  p.log_1md = -softplus(z);
  p.dlog_d = std::exp(p.log_1md);
  p.dlog_1md = -std::exp(p.log_d);
  if (p.log_d < kLogClamp) {
    p.log_d = kLogClamp;
    p.dlog_d = 0.0;
  }
  if (p.log_1md < kLogClamp) {
    p.log_1md = kLogClamp;
    p.dlog_1md = 0.0;
  }
  return p;
}

// discounted visitation weights, normalized to sum to 1 across the side
VectorXd side_weights(const std::vector<Trajectory>& trajectories, double gamma) {
  int total = 0;
  for (const auto& traj : trajectories) total += traj.length();
  VectorXd w(total);
  int offset = 0;
  for (const auto& traj : trajectories) {
    double disc = 1.0;
    for (int t = 0; t < traj.length(); ++t) {
      w(offset + t) = disc;
      disc *= gamma;
    }
    offset += traj.length();
  }
  const double mass = w.sum();
  if (mass <= 0.0) throw std::invalid_argument("discriminator sides need at least one pair");
  return w / mass;
}

MatrixXd stack_observations(const std::vector<Trajectory>& trajectories) {
  RolloutBatch view{trajectories};
  return view.stacked_observations();
}

std::vector<int> stack_actions(const std::vector<Trajectory>& trajectories) {
  RolloutBatch view{trajectories};
  return view.stacked_actions();
}

// objective value and, when grad is non-null, its parameter gradient
double disc_objective_impl(const Discriminator& disc, const VectorXd& params,
                           const RolloutBatch& learner, const ExpertDataset& expert,
                           double gamma, VectorXd* grad) {
  expert.validate(disc.obs_dim());
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::invalid_argument("discriminator objective needs gamma in (0, 1)");
  const MatrixXd learner_in = disc.encode(stack_observations(learner.trajectories),
                                          stack_actions(learner.trajectories));
  const MatrixXd expert_in = disc.encode(stack_observations(expert.trajectories),
                                         stack_actions(expert.trajectories));
  const VectorXd u = side_weights(learner.trajectories, gamma);
  const VectorXd v = side_weights(expert.trajectories, gamma);

  MatrixXd input(learner_in.rows(), learner_in.cols() + expert_in.cols());
  input << learner_in, expert_in;
  const Mlp::Cache cache = disc.net().forward(params, input);

  double value = 0.0;
  MatrixXd cot = MatrixXd::Zero(1, input.cols());
  for (Eigen::Index i = 0; i < learner_in.cols(); ++i) {
    const LogPair p = log_sigmoid_pair(cache.output(0, i));
    value += u(i) * p.log_d;
    cot(0, i) = u(i) * p.dlog_d;
  }
  for (Eigen::Index j = 0; j < expert_in.cols(); ++j) {
    const Eigen::Index col = learner_in.cols() + j;
    const LogPair p = log_sigmoid_pair(cache.output(0, col));
    value += v(j) * p.log_1md;
    cot(0, col) = v(j) * p.dlog_1md;
  }
  if (!std::isfinite(value)) throw std::runtime_error("non-finite discriminator objective");
  if (grad != nullptr) *grad = disc.net().vjp(params, cache, cot);
  return value;
}

struct StepSettings {
  double entropy_weight = 0.0;
  double gamma = 0.0;
  double gae_lambda = 0.0;
  double max_kl = 0.0;
  double value_lr = 0.0;
  int value_epochs = 0;
  int cg_iters = 0;
  double cg_damping = 0.0;
};

struct StepOutcome {
  double true_return = 0.0;
  double mean_kl = 0.0;
  double entropy = 0.0;
};

// One trust-region improvement step on the batch's eval costs: entropy bonus
// as cost shaping, baseline refit on this batch, GAE advantages, TRPO.
StepOutcome policy_step(const MlpPolicy& policy, VectorXd& params, RolloutBatch& batch,
                        const Mlp& value_net, VectorXd& value_params, const StepSettings& s) {
  if (s.entropy_weight > 0.0)
    for (auto& traj : batch.trajectories)
      traj.eval_costs += s.entropy_weight * traj.log_probs;

  const MatrixXd obs = batch.stacked_observations();
  StepOutcome out;
  out.true_return = batch.mean_env_return();
  out.entropy = policy.mean_entropy(params, obs);

  const VectorXd targets = batch_cost_to_go(batch, s.gamma);
  value_params =
      fit_value_fn(value_net, value_params, obs, targets, s.value_epochs, s.value_lr).params;
  const VectorXd weights = surrogate_weights(batch, value_net, value_params, s.gamma, s.gae_lambda);

  ActionBatch actions;
  actions.discrete = batch.stacked_actions();
  TrpoConfig tc;
  tc.max_kl = s.max_kl;
  tc.cg_iters = s.cg_iters;
  tc.cg_damping = s.cg_damping;
  const TrpoResult res = trpo_step(policy, params, obs, actions, weights, tc);
  params = res.params;
  out.mean_kl = res.accepted ? res.mean_kl : 0.0;
  return out;
}

void check_common_config(int iters, int pairs_per_iter, double gamma, double entropy_weight) {
  if (iters <= 0) throw std::invalid_argument("training needs a positive iteration count");
  if (pairs_per_iter <= 0) throw std::invalid_argument("pairs_per_iter must be positive");
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in (0, 1)");
  if (entropy_weight < 0.0) throw std::invalid_argument("entropy_weight must be nonnegative");
}

void check_discrete_env(const Env& env) {
  if (env.spec().action_space.kind != ActionSpace::Kind::Discrete)
    throw std::invalid_argument("imitation training supports discrete-action environments");
}

// Worst-case cost over the hull of the signed basis {+phi, -phi}. Like the
// l2 ball, the signed class can reward a feature as well as penalize it, so
// an episodic learner cannot close the game by terminating early against an
// all-nonnegative basis.
FeatureGapResult signed_hull_max(const VectorXd& e_pi, const VectorXd& e_expert) {
  VectorXd doubled_pi(2 * e_pi.size()), doubled_expert(2 * e_expert.size());
  doubled_pi << e_pi, -e_pi;
  doubled_expert << e_expert, -e_expert;
  const FeatureGapResult doubled = convex_hull_max(doubled_pi, doubled_expert);
  FeatureGapResult fit;
  fit.value = doubled.value;
  fit.weights = doubled.weights.head(e_pi.size()) - doubled.weights.tail(e_pi.size());
  return fit;
}

// golden-section minimum of a convex phi over the fixed bracket [0, 1]
double line_search_mix(const std::function<double(double)>& phi) {
  constexpr double kGolden = 0.6180339887498949;
  double a = 0.0, b = 1.0;
  double x1 = b - kGolden * (b - a);
  double x2 = a + kGolden * (b - a);
  double f1 = phi(x1), f2 = phi(x2);
  for (int it = 0; it < 200 && b - a > 1e-12; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = phi(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = phi(x2);
    }
  }
  const double mid = 0.5 * (a + b);
  double best_x = mid, best_f = phi(mid);
  for (double cand : {0.0, 1.0}) {
    const double fc = phi(cand);
    if (fc < best_f) {
      best_f = fc;
      best_x = cand;
    }
  }
  return best_x;
}

}  // namespace

void ExpertDataset::validate(int obs_dim) const {
  if (trajectories.empty()) throw std::invalid_argument("expert dataset is empty");
  for (const auto& traj : trajectories) {
    const int len = traj.length();
    if (len <= 0) throw std::invalid_argument("expert trajectory has no steps");
    if (traj.observations.rows() != obs_dim || traj.observations.cols() != len)
      throw std::invalid_argument("expert observations do not match the stated dimensions");
    if (traj.env_costs.size() != len)
      throw std::invalid_argument("expert costs do not pair with the steps");
  }
}

Discriminator::Discriminator(int obs_dim, int n_actions, std::vector<int> hidden)
    : obs_dim_(obs_dim),
      n_actions_(n_actions),
      net_(MlpSpec{obs_dim + n_actions, std::move(hidden), 1}) {
  if (obs_dim <= 0 || n_actions <= 0)
    throw std::invalid_argument("discriminator needs positive observation and action sizes");
}

MatrixXd Discriminator::encode(const MatrixXd& obs, const std::vector<int>& actions) const {
  if (obs.rows() != obs_dim_) throw std::invalid_argument("observation dimension mismatch");
  if (static_cast<Eigen::Index>(actions.size()) != obs.cols())
    throw std::invalid_argument("one action per observation column required");
  MatrixXd input = MatrixXd::Zero(obs_dim_ + n_actions_, obs.cols());
  input.topRows(obs_dim_) = obs;
  for (Eigen::Index i = 0; i < obs.cols(); ++i) {
    const int a = actions[static_cast<std::size_t>(i)];
    if (a < 0 || a >= n_actions_) throw std::invalid_argument("action index out of range");
    input(obs_dim_ + a, i) = 1.0;
  }
  return input;
}

VectorXd Discriminator::outputs(const VectorXd& params, const MatrixXd& obs,
                                const std::vector<int>& actions) const {
  const Mlp::Cache cache = net_.forward(params, encode(obs, actions));
  VectorXd d(obs.cols());
  for (Eigen::Index i = 0; i < obs.cols(); ++i)
    d(i) = std::clamp(stable_sigmoid(cache.output(0, i)), kDiscClamp, 1.0 - kDiscClamp);
  return d;
}

DiscriminatorState make_discriminator_state(const Discriminator& disc, std::uint64_t seed) {
  return DiscriminatorState{disc.init_params(seed), Adam(disc.n_params(), 1.0)};
}

double discriminator_objective(const Discriminator& disc, const VectorXd& params,
                               const RolloutBatch& learner, const ExpertDataset& expert,
                               double gamma) {
  return disc_objective_impl(disc, params, learner, expert, gamma, nullptr);
}

VectorXd discriminator_gradient(const Discriminator& disc, const VectorXd& params,
                                const RolloutBatch& learner, const ExpertDataset& expert,
                                double gamma) {
  VectorXd grad;
  disc_objective_impl(disc, params, learner, expert, gamma, &grad);
  return grad;
}

double discriminator_update(const Discriminator& disc, DiscriminatorState& state,
                            const RolloutBatch& learner, const ExpertDataset& expert,
                            double gamma, double step_size) {
  if (step_size < 0.0) throw std::invalid_argument("discriminator step size must be nonnegative");
  VectorXd grad;
  const double value = disc_objective_impl(disc, state.params, learner, expert, gamma, &grad);
  // ascent: Adam minimizes, so feed the negated gradient
  state.adam.step(state.params, -grad, step_size);
  return value;
}

void relabel_with_discriminator(RolloutBatch& batch, const Discriminator& disc,
                                const VectorXd& params) {
  for (auto& traj : batch.trajectories)
    traj.eval_costs =
        disc.outputs(params, traj.observations, traj.actions).array().log().matrix();
}

VectorXd surrogate_weights(const RolloutBatch& batch, const Mlp& value_net,
                           const VectorXd& value_params, double gamma, double gae_lambda) {
  if (batch.trajectories.empty()) throw std::invalid_argument("empty rollout batch");
  const double n_traj = static_cast<double>(batch.trajectories.size());
  VectorXd weights(batch.total_steps());
  int offset = 0;
  for (const auto& traj : batch.trajectories) {
    const MatrixXd values = value_net.forward(value_params, traj.observations).output;
    const VectorXd adv =
        gae_advantages(traj.eval_costs, values.row(0).transpose(), gamma, gae_lambda);
    double disc = 1.0;
    for (int t = 0; t < traj.length(); ++t) {
      weights(offset + t) = -disc * adv(t) / n_traj;
      disc *= gamma;
    }
    offset += traj.length();
  }
  return weights;
}

ImitationResult gail_train(Env& env, const ExpertDataset& expert, const GailConfig& config) {
  check_discrete_env(env);
  check_common_config(config.iters, config.pairs_per_iter, config.gamma, config.entropy_weight);
  if (config.disc_updates_per_iter < 0)
    throw std::invalid_argument("disc_updates_per_iter must be nonnegative");
  const int obs_dim = env.spec().obs_dim;
  const int n_actions = env.spec().action_space.n;
  expert.validate(obs_dim);

  MlpPolicy policy({PolicyConfig::Head::Categorical, obs_dim, n_actions, config.policy_hidden});
  VectorXd params = policy.init_params(split_seed(config.seed, 0x90a1));
  Discriminator disc(obs_dim, n_actions, config.disc_hidden);
  DiscriminatorState dstate = make_discriminator_state(disc, split_seed(config.seed, 0xd15c));
  const Mlp value_net(MlpSpec{obs_dim, config.value_hidden, 1});
  VectorXd value_params = value_net.init_params(split_seed(config.seed, 0x7a1e));

  StepSettings step;
  step.entropy_weight = config.entropy_weight;
  step.gamma = config.gamma;
  step.gae_lambda = config.gae_lambda;
  step.max_kl = config.max_kl;
  step.value_lr = config.value_lr;
  step.value_epochs = config.value_epochs;
  step.cg_iters = config.cg_iters;
  step.cg_damping = config.cg_damping;

  const std::uint64_t rollout_root = split_seed(config.seed, 0x6a11);
  std::vector<IterationRecord> metrics;
  metrics.reserve(static_cast<std::size_t>(config.iters));
  for (int iter = 0; iter < config.iters; ++iter) {
    RolloutBatch batch = collect_pairs(env, policy, params, config.pairs_per_iter,
                                       split_seed(rollout_root, static_cast<std::uint64_t>(iter)));
    double objective = 0.0;
    if (config.disc_updates_per_iter == 0) {
      objective = discriminator_objective(disc, dstate.params, batch, expert, config.gamma);
    } else {
      for (int k = 0; k < config.disc_updates_per_iter; ++k)
        objective = discriminator_update(disc, dstate, batch, expert, config.gamma,
                                         config.disc_step_size);
    }
    relabel_with_discriminator(batch, disc, dstate.params);
    const StepOutcome out = policy_step(policy, params, batch, value_net, value_params, step);
    metrics.push_back({iter, out.true_return, -objective, out.mean_kl, out.entropy});
  }
  return {policy, params, metrics};
}

int FeatureMap::dim() const {
  const int d = static_cast<int>(center.size());
  return d + d * (d + 1) / 2 + 1;
}

VectorXd FeatureMap::operator()(const VectorXd& obs) const {
  if (obs.size() != center.size()) throw std::invalid_argument("feature map dimension mismatch");
  const VectorXd x = (obs - center).cwiseQuotient(halfwidth);
  VectorXd out(dim());
  const int d = static_cast<int>(x.size());
  out.head(d) = x;
  int k = d;
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) out(k++) = x(i) * x(j);
  out(k) = 1.0;
  return out;
}

MatrixXd FeatureMap::apply(const MatrixXd& obs) const {
  MatrixXd out(dim(), obs.cols());
  for (Eigen::Index c = 0; c < obs.cols(); ++c) out.col(c) = (*this)(obs.col(c));
  return out;
}

FeatureMap feature_map_for(const std::string& env_name, int obs_dim) {
  if (obs_dim <= 0) throw std::invalid_argument("feature map needs a positive dimension");
  FeatureMap map;
  map.center = VectorXd::Zero(obs_dim);
  map.halfwidth = VectorXd::Ones(obs_dim);
  if (env_name == "cartpole") {
    // nominal ranges: track limit, cart speed, angle limit, angular speed
    map.halfwidth.resize(4);
    map.halfwidth << 2.4, 3.0, 0.21, 3.5;
    map.center = VectorXd::Zero(4);
  } else if (env_name == "mountaincar") {
    map.center.resize(2);
    map.center << -0.3, 0.0;
    map.halfwidth.resize(2);
    map.halfwidth << 0.9, 0.07;
  }
  if (map.center.size() != obs_dim)
    throw std::invalid_argument("feature map bounds do not match the observation dimension");
  return map;
}

VectorXd empirical_feature_expectations(const std::vector<Trajectory>& trajectories,
                                        const FeatureMap& features, double gamma) {
  if (trajectories.empty()) throw std::invalid_argument("feature expectations need trajectories");
  VectorXd e = VectorXd::Zero(features.dim());
  for (const auto& traj : trajectories) {
    double disc = 1.0;
    for (int t = 0; t < traj.length(); ++t) {
      e += disc * features(traj.observations.col(t));
      disc *= gamma;
    }
  }
  return e / static_cast<double>(trajectories.size());
}

ImitationResult apprenticeship_train(Env& env, const ExpertDataset& expert,
                                     const ApprenticeshipConfig& config) {
  check_discrete_env(env);
  check_common_config(config.iters, config.pairs_per_iter, config.gamma, config.entropy_weight);
  const int obs_dim = env.spec().obs_dim;
  const int n_actions = env.spec().action_space.n;
  expert.validate(obs_dim);

  const FeatureMap features = feature_map_for(env.spec().name, obs_dim);
  const VectorXd e_expert =
      empirical_feature_expectations(expert.trajectories, features, config.gamma);

  MlpPolicy policy({PolicyConfig::Head::Categorical, obs_dim, n_actions, config.policy_hidden});
  VectorXd params = policy.init_params(split_seed(config.seed, 0x90a1));
  const Mlp value_net(MlpSpec{obs_dim, config.value_hidden, 1});
  VectorXd value_params = value_net.init_params(split_seed(config.seed, 0x7a1e));

  StepSettings step;
  step.entropy_weight = config.entropy_weight;
  step.gamma = config.gamma;
  step.gae_lambda = config.gae_lambda;
  step.max_kl = config.max_kl;
  step.value_lr = config.value_lr;
  step.value_epochs = config.value_epochs;
  step.cg_iters = config.cg_iters;
  step.cg_damping = config.cg_damping;

  const std::uint64_t rollout_root = split_seed(config.seed, 0x6a11);
  std::vector<IterationRecord> metrics;
  metrics.reserve(static_cast<std::size_t>(config.iters));
  for (int iter = 0; iter < config.iters; ++iter) {
    RolloutBatch batch = collect_pairs(env, policy, params, config.pairs_per_iter,
                                       split_seed(rollout_root, static_cast<std::uint64_t>(iter)));
    const VectorXd e_pi = empirical_feature_expectations(batch.trajectories, features, config.gamma);
    const FeatureGapResult fit = config.cost_class == CostClass::Kind::LinearBall
                                     ? linear_ball_max(e_pi, e_expert)
                                     : signed_hull_max(e_pi, e_expert);
    for (auto& traj : batch.trajectories)
      traj.eval_costs = features.apply(traj.observations).transpose() * fit.weights;
    const StepOutcome out = policy_step(policy, params, batch, value_net, value_params, step);
    metrics.push_back({iter, out.true_return, fit.value, out.mean_kl, out.entropy});
  }
  return {policy, params, metrics};
}

BcResult behavioral_cloning(const ExpertDataset& expert, const BcConfig& config) {
  if (config.policy.head != PolicyConfig::Head::Categorical)
    throw std::invalid_argument("behavioral cloning supports discrete actions");
  expert.validate(config.policy.obs_dim);
  if (config.max_epochs <= 0 || config.patience <= 0 || config.minibatch <= 0)
    throw std::invalid_argument("cloning needs positive epochs, patience, and minibatch");
  if (!(config.val_fraction > 0.0 && config.val_fraction < 1.0))
    throw std::invalid_argument("val_fraction must lie in (0, 1)");

  // held-out split: whole trajectories when possible, steps otherwise
  std::vector<std::pair<int, int>> train_steps, val_steps;  // (trajectory, step)
  Rng rng = make_rng(split_seed(config.seed, 0xbc57));
  if (expert.count() >= 2) {
    std::vector<int> order(static_cast<std::size_t>(expert.count()));
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    const int n_val = std::clamp(
        static_cast<int>(std::lround(config.val_fraction * expert.count())), 1, expert.count() - 1);
    for (int i = 0; i < expert.count(); ++i) {
      auto& side = i < n_val ? val_steps : train_steps;
      const int traj = order[static_cast<std::size_t>(i)];
      for (int t = 0; t < expert.trajectories[static_cast<std::size_t>(traj)].length(); ++t)
        side.emplace_back(traj, t);
    }
  } else {
    const int len = expert.trajectories[0].length();
    if (len < 2) throw std::invalid_argument("cloning needs at least two state-action pairs");
    std::vector<int> order(static_cast<std::size_t>(len));
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    const int n_val =
        std::clamp(static_cast<int>(std::lround(config.val_fraction * len)), 1, len - 1);
    for (int i = 0; i < len; ++i)
      (i < n_val ? val_steps : train_steps).emplace_back(0, order[static_cast<std::size_t>(i)]);
  }

  const auto gather = [&](const std::vector<std::pair<int, int>>& steps, MatrixXd& obs,
                          std::vector<int>& actions) {
    obs.resize(config.policy.obs_dim, static_cast<Eigen::Index>(steps.size()));
    actions.resize(steps.size());
    for (std::size_t i = 0; i < steps.size(); ++i) {
      const auto& traj = expert.trajectories[static_cast<std::size_t>(steps[i].first)];
      obs.col(static_cast<Eigen::Index>(i)) = traj.observations.col(steps[i].second);
      actions[i] = traj.actions[static_cast<std::size_t>(steps[i].second)];
    }
  };
  MatrixXd val_obs;
  std::vector<int> val_actions;
  gather(val_steps, val_obs, val_actions);

  MlpPolicy policy(config.policy);
  VectorXd params = policy.init_params(split_seed(config.seed, 0xbc01));
  Adam adam(policy.n_params(), config.learning_rate);

  const auto validation_loss = [&](const VectorXd& p) {
    ActionBatch ab;
    ab.discrete = val_actions;
    return -policy.log_probs(p, val_obs, ab).mean();
  };

  VectorXd best_params = params;
  double best_val_loss = validation_loss(params);
  int best_epoch = 0;
  std::vector<double> val_losses;
  int stall = 0;
  for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
    std::shuffle(train_steps.begin(), train_steps.end(), rng);
    for (std::size_t start = 0; start < train_steps.size();
         start += static_cast<std::size_t>(config.minibatch)) {
      const std::size_t stop =
          std::min(start + static_cast<std::size_t>(config.minibatch), train_steps.size());
      const std::vector<std::pair<int, int>> chunk(train_steps.begin() + start,
                                                   train_steps.begin() + stop);
      MatrixXd obs;
      std::vector<int> actions;
      gather(chunk, obs, actions);
      ActionBatch ab;
      ab.discrete = actions;
      const VectorXd weights =
          VectorXd::Constant(obs.cols(), -1.0 / static_cast<double>(obs.cols()));
      // gradient of the mean negative log-likelihood on the minibatch
      const VectorXd grad = policy.score_gradient(params, obs, ab, weights);
      adam.step(params, grad);
    }
    const double vl = validation_loss(params);
    val_losses.push_back(vl);
    if (vl < best_val_loss - 1e-12) {
      best_val_loss = vl;
      best_params = params;
      best_epoch = epoch + 1;
      stall = 0;
    } else if (++stall >= config.patience) {
      break;
    }
  }
  return {std::move(policy), std::move(best_params), std::move(val_losses), best_val_loss,
          best_epoch};
}

TabularGailResult tabular_gail_oracle(const TabularMdp& mdp, const OccupancyMeasure& rho_E,
                                      int iters, double entropy_weight,
                                      const std::optional<OccupancyMeasure>& init) {
  mdp.validate();
  if (iters < 0) throw std::invalid_argument("oracle iteration count must be nonnegative");
  if (entropy_weight < 0.0) throw std::invalid_argument("entropy_weight must be nonnegative");
  if (rho_E.rho.rows() != mdp.n_states || rho_E.rho.cols() != mdp.n_actions)
    throw std::invalid_argument("expert measure shape mismatch");
  if ((rho_E.rho.array() < 0.0).any())
    throw std::invalid_argument("expert measure has negative entries");

  OccupancyMeasure rho =
      init ? *init : occupancy_measure(mdp, TabularPolicy::uniform(mdp.n_states, mdp.n_actions));
  if (rho.rho.rows() != mdp.n_states || rho.rho.cols() != mdp.n_actions)
    throw std::invalid_argument("initial measure shape mismatch");

  const auto objective = [&](const MatrixXd& r) {
    const OccupancyMeasure m{r};
    return jsd_occupancy(m, rho_E) - entropy_weight * causal_entropy_occupancy(m);
  };

  TabularGailResult result;
  result.jsd_history.reserve(static_cast<std::size_t>(iters) + 1);
  result.jsd_history.push_back(jsd_occupancy(rho, rho_E));
  const double log2 = std::log(2.0);
  for (int k = 0; k < iters; ++k) {
    // objective gradient: log 2 + log D* from the divergence, log pi from the
    // entropy term; clamps keep unvisited pairs finite
    const TabularPolicy pol = policy_from_occupancy(rho);
    MatrixXd cost(mdp.n_states, mdp.n_actions);
    for (int s = 0; s < mdp.n_states; ++s) {
      for (int a = 0; a < mdp.n_actions; ++a) {
        const double p = rho.rho(s, a), q = rho_E.rho(s, a);
        const double d_star =
            std::clamp(p + q > 0.0 ? p / (p + q) : 0.5, kDiscClamp, 1.0 - kDiscClamp);
        cost(s, a) = log2 + std::log(d_star) +
                     entropy_weight * std::log(std::max(pol.probs(s, a), 1e-12));
      }
    }
    const HardSolution best = hard_value_iteration(mdp, cost);
    const OccupancyMeasure vertex = occupancy_measure(mdp, best.policy);
    const double alpha = line_search_mix([&](double t) {
      return objective((1.0 - t) * rho.rho + t * vertex.rho);
    });
    rho.rho = (1.0 - alpha) * rho.rho + alpha * vertex.rho;
    result.jsd_history.push_back(jsd_occupancy(rho, rho_E));
  }
  result.policy = policy_from_occupancy(rho);
  result.rho = std::move(rho);
  return result;
}

}  // namespace mimic
