// Generative-adversarial imitation and its baselines: a binary discriminator
// over state-action pairs, adversarial training against trust-region policy
// steps, feature-expectation apprenticeship, behavioral cloning, and an exact
// tabular oracle for the adversarial fixed point.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mimic/env.hpp"
#include "mimic/mlp.hpp"
#include "mimic/policy.hpp"
#include "mimic/policy_opt.hpp"
#include "mimic/regularizers.hpp"
#include "mimic/rollout.hpp"
#include "mimic/soft_rl.hpp"
#include "mimic/trpo.hpp"

namespace mimic {

// Demonstration trajectories plus the provenance needed to reproduce them.
struct ExpertDataset {
  std::vector<Trajectory> trajectories;
  std::string source;      // identifies the policy that generated the data
  std::uint64_t seed = 0;  // sampling seed used at generation time

  int count() const { return static_cast<int>(trajectories.size()); }
  // non-empty, consistent observation dimension, actions paired with steps
  void validate(int obs_dim) const;
};

// outputs are clamped here so log D and log(1 - D) stay finite
inline constexpr double kDiscClamp = 1e-8;

// Binary classifier over state-action pairs: a tanh MLP on the concatenated
// observation and one-hot action encoding, squashed through a logistic.
class Discriminator {
 public:
  Discriminator(int obs_dim, int n_actions, std::vector<int> hidden = {64, 64});

  int obs_dim() const { return obs_dim_; }
  int n_actions() const { return n_actions_; }
  const Mlp& net() const { return net_; }
  int n_params() const { return net_.n_params(); }
  VectorXd init_params(std::uint64_t seed) const { return net_.init_params(seed); }

  // observation and one-hot action stacked into one input column per pair
  MatrixXd encode(const MatrixXd& obs, const std::vector<int>& actions) const;

  // D in [kDiscClamp, 1 - kDiscClamp], one entry per column of obs
  VectorXd outputs(const VectorXd& params, const MatrixXd& obs,
                   const std::vector<int>& actions) const;

 private:
  int obs_dim_ = 0;
  int n_actions_ = 0;
  Mlp net_;
};

// Parameters plus optimizer moments, persisted across adversary updates.
struct DiscriminatorState {
  VectorXd params;
  Adam adam;
};

DiscriminatorState make_discriminator_state(const Discriminator& disc, std::uint64_t seed);

// E_learner[log D] + E_expert[log(1 - D)], each side a discounted-visitation
// weighted mean over its pairs (weights gamma^t, normalized per side).
double discriminator_objective(const Discriminator& disc, const VectorXd& params,
                               const RolloutBatch& learner, const ExpertDataset& expert,
                               double gamma);

// gradient of the objective; zero through pairs sitting on the output clamp
VectorXd discriminator_gradient(const Discriminator& disc, const VectorXd& params,
                                const RolloutBatch& learner, const ExpertDataset& expert,
                                double gamma);

// One ascent step on the objective. Returns the objective at the pre-update
// parameters. step_size 0 leaves the parameters unchanged. Throws
// std::runtime_error if the objective or gradient is non-finite.
double discriminator_update(const Discriminator& disc, DiscriminatorState& state,
                            const RolloutBatch& learner, const ExpertDataset& expert,
                            double gamma, double step_size);

// Overwrites eval_costs with log D(s, a) under the given discriminator.
void relabel_with_discriminator(RolloutBatch& batch, const Discriminator& disc,
                                const VectorXd& params);

// Score weights for one trust-region step under cost minimization:
// -gamma^t A_t / n_trajectories, advantages from GAE against the value net.
VectorXd surrogate_weights(const RolloutBatch& batch, const Mlp& value_net,
                           const VectorXd& value_params, double gamma, double gae_lambda);

struct IterationRecord {
  int iter = 0;
  double true_return = 0.0;  // mean undiscounted environment return of the batch
  double disc_loss = 0.0;    // adversary loss, or the matching objective for
                             // feature-expectation baselines
  double mean_kl = 0.0;      // KL of the accepted policy step (0 when rejected)
  double entropy = 0.0;      // mean policy entropy over the batch observations
};

struct ImitationResult {
  MlpPolicy policy;
  VectorXd params;
  std::vector<IterationRecord> metrics;
};

struct GailConfig {
  int iters = 300;
  int pairs_per_iter = 5000;
  double entropy_weight = 0.0;  // bonus on the discounted causal entropy
  double max_kl = 0.01;
  double disc_step_size = 1e-3;
  int disc_updates_per_iter = 1;
  double gamma = 0.995;
  double gae_lambda = 0.97;
  std::vector<int> policy_hidden = {64, 64};
  std::vector<int> disc_hidden = {64, 64};
  std::vector<int> value_hidden = {64, 64};
  int value_epochs = 20;
  double value_lr = 0.1;
  int cg_iters = 10;
  double cg_damping = 0.1;
  std::uint64_t seed = 0;
};

// Alternates discriminator ascent with a trust-region policy step on the
// cost log D plus the entropy bonus. One metrics row per iteration.
ImitationResult gail_train(Env& env, const ExpertDataset& expert, const GailConfig& config);

// Quadratic feature basis over affinely rescaled observations: each scaled
// component, their pairwise products, and a bias, all within [-1, 1] when the
// observation respects the stated bounds.
struct FeatureMap {
  VectorXd center;
  VectorXd halfwidth;

  int dim() const;
  VectorXd operator()(const VectorXd& obs) const;
  MatrixXd apply(const MatrixXd& obs) const;  // one column of features per observation
};

// scaling bounds pinned per environment name; unknown names get center 0, halfwidth 1
FeatureMap feature_map_for(const std::string& env_name, int obs_dim);

// mean over trajectories of sum_t gamma^t phi(obs_t)
VectorXd empirical_feature_expectations(const std::vector<Trajectory>& trajectories,
                                        const FeatureMap& features, double gamma);

struct ApprenticeshipConfig {
  // LinearBall: costs w.phi with ||w||_2 <= 1. ConvexHull: the hull of the
  // signed basis {+phi, -phi}, so both classes can reward features as well as
  // penalize them.
  CostClass::Kind cost_class = CostClass::Kind::LinearBall;
  int iters = 100;
  int pairs_per_iter = 5000;
  double entropy_weight = 0.0;
  double max_kl = 0.01;
  double gamma = 0.995;
  double gae_lambda = 0.97;
  std::vector<int> policy_hidden = {64, 64};
  std::vector<int> value_hidden = {64, 64};
  int value_epochs = 20;
  double value_lr = 0.1;
  int cg_iters = 10;
  double cg_damping = 0.1;
  std::uint64_t seed = 0;
};

// Per iteration: fit the worst-case cost in the class against empirical
// feature expectations, then take one trust-region step against it. The
// matching objective lands in the disc_loss metrics column.
ImitationResult apprenticeship_train(Env& env, const ExpertDataset& expert,
                                     const ApprenticeshipConfig& config);

struct BcConfig {
  PolicyConfig policy;  // head and dimensions of the cloned policy
  int max_epochs = 500;
  int patience = 20;
  int minibatch = 128;
  double learning_rate = 1e-3;
  double val_fraction = 0.3;
  std::uint64_t seed = 0;
};

struct BcResult {
  MlpPolicy policy;
  VectorXd params;               // parameters at the best validation epoch
  std::vector<double> val_losses;  // one entry per completed epoch
  double best_val_loss = 0.0;
  int best_epoch = 0;
};

// Supervised maximum likelihood on the demonstrations with a held-out split
// (trajectory-level, step-level when only one trajectory exists) and patience
// early stopping. Never touches an environment.
BcResult behavioral_cloning(const ExpertDataset& expert, const BcConfig& config);

struct TabularGailResult {
  TabularPolicy policy;
  OccupancyMeasure rho;
  std::vector<double> jsd_history;  // iters + 1 entries, initial value first
};

// Exact adversarial alternation on a tabular MDP: closed-form optimal
// discriminator D* = rho / (rho + rho_E), a best-response direction from hard
// value iteration on the induced cost, and an exact line search over the
// occupancy mixture so the objective JSD - entropy_weight * H never increases.
// init overrides the default uniform-policy starting measure.
TabularGailResult tabular_gail_oracle(const TabularMdp& mdp, const OccupancyMeasure& rho_E,
                                      int iters, double entropy_weight = 0.0,
                                      const std::optional<OccupancyMeasure>& init = std::nullopt);

}  // namespace mimic
