// End-to-end acceptance gate. Each numbered check re-derives one promised
// property of the library against an independent oracle or a pinned
// performance bar, then prints a single line with the measured values and
// their caps. The classic-control checks retrain everything from scratch, so
// a full pass takes roughly an hour single-threaded. Exit status is zero only
// when every line passes.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "mimic/env.hpp"
#include "mimic/harness.hpp"
#include "mimic/imitation.hpp"
#include "mimic/irl_dual.hpp"
#include "mimic/mdp.hpp"
#include "mimic/mlp.hpp"
#include "mimic/policy.hpp"
#include "mimic/policy_opt.hpp"
#include "mimic/regularizers.hpp"
#include "mimic/rng.hpp"
#include "mimic/rollout.hpp"
#include "mimic/soft_rl.hpp"
#include "test_util.hpp"

using namespace mimic;
using testutil::occupancy_series;
using testutil::random_mdp;
using testutil::random_policy;

namespace {

// mirrors the seed-stream constants the harness uses for its artifacts
constexpr std::uint64_t kPolicyInitStream = 0x90a1;
constexpr std::uint64_t kDatasetStream = 0xda7a;
constexpr std::uint64_t kEvalStream = 0xe7a1;

std::string fmt(const char* f, ...) {
  char buf[768];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof buf, f, args);
  va_end(args);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

MatrixXd random_positive_table(int S, int A, Rng& rng, double lo, double hi) {
  MatrixXd m(S, A);
  for (int s = 0; s < S; ++s)
    for (int a = 0; a < A; ++a) m(s, a) = uniform(rng, lo, hi);
  return m;
}

VectorXd random_vec(int n, Rng& rng, double scale = 1.0) {
  VectorXd out(n);
  for (int i = 0; i < n; ++i) out(i) = scale * gaussian(rng);
  return out;
}

MatrixXd random_batch(int rows, int cols, Rng& rng, double scale = 1.0) {
  MatrixXd out(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) out(r, c) = scale * gaussian(rng);
  return out;
}

VectorXd fd_gradient(const std::function<double(const VectorXd&)>& f, const VectorXd& at,
                     double h = 1e-5) {
  VectorXd grad(at.size());
  for (Eigen::Index i = 0; i < at.size(); ++i) {
    VectorXd up = at, dn = at;
    up(i) += h;
    dn(i) -= h;
    grad(i) = (f(up) - f(dn)) / (2.0 * h);
  }
  return grad;
}

// tabular policy induced by a categorical network on one-hot observations
TabularPolicy extract_policy(const MlpPolicy& policy, const VectorXd& params, int n_states) {
  TabularPolicy tab;
  tab.probs =
      policy.action_probabilities(params, MatrixXd::Identity(n_states, n_states)).transpose();
  return tab;
}

// exact action-values of a fixed policy under the true cost, by dense solve
MatrixXd policy_q_values(const TabularMdp& mdp, const TabularPolicy& pol) {
  const int S = mdp.n_states, A = mdp.n_actions;
  MatrixXd p_pi = MatrixXd::Zero(S, S);
  VectorXd c_pi = VectorXd::Zero(S);
  for (int a = 0; a < A; ++a) {
    p_pi += pol.probs.col(a).asDiagonal() * mdp.transition[a];
    c_pi += pol.probs.col(a).cwiseProduct(mdp.true_cost->col(a));
  }
  VectorXd v = (MatrixXd::Identity(S, S) - mdp.discount * p_pi).partialPivLu().solve(c_pi);
  MatrixXd q(S, A);
  for (int a = 0; a < A; ++a)
    q.col(a) = mdp.true_cost->col(a) + mdp.discount * mdp.transition[a] * v;
  return q;
}

int one_hot_state(const VectorXd& obs) {
  int s = 0;
  obs.maxCoeff(&s);
  return s;
}

VectorXd lookup_table(const RolloutBatch& batch, const MatrixXd& table) {
  VectorXd out(batch.total_steps());
  int at = 0;
  for (const Trajectory& traj : batch.trajectories)
    for (int t = 0; t < traj.length(); ++t)
      out(at++) = table(one_hot_state(traj.observations.col(t)), traj.actions[t]);
  return out;
}

// every accepted trust-region step recorded by any training run in this gate
struct KlLedger {
  double worst_excess = -std::numeric_limits<double>::infinity();
  long rows = 0;
  int runs = 0;
  void add(const std::vector<IterationRecord>& metrics, double max_kl) {
    ++runs;
    for (const auto& row : metrics) {
      ++rows;
      worst_excess = std::max(worst_excess, row.mean_kl - max_kl);
    }
  }
};

struct Line {
  int idx;
  std::string text;
  bool ok;
};

}  // namespace

int main() {
  std::vector<Line> lines;
  KlLedger kl;

  const auto run = [&](int idx, const char* name,
                       const std::function<std::pair<bool, std::string>()>& body) {
    std::fprintf(stderr, "[acceptance] running %d (%s)\n", idx, name);
    Line line{idx, "", false};
    try {
      auto [ok, detail] = body();
      line.ok = ok;
      line.text = fmt("[%s] %d %s: %s", ok ? "PASS" : "FAIL", idx, name, detail.c_str());
    } catch (const std::exception& e) {
      line.text = fmt("[FAIL] %d %s: exception: %s", idx, name, e.what());
    }
    std::fprintf(stderr, "%s\n", line.text.c_str());
    lines.push_back(std::move(line));
  };

  // 1. Cost search followed by entropy-regularized planning recovers the
  // demonstrator's occupancy measure on the default gridworld. The gap is
  // re-measured through the truncated power-series oracle rather than the
  // production occupancy solver.
  run(1, "occupancy matching", [&]() -> std::pair<bool, std::string> {
    const TabularMdp mdp = tabularize(GridworldConfig{});
    const SoftSolution expert = soft_value_iteration(mdp, *mdp.true_cost);
    const OccupancyMeasure rho_E = occupancy_measure(mdp, expert.policy);
    const double cap = 1e-3 / (1.0 - mdp.discount);
    const auto t0 = std::chrono::steady_clock::now();
    const DualState state = irl_dual_ascent(mdp, rho_E, Regularizer::constant(0.0),
                                            default_dual_step(mdp), 5000, cap);
    const SoftSolution recovered = soft_value_iteration(mdp, state.cost);
    const double secs = seconds_since(t0);
    // gamma^600 / (1 - gamma) < 1e-12, so the series truncation is negligible
    const OccupancyMeasure lhs = occupancy_series(mdp, recovered.policy, 600);
    const OccupancyMeasure rhs = occupancy_series(mdp, expert.policy, 600);
    const double gap = (lhs.rho - rhs.rho).cwiseAbs().sum();
    const bool ok = gap <= cap && secs <= 60.0;
    return {ok, fmt("series-oracle L1 gap %.3g (cap %.3g) after %zu ascent iters, %.1f s (cap 60)",
                    gap, cap, state.history.size(), secs)};
  });

  // 2. The adversarial regularizer's conjugate is the Jensen-Shannon
  // divergence shifted by 2 log 2 / (1 - gamma), and it agrees with a raw
  // grid search over cost tables on instances small enough to enumerate.
  run(2, "conjugate identity", [&]() -> std::pair<bool, std::string> {
    Rng rng = make_rng(101);
    double worst_id = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const double gamma = uniform(rng, 0.5, 0.97);
      const TabularMdp mdp = random_mdp(3, 3, gamma, rng);
      const OccupancyMeasure a = occupancy_measure(mdp, random_policy(3, 3, rng));
      const OccupancyMeasure b = occupancy_measure(mdp, random_policy(3, 3, rng));
      const double shift = 2.0 * std::log(2.0) / (1.0 - gamma);
      worst_id = std::max(worst_id,
                          std::abs(psi_ga_conjugate(a, b) - (jsd_occupancy(a, b) - shift)));
    }
    double worst_bf = 0.0;
    bool interior = true;
    for (int trial = 0; trial < 5; ++trial) {
      const OccupancyMeasure p{random_positive_table(2, 1, rng, 0.1, 3.0)};
      const OccupancyMeasure q{random_positive_table(2, 1, rng, 0.1, 3.0)};
      const Regularizer psi = Regularizer::generative_adversarial(q);
      const auto res = conjugate_brute_force(psi, p.rho - q.rho, {-8.0, -1e-3, 2001});
      interior = interior && !res.boundary_attained;
      const double closed = psi_ga_conjugate(p, q);
      worst_bf = std::max(worst_bf, std::abs(res.value - closed) / std::max(1.0, std::abs(closed)));
    }
    const bool ok = worst_id <= 1e-9 && worst_bf <= 1e-3 && interior;
    return {ok, fmt("JSD identity worst %.3g (cap 1e-9) on 100 pairs; grid search worst %.3g "
                    "(cap 1e-3) on 5 instances, optima interior: %s",
                    worst_id, worst_bf, interior ? "yes" : "no")};
  });

  // 3. The surrogate-loss route: the logistic loss reduces to the closed-form
  // g, and for both the logistic and exponential losses the negated minimum
  // expected risk equals the induced regularizer's conjugate.
  run(3, "surrogate-loss reduction", [&]() -> std::pair<bool, std::string> {
    const SurrogateLoss logistic = logistic_loss();
    const SurrogateLoss expo = exponential_loss();
    double worst_g = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double x = -10.0 + (10.0 - 0.01) * i / 999.0;
      worst_g = std::max(worst_g, std::abs(surrogate_to_g(logistic, x) - psi_ga_scalar(x)));
    }
    Rng rng = make_rng(103);
    double worst_log = 0.0, worst_exp = 0.0;
    for (int trial = 0; trial < 30; ++trial) {
      const OccupancyMeasure p{random_positive_table(2, 3, rng, 0.05, 4.0)};
      const OccupancyMeasure q{random_positive_table(2, 3, rng, 0.05, 4.0)};
      worst_log = std::max(
          worst_log, std::abs(-min_expected_risk(logistic, p, q) - psi_ga_conjugate(p, q)));
      const double bhattacharyya = -2.0 * (p.rho.array() * q.rho.array()).sqrt().sum();
      worst_exp =
          std::max(worst_exp, std::abs(-min_expected_risk(expo, p, q) - bhattacharyya));
    }
    const bool ok = worst_g <= 1e-10 && worst_log <= 1e-8 && worst_exp <= 1e-8;
    return {ok, fmt("logistic-to-g worst %.3g (cap 1e-10) on 1000 points; negated risk vs "
                    "conjugate worst %.3g logistic / %.3g exponential (cap 1e-8) on 30 instances",
                    worst_g, worst_log, worst_exp)};
  });

  // 4. Sampled policy-gradient and entropy-gradient estimators track exact
  // dense-solve gradients on a 3-state task, and the analytic network
  // gradients they are built from match central differences.
  run(4, "gradient estimators", [&]() -> std::pair<bool, std::string> {
    Rng rng = make_rng(47);
    TabularMdp mdp = random_mdp(3, 2, 0.8, rng);
    MatrixXd cost(3, 2);
    for (int s = 0; s < 3; ++s)
      for (int a = 0; a < 2; ++a) cost(s, a) = 2.0 * uniform01(rng);
    mdp.true_cost = cost;
    MlpPolicy policy({PolicyConfig::Head::Categorical, 3, 2, {}});
    const VectorXd params = random_vec(policy.n_params(), rng);
    auto env = make_tabular_env("toy", mdp, 60);

    const auto j = [&](const VectorXd& p) {
      return expected_cost(occupancy_measure(mdp, extract_policy(policy, p, 3)), *mdp.true_cost);
    };
    const VectorXd exact_pg = fd_gradient(j, params);
    const TabularPolicy tab = extract_policy(policy, params, 3);
    MatrixXd adv = policy_q_values(mdp, tab);
    for (int s = 0; s < 3; ++s) adv.row(s).array() -= adv.row(s).dot(tab.probs.row(s));
    const RolloutBatch pg_batch = collect_episodes(*env, policy, params, 10000, 12);
    const VectorXd pg_est =
        reinforce_gradient(policy, params, pg_batch, lookup_table(pg_batch, adv), 0.8);
    const double pg_rel = (pg_est - exact_pg).norm() / exact_pg.norm();

    const auto h = [&](const VectorXd& p) {
      return causal_entropy_policy(mdp, extract_policy(policy, p, 3));
    };
    const VectorXd exact_ent = fd_gradient(h, params);
    const RolloutBatch ent_batch = collect_episodes(*env, policy, params, 10000, 13);
    const VectorXd ent_est = entropy_gradient(policy, params, ent_batch, 0.8);
    const double ent_rel = (ent_est - exact_ent).norm() / exact_ent.norm();

    // analytic reverse-mode gradients against central differences
    double worst_mlp = 0.0;
    {
      const Mlp net(MlpSpec{3, {8, 6}, 2});
      const VectorXd net_params = random_vec(net.n_params(), rng);
      const MatrixXd x = random_batch(3, 5, rng);
      const MatrixXd cot = random_batch(2, 5, rng);
      const auto f = [&](const VectorXd& p) {
        return (net.forward(p, x).output.array() * cot.array()).sum();
      };
      const VectorXd analytic = net.vjp(net_params, net.forward(net_params, x), cot);
      const VectorXd fd = fd_gradient(f, net_params);
      worst_mlp = std::max(worst_mlp, (analytic - fd).norm() / std::max(1.0, fd.norm()));
    }
    {
      MlpPolicy cat({PolicyConfig::Head::Categorical, 3, 3, {6}});
      const VectorXd cat_params = random_vec(cat.n_params(), rng);
      const MatrixXd obs = random_batch(3, 6, rng);
      ActionBatch actions;
      actions.discrete = {0, 1, 2, 0, 2, 1};
      const VectorXd weights = random_vec(6, rng);
      const auto f = [&](const VectorXd& p) {
        return weights.dot(cat.log_probs(p, obs, actions));
      };
      const VectorXd analytic = cat.score_gradient(cat_params, obs, actions, weights);
      const VectorXd fd = fd_gradient(f, cat_params);
      worst_mlp = std::max(worst_mlp, (analytic - fd).norm() / std::max(1.0, fd.norm()));
    }
    {
      MlpPolicy gauss({PolicyConfig::Head::Gaussian, 2, 2, {5}});
      const VectorXd g_params = random_vec(gauss.n_params(), rng);
      const MatrixXd obs = random_batch(2, 4, rng);
      ActionBatch actions;
      actions.continuous = random_batch(2, 4, rng);
      const VectorXd weights = random_vec(4, rng);
      const auto f = [&](const VectorXd& p) {
        return weights.dot(gauss.log_probs(p, obs, actions));
      };
      const VectorXd analytic = gauss.score_gradient(g_params, obs, actions, weights);
      const VectorXd fd = fd_gradient(f, g_params);
      worst_mlp = std::max(worst_mlp, (analytic - fd).norm() / std::max(1.0, fd.norm()));
    }

    const bool ok = pg_rel <= 0.05 && ent_rel <= 0.05 && worst_mlp <= 1e-6;
    return {ok, fmt("policy-gradient %.2f%% / entropy-gradient %.2f%% relative error at 10000 "
                    "trajectories (cap 5%%); analytic vs central differences worst %.3g (cap 1e-6)",
                    100.0 * pg_rel, 100.0 * ent_rel, worst_mlp)};
  });

  // 5. The occupancy polytope: policy -> occupancy -> policy is the identity,
  // and discounted causal entropy is strictly concave in the occupancy.
  run(5, "occupancy-policy correspondence", [&]() -> std::pair<bool, std::string> {
    Rng rng = make_rng(107);
    double worst_round = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const TabularMdp mdp = random_mdp(5, 3, 0.9, rng);
      const TabularPolicy policy = random_policy(5, 3, rng);
      const OccupancyMeasure occ = occupancy_measure(mdp, policy);
      const TabularPolicy back = policy_from_occupancy(occ);
      for (int s = 0; s < 5; ++s) {
        if (occ.rho.row(s).sum() <= 0.0) continue;
        worst_round = std::max(
            worst_round, (back.probs.row(s) - policy.probs.row(s)).lpNorm<Eigen::Infinity>());
      }
    }
    double worst_violation = -std::numeric_limits<double>::infinity();
    double min_strict_margin = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 100; ++trial) {
      const TabularMdp mdp = random_mdp(4, 3, 0.9, rng);
      const OccupancyMeasure a = occupancy_measure(mdp, random_policy(4, 3, rng));
      const OccupancyMeasure b = occupancy_measure(mdp, random_policy(4, 3, rng));
      const OccupancyMeasure mid{0.5 * (a.rho + b.rho)};
      const double lhs = causal_entropy_occupancy(mid);
      const double rhs = 0.5 * causal_entropy_occupancy(a) + 0.5 * causal_entropy_occupancy(b);
      worst_violation = std::max(worst_violation, rhs - lhs);
      if ((a.rho - b.rho).lpNorm<Eigen::Infinity>() > 1e-3)
        min_strict_margin = std::min(min_strict_margin, lhs - rhs);
    }
    const bool ok =
        worst_round <= 1e-10 && worst_violation <= 1e-12 && min_strict_margin > 1e-10;
    return {ok, fmt("round trip worst %.3g (cap 1e-10); concavity violation worst %.3g (cap "
                    "1e-12), strict margin min %.3g (> 1e-10); 100 instances each",
                    worst_round, worst_violation, min_strict_margin)};
  });

  // 7. Classic-control imitation from scratch. Cartpole: one demonstration,
  // three seeds, the stock configuration; a seed passes at mean return >= 180
  // and each seed must train inside 15 minutes. Mountain car: ten
  // demonstrations must reach a scaled score of at least 0.8 against the
  // freshly measured random and demonstrator references.
  run(7, "classic-control imitation", [&]() -> std::pair<bool, std::string> {
    auto cartpole = make_env("cartpole");
    TrainedExpert cp_expert = train_expert(*cartpole, 0, 9);
    kl.add(cp_expert.metrics, 0.01);
    const ExpertDataset cp_data = sample_trajectories(*cartpole, cp_expert.policy,
                                                      cp_expert.params, 1,
                                                      split_seed(0, kDatasetStream));
    RunConfig cp_cfg;
    cp_cfg.env = "cartpole";
    cp_cfg.lambda = 0.0;
    cp_cfg.iters = 300;
    cp_cfg.pairs_per_iter = 5000;
    cp_cfg.hidden = {64, 64};
    std::vector<double> cp_means;
    double slowest = 0.0;
    for (std::uint64_t seed : {0, 1, 2}) {
      const auto t0 = std::chrono::steady_clock::now();
      const LearnerOutput out = train_learner(*cartpole, "gail", cp_data, cp_cfg, seed);
      slowest = std::max(slowest, seconds_since(t0));
      kl.add(out.metrics, 0.01);
      const EvalStats stats =
          evaluate(*cartpole, out.policy, out.params, 50, split_seed(seed, kEvalStream));
      cp_means.push_back(stats.mean);
      std::fprintf(stderr, "[acceptance]   cartpole seed %llu: mean return %.2f\n",
                   static_cast<unsigned long long>(seed), stats.mean);
    }
    const int hits = static_cast<int>(std::count_if(
        cp_means.begin(), cp_means.end(), [](double m) { return m >= 180.0; }));

    auto mcar = make_env("mountaincar");
    TrainedExpert mc_expert = train_expert(*mcar, 0, 9);
    kl.add(mc_expert.metrics, 0.02);
    const ExpertDataset mc_data = sample_trajectories(*mcar, mc_expert.policy, mc_expert.params,
                                                      10, split_seed(7, kDatasetStream));
    const EvalStats expert_ref =
        evaluate(*mcar, mc_expert.policy, mc_expert.params, 50, split_seed(0, kEvalStream));
    MlpPolicy random_init({PolicyConfig::Head::Categorical, mcar->spec().obs_dim,
                           mcar->spec().action_space.n, {64, 64}});
    const VectorXd random_params = random_init.init_params(split_seed(0, kPolicyInitStream));
    const EvalStats random_ref =
        evaluate(*mcar, random_init, random_params, 50, split_seed(0, kEvalStream));
    RunConfig mc_cfg;
    mc_cfg.env = "mountaincar";
    mc_cfg.lambda = 0.03;
    mc_cfg.iters = 500;
    mc_cfg.pairs_per_iter = 5000;
    mc_cfg.hidden = {64, 64};
    const LearnerOutput out = train_learner(*mcar, "gail", mc_data, mc_cfg, 0);
    kl.add(out.metrics, 0.02);
    const EvalStats stats =
        evaluate(*mcar, out.policy, out.params, 50, split_seed(0, kEvalStream));
    const double scaled = scaled_score(stats.mean, random_ref.mean, expert_ref.mean);

    const bool ok = hits >= 2 && slowest <= 900.0 && scaled >= 0.8;
    return {ok, fmt("cartpole means %.1f/%.1f/%.1f (>=180 on %d of 3, need 2), slowest seed "
                    "%.0f s (cap 900); mountain car scaled %.3f (cap 0.8, raw %.1f, refs "
                    "%.1f/%.1f)",
                    cp_means[0], cp_means[1], cp_means[2], hits, slowest, scaled, stats.mean,
                    random_ref.mean, expert_ref.mean)};
  });

  // 8. The exact tabular alternation drives the Jensen-Shannon divergence to
  // the demonstrator occupancy below 5% of its starting value.
  run(8, "exact-alternation oracle", [&]() -> std::pair<bool, std::string> {
    const TabularMdp mdp = tabularize(GridworldConfig{});
    const SoftSolution expert = soft_value_iteration(mdp, *mdp.true_cost);
    const OccupancyMeasure rho_E = occupancy_measure(mdp, expert.policy);
    const TabularGailResult res = tabular_gail_oracle(mdp, rho_E, 200);
    const double first = res.jsd_history.front(), last = res.jsd_history.back();
    const bool ok = last < 0.05 * first;
    return {ok, fmt("JSD %.4f -> %.3g in 200 iterations (ratio %.3g, cap 0.05)", first, last,
                    last / first)};
  });

  // 6. Advantage estimation matches the quadratic-time double sum, and every
  // accepted trust-region step recorded by any run in this gate (the dedicated
  // gridworld run here plus the demonstrator and imitation runs above)
  // respected its KL radius. Runs after this point would not be audited, so
  // this check executes last.
  run(6, "trust-region and advantage contracts", [&]() -> std::pair<bool, std::string> {
    Rng rng = make_rng(109);
    double worst_gae = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const int horizon = uniform_int(rng, 5, 80);
      const double gamma = uniform(rng, 0.8, 0.999);
      const double lambda = trial % 3 == 0 ? 1.0 : (trial % 3 == 1 ? 0.0 : uniform01(rng));
      const VectorXd costs = random_vec(horizon, rng);
      const VectorXd values = random_vec(horizon, rng);
      const VectorXd adv = gae_advantages(costs, values, gamma, lambda);
      for (int t = 0; t < horizon; ++t) {
        double expected = 0.0;
        for (int k = t; k < horizon; ++k) {
          const double next = k + 1 < horizon ? values(k + 1) : 0.0;
          expected += std::pow(gamma * lambda, k - t) * (costs(k) + gamma * next - values(k));
        }
        worst_gae = std::max(worst_gae, std::abs(adv(t) - expected));
      }
    }

    auto grid = make_env("gridworld");
    TrainedExpert expert = train_expert(*grid, 0, 9);
    const ExpertDataset data = sample_trajectories(*grid, expert.policy, expert.params, 5,
                                                   split_seed(11, kDatasetStream));
    RunConfig cfg;
    cfg.env = "gridworld";
    cfg.lambda = 0.01;
    cfg.iters = 10;
    cfg.pairs_per_iter = 1000;
    cfg.hidden = {16};
    const LearnerOutput out = train_learner(*grid, "gail", data, cfg, 3);
    kl.add(out.metrics, 0.01);

    const bool ok = worst_gae <= 1e-12 && kl.worst_excess <= 1e-6 && kl.rows > 0;
    return {ok, fmt("advantage estimator vs double sum worst %.3g (cap 1e-12) on 20 episodes; "
                    "accepted-step KL excess max %.3g (cap 1e-6) over %ld steps in %d runs",
                    worst_gae, kl.worst_excess, kl.rows, kl.runs)};
  });

  // 9. Out-of-scope statement: what this desk-scale gate deliberately does
  // not attempt.
  run(9, "scope statement", [&]() -> std::pair<bool, std::string> {
    return {true,
            "not reproduced at desk scale: physics-simulator benchmark suites (the MuJoCo "
            "locomotion tasks up to humanoid) and cross-task rank-based significance tests; "
            "checks 1-8 stand in with oracle equivalences, invariant suites, and "
            "classic-control runs"};
  });

  std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) { return a.idx < b.idx; });
  int failures = 0;
  for (const Line& line : lines) {
    std::printf("%s\n", line.text.c_str());
    if (!line.ok) ++failures;
  }
  std::printf("%s: %d of %zu checks passed\n", failures == 0 ? "ACCEPTED" : "REJECTED",
              static_cast<int>(lines.size()) - failures, lines.size());
  return failures == 0 ? 0 : 1;
}
