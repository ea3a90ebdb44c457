#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mimic/harness.hpp"
#include "mimic/io.hpp"
#include "mimic/irl_dual.hpp"
#include "mimic/regularizers.hpp"
#include "mimic/soft_rl.hpp"

namespace {

using namespace mimic;
namespace fs = std::filesystem;

constexpr std::uint64_t kEvalStream = 0xe7a1;

void print_eval(const std::string& label, const EvalStats& stats, int episodes) {
  std::printf("%s: return %.2f +- %.2f over %d episodes\n", label.c_str(), stats.mean,
              stats.std_dev, episodes);
}

int run_expert(const std::string& env_name, int iters, std::uint64_t seed,
               const std::string& out_dir) {
  auto env = make_env(env_name);
  const TrainedExpert expert = train_expert(*env, iters, seed);
  fs::create_directories(out_dir);
  io::save_policy(out_dir + "/policy.json", expert.policy.config(), expert.params);
  if (!expert.metrics.empty()) io::save_metrics_csv(out_dir + "/metrics.csv", expert.metrics);
  const EvalStats stats = evaluate(*env, expert.policy, expert.params, 50, split_seed(0, kEvalStream));
  print_eval(env_name + " demonstrator", stats, 50);
  std::printf("saved %s/policy.json\n", out_dir.c_str());
  return 0;
}

int run_sample(const std::string& env_name, const std::string& policy_path, int n,
               std::uint64_t seed, const std::string& out_path) {
  auto env = make_env(env_name);
  const io::SavedPolicy saved = io::load_policy(policy_path);
  const MlpPolicy policy(saved.config);
  ExpertDataset data = sample_trajectories(*env, policy, saved.params, n, seed);
  data.source = policy_path;
  io::save_dataset(out_path, data);
  int steps = 0;
  for (const auto& traj : data.trajectories) steps += traj.length();
  std::printf("wrote %d trajectories (%d steps) to %s\n", n, steps, out_path.c_str());
  return 0;
}

int run_imitate(const std::string& env_name, const std::string& algo,
                const std::string& dataset_path, double lambda, int iters, int pairs,
                const std::vector<int>& hidden, std::uint64_t seed, const std::string& out_dir) {
  auto env = make_env(env_name);
  const ExpertDataset data = io::load_dataset(dataset_path);
  RunConfig config;  // knob carrier for the learner call
  config.env = env_name;
  config.lambda = lambda;
  config.iters = iters;
  config.pairs_per_iter = pairs;
  config.hidden = hidden;
  const LearnerOutput out = train_learner(*env, algo, data, config, seed);
  fs::create_directories(out_dir);
  io::save_policy(out_dir + "/policy.json", out.policy.config(), out.params);
  if (!out.metrics.empty()) io::save_metrics_csv(out_dir + "/metrics.csv", out.metrics);
  if (!out.val_losses.empty()) {
    std::vector<std::pair<int, double>> curve;
    for (std::size_t i = 0; i < out.val_losses.size(); ++i)
      curve.emplace_back(static_cast<int>(i), out.val_losses[i]);
    io::save_curve_csv(out_dir + "/val_loss.csv", "epoch", "val_loss", curve);
  }
  const EvalStats stats = evaluate(*env, out.policy, out.params, 50, split_seed(seed, kEvalStream));
  print_eval(algo + " on " + env_name, stats, 50);
  std::printf("saved %s/policy.json\n", out_dir.c_str());
  return 0;
}

int run_eval(const std::string& env_name, const std::string& policy_path, int episodes,
             std::uint64_t seed) {
  auto env = make_env(env_name);
  const io::SavedPolicy saved = io::load_policy(policy_path);
  const MlpPolicy policy(saved.config);
  const EvalStats stats = evaluate(*env, policy, saved.params, episodes, seed);
  print_eval(env_name, stats, episodes);
  return 0;
}

int run_exact_match(const std::string& grid, double slip, double gamma, int iters,
                    const std::string& out_dir) {
  GridworldConfig gc;
  gc.slip = slip;
  gc.discount = gamma;
  if (std::sscanf(grid.c_str(), "%dx%d", &gc.width, &gc.height) != 2 || gc.width < 1 ||
      gc.height < 1)
    throw std::invalid_argument("grid must look like 5x5");
  const TabularMdp mdp = tabularize(gc);
  const SoftSolution expert = soft_value_iteration(mdp, *mdp.true_cost);
  const OccupancyMeasure rho_E = occupancy_measure(mdp, expert.policy);
  const double mass = 1.0 / (1.0 - mdp.discount);
  const double threshold = 1e-3 * mass;
  const DualState state = irl_dual_ascent(mdp, rho_E, Regularizer::constant(0.0),
                                          default_dual_step(mdp), iters, threshold);
  fs::create_directories(out_dir);
  io::save_curve_csv(out_dir + "/primal_gap.csv", "iter", "primal_gap", state.history);
  std::printf("primal gap %.3e (threshold %.3e) after %d iterations\n", state.primal_gap,
              threshold, state.iterate);
  std::printf("wrote %s/primal_gap.csv\n", out_dir.c_str());
  if (state.primal_gap > threshold) {
    std::fprintf(stderr, "error: dual ascent left a primal gap of %.3e > %.3e\n",
                 state.primal_gap, threshold);
    return 1;
  }
  return 0;
}

int run_sweep(const std::string& config_path) {
  const RunConfig config = io::parse_run_config(config_path);
  const std::string out = run_experiment(config);
  std::printf("wrote %s\n", out.c_str());
  return 0;
}

int run_plot(const std::string& scores_path, const std::string& out_path) {
  const std::vector<ScoreRecord> scores = io::load_scores_csv(scores_path);
  emit_plot(scores, out_path);
  std::printf("wrote %s\n", out_path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"occupancy-matching imitation learning toolkit"};
  app.require_subcommand(1);

  std::string env_name, policy_path, dataset_path, out_path, grid = "5x5", algo, config_path;
  std::uint64_t seed = 0;
  int iters = 0, n = 1, episodes = 50, pairs = 5000;
  double lambda = 0.0, slip = 0.1, gamma = 0.95;
  std::vector<int> hidden = {64, 64};

  auto* expert = app.add_subcommand("expert", "train a demonstrator on the true cost");
  expert->add_option("env", env_name, "gridworld, cartpole, or mountaincar")->required();
  expert->add_option("--iters", iters, "training iterations (0 = recipe default)");
  expert->add_option("--seed", seed, "training seed")->default_val(9);
  expert->add_option("--out", out_path, "output directory")->required();

  auto* sample = app.add_subcommand("sample", "roll out a saved policy into a JSONL dataset");
  sample->add_option("env", env_name)->required();
  sample->add_option("--policy", policy_path, "saved policy JSON")->required();
  sample->add_option("--n", n, "trajectory count")->required()->check(CLI::PositiveNumber);
  sample->add_option("--seed", seed);
  sample->add_option("--out", out_path, "output JSONL path")->required();

  auto* imitate = app.add_subcommand("imitate", "train a learner from demonstrations");
  imitate->add_option("env", env_name)->required();
  imitate->add_option("--algo", algo, "bc, fem, gtal, or gail")
      ->required()
      ->check(CLI::IsMember({"bc", "fem", "gtal", "gail"}));
  imitate->add_option("--dataset", dataset_path, "JSONL demonstrations")->required();
  imitate->add_option("--lambda", lambda, "causal entropy bonus");
  imitate->add_option("--iters", iters, "training iterations")->default_val(300);
  imitate->add_option("--pairs", pairs, "state-action pairs per iteration");
  imitate->add_option("--hidden", hidden, "hidden layer sizes");
  imitate->add_option("--seed", seed);
  imitate->add_option("--out", out_path, "output directory")->required();

  auto* eval = app.add_subcommand("eval", "evaluate a saved policy on the true cost");
  eval->add_option("env", env_name)->required();
  eval->add_option("--policy", policy_path, "saved policy JSON")->required();
  eval->add_option("--episodes", episodes)->check(CLI::PositiveNumber);
  eval->add_option("--seed", seed);

  auto* exact = app.add_subcommand("exact-match", "exact occupancy matching on a gridworld");
  exact->add_option("--grid", grid, "WxH, e.g. 5x5");
  exact->add_option("--slip", slip);
  exact->add_option("--gamma", gamma);
  exact->add_option("--iters", iters)->default_val(5000);
  exact->add_option("--out", out_path, "output directory")->required();

  auto* sweep = app.add_subcommand("sweep", "run a full experiment from a JSON config");
  sweep->add_option("--config", config_path, "JSON run configuration")->required();

  auto* plot = app.add_subcommand("plot", "render a scores CSV as an SVG chart");
  plot->add_option("--scores", dataset_path, "scores CSV")->required();
  plot->add_option("--out", out_path, "output SVG path")->required();

  try {
    app.parse(argc, argv);
    if (app.got_subcommand(expert)) return run_expert(env_name, iters, seed, out_path);
    if (app.got_subcommand(sample)) return run_sample(env_name, policy_path, n, seed, out_path);
    if (app.got_subcommand(imitate))
      return run_imitate(env_name, algo, dataset_path, lambda, iters, pairs, hidden, seed,
                         out_path);
    if (app.got_subcommand(eval)) return run_eval(env_name, policy_path, episodes, seed);
    if (app.got_subcommand(exact)) return run_exact_match(grid, slip, gamma, iters, out_path);
    if (app.got_subcommand(sweep)) return run_sweep(config_path);
    if (app.got_subcommand(plot)) return run_plot(dataset_path, out_path);
    std::fprintf(stderr, "error: no subcommand selected\n");
    return 2;
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
