#include "mimic/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace mimic::io {
namespace {

using nlohmann::json;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return in;
}

// shortest decimal form that parses back to the same double
std::string num(double x) { return json(x).dump(); }

json vector_to_json(const VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

VectorXd vector_from_json(const json& arr) {
  VectorXd v(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) v(static_cast<Eigen::Index>(i)) = arr.at(i).get<double>();
  return v;
}

json matrix_to_json(const MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

MatrixXd matrix_from_json(const json& rows) {
  if (rows.empty()) throw std::runtime_error("empty matrix");
  const std::size_t n_cols = rows.at(0).size();
  MatrixXd m(rows.size(), n_cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const json& row = rows.at(r);
    if (row.size() != n_cols) throw std::runtime_error("ragged matrix rows");
    for (std::size_t c = 0; c < n_cols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row.at(c).get<double>();
  }
  return m;
}

json parse_or_rethrow(const std::string& text, const std::string& where) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(where + ": " + e.what());
  }
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

}  // namespace

void save_dataset(const std::string& path, const ExpertDataset& data) {
  auto out = open_out(path);
  for (const auto& traj : data.trajectories) {
    json line;
    json obs = json::array();
    for (int t = 0; t < traj.length(); ++t) {
      json col = json::array();
      for (Eigen::Index i = 0; i < traj.observations.rows(); ++i)
        col.push_back(traj.observations(i, t));
      obs.push_back(col);
    }
    line["observations"] = obs;
    line["actions"] = traj.actions;
    json costs = json::array();
    for (Eigen::Index t = 0; t < traj.env_costs.size(); ++t) costs.push_back(traj.env_costs(t));
    line["costs"] = costs;
    line["seed"] = traj.seed;
    out << line.dump() << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

ExpertDataset load_dataset(const std::string& path) {
  auto in = open_in(path);
  ExpertDataset data;
  data.source = path;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(lineno);
    const json j = parse_or_rethrow(line, where);
    Trajectory traj;
    const json& obs = j.at("observations");
    const json& actions = j.at("actions");
    const json& costs = j.at("costs");
    const int len = static_cast<int>(actions.size());
    if (len == 0) throw std::runtime_error(where + ": empty trajectory");
    if (static_cast<int>(obs.size()) != len || static_cast<int>(costs.size()) != len)
      throw std::runtime_error(where + ": observations, actions, and costs disagree in length");
    const int obs_dim = static_cast<int>(obs.at(0).size());
    traj.observations.resize(obs_dim, len);
    for (int t = 0; t < len; ++t) {
      if (static_cast<int>(obs.at(t).size()) != obs_dim)
        throw std::runtime_error(where + ": inconsistent observation dimension");
      for (int i = 0; i < obs_dim; ++i) traj.observations(i, t) = obs.at(t).at(i).get<double>();
    }
    traj.actions = actions.get<std::vector<int>>();
    traj.env_costs.resize(len);
    for (int t = 0; t < len; ++t) traj.env_costs(t) = costs.at(t).get<double>();
    traj.eval_costs = traj.env_costs;
    traj.log_probs = VectorXd::Zero(len);
    traj.seed = j.value("seed", std::uint64_t{0});
    data.trajectories.push_back(std::move(traj));
  }
  if (data.trajectories.empty()) throw std::runtime_error(path + ": no trajectories");
  data.validate(static_cast<int>(data.trajectories.front().observations.rows()));
  return data;
}

void save_policy(const std::string& path, const PolicyConfig& config, const VectorXd& params) {
  json j;
  j["head"] = config.head == PolicyConfig::Head::Categorical ? "categorical" : "gaussian";
  j["obs_dim"] = config.obs_dim;
  j["action_dim"] = config.action_dim;
  j["hidden"] = config.hidden;
  j["params"] = vector_to_json(params);
  auto out = open_out(path);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

SavedPolicy load_policy(const std::string& path) {
  auto in = open_in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const json j = parse_or_rethrow(buffer.str(), path);
  SavedPolicy saved;
  const std::string head = j.at("head").get<std::string>();
  if (head == "categorical")
    saved.config.head = PolicyConfig::Head::Categorical;
  else if (head == "gaussian")
    saved.config.head = PolicyConfig::Head::Gaussian;
  else
    throw std::runtime_error(path + ": unknown head '" + head + "'");
  saved.config.obs_dim = j.at("obs_dim").get<int>();
  saved.config.action_dim = j.at("action_dim").get<int>();
  saved.config.hidden = j.at("hidden").get<std::vector<int>>();
  saved.params = vector_from_json(j.at("params"));
  const MlpPolicy policy(saved.config);
  if (policy.n_params() != saved.params.size())
    throw std::runtime_error(path + ": parameter count does not match the architecture");
  return saved;
}

void save_mdp(const std::string& path, const TabularMdp& mdp) {
  mdp.validate();
  json j;
  j["n_states"] = mdp.n_states;
  j["n_actions"] = mdp.n_actions;
  j["discount"] = mdp.discount;
  j["start_dist"] = vector_to_json(mdp.start_dist);
  json transition = json::array();
  for (const auto& p : mdp.transition) transition.push_back(matrix_to_json(p));
  j["transition"] = transition;
  j["true_cost"] = mdp.true_cost ? matrix_to_json(*mdp.true_cost) : json();
  auto out = open_out(path);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

TabularMdp load_mdp(const std::string& path) {
  auto in = open_in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const json j = parse_or_rethrow(buffer.str(), path);
  TabularMdp mdp;
  mdp.n_states = j.at("n_states").get<int>();
  mdp.n_actions = j.at("n_actions").get<int>();
  mdp.discount = j.at("discount").get<double>();
  mdp.start_dist = vector_from_json(j.at("start_dist"));
  for (const json& p : j.at("transition")) mdp.transition.push_back(matrix_from_json(p));
  if (!j.at("true_cost").is_null()) mdp.true_cost = matrix_from_json(j.at("true_cost"));
  mdp.validate();
  return mdp;
}

void save_metrics_csv(const std::string& path, const std::vector<IterationRecord>& metrics) {
  auto out = open_out(path);
  out << "iter,true_return,disc_loss,mean_kl,entropy\n";
  for (const auto& row : metrics)
    out << row.iter << ',' << num(row.true_return) << ',' << num(row.disc_loss) << ','
        << num(row.mean_kl) << ',' << num(row.entropy) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

void save_curve_csv(const std::string& path, const std::string& index_name,
                    const std::string& value_name,
                    const std::vector<std::pair<int, double>>& curve) {
  auto out = open_out(path);
  out << index_name << ',' << value_name << '\n';
  for (const auto& [index, value] : curve) out << index << ',' << num(value) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

void save_scores_csv(const std::string& path, const std::vector<ScoreRecord>& scores) {
  auto out = open_out(path);
  out << "algorithm,n_trajectories,n_seeds,raw_mean,raw_std,scaled_score\n";
  for (const auto& s : scores)
    out << s.algorithm << ',' << s.n_trajectories << ',' << s.n_seeds << ',' << num(s.raw_mean)
        << ',' << num(s.raw_std) << ',' << num(s.scaled) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<ScoreRecord> load_scores_csv(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || split_csv_line(line).size() != 6)
    throw std::runtime_error(path + ": missing score header");
  std::vector<ScoreRecord> scores;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 6)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected 6 fields");
    try {
      ScoreRecord s;
      s.algorithm = fields[0];
      s.n_trajectories = std::stoi(fields[1]);
      s.n_seeds = std::stoi(fields[2]);
      s.raw_mean = std::stod(fields[3]);
      s.raw_std = std::stod(fields[4]);
      s.scaled = std::stod(fields[5]);
      scores.push_back(std::move(s));
    } catch (const std::logic_error&) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": malformed number");
    }
  }
  if (scores.empty()) throw std::runtime_error(path + ": no score rows");
  return scores;
}

RunConfig parse_run_config(const std::string& path) {
  auto in = open_in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const json j = parse_or_rethrow(buffer.str(), path);
  RunConfig cfg;
  cfg.env = j.value("env", cfg.env);
  cfg.algorithms = j.value("algorithms", cfg.algorithms);
  cfg.dataset_sizes = j.value("dataset_sizes", cfg.dataset_sizes);
  cfg.seeds = j.value("seeds", cfg.seeds);
  cfg.lambda = j.value("lambda", cfg.lambda);
  cfg.iters = j.value("iters", cfg.iters);
  cfg.pairs_per_iter = j.value("pairs_per_iter", cfg.pairs_per_iter);
  cfg.hidden = j.value("hidden", cfg.hidden);
  cfg.expert_iters = j.value("expert_iters", cfg.expert_iters);
  cfg.expert_policy = j.value("expert_policy", cfg.expert_policy);
  cfg.dataset_path = j.value("dataset_path", cfg.dataset_path);
  cfg.eval_episodes = j.value("eval_episodes", cfg.eval_episodes);
  cfg.out_dir = j.value("out_dir", cfg.out_dir);
  cfg.validate();
  return cfg;
}

}  // namespace mimic::io
