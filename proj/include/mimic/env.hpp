// In-repo environments: a tabularizable gridworld and the classic control
// tasks cartpole and mountain car, all with cost = -reward conventions.
#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "mimic/mdp.hpp"

namespace mimic {

struct ActionSpace {
  enum class Kind { Discrete, Continuous };
  Kind kind = Kind::Discrete;
  int n = 0;  // action count (discrete) or dimension (continuous)
};

struct EnvSpec {
  std::string name;
  int obs_dim = 0;
  ActionSpace action_space;
  int horizon_cap = 0;  // episodes never exceed this many steps
};

struct StepResult {
  VectorXd observation;
  double cost = 0.0;
  bool done = false;
};

class Env {
 public:
  virtual ~Env() = default;
  virtual const EnvSpec& spec() const = 0;

  // Starts a fresh episode; identical seeds give identical episodes.
  virtual VectorXd reset(std::uint64_t seed) = 0;

  // Advances one step. Throws if the episode is done or the action is out
  // of range.
  virtual StepResult step(int action) = 0;
};

struct GridworldConfig {
  int width = 5;
  int height = 5;
  int goal = -1;  // cell index, -1 selects the last cell
  double slip = 0.1;
  double discount = 0.95;
  int horizon_cap = 200;
};

// Exact MDP of the gridworld: 4 moves (up/right/down/left), slip probability
// split between the two perpendicular moves, walls bounce back, the goal cell
// absorbs at cost 0, every other state-action costs 1. Start distribution is
// uniform over non-goal cells.
TabularMdp tabularize(const GridworldConfig& config);

// Environment over an arbitrary tabular MDP with one-hot observations and
// true_cost as the step cost. Episodes end only at the horizon cap so that
// discounted visit statistics match the infinite-horizon measure.
std::unique_ptr<Env> make_tabular_env(std::string name, TabularMdp mdp, int horizon_cap);

// "gridworld" (default config), "cartpole", or "mountaincar"
std::unique_ptr<Env> make_env(const std::string& name);
std::unique_ptr<Env> make_gridworld_env(const GridworldConfig& config);

// One Euler step of the cartpole dynamics (x, x_dot, theta, theta_dot);
// action 0 pushes left, 1 pushes right.
Eigen::Vector4d cartpole_dynamics(const Eigen::Vector4d& state, int action);

// One step of the mountain car dynamics (position, velocity); actions
// 0 = reverse, 1 = coast, 2 = forward.
Eigen::Vector2d mountain_car_dynamics(const Eigen::Vector2d& state, int action);

}  // namespace mimic
