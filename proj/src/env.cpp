#include "mimic/env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "mimic/rng.hpp"

namespace mimic {

TabularMdp tabularize(const GridworldConfig& config) {
  if (config.width < 1 || config.height < 1)
    throw std::invalid_argument("tabularize: degenerate grid");
  const int S = config.width * config.height;
  const int goal = config.goal < 0 ? S - 1 : config.goal;
  if (goal >= S) throw std::invalid_argument("tabularize: goal cell out of bounds");
  if (config.slip < 0.0 || config.slip > 1.0)
    throw std::invalid_argument("tabularize: slip must be in [0,1]");

  // moves indexed 0=up 1=right 2=down 3=left; perpendicular pairs differ by 1 mod 4
  const auto move = [&](int s, int dir) {
    int x = s % config.width, y = s / config.width;
    switch (dir) {
      case 0: y -= 1; break;
      case 1: x += 1; break;
      case 2: y += 1; break;
      default: x -= 1; break;
    }
    if (x < 0 || x >= config.width || y < 0 || y >= config.height) return s;  // wall bounce
    return y * config.width + x;
  };

  TabularMdp mdp;
  mdp.n_states = S;
  mdp.n_actions = 4;
  mdp.transition.assign(4, MatrixXd::Zero(S, S));
  for (int a = 0; a < 4; ++a) {
    for (int s = 0; s < S; ++s) {
      if (s == goal) {
        mdp.transition[a](s, s) = 1.0;
        continue;
      }
      mdp.transition[a](s, move(s, a)) += 1.0 - config.slip;
      mdp.transition[a](s, move(s, (a + 1) % 4)) += 0.5 * config.slip;
      mdp.transition[a](s, move(s, (a + 3) % 4)) += 0.5 * config.slip;
    }
  }

  mdp.start_dist = VectorXd::Zero(S);
  if (S == 1) {
    mdp.start_dist(0) = 1.0;  // goal-only grid: start at the goal
  } else {
    for (int s = 0; s < S; ++s)
      if (s != goal) mdp.start_dist(s) = 1.0 / (S - 1);
  }

  mdp.discount = config.discount;
  MatrixXd cost = MatrixXd::Ones(S, 4);
  cost.row(goal).setZero();
  mdp.true_cost = cost;
  mdp.validate();
  return mdp;
}

namespace {

class TabularEnv final : public Env {
 public:
  TabularEnv(std::string name, TabularMdp mdp, int horizon_cap) : mdp_(std::move(mdp)) {
    mdp_.validate();
    if (!mdp_.true_cost) throw std::invalid_argument("TabularEnv: mdp lacks a cost table");
    spec_.name = std::move(name);
    spec_.obs_dim = mdp_.n_states;
    spec_.action_space = {ActionSpace::Kind::Discrete, mdp_.n_actions};
    spec_.horizon_cap = horizon_cap;
  }

  const EnvSpec& spec() const override { return spec_; }

  VectorXd reset(std::uint64_t seed) override {
    rng_ = make_rng(split_seed(seed, 0x9e1d));
    const double u = uniform01(rng_);
    double acc = 0.0;
    state_ = mdp_.n_states - 1;
    for (int s = 0; s < mdp_.n_states; ++s) {
      acc += mdp_.start_dist(s);
      if (u < acc) {
        state_ = s;
        break;
      }
    }
    steps_ = 0;
    done_ = false;
    return one_hot(state_);
  }

  StepResult step(int action) override {
    if (done_) throw std::logic_error("TabularEnv: episode is done");
    if (action < 0 || action >= mdp_.n_actions)
      throw std::invalid_argument("TabularEnv: action out of range");
    const double cost = (*mdp_.true_cost)(state_, action);
    const double u = uniform01(rng_);
    double acc = 0.0;
    int next = mdp_.n_states - 1;
    for (int s = 0; s < mdp_.n_states; ++s) {
      acc += mdp_.transition[action](state_, s);
      if (u < acc) {
        next = s;
        break;
      }
    }
    state_ = next;
    ++steps_;
    done_ = steps_ >= spec_.horizon_cap;
    return {one_hot(state_), cost, done_};
  }

 private:
  VectorXd one_hot(int s) const {
    VectorXd v = VectorXd::Zero(mdp_.n_states);
    v(s) = 1.0;
    return v;
  }

  TabularMdp mdp_;
  EnvSpec spec_;
  std::mt19937_64 rng_;
  int state_ = 0;
  int steps_ = 0;
  bool done_ = true;
};

// Pole-on-cart constants (documented in the README): gravity 9.8, cart mass
// 1.0, pole mass 0.1, pole half-length 0.5, push force 10, Euler step 0.02.
constexpr double kGravity = 9.8;
constexpr double kCartMass = 1.0;
constexpr double kPoleMass = 0.1;
constexpr double kPoleHalfLength = 0.5;
constexpr double kForceMag = 10.0;
constexpr double kTau = 0.02;
constexpr double kAngleLimit = 12.0 * M_PI / 180.0;
constexpr double kPositionLimit = 2.4;

class CartpoleEnv final : public Env {
 public:
  CartpoleEnv() {
    spec_.name = "cartpole";
    spec_.obs_dim = 4;
    spec_.action_space = {ActionSpace::Kind::Discrete, 2};
    spec_.horizon_cap = 200;
  }

  const EnvSpec& spec() const override { return spec_; }

  VectorXd reset(std::uint64_t seed) override {
    rng_ = make_rng(split_seed(seed, 0xca57));
    for (int i = 0; i < 4; ++i) state_(i) = uniform(rng_, -0.05, 0.05);
    steps_ = 0;
    done_ = false;
    return state_;
  }

  StepResult step(int action) override {
    if (done_) throw std::logic_error("CartpoleEnv: episode is done");
    if (action < 0 || action > 1)
      throw std::invalid_argument("CartpoleEnv: action out of range");
    state_ = cartpole_dynamics(state_, action);
    ++steps_;
    const bool failed =
        std::abs(state_(0)) > kPositionLimit || std::abs(state_(2)) > kAngleLimit;
    done_ = failed || steps_ >= spec_.horizon_cap;
    return {state_, -1.0, done_};  // reward +1 per step survived
  }

 private:
  EnvSpec spec_;
  std::mt19937_64 rng_;
  Eigen::Vector4d state_ = Eigen::Vector4d::Zero();
  int steps_ = 0;
  bool done_ = true;
};

// Car-on-hill constants: throttle 0.001, gravity term 0.0025 cos(3p),
// position in [-1.2, 0.6], speed in [-0.07, 0.07], goal at 0.5.
constexpr double kThrottle = 0.001;
constexpr double kHillGravity = 0.0025;
constexpr double kMinPosition = -1.2;
constexpr double kMaxPosition = 0.6;
constexpr double kMaxSpeed = 0.07;
constexpr double kGoalPosition = 0.5;

class MountainCarEnv final : public Env {
 public:
  MountainCarEnv() {
    spec_.name = "mountaincar";
    spec_.obs_dim = 2;
    spec_.action_space = {ActionSpace::Kind::Discrete, 3};
    spec_.horizon_cap = 200;
  }

  const EnvSpec& spec() const override { return spec_; }

  VectorXd reset(std::uint64_t seed) override {
    rng_ = make_rng(split_seed(seed, 0x3ca7));
    state_(0) = uniform(rng_, -0.6, -0.4);
    state_(1) = 0.0;
    steps_ = 0;
    done_ = false;
    return state_;
  }

  StepResult step(int action) override {
    if (done_) throw std::logic_error("MountainCarEnv: episode is done");
    if (action < 0 || action > 2)
      throw std::invalid_argument("MountainCarEnv: action out of range");
    state_ = mountain_car_dynamics(state_, action);
    ++steps_;
    const bool at_goal = state_(0) >= kGoalPosition;
    done_ = at_goal || steps_ >= spec_.horizon_cap;
    return {state_, 1.0, done_};  // reward -1 per step until the goal
  }

 private:
  EnvSpec spec_;
  std::mt19937_64 rng_;
  Eigen::Vector2d state_ = Eigen::Vector2d::Zero();
  int steps_ = 0;
  bool done_ = true;
};

}  // namespace

Eigen::Vector4d cartpole_dynamics(const Eigen::Vector4d& state, int action) {
  const double force = action == 1 ? kForceMag : -kForceMag;
  const double x = state(0), x_dot = state(1), theta = state(2), theta_dot = state(3);
  const double cos_t = std::cos(theta), sin_t = std::sin(theta);
  const double total_mass = kCartMass + kPoleMass;
  const double pole_moment = kPoleMass * kPoleHalfLength;

  const double temp = (force + pole_moment * theta_dot * theta_dot * sin_t) / total_mass;
  const double theta_acc =
      (kGravity * sin_t - cos_t * temp) /
      (kPoleHalfLength * (4.0 / 3.0 - kPoleMass * cos_t * cos_t / total_mass));
  const double x_acc = temp - pole_moment * theta_acc * cos_t / total_mass;

  Eigen::Vector4d next;
  next << x + kTau * x_dot, x_dot + kTau * x_acc, theta + kTau * theta_dot,
      theta_dot + kTau * theta_acc;
  return next;
}

Eigen::Vector2d mountain_car_dynamics(const Eigen::Vector2d& state, int action) {
  double position = state(0), velocity = state(1);
  velocity += kThrottle * (action - 1) - kHillGravity * std::cos(3.0 * position);
  velocity = std::clamp(velocity, -kMaxSpeed, kMaxSpeed);
  position += velocity;
  position = std::clamp(position, kMinPosition, kMaxPosition);
  if (position <= kMinPosition && velocity < 0.0) velocity = 0.0;  // inelastic left wall
  return {position, velocity};
}

std::unique_ptr<Env> make_tabular_env(std::string name, TabularMdp mdp, int horizon_cap) {
  return std::make_unique<TabularEnv>(std::move(name), std::move(mdp), horizon_cap);
}

std::unique_ptr<Env> make_gridworld_env(const GridworldConfig& config) {
  return make_tabular_env("gridworld", tabularize(config), config.horizon_cap);
}

std::unique_ptr<Env> make_env(const std::string& name) {
  if (name == "gridworld") return make_gridworld_env(GridworldConfig{});
  if (name == "cartpole") return std::make_unique<CartpoleEnv>();
  if (name == "mountaincar") return std::make_unique<MountainCarEnv>();
  throw std::invalid_argument("make_env: unknown environment '" + name + "'");
}

}  // namespace mimic
