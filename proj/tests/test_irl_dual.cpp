#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "mimic/irl_dual.hpp"
#include "test_util.hpp"

using namespace mimic;
using namespace mimic::testutil;

TEST_CASE("dual ascent matches the expert occupancy on the chain") {
  const TabularMdp mdp = chain_mdp();
  const OccupancyMeasure rho_E = occupancy_measure(mdp, TabularPolicy::uniform(2, 2));

  // uniform expert: the zero-cost iterate is already optimal
  DualState state = irl_dual_ascent(mdp, rho_E, Regularizer::constant(0.0),
                                    default_dual_step(mdp), 10);
  CHECK(state.primal_gap <= 1e-9);

  // a biased expert needs actual ascent
  TabularPolicy expert;
  expert.probs.resize(2, 2);
  expert.probs << 0.8, 0.2, 0.3, 0.7;
  const OccupancyMeasure rho_B = occupancy_measure(mdp, expert);
  state = irl_dual_ascent(mdp, rho_B, Regularizer::constant(0.0), default_dual_step(mdp),
                          5000, 1e-4);
  CHECK(state.primal_gap <= 1e-3);

  // history is recorded in iterate order
  for (size_t i = 1; i < state.history.size(); ++i)
    CHECK(state.history[i].first == state.history[i - 1].first + 1);
}

TEST_CASE("recovered cost reproduces a soft-optimal expert") {
  std::mt19937_64 rng(101);
  const TabularMdp mdp = random_mdp(4, 3, 0.9, rng);
  MatrixXd c0(4, 3);
  for (int i = 0; i < c0.size(); ++i)
    c0.data()[i] = std::uniform_real_distribution<double>(-1, 1)(rng);
  const TabularPolicy expert = soft_value_iteration(mdp, c0).policy;
  const OccupancyMeasure rho_E = occupancy_measure(mdp, expert);

  const TabularPolicy recovered = rl_after_irl(mdp, rho_E);
  const OccupancyMeasure rho_R = occupancy_measure(mdp, recovered);
  CHECK((rho_R.rho - rho_E.rho).cwiseAbs().sum() <= 1e-3 / (1.0 - mdp.discount));
}

TEST_CASE("uniform expert recovers a near-uniform policy") {
  std::mt19937_64 rng(103);
  const TabularMdp mdp = random_mdp(3, 3, 0.8, rng);
  const OccupancyMeasure rho_E = occupancy_measure(mdp, TabularPolicy::uniform(3, 3));
  const TabularPolicy recovered = rl_after_irl(mdp, rho_E);
  CHECK((recovered.probs.array() - 1.0 / 3.0).abs().maxCoeff() <= 1e-3);
}

TEST_CASE("one-action MDPs match trivially") {
  std::mt19937_64 rng(107);
  const TabularMdp mdp = random_mdp(3, 1, 0.9, rng);
  const OccupancyMeasure rho_E = occupancy_measure(mdp, TabularPolicy::uniform(3, 1));
  const DualState state =
      irl_dual_ascent(mdp, rho_E, Regularizer::constant(0.0), default_dual_step(mdp), 5);
  CHECK(state.primal_gap <= 1e-10);
}

TEST_CASE("zero step size leaves everything in place") {
  const TabularMdp mdp = chain_mdp();
  TabularPolicy expert;
  expert.probs.resize(2, 2);
  expert.probs << 0.9, 0.1, 0.2, 0.8;
  const OccupancyMeasure rho_E = occupancy_measure(mdp, expert);
  const DualState state =
      irl_dual_ascent(mdp, rho_E, Regularizer::constant(0.0), 0.0, 50);
  CHECK(state.cost.cwiseAbs().maxCoeff() == 0.0);
  for (const auto& [it, gap] : state.history) CHECK(gap == doctest::Approx(state.history[0].second));
}

TEST_CASE("primal gap trends downward over 50-iterate windows") {
  const TabularMdp mdp = chain_mdp();
  TabularPolicy expert;
  expert.probs.resize(2, 2);
  expert.probs << 0.8, 0.2, 0.3, 0.7;
  const OccupancyMeasure rho_E = occupancy_measure(mdp, expert);
  const DualState state = irl_dual_ascent(mdp, rho_E, Regularizer::constant(0.0),
                                          default_dual_step(mdp), 300);
  const auto window_mean = [&](size_t from) {
    double total = 0.0;
    for (size_t i = from; i < from + 50; ++i) total += state.history[i].second;
    return total / 50.0;
  };
  for (size_t from = 0; from + 100 < state.history.size(); from += 50)
    CHECK(window_mean(from + 50) <= window_mean(from) + 1e-12);
}

TEST_CASE("KKT recovery at the dual optimum") {
  const TabularMdp mdp = chain_mdp();
  TabularPolicy expert;
  expert.probs.resize(2, 2);
  expert.probs << 0.7, 0.3, 0.4, 0.6;
  const OccupancyMeasure rho_E = occupancy_measure(mdp, expert);
  const DualState state = irl_dual_ascent(mdp, rho_E, Regularizer::constant(0.0),
                                          default_dual_step(mdp), 5000, 1e-6);
  // the exact RL solve of the recovered cost lands on rho_E
  const OccupancyMeasure rho =
      occupancy_measure(mdp, soft_value_iteration(mdp, state.cost).policy);
  CHECK((rho.rho - rho_E.rho).cwiseAbs().sum() <= 1e-5);
}

TEST_CASE("adding a constant to the recovered cost leaves the policy unchanged") {
  std::mt19937_64 rng(109);
  const TabularMdp mdp = random_mdp(3, 3, 0.85, rng);
  MatrixXd cost(3, 3);
  for (int i = 0; i < cost.size(); ++i)
    cost.data()[i] = std::uniform_real_distribution<double>(-1, 1)(rng);
  const TabularPolicy base = soft_value_iteration(mdp, cost).policy;
  const TabularPolicy shifted =
      soft_value_iteration(mdp, (cost.array() + 4.2).matrix()).policy;
  CHECK((base.probs - shifted.probs).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("saddle point verification") {
  const TabularMdp mdp = chain_mdp();
  TabularPolicy expert;
  expert.probs.resize(2, 2);
  expert.probs << 0.8, 0.2, 0.3, 0.7;
  const OccupancyMeasure rho_E = occupancy_measure(mdp, expert);
  const Regularizer psi = Regularizer::constant(0.0);

  SUBCASE("a converged pair satisfies both inequalities") {
    const DualState state =
        irl_dual_ascent(mdp, rho_E, psi, default_dual_step(mdp), 20000, 1e-8);
    const OccupancyMeasure rho_A =
        occupancy_measure(mdp, soft_value_iteration(mdp, state.cost).policy);
    const SaddleReport report = saddle_check(mdp, rho_A, state.cost, rho_E, psi, 200, 5);
    CHECK(report.max_violation <= 1e-6);
  }
  SUBCASE("an early iterate violates the cost-side inequality") {
    const DualState state = irl_dual_ascent(mdp, rho_E, psi, default_dual_step(mdp), 1);
    const OccupancyMeasure rho_A =
        occupancy_measure(mdp, soft_value_iteration(mdp, state.cost).policy);
    const SaddleReport report = saddle_check(mdp, rho_A, state.cost, rho_E, psi, 200, 5);
    CHECK(report.max_cost_violation > 1e-4);
  }
}

TEST_CASE("divergence raises with the history attached") {
  const TabularMdp mdp = chain_mdp();
  TabularPolicy near_uniform;
  near_uniform.probs.resize(2, 2);
  near_uniform.probs << 0.52, 0.48, 0.49, 0.51;
  const OccupancyMeasure rho_E = occupancy_measure(mdp, near_uniform);
  try {
    irl_dual_ascent(mdp, rho_E, Regularizer::constant(0.0), 50.0, 2000);
    FAIL("expected DualDivergence");
  } catch (const DualDivergence& e) {
    CHECK(e.history.size() >= 2);
    CHECK(e.history.back().second > 10.0 * e.history.front().second);
  }
}

TEST_CASE("empirical occupancy smoothing") {
  MatrixXd counts(2, 2);
  counts << 4.0, 0.0, 1.0, 0.0;
  const OccupancyMeasure occ = empirical_occupancy(counts, 0.5, 1e-8);
  CHECK(occ.mass() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK((occ.rho.array() > 0.0).all());

  MatrixXd bad(1, 2);
  bad << -1.0, 2.0;
  CHECK_THROWS_AS(empirical_occupancy(bad, 0.5), std::invalid_argument);
}
