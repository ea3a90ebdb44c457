#include <doctest.h>

#include <cmath>

#include "mimic/mlp.hpp"
#include "mimic/numeric.hpp"
#include "mimic/policy.hpp"
#include "mimic/rng.hpp"
#include "test_util.hpp"

using namespace mimic;

namespace {

// central finite differences of a scalar function of the parameters
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

VectorXd random_params(int n, Rng& rng, double scale = 0.7) {
  VectorXd out(n);
  for (int i = 0; i < n; ++i) out(i) = scale * gaussian(rng);
  return out;
}

MatrixXd random_batch(int rows, int cols, Rng& rng) {
  MatrixXd out(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) out(i, j) = gaussian(rng);
  return out;
}

}  // namespace

TEST_CASE("mlp layout and validation") {
  Mlp net(MlpSpec{3, {5, 4}, 2});
  CHECK(net.n_params() == (5 * 3 + 5) + (4 * 5 + 4) + (2 * 4 + 2));

  Mlp linear(MlpSpec{3, {}, 2});
  CHECK(linear.n_params() == 2 * 3 + 2);

  CHECK_THROWS_AS(Mlp(MlpSpec{0, {}, 2}), std::invalid_argument);
  CHECK_THROWS_AS(Mlp(MlpSpec{3, {0}, 2}), std::invalid_argument);

  VectorXd params = net.init_params(1);
  MatrixXd bad = MatrixXd::Constant(3, 2, std::nan(""));
  CHECK_THROWS_AS(net.forward(params, bad), std::invalid_argument);
  CHECK_THROWS_AS(net.forward(params, MatrixXd::Zero(4, 2)), std::invalid_argument);
  CHECK_THROWS_AS(net.forward(VectorXd::Zero(3), MatrixXd::Zero(3, 2)), std::invalid_argument);
}

TEST_CASE("linear network matches an explicit affine map") {
  Mlp net(MlpSpec{2, {}, 3});
  VectorXd params(net.n_params());
  // column-major weight storage, then the bias
  params << 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 0.1, 0.2, 0.3;
  MatrixXd w(3, 2);
  w << 1.0, 4.0, 2.0, 5.0, 3.0, 6.0;
  VectorXd b(3);
  b << 0.1, 0.2, 0.3;
  MatrixXd x = MatrixXd::Random(2, 7);
  MatrixXd expected = (w * x).colwise() + b;
  CHECK((net.forward(params, x).output - expected).lpNorm<Eigen::Infinity>() <= 1e-14);
}

TEST_CASE("initialization is seeded, orthogonal in the hidden stack, small at the head") {
  Mlp net(MlpSpec{6, {16, 16}, 4});
  VectorXd a = net.init_params(7);
  VectorXd b = net.init_params(7);
  VectorXd c = net.init_params(8);
  CHECK((a - b).norm() == 0.0);
  CHECK((a - c).norm() > 0.0);

  // first layer: 16x6 with orthonormal columns
  MatrixXd w1 = Eigen::Map<const MatrixXd>(a.data(), 16, 6);
  CHECK((w1.transpose() * w1 - MatrixXd::Identity(6, 6)).lpNorm<Eigen::Infinity>() <= 1e-12);
  // final layer scaled down, biases exactly zero
  const int head_w = 16 * 6 + 16 + 16 * 16 + 16;
  MatrixXd w3 = Eigen::Map<const MatrixXd>(a.data() + head_w, 4, 16);
  CHECK(w3.lpNorm<Eigen::Infinity>() <= 0.011);
  CHECK(a(head_w - 1) == 0.0);
  CHECK(a.tail(4).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("reverse-mode gradients match central differences to 1e-6 relative") {
  Rng rng = make_rng(21);
  for (int trial = 0; trial < 4; ++trial) {
    MlpSpec spec = trial % 2 == 0 ? MlpSpec{3, {8, 6}, 2} : MlpSpec{4, {}, 3};
    Mlp net(spec);
    VectorXd params = random_params(net.n_params(), rng);
    MatrixXd x = random_batch(spec.in_dim, 5, rng);
    MatrixXd cot = random_batch(spec.out_dim, 5, rng);

    auto f = [&](const VectorXd& p) { return (net.forward(p, x).output.array() * cot.array()).sum(); };
    VectorXd analytic = net.vjp(params, net.forward(params, x), cot);
    VectorXd fd = fd_gradient(f, params);
    CHECK((analytic - fd).norm() <= 1e-6 * std::max(1.0, fd.norm()));
  }
}

TEST_CASE("forward-mode tangents match directional differences and adjoint identity") {
  Rng rng = make_rng(22);
  Mlp net(MlpSpec{3, {7, 5}, 2});
  VectorXd params = random_params(net.n_params(), rng);
  MatrixXd x = random_batch(3, 6, rng);
  Mlp::Cache cache = net.forward(params, x);

  for (int trial = 0; trial < 5; ++trial) {
    VectorXd tangent = random_params(net.n_params(), rng, 1.0);
    MatrixXd jv = net.jvp(params, cache, tangent);

    const double h = 1e-5;
    MatrixXd fd = (net.forward(params + h * tangent, x).output -
                   net.forward(params - h * tangent, x).output) /
                  (2.0 * h);
    CHECK((jv - fd).lpNorm<Eigen::Infinity>() <= 1e-6 * std::max(1.0, fd.lpNorm<Eigen::Infinity>()));

    // <cot, J v> must equal <J^T cot, v> exactly up to roundoff
    MatrixXd cot = random_batch(2, 6, rng);
    const double lhs = (cot.array() * jv.array()).sum();
    const double rhs = net.vjp(params, cache, cot).dot(tangent);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("categorical head: probabilities, sampling, and log-probs agree") {
  Rng rng = make_rng(30);
  MlpPolicy policy({PolicyConfig::Head::Categorical, 3, 4, {8}});
  VectorXd params = random_params(policy.n_params(), rng);
  MatrixXd obs = random_batch(3, 5, rng);

  MatrixXd probs = policy.action_probabilities(params, obs);
  CHECK((probs.colwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-12);
  CHECK(probs.minCoeff() > 0.0);

  ActionBatch actions;
  actions.discrete = {0, 3, 1, 2, 2};
  VectorXd logp = policy.log_probs(params, obs, actions);
  for (int t = 0; t < 5; ++t)
    CHECK(std::abs(logp(t) - std::log(probs(actions.discrete[t], t))) <= 1e-12);

  // sampled frequencies track the first-state probabilities
  VectorXd counts = VectorXd::Zero(4);
  const int n = 40000;
  for (int i = 0; i < n; ++i) {
    MlpPolicy::Sample s = policy.sample(params, obs.col(0), rng);
    counts(s.discrete) += 1.0;
    CHECK(std::abs(s.log_prob - std::log(probs(s.discrete, 0))) <= 1e-12);
  }
  CHECK((counts / n - probs.col(0)).lpNorm<Eigen::Infinity>() <= 0.01);

  actions.discrete[0] = 4;
  CHECK_THROWS_AS(policy.log_probs(params, obs, actions), std::invalid_argument);
}

TEST_CASE("gaussian head: density normalizes and sampling is consistent") {
  Rng rng = make_rng(31);
  MlpPolicy policy({PolicyConfig::Head::Gaussian, 2, 1, {6}});
  VectorXd params = random_params(policy.n_params(), rng);
  params(policy.n_params() - 1) = -0.3;  // log-std tail
  VectorXd obs = VectorXd::Ones(2);

  // trapezoid quadrature of exp(log p) over mean +- 10 sigma
  MatrixXd obs_mat = obs;
  Mlp::Cache cache = policy.net().forward(params.head(policy.net().n_params()), obs_mat);
  const double mean = cache.output(0, 0), sigma = std::exp(-0.3);
  const int grid = 20001;
  const double lo = mean - 10 * sigma, hi = mean + 10 * sigma, dx = (hi - lo) / (grid - 1);
  double integral = 0.0;
  for (int i = 0; i < grid; ++i) {
    ActionBatch a;
    a.continuous = MatrixXd::Constant(1, 1, lo + i * dx);
    const double density = std::exp(policy.log_probs(params, obs_mat, a)(0));
    integral += density * (i == 0 || i == grid - 1 ? 0.5 : 1.0) * dx;
  }
  CHECK(std::abs(integral - 1.0) <= 1e-6);

  // sampled log-prob equals the batched recomputation
  for (int i = 0; i < 50; ++i) {
    MlpPolicy::Sample s = policy.sample(params, obs, rng);
    ActionBatch a;
    a.continuous = s.continuous;
    CHECK(std::abs(s.log_prob - policy.log_probs(params, obs_mat, a)(0)) <= 1e-10);
  }

  // sample mean and std converge to the head outputs
  double sum = 0.0, sum2 = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double v = policy.sample(params, obs, rng).continuous(0);
    sum += v;
    sum2 += v * v;
  }
  CHECK(std::abs(sum / n - mean) <= 0.02);
  CHECK(std::abs(std::sqrt(sum2 / n - (sum / n) * (sum / n)) - sigma) <= 0.02);
}

TEST_CASE("score gradients match finite differences of weighted log-likelihood") {
  Rng rng = make_rng(32);

  SUBCASE("categorical") {
    MlpPolicy policy({PolicyConfig::Head::Categorical, 3, 3, {6}});
    VectorXd params = random_params(policy.n_params(), rng);
    MatrixXd obs = random_batch(3, 6, rng);
    ActionBatch actions;
    actions.discrete = {0, 1, 2, 0, 2, 1};
    VectorXd weights = random_params(6, rng, 1.0);

    auto f = [&](const VectorXd& p) { return weights.dot(policy.log_probs(p, obs, actions)); };
    VectorXd analytic = policy.score_gradient(params, obs, actions, weights);
    VectorXd fd = fd_gradient(f, params);
    CHECK((analytic - fd).norm() <= 1e-6 * std::max(1.0, fd.norm()));
  }

  SUBCASE("gaussian, including the log-std tail") {
    MlpPolicy policy({PolicyConfig::Head::Gaussian, 2, 2, {5}});
    VectorXd params = random_params(policy.n_params(), rng);
    MatrixXd obs = random_batch(2, 4, rng);
    ActionBatch actions;
    actions.continuous = random_batch(2, 4, rng);
    VectorXd weights = random_params(4, rng, 1.0);

    auto f = [&](const VectorXd& p) { return weights.dot(policy.log_probs(p, obs, actions)); };
    VectorXd analytic = policy.score_gradient(params, obs, actions, weights);
    VectorXd fd = fd_gradient(f, params);
    CHECK((analytic - fd).norm() <= 1e-6 * std::max(1.0, fd.norm()));
  }
}

TEST_CASE("mean KL is zero at equal parameters and matches a direct evaluation") {
  Rng rng = make_rng(33);
  MlpPolicy policy({PolicyConfig::Head::Categorical, 2, 3, {5}});
  VectorXd params = random_params(policy.n_params(), rng);
  MatrixXd obs = random_batch(2, 7, rng);
  CHECK(policy.mean_kl(params, params, obs) == 0.0);

  VectorXd other = params + 0.3 * random_params(policy.n_params(), rng, 1.0);
  MatrixXd p_old = policy.action_probabilities(params, obs);
  MatrixXd p_new = policy.action_probabilities(other, obs);
  double direct = 0.0;
  for (int j = 0; j < 7; ++j)
    for (int i = 0; i < 3; ++i)
      direct += p_old(i, j) * std::log(p_old(i, j) / p_new(i, j));
  direct /= 7.0;
  CHECK(std::abs(policy.mean_kl(params, other, obs) - direct) <= 1e-12);
  CHECK(policy.mean_kl(params, other, obs) > 0.0);
}

TEST_CASE("gaussian mean KL has its closed form") {
  Rng rng = make_rng(34);
  MlpPolicy policy({PolicyConfig::Head::Gaussian, 2, 1, {}});
  VectorXd params = random_params(policy.n_params(), rng);
  VectorXd other = random_params(policy.n_params(), rng);
  MatrixXd obs = random_batch(2, 3, rng);

  Mlp::Cache c_old = policy.net().forward(params.head(policy.net().n_params()), obs);
  Mlp::Cache c_new = policy.net().forward(other.head(policy.net().n_params()), obs);
  const double so = std::exp(params(params.size() - 1)), sn = std::exp(other(other.size() - 1));
  double direct = 0.0;
  for (int j = 0; j < 3; ++j) {
    const double dm = c_new.output(0, j) - c_old.output(0, j);
    direct += std::log(sn / so) + (so * so + dm * dm) / (2.0 * sn * sn) - 0.5;
  }
  CHECK(std::abs(policy.mean_kl(params, other, obs) - direct / 3.0) <= 1e-12);
}

TEST_CASE("fisher-vector products match the dense score-covariance matrix") {
  Rng rng = make_rng(35);

  SUBCASE("categorical: sum_a p(a|s) grad log p(a|s) outer products") {
    MlpPolicy policy({PolicyConfig::Head::Categorical, 2, 3, {4}});
    const int P = policy.n_params();
    VectorXd params = random_params(P, rng);
    MatrixXd obs = random_batch(2, 5, rng);
    MatrixXd probs = policy.action_probabilities(params, obs);

    MatrixXd fisher = MatrixXd::Zero(P, P);
    for (int j = 0; j < 5; ++j) {
      MatrixXd col = obs.col(j);
      for (int a = 0; a < 3; ++a) {
        ActionBatch one;
        one.discrete = {a};
        VectorXd g = policy.score_gradient(params, col, one, VectorXd::Ones(1));
        fisher += probs(a, j) * g * g.transpose();
      }
    }
    fisher /= 5.0;

    for (int trial = 0; trial < 3; ++trial) {
      VectorXd v = random_params(P, rng, 1.0);
      VectorXd dense = fisher * v;
      VectorXd fast = policy.fisher_vector_product(params, obs, v);
      CHECK((dense - fast).norm() <= 1e-10 * std::max(1.0, dense.norm()));
    }
  }

  SUBCASE("gaussian: jacobian-weighted metric with the 2I log-std block") {
    MlpPolicy policy({PolicyConfig::Head::Gaussian, 2, 2, {3}});
    const int P = policy.n_params();
    const int net_p = policy.net().n_params();
    VectorXd params = random_params(P, rng);
    MatrixXd obs = random_batch(2, 4, rng);
    Mlp::Cache cache = policy.net().forward(params.head(net_p), obs);

    // J columns via unit-tangent forward mode
    MatrixXd fisher = MatrixXd::Zero(P, P);
    const VectorXd inv_var = (-2.0 * params.tail(2).array()).exp();
    std::vector<MatrixXd> jac_cols(net_p);
    for (int i = 0; i < net_p; ++i) {
      VectorXd e = VectorXd::Zero(net_p);
      e(i) = 1.0;
      jac_cols[i] = policy.net().jvp(params.head(net_p), cache, e);
    }
    for (int i = 0; i < net_p; ++i)
      for (int k = 0; k < net_p; ++k) {
        double acc = 0.0;
        for (int j = 0; j < 4; ++j)
          acc += (jac_cols[i].col(j).cwiseProduct(inv_var)).dot(jac_cols[k].col(j));
        fisher(i, k) = acc / 4.0;
      }
    fisher(net_p, net_p) = 2.0;
    fisher(net_p + 1, net_p + 1) = 2.0;

    for (int trial = 0; trial < 3; ++trial) {
      VectorXd v = random_params(P, rng, 1.0);
      VectorXd dense = fisher * v;
      VectorXd fast = policy.fisher_vector_product(params, obs, v);
      CHECK((dense - fast).norm() <= 1e-10 * std::max(1.0, dense.norm()));
    }
  }
}

TEST_CASE("fisher-vector product is the curvature of mean KL") {
  // mean_kl(params, params + t v) ~ 0.5 t^2 v^T F v for small t
  Rng rng = make_rng(36);
  MlpPolicy policy({PolicyConfig::Head::Categorical, 3, 4, {6}});
  VectorXd params = random_params(policy.n_params(), rng);
  MatrixXd obs = random_batch(3, 8, rng);
  for (int trial = 0; trial < 4; ++trial) {
    VectorXd v = random_params(policy.n_params(), rng, 1.0);
    const double vfv = v.dot(policy.fisher_vector_product(params, obs, v));
    const double t = 1e-4;
    const double kl = policy.mean_kl(params, params + t * v, obs);
    CHECK(std::abs(kl - 0.5 * t * t * vfv) <= 1e-3 * 0.5 * t * t * vfv + 1e-16);
  }
}

TEST_CASE("policy entropy matches direct formulas") {
  Rng rng = make_rng(37);
  MlpPolicy cat({PolicyConfig::Head::Categorical, 2, 4, {5}});
  VectorXd params = random_params(cat.n_params(), rng);
  MatrixXd obs = random_batch(2, 6, rng);
  MatrixXd probs = cat.action_probabilities(params, obs);
  double direct = 0.0;
  for (int j = 0; j < 6; ++j)
    for (int i = 0; i < 4; ++i) direct -= probs(i, j) * std::log(probs(i, j));
  CHECK(std::abs(cat.mean_entropy(params, obs) - direct / 6.0) <= 1e-12);

  MlpPolicy gauss({PolicyConfig::Head::Gaussian, 2, 2, {}});
  VectorXd gp = random_params(gauss.n_params(), rng);
  const double ls0 = gp(gp.size() - 2), ls1 = gp(gp.size() - 1);
  const double half_log_2pi_e = 0.9189385332046727 + 0.5;
  const double expected = ls0 + ls1 + 2.0 * half_log_2pi_e;
  CHECK(std::abs(gauss.mean_entropy(gp, obs) - expected) <= 1e-12);
}
