#include "mimic/regularizers.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "mimic/numeric.hpp"

namespace mimic {

void SurrogateLoss::validate() const {
  if (!phi || !phi_inv) throw std::invalid_argument("SurrogateLoss: missing callables");
  if (!(t_lo < t_hi)) throw std::invalid_argument("SurrogateLoss: empty range");
  const int n = 81;
  double prev = kInf;
  for (int i = 0; i < n; ++i) {
    const double x = -20.0 + 40.0 * i / (n - 1);
    const double y = phi(x);
    if (!(y < prev)) throw std::invalid_argument("SurrogateLoss: phi not strictly decreasing");
    prev = y;
    const double x_back = phi_inv(y);
    if (std::abs(x_back - x) > 1e-6 * std::max(1.0, std::abs(x)))
      throw std::invalid_argument("SurrogateLoss: phi_inv does not invert phi");
  }
  for (int i = 0; i + 2 < n; ++i) {
    const double a = -20.0 + 40.0 * i / (n - 1);
    const double b = -20.0 + 40.0 * (i + 2) / (n - 1);
    if (phi(0.5 * (a + b)) > 0.5 * (phi(a) + phi(b)) + 1e-12)
      throw std::invalid_argument("SurrogateLoss: phi fails midpoint convexity");
  }
}

SurrogateLoss logistic_loss() {
  SurrogateLoss loss;
  loss.name = "logistic";
  loss.phi = [](double x) { return softplus(-x); };
  loss.phi_inv = [](double y) {
    if (y <= 0.0) throw std::domain_error("logistic loss inverse: value must be positive");
    return -std::log(std::expm1(y));
  };
  loss.t_lo = -kInf;
  loss.t_hi = 0.0;
  loss.phi_inf = 0.0;
  loss.validate();
  return loss;
}

SurrogateLoss exponential_loss() {
  SurrogateLoss loss;
  loss.name = "exponential";
  loss.phi = [](double x) { return std::exp(-x); };
  loss.phi_inv = [](double y) {
    if (y <= 0.0) throw std::domain_error("exponential loss inverse: value must be positive");
    return -std::log(y);
  };
  loss.t_lo = -kInf;
  loss.t_hi = 0.0;
  loss.phi_inf = 0.0;
  loss.validate();
  return loss;
}

double psi_ga_scalar(double x) {
  if (x >= 0.0) return kInf;
  return -x - log1mexp(x);
}

double eval_psi_ga(const MatrixXd& cost, const OccupancyMeasure& rho_E) {
  if (cost.rows() != rho_E.rho.rows() || cost.cols() != rho_E.rho.cols())
    throw std::invalid_argument("eval_psi_ga: shape mismatch");
  if ((cost.array() >= 0.0).any()) return kInf;
  double total = 0.0;
  for (int i = 0; i < cost.size(); ++i) total += rho_E.rho.data()[i] * psi_ga_scalar(cost.data()[i]);
  return total;
}

double psi_ga_conjugate(const OccupancyMeasure& rho_pi, const OccupancyMeasure& rho_E) {
  if (rho_pi.rho.rows() != rho_E.rho.rows() || rho_pi.rho.cols() != rho_E.rho.cols())
    throw std::invalid_argument("psi_ga_conjugate: shape mismatch");
  double total = 0.0;
  for (int i = 0; i < rho_pi.rho.size(); ++i) {
    const double p = rho_pi.rho.data()[i];
    const double q = rho_E.rho.data()[i];
    total += xlogxy(p, p + q) + xlogxy(q, p + q);
  }
  return total;
}

double jsd_occupancy(const OccupancyMeasure& rho_pi, const OccupancyMeasure& rho_E) {
  if (rho_pi.rho.rows() != rho_E.rho.rows() || rho_pi.rho.cols() != rho_E.rho.cols())
    throw std::invalid_argument("jsd_occupancy: shape mismatch");
  double total = 0.0;
  for (int i = 0; i < rho_pi.rho.size(); ++i) {
    const double p = rho_pi.rho.data()[i];
    const double q = rho_E.rho.data()[i];
    const double m = 0.5 * (p + q);
    total += xlogxy(p, m) + xlogxy(q, m);
  }
  return total;
}

double surrogate_to_g(const SurrogateLoss& phi, double x) {
  if (!(x > phi.t_lo && x < phi.t_hi)) return kInf;
  return -x + phi.phi(-phi.phi_inv(-x));
}

double min_expected_risk(const SurrogateLoss& phi, const OccupancyMeasure& rho_pi,
                         const OccupancyMeasure& rho_E) {
  if (rho_pi.rho.rows() != rho_E.rho.rows() || rho_pi.rho.cols() != rho_E.rho.cols())
    throw std::invalid_argument("min_expected_risk: shape mismatch");
  double total = 0.0;
  for (int i = 0; i < rho_pi.rho.size(); ++i) {
    const double p = rho_pi.rho.data()[i];
    const double q = rho_E.rho.data()[i];
    if (p == 0.0 && q == 0.0) continue;
    if (p == 0.0 || q == 0.0) {
      // one-sided: the infimum is approached as the classifier saturates
      total += (p + q) * phi.phi_inf;
      continue;
    }
    const auto risk = [&](double gamma) { return p * phi.phi(gamma) + q * phi.phi(-gamma); };
    total += golden_section_minimize(risk, -1.0, 1.0).value;
  }
  return total;
}

FeatureGapResult linear_ball_max(const VectorXd& e_pi, const VectorXd& e_E) {
  const VectorXd gap = e_pi - e_E;
  const double norm = gap.norm();
  FeatureGapResult out;
  if (norm == 0.0) {
    out.weights = VectorXd::Zero(gap.size());
    out.value = 0.0;
  } else {
    out.weights = gap / norm;
    out.value = norm;
  }
  return out;
}

FeatureGapResult convex_hull_max(const VectorXd& e_pi, const VectorXd& e_E) {
  const VectorXd gap = e_pi - e_E;
  int best = 0;
  for (int i = 1; i < gap.size(); ++i)
    if (gap(i) > gap(best)) best = i;
  FeatureGapResult out;
  out.weights = VectorXd::Zero(gap.size());
  out.weights(best) = 1.0;
  out.value = gap(best);
  return out;
}

VectorXd feature_expectations(const OccupancyMeasure& rho, const std::vector<MatrixXd>& basis) {
  VectorXd e(static_cast<int>(basis.size()));
  for (size_t i = 0; i < basis.size(); ++i) {
    if (basis[i].rows() != rho.rho.rows() || basis[i].cols() != rho.rho.cols())
      throw std::invalid_argument("feature_expectations: basis shape mismatch");
    e(static_cast<int>(i)) = (rho.rho.array() * basis[i].array()).sum();
  }
  return e;
}

MaxCostResult apprenticeship_max_cost(const OccupancyMeasure& rho_pi,
                                      const OccupancyMeasure& rho_E, const CostClass& cls) {
  if (cls.basis.empty()) throw std::invalid_argument("apprenticeship_max_cost: empty basis");
  const VectorXd e_pi = feature_expectations(rho_pi, cls.basis);
  const VectorXd e_E = feature_expectations(rho_E, cls.basis);
  const FeatureGapResult gap = cls.kind == CostClass::Kind::LinearBall
                                   ? linear_ball_max(e_pi, e_E)
                                   : convex_hull_max(e_pi, e_E);
  MaxCostResult out;
  out.weights = gap.weights;
  out.value = gap.value;
  out.cost = MatrixXd::Zero(rho_pi.rho.rows(), rho_pi.rho.cols());
  for (size_t i = 0; i < cls.basis.size(); ++i)
    out.cost += gap.weights(static_cast<int>(i)) * cls.basis[i];
  return out;
}

Regularizer Regularizer::constant(double k) {
  Regularizer r;
  r.kind_ = Kind::Constant;
  r.constant_ = k;
  return r;
}

Regularizer Regularizer::indicator(CostClass cls) {
  if (cls.basis.empty()) throw std::invalid_argument("Regularizer::indicator: empty basis");
  Regularizer r;
  r.kind_ = Kind::Indicator;
  r.cls_ = std::move(cls);
  return r;
}

Regularizer Regularizer::generative_adversarial(OccupancyMeasure rho_E) {
  Regularizer r;
  r.kind_ = Kind::GenerativeAdversarial;
  r.rho_E_ = std::move(rho_E);
  return r;
}

Regularizer Regularizer::surrogate(SurrogateLoss phi, OccupancyMeasure rho_E) {
  phi.validate();
  Regularizer r;
  r.kind_ = Kind::Surrogate;
  r.phi_ = std::move(phi);
  r.rho_E_ = std::move(rho_E);
  return r;
}

const CostClass& Regularizer::cost_class() const {
  if (kind_ != Kind::Indicator) throw std::logic_error("Regularizer: not an indicator");
  return cls_;
}

const OccupancyMeasure& Regularizer::expert_measure() const {
  if (kind_ != Kind::GenerativeAdversarial && kind_ != Kind::Surrogate)
    throw std::logic_error("Regularizer: no expert measure");
  return rho_E_;
}

const SurrogateLoss& Regularizer::loss() const {
  if (kind_ != Kind::Surrogate) throw std::logic_error("Regularizer: not surrogate-induced");
  return phi_;
}

namespace {

// least-squares membership certificate for span-parameterized cost classes
bool in_cost_class(const CostClass& cls, const MatrixXd& cost, VectorXd* w_out) {
  const int dim = static_cast<int>(cost.size());
  const int d = static_cast<int>(cls.basis.size());
  MatrixXd B(dim, d);
  for (int i = 0; i < d; ++i)
    B.col(i) = Eigen::Map<const VectorXd>(cls.basis[i].data(), dim);
  const VectorXd target = Eigen::Map<const VectorXd>(cost.data(), dim);
  const VectorXd w = B.colPivHouseholderQr().solve(target);
  if ((B * w - target).lpNorm<Eigen::Infinity>() > 1e-9) return false;
  if (w_out) *w_out = w;
  if (cls.kind == CostClass::Kind::LinearBall) return w.norm() <= 1.0 + 1e-9;
  return (w.array() >= -1e-9).all() && std::abs(w.sum() - 1.0) <= 1e-9;
}

}  // namespace

double Regularizer::eval(const MatrixXd& cost) const {
  switch (kind_) {
    case Kind::Constant:
      return constant_;
    case Kind::Indicator:
      return in_cost_class(cls_, cost, nullptr) ? 0.0 : kInf;
    case Kind::GenerativeAdversarial:
      return eval_psi_ga(cost, rho_E_);
    case Kind::Surrogate: {
      if (cost.rows() != rho_E_.rho.rows() || cost.cols() != rho_E_.rho.cols())
        throw std::invalid_argument("Regularizer::eval: shape mismatch");
      double total = 0.0;
      for (int i = 0; i < cost.size(); ++i) {
        const double g = surrogate_to_g(phi_, cost.data()[i]);
        if (g == kInf) return kInf;
        total += rho_E_.rho.data()[i] * g;
      }
      return total;
    }
  }
  throw std::logic_error("Regularizer::eval: unknown kind");
}

MatrixXd Regularizer::subgradient(const MatrixXd& cost) const {
  switch (kind_) {
    case Kind::Constant:
      return MatrixXd::Zero(cost.rows(), cost.cols());
    case Kind::GenerativeAdversarial: {
      if (cost.rows() != rho_E_.rho.rows() || cost.cols() != rho_E_.rho.cols())
        throw std::invalid_argument("Regularizer::subgradient: shape mismatch");
      if ((cost.array() >= 0.0).any())
        throw std::domain_error("Regularizer::subgradient: cost outside the domain of psi_GA");
      // d/dx [-x - log(1-e^x)] = -1 + e^x/(1-e^x)
      MatrixXd g(cost.rows(), cost.cols());
      for (int i = 0; i < cost.size(); ++i) {
        const double ex = std::exp(cost.data()[i]);
        g.data()[i] = rho_E_.rho.data()[i] * (-1.0 + ex / (1.0 - ex));
      }
      return g;
    }
    default:
      throw std::invalid_argument("Regularizer::subgradient: no subgradient oracle for this variant");
  }
}

namespace {

struct GridBest {
  double value = -kInf;
  double interior_value = -kInf;
  bool at_edge = false;
};

// odometer walk over a dim-dimensional grid; calls visit(point, on_edge)
template <typename F>
void grid_walk(int dim, const GridSpec& grid, F&& visit) {
  std::vector<int> idx(dim, 0);
  VectorXd point(dim);
  const double step = grid.points > 1 ? (grid.hi - grid.lo) / (grid.points - 1) : 0.0;
  while (true) {
    bool edge = false;
    for (int i = 0; i < dim; ++i) {
      point(i) = grid.lo + step * idx[i];
      if (idx[i] == 0 || idx[i] == grid.points - 1) edge = true;
    }
    visit(point, edge);
    int carry = 0;
    while (carry < dim && ++idx[carry] == grid.points) idx[carry++] = 0;
    if (carry == dim) break;
  }
}

}  // namespace

BruteForceResult conjugate_brute_force(const Regularizer& psi, const MatrixXd& x,
                                       const GridSpec& grid) {
  if (grid.points < 2 || !(grid.lo < grid.hi))
    throw std::invalid_argument("conjugate_brute_force: bad grid");

  GridBest best;
  const auto consider = [&](double value, bool edge) {
    if (value > best.value) {
      best.value = value;
      best.at_edge = edge;
    }
    if (!edge && value > best.interior_value) best.interior_value = value;
  };

  if (psi.kind() == Regularizer::Kind::Indicator) {
    const CostClass& cls = psi.cost_class();
    const int d = static_cast<int>(cls.basis.size());
    std::vector<VectorXd> basis_vec(d);
    for (int i = 0; i < d; ++i)
      basis_vec[i] = Eigen::Map<const VectorXd>(cls.basis[i].data(), cls.basis[i].size());
    const VectorXd xv = Eigen::Map<const VectorXd>(x.data(), x.size());
    VectorXd pairing(d);
    for (int i = 0; i < d; ++i) pairing(i) = xv.dot(basis_vec[i]);

    if (cls.kind == CostClass::Kind::LinearBall) {
      GridSpec wgrid{-1.0, 1.0, grid.points};
      grid_walk(d, wgrid, [&](const VectorXd& w, bool) {
        if (w.norm() > 1.0) return;
        consider(pairing.dot(w), false);
      });
    } else {
      // simplex: grid the first d-1 weights, last takes the slack
      GridSpec wgrid{0.0, 1.0, grid.points};
      if (d == 1) {
        consider(pairing(0), false);
      } else {
        grid_walk(d - 1, wgrid, [&](const VectorXd& w_head, bool) {
          const double slack = 1.0 - w_head.sum();
          if (slack < 0.0) return;
          VectorXd w(d);
          w.head(d - 1) = w_head;
          w(d - 1) = slack;
          consider(pairing.dot(w), false);
        });
      }
    }
    return {best.value, false};
  }

  const int dim = static_cast<int>(x.size());
  if (dim > 6) throw std::invalid_argument("conjugate_brute_force: instance too large");
  const VectorXd xv = Eigen::Map<const VectorXd>(x.data(), dim);
  grid_walk(dim, grid, [&](const VectorXd& c, bool edge) {
    const MatrixXd c_table = Eigen::Map<const MatrixXd>(c.data(), x.rows(), x.cols());
    const double p = psi.eval(c_table);
    if (p == kInf) return;
    consider(xv.dot(c) - p, edge);
  });
  const bool too_coarse = best.at_edge && best.value > best.interior_value + 1e-12;
  return {best.value, too_coarse};
}

}  // namespace mimic
