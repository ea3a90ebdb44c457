// Cost-function regularizers and their convex conjugates: constant, indicator
// of a restricted cost class, the generative-adversarial regularizer, and
// regularizers induced by binary-classification surrogate losses.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mimic/mdp.hpp"

namespace mimic {

// Restricted cost class spanned by a feature basis f_1..f_d over (s,a).
// LinearBall: costs w.f with ||w||_2 <= 1. ConvexHull: w in the simplex.
struct CostClass {
  enum class Kind { LinearBall, ConvexHull };
  Kind kind = Kind::LinearBall;
  std::vector<MatrixXd> basis;  // each [S][A]
};

// Strictly decreasing convex scalar loss with an evaluable inverse.
// range_t = (t_lo, t_hi) is the range of -phi; g_phi is finite exactly there.
struct SurrogateLoss {
  std::string name;
  std::function<double(double)> phi;
  std::function<double(double)> phi_inv;
  double t_lo = 0.0;
  double t_hi = 0.0;
  double phi_inf = 0.0;  // infimum of phi (limit at +infinity)

  // numeric probe of strict decrease, convexity, and inverse consistency
  void validate() const;
};

SurrogateLoss logistic_loss();
SurrogateLoss exponential_loss();

// g(x) = -x - log(1 - e^x) for x < 0, +inf otherwise.
double psi_ga_scalar(double x);

// sum over (s,a) of rho_E * g(c); +inf as soon as any c(s,a) >= 0.
double eval_psi_ga(const MatrixXd& cost, const OccupancyMeasure& rho_E);

// Closed-form conjugate of the generative-adversarial regularizer:
// sum of rho_pi log(rho_pi/(rho_pi+rho_E)) + rho_E log(rho_E/(rho_pi+rho_E)),
// the optimal binary-classification negative log loss with per-pair optimum
// D* = rho_pi/(rho_pi+rho_E). Pairs with zero mass on both sides contribute 0.
double psi_ga_conjugate(const OccupancyMeasure& rho_pi, const OccupancyMeasure& rho_E);

// Jensen-Shannon divergence KL(rho_pi||m) + KL(rho_E||m), m = (rho_pi+rho_E)/2,
// evaluated on unnormalized measures.
double jsd_occupancy(const OccupancyMeasure& rho_pi, const OccupancyMeasure& rho_E);

// g_phi(x) = -x + phi(-phi_inv(-x)) on (t_lo, t_hi), +inf outside.
double surrogate_to_g(const SurrogateLoss& phi, double x);

// Minimum expected risk sum_{s,a} min_gamma rho_pi phi(gamma) + rho_E phi(-gamma).
// Its negation equals the conjugate of the surrogate-induced regularizer.
double min_expected_risk(const SurrogateLoss& phi, const OccupancyMeasure& rho_pi,
                         const OccupancyMeasure& rho_E);

struct FeatureGapResult {
  VectorXd weights;
  double value = 0.0;
};

// max over the unit l2 ball of w.(e_pi - e_E); ties at zero gap -> zero w.
FeatureGapResult linear_ball_max(const VectorXd& e_pi, const VectorXd& e_E);

// max over the simplex, attained at a vertex; ties broken by lowest index.
FeatureGapResult convex_hull_max(const VectorXd& e_pi, const VectorXd& e_E);

VectorXd feature_expectations(const OccupancyMeasure& rho, const std::vector<MatrixXd>& basis);

struct MaxCostResult {
  MatrixXd cost;
  VectorXd weights;
  double value = 0.0;
};

// Conjugate of the indicator of cls evaluated at rho_pi - rho_E, together
// with the attaining cost function.
MaxCostResult apprenticeship_max_cost(const OccupancyMeasure& rho_pi,
                                      const OccupancyMeasure& rho_E, const CostClass& cls);

class Regularizer {
 public:
  enum class Kind { Constant, Indicator, GenerativeAdversarial, Surrogate };

  static Regularizer constant(double k);
  static Regularizer indicator(CostClass cls);
  static Regularizer generative_adversarial(OccupancyMeasure rho_E);
  static Regularizer surrogate(SurrogateLoss phi, OccupancyMeasure rho_E);

  Kind kind() const { return kind_; }

  // value of psi at the cost table; +inf allowed
  double eval(const MatrixXd& cost) const;

  // gradient of psi where defined; available for Constant (zero) and
  // GenerativeAdversarial (rho_E * g'(c)); throws otherwise
  MatrixXd subgradient(const MatrixXd& cost) const;
  bool has_subgradient() const { return kind_ == Kind::Constant || kind_ == Kind::GenerativeAdversarial; }

  const CostClass& cost_class() const;
  const OccupancyMeasure& expert_measure() const;
  const SurrogateLoss& loss() const;

 private:
  Regularizer() = default;
  Kind kind_ = Kind::Constant;
  double constant_ = 0.0;
  CostClass cls_;
  OccupancyMeasure rho_E_;
  SurrogateLoss phi_;
};

struct GridSpec {
  double lo = 0.0;
  double hi = 0.0;
  int points = 0;
};

struct BruteForceResult {
  double value = 0.0;
  // best value attained only on the grid edge: the box was too small
  // (meaningful for the unbounded-domain variants; always false for Indicator)
  bool boundary_attained = false;
};

// Grid-searched sup_c x.c - psi(c); testing oracle for the closed forms.
// Constant/GenerativeAdversarial/Surrogate grid over the raw cost table
// (requires S*A <= 6); Indicator grids over the weight parameterization of
// its cost class.
BruteForceResult conjugate_brute_force(const Regularizer& psi, const MatrixXd& x,
                                       const GridSpec& grid);

}  // namespace mimic
