#include "mimic/numeric.hpp"

#include <cmath>

namespace mimic {

namespace {
constexpr double kGolden = 0.6180339887498949;  // (sqrt(5)-1)/2
}

ScalarMinResult golden_section_minimize(const std::function<double(double)>& f, double lo,
                                        double hi, double tol, int max_iters) {
  if (!(lo < hi)) throw std::invalid_argument("golden_section_minimize: lo must be < hi");
  // Expand the bracket until the boundary values exceed an interior value.
  double flo = f(lo), fhi = f(hi);
  double mid = 0.5 * (lo + hi);
  double fmid = f(mid);
  int expansions = 0;
  while ((fmid > flo || fmid > fhi) && expansions < 200) {
    if (flo < fhi) {
      hi = mid;
      fhi = fmid;
      lo = lo - (hi - lo);
      flo = f(lo);
    } else {
      lo = mid;
      flo = fmid;
      hi = hi + (hi - lo);
      fhi = f(hi);
    }
    mid = 0.5 * (lo + hi);
    fmid = f(mid);
    ++expansions;
  }
  if (expansions == 200)
    throw std::runtime_error("golden_section_minimize: failed to bracket a minimum");

  double a = lo, b = hi;
  double x1 = b - kGolden * (b - a);
  double x2 = a + kGolden * (b - a);
  double f1 = f(x1), f2 = f(x2);
  int it = 0;
  while (b - a > tol && it < max_iters) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = f(x2);
    }
    ++it;
  }
  const double x = 0.5 * (a + b);
  return {x, f(x), it};
}

}  // namespace mimic
