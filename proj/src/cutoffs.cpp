#include "kgs/core/cutoffs.hpp"

#include <cmath>

namespace kgs {

double smooth_psi(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

double smooth_step(double y) {
  if (y <= 0.0) return 0.0;
  if (y >= 1.0) return 1.0;
  const double a = smooth_psi(y);
  return a / (a + smooth_psi(1.0 - y));
}

double rho_cutoff(double y) {
  if (y >= 0.0) return 1.0;
  if (y <= -1.0) return 0.0;
  const double a = smooth_psi(1.0 + y);
  return a / (a + smooth_psi(-y));
}

double eta(double t) {
  const double a = std::abs(t);
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  return smooth_step(2.0 - a);
}

}  // namespace kgs
