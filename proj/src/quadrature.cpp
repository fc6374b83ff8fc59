#include "kgs/core/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "kgs/core/error.hpp"

namespace kgs {

void QuadratureRule::append(const QuadratureRule& other) {
  nodes.insert(nodes.end(), other.nodes.begin(), other.nodes.end());
  weights.insert(weights.end(), other.weights.begin(), other.weights.end());
}

QuadratureRule gauss_legendre(std::size_t n, double a, double b) {
  if (n == 0) fail(ErrorKind::Config, "Gauss-Legendre order must be positive");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  // Newton iteration on P_n from the Chebyshev-like initial guess.
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (std::size_t k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * static_cast<double>(k) - 1.0) * z * p1 - (static_cast<double>(k) - 1.0) * p2) /
             static_cast<double>(k);
      }
      dp = static_cast<double>(n) * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[i] = mid - half * z;
    rule.nodes[n - 1 - i] = mid + half * z;
    rule.weights[i] = rule.weights[n - 1 - i] = half * w;
  }
  return rule;
}

QuadratureRule composite_gauss_legendre(const std::vector<double>& breaks, std::size_t order) {
  QuadratureRule rule;
  const QuadratureRule ref = gauss_legendre(order);
  rule.nodes.reserve(order * breaks.size());
  rule.weights.reserve(order * breaks.size());
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double a = breaks[p], b = breaks[p + 1];
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (std::size_t i = 0; i < order; ++i) {
      rule.nodes.push_back(mid + half * ref.nodes[i]);
      rule.weights.push_back(half * ref.weights[i]);
    }
  }
  return rule;
}

std::vector<double> uniform_breaks(double a, double b, double max_width) {
  if (!(b > a)) return {a, b};
  const auto panels = static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) / max_width)));
  std::vector<double> out(panels + 1);
  for (std::size_t i = 0; i <= panels; ++i)
    out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(panels);
  return out;
}

std::vector<double> dyadic_breaks(double width, std::size_t levels) {
  std::vector<double> out{0.0};
  for (std::size_t l = levels; l >= 1; --l) out.push_back(width * std::ldexp(1.0, -static_cast<int>(l)));
  out.push_back(width);
  return out;
}

}  // namespace kgs
