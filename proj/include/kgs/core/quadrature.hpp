#pragma once

#include <cstddef>
#include <vector>

namespace kgs {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
  void append(const QuadratureRule& other);
};

/// n-point Gauss-Legendre rule on [a, b].
QuadratureRule gauss_legendre(std::size_t n, double a = -1.0, double b = 1.0);

/// Gauss-Legendre of order `order` on every panel [breaks[i], breaks[i+1]].
QuadratureRule composite_gauss_legendre(const std::vector<double>& breaks, std::size_t order);

/// Breakpoints a = b_0 < ... < b_n = b with spacing at most `max_width`.
std::vector<double> uniform_breaks(double a, double b, double max_width);

/// Dyadic breakpoints 0, 2^{-levels}, ..., 1/2, 1 scaled to [0, width].
std::vector<double> dyadic_breaks(double width, std::size_t levels);

}  // namespace kgs
