#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "kgs/core/cutoffs.hpp"
#include "kgs/core/grid_spectral.hpp"
#include "kgs/core/quadrature.hpp"

using namespace kgs;

namespace {

Field random_field(const SpatialGrid& g, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd;
  Field f(g);
  for (auto& v : f.values) v = {nd(rng), nd(rng)};
  return f;
}

}  // namespace

TEST_CASE("grid places the origin on a node") {
  SpatialGrid g(10.0, 64);
  CHECK(g.x(g.zero_index()) == 0.0);
  CHECK(g.dx() == doctest::Approx(20.0 / 64));
  CHECK(g.signed_mode(63) == -1);
  CHECK(g.xi(1) == doctest::Approx(M_PI / 10.0));
  for (std::size_t j = 1; j < g.size(); ++j) CHECK(g.x(g.mirror(j)) == doctest::Approx(-g.x(j)));
  CHECK_THROWS(SpatialGrid(10.0, 63));
}

TEST_CASE("discrete Plancherel identity and round trip") {
  SpatialGrid g(7.5, 128);
  Field f = random_field(g, 3);
  SpectralField F = forward_dft(f);
  double lhs = 0.0, rhs = 0.0;
  for (auto v : f.values) lhs += std::norm(v);
  lhs *= g.dx();
  for (auto c : F.coeffs) rhs += std::norm(c);
  rhs /= 2.0 * g.half_width();
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  CHECK(sobolev_norm(f, 0.0) == doctest::Approx(l2_norm(f)).epsilon(1e-12));

  Field back = inverse_dft(F);
  double err = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) err = std::max(err, std::abs(back[j] - f[j]));
  CHECK(err < 1e-12);
}

TEST_CASE("DFT of a Gaussian approximates its Fourier transform") {
  SpatialGrid g(20.0, 256);
  Field f(g);
  for (std::size_t j = 0; j < g.size(); ++j) f[j] = std::exp(-g.x(j) * g.x(j));
  SpectralField F = forward_dft(f);
  for (std::size_t k = 0; k < 20; ++k) {
    double xi = g.xi(k);
    double exact = std::sqrt(M_PI) * std::exp(-xi * xi / 4.0);
    CHECK(std::abs(F.coeffs[k] - exact) < 1e-12);
  }
}

TEST_CASE("d_symbol sign and D D^{-1} = identity") {
  CHECK(d_symbol(0.0) == 1.0);
  CHECK(d_symbol(-2.0) == doctest::Approx(-std::sqrt(5.0)));
  CHECK(d_symbol(3.0) == doctest::Approx(std::sqrt(10.0)));
  SpatialGrid g(5.0, 64);
  Field f = random_field(g, 9);
  Field back = d_inverse(d_operator(f));
  double err = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) err = std::max(err, std::abs(back[j] - f[j]));
  CHECK(err < 1e-12);
}

TEST_CASE("fft_2d inverse undoes forward up to rows*cols") {
  const std::size_t rows = 6, cols = 8;
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> ud(-1, 1);
  CVec a(rows * cols);
  for (auto& v : a) v = {ud(rng), ud(rng)};
  CVec b = a;
  fft_2d(rows, cols, b);
  CHECK(std::abs(b[0] - std::accumulate(a.begin(), a.end(), cplx{})) < 1e-12);
  fft_2d(rows, cols, b, true);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(b[i] / double(rows * cols) - a[i]) < 1e-13);
}

TEST_CASE("multiplier rejects non-finite symbols") {
  SpatialGrid g(5.0, 16);
  CHECK_THROWS(multiplier_values(g, [](double) { return cplx(NAN, 0.0); }));
}

TEST_CASE("cut-off supports") {
  CHECK(eta(0.0) == 1.0);
  CHECK(eta(1.0) == 1.0);
  CHECK(eta(-0.7) == 1.0);
  CHECK(eta(2.0) == 0.0);
  CHECK(eta(-2.5) == 0.0);
  CHECK(eta(1.5) > 0.0);
  CHECK(eta(1.5) < 1.0);
  CHECK(rho_cutoff(0.0) == 1.0);
  CHECK(rho_cutoff(3.0) == 1.0);
  CHECK(rho_cutoff(-1.0) == 0.0);
  CHECK(rho_cutoff(-0.5) == doctest::Approx(0.5));
  CHECK(smooth_step(-1.0) == 0.0);
  CHECK(smooth_step(2.0) == 1.0);
  double prev = 0.0;
  for (int i = 0; i <= 100; ++i) {
    double v = smooth_step(i / 100.0);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("Gauss-Legendre integrates polynomials of degree 2n-1 exactly") {
  for (std::size_t n : {1u, 3u, 8u, 20u}) {
    auto rule = gauss_legendre(n, -0.5, 2.0);
    for (std::size_t p = 0; p < 2 * n; ++p) {
      double q = 0.0;
      for (std::size_t i = 0; i < rule.size(); ++i) q += rule.weights[i] * std::pow(rule.nodes[i], double(p));
      double exact = (std::pow(2.0, double(p + 1)) - std::pow(-0.5, double(p + 1))) / double(p + 1);
      CHECK(q == doctest::Approx(exact).epsilon(1e-12));
    }
  }
}

TEST_CASE("composite rules and breakpoints") {
  auto br = uniform_breaks(0.0, 3.0, 0.7);
  CHECK(br.front() == 0.0);
  CHECK(br.back() == 3.0);
  for (std::size_t i = 1; i < br.size(); ++i) CHECK(br[i] - br[i - 1] <= 0.7 + 1e-14);
  auto rule = composite_gauss_legendre(br, 6);
  double q = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) q += rule.weights[i] * std::cos(rule.nodes[i]);
  CHECK(q == doctest::Approx(std::sin(3.0)).epsilon(1e-13));

  auto dy = dyadic_breaks(4.0, 3);
  CHECK(dy.size() == 5);
  CHECK(dy[1] == doctest::Approx(0.5));
  CHECK(dy.back() == doctest::Approx(4.0));
}
