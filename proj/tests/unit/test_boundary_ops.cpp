#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kgs/core/boundary_ops.hpp"
#include "kgs/core/error.hpp"

using namespace kgs;

TEST_CASE("exponential integrals against reference values") {
  auto e = exponential_integrals(cplx(1.0, 0.0), 3);
  REQUIRE(e.size() == 3);
  CHECK(e[0].real() == doctest::Approx(0.21938393439552).epsilon(1e-12));
  CHECK(e[1].real() == doctest::Approx(0.14849550677592).epsilon(1e-12));
  CHECK(std::abs(e[0].imag()) < 1e-14);
  // E_2(z) = e^{-z} - z E_1(z)
  CHECK(std::abs(e[1] - (std::exp(-1.0) - e[0])) < 1e-13);

  // E_1(i) = -Ci(1) + i (Si(1) - pi/2)
  auto ei = exponential_integrals(cplx(0.0, 1.0), 1);
  CHECK(ei[0].real() == doctest::Approx(-0.337403922900968).epsilon(1e-11));
  CHECK(ei[0].imag() == doctest::Approx(0.946083070367183 - M_PI / 2).epsilon(1e-11));

  auto big = exponential_integrals(cplx(0.0, 250.0), 2);
  cplx z(0.0, 250.0);
  CHECK(std::abs(big[0] - std::exp(-z) / z * (1.0 - 1.0 / z + 2.0 / (z * z) - 6.0 / (z * z * z))) < 1e-10);
}

TEST_CASE("half-line time transform") {
  auto h = sample_series(1e-3, 20001, [](double t) { return cplx(std::exp(-t), 0.0); });
  cplx at0 = halfline_time_transform(h, 0.0);
  CHECK(at0.real() == doctest::Approx(1.0).epsilon(1e-6));
  for (double mu : {0.5, 3.0, 40.0}) {
    cplx exact = 1.0 / cplx(1.0, mu);
    CHECK(std::abs(halfline_time_transform(h, mu) - exact) < 1e-6);
  }
  // Samples before t = 0 do not contribute.
  TimeSeries shifted(-1.0, 1e-3, CVec(1000, cplx(5.0, 0.0)));
  shifted.values.insert(shifted.values.end(), h.values.begin(), h.values.end());
  CHECK(std::abs(halfline_time_transform(shifted, 2.0) - halfline_time_transform(h, 2.0)) < 1e-12);
}

TEST_CASE("zero boundary data gives zero fields") {
  SpatialGrid grid(10.0, 64);
  auto times = TimeGrid::covering(0.2, 0.01);
  TimeSeries zero = sample_series(0.01, times.count, [](double) { return cplx{}; });
  BoundaryKernelConfig cfg;
  auto v = kg_boundary_V0(zero, grid, times, cfg);
  auto w = schrodinger_boundary_W0(zero, grid, times, cfg);
  CHECK(v.value.max_abs() == 0.0);
  CHECK(w.value.max_abs() == 0.0);
}

TEST_CASE("boundary operators recover their data at x = 0") {
  SpatialGrid grid(16.0, 256);
  auto times = TimeGrid::covering(0.5, 5e-3);
  auto h = sample_series(times.dt, times.count, [](double t) { return cplx(t * t * std::exp(-t), 0.0); });
  BoundaryKernelConfig cfg;

  auto v = kg_boundary_V0(h, grid, times, cfg);
  auto tr = v.value.trace();
  double err = 0.0;
  for (std::size_t m = 0; m < times.count; ++m) err = std::max(err, std::abs(tr[m] - h.values[m]));
  CHECK(err / h.max_abs() < 1e-2);
  // Zero initial data: nothing at t = 0 on x >= 0.
  double t0 = 0.0;
  for (std::size_t j = grid.zero_index(); j < grid.size(); ++j) t0 = std::max(t0, std::abs(v.value(0, j)));
  CHECK(t0 < 1e-8);
  CHECK(v.imag_residue < 1e-4);

  auto g = sample_series(times.dt, times.count, [](double t) { return cplx(t, 0.5 * t); });
  auto w = schrodinger_boundary_W0(g, grid, times, cfg);
  auto tw = w.value.trace();
  double errw = 0.0;
  for (std::size_t m = 0; m < times.count; ++m) errw = std::max(errw, std::abs(tw[m] - g.values[m]));
  CHECK(errw / g.max_abs() < 1e-2);
}

TEST_CASE("kernel configuration is validated") {
  BoundaryKernelConfig cfg;
  cfg.panel_order = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.xi_max_factor = -1.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
}
