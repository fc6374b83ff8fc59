#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "kgs/core/cutoffs.hpp"
#include "kgs/core/error.hpp"
#include "kgs/core/norms_lab.hpp"

using namespace kgs;

namespace {

// Rows are times -W..W-dt, the layout the ensemble uses.
SpaceTimeField localized_free_wave(const SpatialGrid& grid, std::size_t rows, double W) {
  TimeGrid times{2.0 * W / static_cast<double>(rows), rows};
  SpaceTimeField f(grid, times);
  for (std::size_t m = 0; m < rows; ++m) {
    double t = -W + static_cast<double>(m) * times.dt;
    for (std::size_t j = 0; j < grid.size(); ++j) {
      double x = grid.x(j);
      f(m, j) = eta(t) * std::exp(-x * x) * std::exp(cplx(0.0, 0.5 * t));
    }
  }
  return f;
}

}  // namespace

TEST_CASE("s = b = 0 gives the space-time L2 norm") {
  SpatialGrid grid(6.0, 64);
  auto f = localized_free_wave(grid, 64, 4.0);
  double l2 = 0.0;
  for (auto v : f.data()) l2 += std::norm(v);
  l2 = std::sqrt(l2 * grid.dx() * f.times().dt);
  CHECK(xsb_norm(f, 0.0, 0.0) == doctest::Approx(l2).epsilon(1e-12));
  CHECK(ysb_norm(f, 0.0, 0.0, WeightKind::WavePlus) == doctest::Approx(l2).epsilon(1e-12));
}

TEST_CASE("norms grow with s and b") {
  SpatialGrid grid(6.0, 64);
  auto f = localized_free_wave(grid, 64, 4.0);
  CHECK(xsb_norm(f, 0.5, 0.0) > xsb_norm(f, 0.0, 0.0));
  CHECK(xsb_norm(f, 0.0, 0.4) > xsb_norm(f, 0.0, 0.0));
  CHECK(xsb_norm(f, 0.0, -0.4) < xsb_norm(f, 0.0, 0.0));
}

TEST_CASE("combined wave weight is below both components") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> ud(-30.0, 30.0);
  BourgainWeight inf{WeightKind::WaveInf, 0.3, 0.4}, plus{WeightKind::WavePlus, 0.3, 0.4},
      minus{WeightKind::WaveMinus, 0.3, 0.4};
  for (int i = 0; i < 200; ++i) {
    double xi = ud(rng), tau = ud(rng);
    CHECK(inf(xi, tau) <= std::min(plus(xi, tau), minus(xi, tau)) + 1e-12);
    CHECK(inf(xi, tau) >= std::min(plus(xi, tau), minus(xi, tau)) / std::sqrt(2.0) - 1e-12);
  }
  BourgainWeight sch{WeightKind::Schrodinger, 0.0, 1.0};
  // <tau + xi^2>: smallest on the Schrodinger parabola tau = -xi^2
  CHECK(sch(2.0, -4.0) == doctest::Approx(1.0));
}

TEST_CASE("ysb_norm needs a wave weight") {
  SpatialGrid grid(4.0, 16);
  SpaceTimeField f(grid, TimeGrid{0.1, 16});
  CHECK_THROWS_AS(ysb_norm(f, 0.0, 0.0, WeightKind::Schrodinger), Error);
}

TEST_CASE("ensemble parameters are validated") {
  EnsembleParams p;
  p.count = 9;
  CHECK_THROWS_AS(p.validate(), Error);
  p = {};
  p.grid_sizes = {64};
  CHECK_THROWS_AS(p.validate(), Error);
  p = {};
  p.band = 100.0;
  CHECK_THROWS_AS(p.validate(), Error);
  p = {};
  CHECK_NOTHROW(p.validate());
}

TEST_CASE("small ensemble produces every estimate") {
  EnsembleParams p;
  p.count = 10;
  p.grid_sizes = {64, 128};
  p.time_samples = 64;
  auto rep = ensemble_estimate_suite(p);
  CHECK(rep.estimates.size() == 7);
  for (const auto& e : rep.estimates) {
    REQUIRE(e.max_ratio.size() == 2);
    for (double r : e.max_ratio) CHECK(std::isfinite(r));
    CHECK(std::isfinite(e.slope));
  }
  // Deterministic for a fixed seed.
  auto again = ensemble_estimate_suite(p);
  for (std::size_t i = 0; i < rep.estimates.size(); ++i)
    CHECK(rep.estimates[i].max_ratio == again.estimates[i].max_ratio);
}
