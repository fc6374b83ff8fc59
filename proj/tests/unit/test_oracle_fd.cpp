#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kgs/core/error.hpp"
#include "kgs/core/oracle_fd.hpp"

using namespace kgs;

namespace {

double snapshot_mass(const SpaceTimeField& f, std::size_t m) {
  return halfline_l2(restrict_to_halfline(f.snapshot(m)));
}

}  // namespace

TEST_CASE("zero data stays zero") {
  SpatialGrid grid(10.0, 64);
  TimeGrid times{0.01, 20};
  HalfLineFunction z(grid);
  auto r = fd_kgs_coupled(z, z, z, TimeSeries(), TimeSeries(), times);
  CHECK(r.u.max_abs() == 0.0);
  CHECK(r.n.max_abs() == 0.0);
}

TEST_CASE("Crank-Nicolson Schrodinger step is unitary") {
  SpatialGrid grid(20.0, 512);
  TimeGrid times{0.01, 101};
  auto u0 = sample_halfline(grid, 0.0, [](double x) { return std::exp(-(x - 8.0) * (x - 8.0)) * std::exp(cplx(0.0, 2.0 * x)); });
  auto r = fd_schrodinger_ibvp(u0, TimeSeries(), times);
  const double m0 = snapshot_mass(r.u, 0);
  for (std::size_t m = 0; m < times.count; m += 10) CHECK(std::abs(snapshot_mass(r.u, m) - m0) / m0 < 1e-8);
}

TEST_CASE("standing KG mode oscillates at the Klein-Gordon frequency") {
  SpatialGrid grid(20.0, 512);
  TimeGrid times{1e-3, 1001};
  const double k = 3.0 * M_PI / 20.0, om = std::sqrt(1.0 + k * k);
  auto n0 = sample_halfline(grid, 0.0, [&](double x) { return cplx(std::sin(k * x), 0.0); });
  HalfLineFunction n1(grid);
  auto r = fd_kg_ibvp(n0, n1, TimeSeries(), times);
  double err = 0.0;
  const std::size_t last = times.count - 1;
  for (std::size_t i = 0; i < n0.size(); ++i) {
    std::size_t j = grid.zero_index() + i;
    if (j >= grid.size()) break;
    err = std::max(err, std::abs(r.n(last, j) - std::cos(om * times.t(last)) * n0.samples[i]));
  }
  CHECK(err < 1e-3);
}

TEST_CASE("coupled scheme reduces to the KG scheme when u = 0") {
  SpatialGrid grid(10.0, 128);
  TimeGrid times{0.02, 26};
  HalfLineFunction z(grid);
  auto n0 = sample_halfline(grid, 0.0, [](double x) { return cplx(x * std::exp(-(x - 2.0) * (x - 2.0)), 0.0); });
  auto h = sample_series(times.dt, times.count, [](double t) { return cplx(t * t, 0.0); });
  auto coupled = fd_kgs_coupled(z, n0, z, TimeSeries(), h, times);
  FDConfig half;
  half.refine_t = 2;
  auto wave = fd_kg_ibvp(n0, z, h, times, half);
  double err = 0.0;
  for (std::size_t i = 0; i < coupled.n.data().size(); ++i)
    err = std::max(err, std::abs(coupled.n.data()[i] - wave.n.data()[i]));
  CHECK(err < 1e-13);
}

TEST_CASE("coupled scheme conserves mass to second order") {
  SpatialGrid grid(20.0, 256);
  auto u0 = sample_halfline(grid, 0.0, [](double x) { return 0.5 * std::exp(-(x - 8.0) * (x - 8.0) / 2.0) + cplx{}; });
  auto n0 = sample_halfline(grid, 0.0, [](double x) { return cplx(0.5 * std::exp(-(x - 6.0) * (x - 6.0)), 0.0); });
  HalfLineFunction z(grid);
  auto drift = [&](double dt) {
    TimeGrid times = TimeGrid::covering(1.0, dt);
    auto r = fd_kgs_coupled(u0, n0, z, TimeSeries(), TimeSeries(), times);
    double m0 = snapshot_mass(r.u, 0), worst = 0.0;
    for (std::size_t m = 0; m < times.count; ++m) worst = std::max(worst, std::abs(snapshot_mass(r.u, m) - m0) / m0);
    return worst;
  };
  // Both steps are unitary and Dirichlet ends keep the mass exact up to round-off.
  CHECK(drift(0.02) < 1e-10);
  CHECK(drift(0.01) < 1e-10);
}

TEST_CASE("FD configuration is validated") {
  FDConfig cfg;
  cfg.refine_x = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
}
