#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kgs/core/duhamel.hpp"

using namespace kgs;

namespace {

SpaceTimeField plane_wave(const SpatialGrid& g, const TimeGrid& times, double xi) {
  SpaceTimeField F(g, times);
  for (std::size_t m = 0; m < times.count; ++m)
    for (std::size_t j = 0; j < g.size(); ++j) F(m, j) = std::exp(cplx(0.0, xi * g.x(j)));
  return F;
}

}  // namespace

TEST_CASE("Schrodinger Duhamel integral of a single mode") {
  SpatialGrid g(M_PI, 32);
  TimeGrid times{0.01, 101};
  const double xi = 3.0;
  auto I = schrodinger_duhamel_field(plane_wave(g, times, xi));
  double err = 0.0;
  for (std::size_t m = 0; m < times.count; ++m) {
    double t = times.t(m);
    cplx factor = (1.0 - std::exp(cplx(0.0, -xi * xi * t))) / cplx(0.0, xi * xi);
    for (std::size_t j = 0; j < g.size(); ++j)
      err = std::max(err, std::abs(I(m, j) - factor * std::exp(cplx(0.0, xi * g.x(j)))));
  }
  CHECK(err < 1e-12);

  Field last = schrodinger_duhamel(plane_wave(g, times, xi), times.count - 1);
  for (std::size_t j = 0; j < g.size(); ++j) CHECK(std::abs(last[j] - I(times.count - 1, j)) < 1e-12);
}

TEST_CASE("half-wave Duhamel integral of a single mode") {
  SpatialGrid g(M_PI, 32);
  TimeGrid times{0.02, 51};
  const double xi = -2.0, d = d_symbol(xi);
  for (WaveSign s : {WaveSign::Plus, WaveSign::Minus}) {
    auto I = halfwave_duhamel(plane_wave(g, times, xi), s);
    double sg = sign_value(s), err = 0.0;
    for (std::size_t m = 0; m < times.count; ++m) {
      double t = times.t(m);
      cplx factor = (std::exp(cplx(0.0, sg * d * t)) - 1.0) / cplx(0.0, sg * d);
      for (std::size_t j = 0; j < g.size(); ++j)
        err = std::max(err, std::abs(I(m, j) - factor * std::exp(cplx(0.0, xi * g.x(j)))));
    }
    CHECK(err < 1e-12);
  }
}

TEST_CASE("Duhamel integrals are second order for time-dependent forcing") {
  SpatialGrid g(M_PI, 16);
  const double xi = 2.0, T = 1.0;
  auto run = [&](double dt) {
    TimeGrid times = TimeGrid::covering(T, dt);
    SpaceTimeField F(g, times);
    for (std::size_t m = 0; m < times.count; ++m)
      for (std::size_t j = 0; j < g.size(); ++j) F(m, j) = std::cos(times.t(m)) * std::exp(cplx(0.0, xi * g.x(j)));
    auto I = schrodinger_duhamel_field(F);
    // \int_0^T e^{-i xi^2 (T-s)} cos(s) ds
    double w = xi * xi;
    cplx a(0.0, -w);
    cplx exact = std::exp(a * T) * 0.5 *
                 ((std::exp((cplx(0, 1) - a) * T) - 1.0) / (cplx(0, 1) - a) +
                  (std::exp((cplx(0, -1) - a) * T) - 1.0) / (cplx(0, -1) - a));
    std::size_t mT = times.count - 1;
    return std::abs(I(mT, g.zero_index()) - exact);
  };
  double e1 = run(0.02), e2 = run(0.01);
  CHECK(e1 < 1e-3);
  CHECK(e1 / e2 > 3.5);
}

TEST_CASE("odd forcing keeps D G odd") {
  SpatialGrid g(8.0, 64);
  TimeGrid times{0.05, 5};
  SpaceTimeField u(g, times);
  for (std::size_t m = 0; m < times.count; ++m)
    for (std::size_t j = 0; j < g.size(); ++j) u(m, j) = std::exp(-(g.x(j) - 1.0) * (g.x(j) - 1.0));
  auto G = wave_forcing(u, 1.0, true);
  // G = eta D^{-1} |u|^2_odd and D^{-1} has an odd symbol, so D G is odd.
  for (std::size_t m = 0; m < times.count; ++m) CHECK(even_part_max(d_operator(G.snapshot(m))) < 1e-14);
  auto G_full = wave_forcing(u, 1.0, false);
  CHECK(even_part_max(d_operator(G_full.snapshot(0))) > 1e-3);
}

TEST_CASE("trajectory distance is a metric on the whole grid") {
  SpatialGrid g(4.0, 16);
  TimeGrid times{0.1, 3};
  Trajectory a{SpaceTimeField(g, times), SpaceTimeField(g, times), SpaceTimeField(g, times)};
  Trajectory b = a;
  CHECK(trajectory_distance(a, b) == 0.0);
  b.Nm(2, 1) = cplx(0.0, -0.75);  // x < 0 counts as well
  b.u(1, 10) = 0.5;
  CHECK(trajectory_distance(a, b) == doctest::Approx(0.75));
  CHECK(trajectory_distance(b, a) == doctest::Approx(0.75));
  CHECK(trajectory_sup(b) == doctest::Approx(0.75));
}

TEST_CASE("eta profile") {
  TimeGrid times{0.1, 41};
  auto p = make_eta(times, 1.0);
  CHECK(p.values[0] == 1.0);
  CHECK(p.values[10] == 1.0);
  CHECK(p.values[40] == 0.0);
}
