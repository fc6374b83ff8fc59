#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kgs/core/error.hpp"
#include "kgs/core/linear_flows.hpp"
#include "kgs/core/phi_functions.hpp"

using namespace kgs;

namespace {

double max_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

Field odd_gaussian(const SpatialGrid& g) {
  Field f(g);
  for (std::size_t j = 0; j < g.size(); ++j) {
    double x = g.x(j);
    f[j] = x * std::exp(-x * x);
  }
  f[0] = 0.0;
  return f;
}

}  // namespace

TEST_CASE("Schrodinger flow is unitary and matches the Gaussian solution") {
  SpatialGrid g(30.0, 512);
  Field u0(g);
  for (std::size_t j = 0; j < g.size(); ++j) u0[j] = std::exp(-g.x(j) * g.x(j));
  const double t = 0.7;
  Field u = schrodinger_flow(u0, t);
  CHECK(l2_norm(u) == doctest::Approx(l2_norm(u0)).epsilon(1e-12));
  // i u_t + u_xx = 0 with u0 = e^{-x^2}: u = (1+4it)^{-1/2} e^{-x^2/(1+4it)}.
  cplx a = 1.0 + cplx(0.0, 4.0 * t);
  double err = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    double x = g.x(j);
    err = std::max(err, std::abs(u[j] - std::exp(-x * x / a) / std::sqrt(a)));
  }
  CHECK(err < 1e-10);
}

TEST_CASE("half-wave flows are unitary and inverse to each other") {
  SpatialGrid g(10.0, 128);
  Field f = odd_gaussian(g);
  Field p = halfwave_flow(f, 0.4, WaveSign::Plus);
  CHECK(l2_norm(p) == doctest::Approx(l2_norm(f)).epsilon(1e-12));
  CHECK(max_diff(halfwave_flow(p, 0.4, WaveSign::Minus), f) < 1e-13);
}

TEST_CASE("KG flow of a standing mode") {
  SpatialGrid g(M_PI, 64);
  const double xi = 3.0, t = 1.3;
  Field n0(g), n1(g);
  for (std::size_t j = 0; j < g.size(); ++j) n0[j] = std::sin(xi * g.x(j));
  auto w = kg_flow(n0, n1, t);
  double om = std::sqrt(1.0 + xi * xi), err = 0.0, errt = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    err = std::max(err, std::abs(w.n[j] - std::cos(om * t) * n0[j]));
    errt = std::max(errt, std::abs(w.nt[j] + om * std::sin(om * t) * n0[j]));
  }
  CHECK(err < 1e-12);
  CHECK(errt < 1e-12);
}

TEST_CASE("KG flow preserves oddness and realness") {
  SpatialGrid g(10.0, 128);
  Field n0 = odd_gaussian(g), n1 = odd_gaussian(g);
  for (auto& v : n1.values) v *= -0.5;
  for (double t : {0.1, 1.0, 3.7}) {
    auto w = kg_flow(n0, n1, t);
    CHECK(even_part_max(w.n) < 1e-14);
    CHECK(even_part_max(w.nt) < 1e-14);
    CHECK(imaginary_fraction(w.n) < 1e-14);
  }
}

TEST_CASE("KG flow rejects complex data") {
  SpatialGrid g(5.0, 32);
  Field n0(g), n1(g);
  n0[3] = cplx(0.0, 1.0);
  CHECK_THROWS_AS(kg_flow(n0, n1, 0.5), Error);
}

TEST_CASE("phi components round trip") {
  SpatialGrid g(8.0, 64);
  Field n0 = odd_gaussian(g), n1(g);
  for (std::size_t j = 0; j < g.size(); ++j) n1[j] = std::exp(-g.x(j) * g.x(j));
  auto phi = make_phi(n0, n1);
  auto w = wave_fields_from_components(phi.plus, phi.minus);
  CHECK(max_diff(w.n, n0) < 1e-13);
  CHECK(max_diff(w.nt, n1) < 1e-13);
  auto back = components_from_wave_fields(w.n, w.nt);
  CHECK(max_diff(back.plus, phi.plus) < 1e-13);
  CHECK(max_diff(back.minus, phi.minus) < 1e-13);

  // Evolving the components reproduces the KG flow.
  const double t = 0.9;
  auto direct = kg_flow(n0, n1, t);
  auto via = wave_fields_from_components(halfwave_flow(phi.plus, t, WaveSign::Plus),
                                         halfwave_flow(phi.minus, t, WaveSign::Minus));
  CHECK(max_diff(direct.n, via.n) < 1e-12);
  CHECK(max_diff(direct.nt, via.nt) < 1e-12);
}

TEST_CASE("phi functions agree across the series switch") {
  for (cplx z : {cplx(0.49, 0.0), cplx(0.0, 0.49), cplx(-0.3, 0.35), cplx(1e-9, 0.0)}) {
    cplx e = std::exp(z);
    if (std::abs(z) > 1e-3) {
      CHECK(std::abs(phi1(z) - (e - 1.0) / z) < 1e-13);
      CHECK(std::abs(phi2(z) - (e - 1.0 - z) / (z * z)) < 1e-11);
    }
  }
  CHECK(phi1(0.0) == cplx(1.0));
  CHECK(phi2(0.0) == cplx(0.5));
  cplx z(0.0, 3.0);
  CHECK(std::abs(phi1(z) - (std::exp(z) - 1.0) / z) < 1e-15);
}
