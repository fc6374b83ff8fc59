#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kgs/core/error.hpp"
#include "kgs/core/halfline.hpp"
#include "kgs/core/linear_flows.hpp"

using namespace kgs;

#ifndef KGS_TEST_DATA
#define KGS_TEST_DATA "."
#endif

namespace {

HalfLineFunction bump_data(const SpatialGrid& g) {
  return sample_halfline(g, 0.0, [](double x) { return cplx(x * std::exp(-x * x), 0.3 * x * x * std::exp(-x)); });
}

}  // namespace

TEST_CASE("odd extension is odd and restricts back") {
  SpatialGrid g(10.0, 128);
  auto f = bump_data(g);
  Field F = odd_extension(f);
  CHECK(F.at_origin() == cplx{});
  CHECK(F[0] == cplx{});
  CHECK(even_part_max(F) == 0.0);
  auto r = restrict_to_halfline(F);
  for (std::size_t i = 0; i + 1 < r.size(); ++i) CHECK(std::abs(r.samples[i] - f.samples[i]) < 1e-15);
}

TEST_CASE("odd extension reports the discarded origin value") {
  SpatialGrid g(4.0, 32);
  auto f = sample_halfline(g, 0.0, [](double) { return cplx(2.0, 0.0); });
  auto res = odd_extension_checked(f);
  CHECK(res.origin_discrepancy == doctest::Approx(2.0));
  CHECK(res.field.at_origin() == cplx{});
}

TEST_CASE("zero extension vanishes on the negative half") {
  SpatialGrid g(5.0, 64);
  auto f = bump_data(g);
  Field F = zero_extension(f);
  for (std::size_t j = 0; j < g.zero_index(); ++j) CHECK(F[j] == cplx{});
  CHECK(F[g.zero_index() + 3] == f.samples[3]);
  CHECK(extend(f, ExtensionPolicy::Zero).values == F.values);
}

TEST_CASE("extension policy names") {
  CHECK(parse_extension_policy("odd") == ExtensionPolicy::Odd);
  CHECK(parse_extension_policy("zero") == ExtensionPolicy::Zero);
  CHECK(std::string(to_string(ExtensionPolicy::Odd)) == "odd");
  CHECK_THROWS_AS(parse_extension_policy("even"), Error);
}

TEST_CASE("halfline norms") {
  SpatialGrid g(20.0, 512);
  auto f = sample_halfline(g, 0.0, [](double x) { return cplx(std::exp(-x), 0.0); });
  CHECK(halfline_l2(f) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-3));
  CHECK(halfline_norm(f, 0.0, ExtensionPolicy::Zero) == doctest::Approx(std::sqrt(0.5)).epsilon(2e-2));
  CHECK(halfline_norm(f, 0.5, ExtensionPolicy::Zero) > halfline_norm(f, 0.0, ExtensionPolicy::Zero));
}

TEST_CASE("time series helpers") {
  auto g = sample_series(0.25, 5, [](double t) { return cplx(t, -t); });
  CHECK(g.t_end() == doctest::Approx(1.0));
  CHECK(g.value_at(0.6) == cplx(0.6, -0.6));
  CHECK(g.value_at(-0.1) == cplx{});
  CHECK(g.value_at(1.5) == cplx{});
  CHECK(g.max_abs() == doctest::Approx(std::sqrt(2.0)));

  TimeSeries h(-0.5, 0.25, CVec(5, cplx(1.0, 0.0)));
  auto c = chi_cutoff(h);
  CHECK(c.values[0] == cplx{});
  CHECK(c.values[1] == cplx{});
  CHECK(c.values[2] == cplx(1.0, 0.0));

  auto e = extend_with_taper(g, 1.0);
  CHECK(e.size() > g.size());
  for (std::size_t m = 0; m < g.size(); ++m) CHECK(e.values[m] == g.values[m]);
  CHECK(std::abs(e.values.back()) < 1e-12);
}

TEST_CASE("compatibility only matters above s = 1/2") {
  SpatialGrid g(5.0, 64);
  auto u0 = sample_halfline(g, 0.0, [](double) { return cplx(1.0, 0.0); });
  auto data = sample_series(0.1, 4, [](double) { return cplx(0.0, 0.0); });
  CHECK(compatibility_check(u0, data, 0.25).status == CompatibilityStatus::Pass);
  auto res = compatibility_check(u0, data, 0.75);
  CHECK(res.status == CompatibilityStatus::Warn);
  CHECK(res.mismatch == doctest::Approx(1.0));
}

TEST_CASE("CSV loaders") {
  SpatialGrid g(4.0, 16);  // dx = 0.5
  auto f = load_halfline_csv(std::string(KGS_TEST_DATA) + "/halfline.csv", g, 0.0);
  CHECK(f.samples[1] == cplx(0.5, 0.25));
  CHECK(f.samples[2] == cplx(1.0, 0.5));
  CHECK(f.samples[3] == cplx(0.5, 0.75));
  CHECK(f.samples[6] == cplx{});

  auto s = load_series_csv(std::string(KGS_TEST_DATA) + "/series.csv");
  CHECK(s.size() == 4);
  CHECK(s.dt == doctest::Approx(0.5));
  CHECK(s.values[3] == cplx(3.0, 0.0));

  CHECK_THROWS_AS(load_series_csv(std::string(KGS_TEST_DATA) + "/series_bad.csv"), Error);
  CHECK_THROWS_AS(load_series_csv(std::string(KGS_TEST_DATA) + "/missing.csv"), Error);
}
