#pragma once

#include <string>
#include <vector>

#include "kgs/core/grid_spectral.hpp"

namespace kgs {

enum class ExtensionPolicy { Odd, Zero };

const char* to_string(ExtensionPolicy p);
ExtensionPolicy parse_extension_policy(const std::string& name);

/// Samples on the non-negative half of a SpatialGrid: x_i = i*dx for
/// i = 0..N/2 (so the last sample sits at x = L).
struct HalfLineFunction {
  SpatialGrid grid;
  CVec samples;
  double sobolev_index = 0.0;

  HalfLineFunction() = default;
  explicit HalfLineFunction(const SpatialGrid& g, double s = 0.0)
      : grid(g), samples(g.size() / 2 + 1, cplx{}), sobolev_index(s) {}

  std::size_t size() const { return samples.size(); }
  double x(std::size_t i) const { return static_cast<double>(i) * grid.dx(); }
  cplx at_origin() const { return samples.front(); }
};

/// Uniformly sampled complex series, value m at t0 + m*dt.
struct TimeSeries {
  double t0 = 0.0;
  double dt = 1.0;
  CVec values;

  TimeSeries() = default;
  TimeSeries(double start, double step, CVec v) : t0(start), dt(step), values(std::move(v)) {}

  std::size_t size() const { return values.size(); }
  double t(std::size_t m) const { return t0 + static_cast<double>(m) * dt; }
  double t_end() const { return values.empty() ? t0 : t(values.size() - 1); }
  /// Linear interpolation; zero outside the sampled window.
  cplx value_at(double t) const;
  double max_abs() const;
};

template <class Fn>
HalfLineFunction sample_halfline(const SpatialGrid& grid, double s, Fn&& fn) {
  HalfLineFunction f(grid, s);
  for (std::size_t i = 0; i < f.size(); ++i) f.samples[i] = fn(f.x(i));
  return f;
}

template <class Fn>
TimeSeries sample_series(double dt, std::size_t count, Fn&& fn) {
  TimeSeries g(0.0, dt, CVec(count));
  for (std::size_t m = 0; m < count; ++m) g.values[m] = fn(g.t(m));
  return g;
}

struct OddExtensionResult {
  Field field;
  /// |f(0)| that was discarded when forcing F(0) = 0.
  double origin_discrepancy = 0.0;
};

/// F(x) = f(x) for x > 0, F(-x) = -F(x), F(0) = F(-L) = 0.
OddExtensionResult odd_extension_checked(const HalfLineFunction& f);
Field odd_extension(const HalfLineFunction& f);
/// F = f on [0, L), 0 on [-L, 0).
Field zero_extension(const HalfLineFunction& f);
Field extend(const HalfLineFunction& f, ExtensionPolicy policy);

/// Samples of F at x >= 0; the x = L sample is the periodic image x_0.
HalfLineFunction restrict_to_halfline(const Field& F, double s = 0.0);

/// Zeroes samples at t < 0.
TimeSeries chi_cutoff(const TimeSeries& g);

/// ||extension(f)||_{H^s(R)}, an upper proxy for the restriction norm.
double halfline_norm(const HalfLineFunction& f, double s, ExtensionPolicy policy);

/// Trapezoid L2 norm over [0, L].
double halfline_l2(const HalfLineFunction& f);

enum class CompatibilityStatus { Pass, Warn };

struct CompatibilityResult {
  CompatibilityStatus status = CompatibilityStatus::Pass;
  double mismatch = 0.0;
  std::string message;
};

/// u0(0) = g(0) is only required when s > 1/2.
CompatibilityResult compatibility_check(const HalfLineFunction& u0, const TimeSeries& g, double s,
                                        double tol = 1e-8);

/// Sobolev norm of chi*g in time, computed on a zero-padded periodic window.
double time_sobolev_norm(const TimeSeries& g, double s);

/// Continues g past its last sample with a C^1 linear continuation that is
/// tapered smoothly to zero over `taper_length`. Used before transforming
/// boundary data in time, so only the samples on the original window matter
/// for the solution on that window.
TimeSeries extend_with_taper(const TimeSeries& g, double taper_length);

/// CSV loaders: "coordinate,value" or "coordinate,value_re,value_im" rows,
/// optional header, '#' comments. Half-line data is linearly interpolated
/// onto the grid nodes (zero beyond the last row); time series must be
/// uniformly spaced.
HalfLineFunction load_halfline_csv(const std::string& path, const SpatialGrid& grid, double s);
TimeSeries load_series_csv(const std::string& path);

}  // namespace kgs
