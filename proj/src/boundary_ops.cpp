#include "kgs/core/boundary_ops.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include "kgs/core/cutoffs.hpp"
#include "kgs/core/error.hpp"
#include "kgs/core/parallel.hpp"
#include "kgs/core/phi_functions.hpp"

namespace kgs {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I{0.0, 1.0};

using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
constexpr std::size_t kNodeBlock = 512;

std::vector<double> merge_breaks(std::vector<double> a, const std::vector<double>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end(), [](double u, double v) { return std::abs(u - v) < 1e-14; }),
          a.end());
  return a;
}

// Mirrors breakpoints on [0, b] onto [-b, b].
std::vector<double> symmetric_breaks(const std::vector<double>& half) {
  std::vector<double> out;
  for (auto it = half.rbegin(); it != half.rend(); ++it)
    if (*it > 0.0) out.push_back(-*it);
  out.insert(out.end(), half.begin(), half.end());
  return out;
}

// Splits every panel wider than max_width.
std::vector<double> cap_width(const std::vector<double>& breaks, double max_width) {
  std::vector<double> out{breaks.front()};
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    auto seg = uniform_breaks(breaks[i], breaks[i + 1], max_width);
    out.insert(out.end(), seg.begin() + 1, seg.end());
  }
  return out;
}

// Panels on [start, stop] whose width follows the local phase rate.
std::vector<double> adaptive_breaks(double start, double stop, double phase,
                                    const std::function<double(double)>& rate) {
  std::vector<double> out{start};
  double b = start;
  while (b < stop) {
    double w = phase / std::max(rate(b), 1e-12);
    w = std::min({w, 0.5, stop - b});
    // Re-evaluate at the panel end so the width is conservative.
    w = std::min(w, phase / std::max(rate(b + w), 1e-12));
    b = (stop - (b + w) < 1e-12) ? stop : b + w;
    out.push_back(b);
  }
  return out;
}

// out(m, j) += sum_q exp(i f_q t_m) * S(q, j), in node blocks.
void accumulate_separable(const TimeGrid& times, const std::vector<double>& time_freq,
                          const std::function<void(std::size_t q0, std::size_t q1, RowMat&)>& spatial,
                          std::span<cplx> out, std::size_t cols, bool derivative) {
  const std::size_t Q = time_freq.size(), M = times.count;
  Eigen::Map<RowMat> result(out.data(), static_cast<Eigen::Index>(M), static_cast<Eigen::Index>(cols));
  for (std::size_t q0 = 0; q0 < Q; q0 += kNodeBlock) {
    const std::size_t q1 = std::min(Q, q0 + kNodeBlock), nq = q1 - q0;
    RowMat S(nq, cols);
    spatial(q0, q1, S);
    RowMat E(M, nq);
    for (std::size_t q = 0; q < nq; ++q) {
      const double f = time_freq[q0 + q];
      const cplx step = std::exp(I * f * times.dt);
      cplx ph = derivative ? I * f : cplx(1.0);
      for (std::size_t m = 0; m < M; ++m) {
        // Re-anchor the recurrence every 64 steps.
        if (m % 64 == 0) ph = (derivative ? I * f : cplx(1.0)) * std::exp(I * f * times.t(m));
        E(m, q) = ph;
        ph *= step;
      }
    }
    parallel_blocks(M, 64, [&](std::size_t lo, std::size_t hi) {
      const auto rows = static_cast<Eigen::Index>(hi - lo);
      result.middleRows(static_cast<Eigen::Index>(lo), rows).noalias() +=
          E.middleRows(static_cast<Eigen::Index>(lo), rows) * S;
    });
  }
}

double peak_abs(const CVec& v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, std::abs(x));
  return m;
}


// Coefficients of exp(i x (mu - sqrt(mu^2 - 1))) as a series in 1/mu, each
// pre-divided by mu0^n so that the n-th term is O((|x| / 2 mu0)^n / n!).
std::vector<cplx> phase_series(double x, double mu0) {
  std::vector<cplx> g;  // coefficients of i x (mu - s(mu)) in w = 1/mu
  double c = 0.5;
  g.assign(1, cplx{});
  for (std::size_t k = 1; k < 60; ++k) {
    g.resize(2 * k + 1, cplx{});
    g[2 * k - 1] = I * x * c;
    c *= (2.0 * k - 1.0) / (2.0 * k + 2.0);
  }
  std::vector<cplx> e{1.0};
  std::vector<cplx> scaled{1.0};
  for (std::size_t n = 1; n < g.size(); ++n) {
    cplx acc{};
    for (std::size_t m = 1; m <= n; ++m) acc += static_cast<double>(m) * g[m] * e[n - m];
    e.push_back(acc / static_cast<double>(n));
    scaled.push_back(e.back() * std::pow(mu0, -static_cast<double>(n)));
    if (n >= 4 && std::abs(scaled[n]) < 1e-17 && std::abs(scaled[n - 1]) < 1e-17) break;
  }
  return scaled;
}

// C1 = Im \int_{mu0}^\infty e^{i phi} / mu, C2 = Re \int_{mu0}^\infty e^{i phi} / mu^2 with
// phi = tau mu - x sqrt(mu^2 - 1).
struct TailPair {
  double c1, c2;
};

TailPair tail_pair(double x, double tau, double mu0, const std::vector<cplx>& series) {
  const double a = tau - x;
  const std::size_t P = series.size();
  // E[q-1] = mu0^{q-1} \int_{mu0}^\infty e^{i a mu} mu^{-q} d mu.
  std::vector<cplx> E;
  if (a == 0.0) {
    E.assign(P + 1, cplx{});  // E[0] only enters through its vanishing imaginary part
    for (std::size_t q = 2; q <= P + 1; ++q) E[q - 1] = 1.0 / (q - 1.0);
  } else {
    E = exponential_integrals(cplx(0.0, -a * mu0), P + 1);
  }
  cplx s1{}, s2{};
  for (std::size_t n = 0; n < P; ++n) {
    s1 += series[n] * E[n];
    s2 += series[n] * E[n + 1];
  }
  return {s1.imag(), s2.real() / mu0};
}

}  // namespace

void BoundaryKernelConfig::validate() const {
  if (n_A < 16 || n_B < 16) fail(ErrorKind::Config, "boundary quadrature needs n_A, n_B >= 16");
  if (panel_order < 2) fail(ErrorKind::Config, "panel order must be at least 2");
  if (xi_max_factor < 1.0) fail(ErrorKind::Config, "Xi_max must be at least the grid's max frequency");
  if (!(beta_max_factor > 0.0)) fail(ErrorKind::Config, "beta_max_factor must be positive");
  if (!(panel_phase > 0.0)) fail(ErrorKind::Config, "panel_phase must be positive");
  if (taper_length < 0.0) fail(ErrorKind::Config, "taper_length must be non-negative");
}


std::vector<cplx> exponential_integrals(cplx z, std::size_t count) {
  std::vector<cplx> E(count);
  if (count == 0) return E;
  const cplx ez = std::exp(-z);
  const double r = std::abs(z);
  if (r == 0.0) fail(ErrorKind::Numeric, "E_q(0) requested");
  auto continued_fraction = [&](std::size_t n) {
    // Modified Lentz evaluation of e^{-z} / (z + n - 1*n/(z + n + 2 - ...)).
    const double tiny = 1e-300;
    cplx b = z + static_cast<double>(n), c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i < 5000; ++i) {
      const double an = -static_cast<double>(i) * (static_cast<double>(n) - 1.0 + i);
      b += 2.0;
      d = an * d + b;
      if (std::abs(d) < tiny) d = tiny;
      c = b + an / c;
      if (std::abs(c) < tiny) c = tiny;
      d = 1.0 / d;
      const cplx del = c * d;
      h *= del;
      if (std::abs(del - 1.0) < 1e-15) break;
    }
    return h * ez;
  };
  if (r <= 1.0) {
    // Series for E_1, then upward recurrence (stable for |z| <= q).
    constexpr double euler_gamma = 0.57721566490153286061;
    cplx term = 1.0, sum{};
    for (int k = 1; k < 60; ++k) {
      term *= -z / static_cast<double>(k);
      const cplx add = term / static_cast<double>(k);
      sum += add;
      if (std::abs(add) < 1e-18) break;
    }
    E[0] = -euler_gamma - std::log(z) - sum;
    for (std::size_t q = 1; q < count; ++q) E[q] = (ez - z * E[q - 1]) / static_cast<double>(q);
  } else if (r > static_cast<double>(count) + 1.0) {
    // Downward recurrence is stable while q < |z|.
    E[count - 1] = continued_fraction(count);
    for (std::size_t q = count - 1; q >= 1; --q)
      E[q - 1] = (ez - static_cast<double>(q) * E[q]) / z;
  } else {
    for (std::size_t q = 1; q <= count; ++q) E[q - 1] = continued_fraction(q);
  }
  return E;
}

cplx halfline_time_transform(const TimeSeries& h, double mu) {
  return halfline_time_transform(h, std::vector<double>{mu}).front();
}

CVec halfline_time_transform(const TimeSeries& h, const std::vector<double>& mus) {
  CVec out(mus.size(), cplx{});
  if (h.size() < 2) return out;
  std::size_t start = 0;
  while (start < h.size() && h.t(start) < -1e-12 * h.dt) ++start;
  if (start + 1 >= h.size()) return out;
  const double t_start = h.t(start);
  for (std::size_t q = 0; q < mus.size(); ++q) {
    const double mu = mus[q];
    const cplx z = -I * mu * h.dt;
    const cplx w_left = phi2(z), w_right = phi1(z) - phi2(z);
    const cplx step = std::exp(z);
    cplx ph = std::exp(-I * mu * t_start);
    cplx acc{};
    for (std::size_t j = start; j + 1 < h.size(); ++j) {
      acc += ph * (w_left * h.values[j] + w_right * h.values[j + 1]);
      ph *= step;
    }
    out[q] = h.dt * acc;
  }
  return out;
}

KgBoundaryKernel::KgBoundaryKernel(const TimeSeries& h, double x_max, double t_max, double xi_max,
                                   const BoundaryKernelConfig& cfg) {
  cfg.validate();
  const TimeSeries ext = extend_with_taper(h, cfg.taper_length);
  const double rate_t = std::max(t_max, ext.t_end());

  // |mu| <= 1 part in theta = asin(mu); dyadic refinement toward theta = pi/2
  // resolves rho(x cos theta) for large negative x.
  const double half_pi = 0.5 * kPi;
  auto half = merge_breaks(uniform_breaks(0.0, half_pi, kPi / 8.0),
                           [&] {
                             std::vector<double> d;
                             for (std::size_t l = 1; l <= cfg.dyadic_levels + 2; ++l)
                               d.push_back(half_pi - half_pi * std::ldexp(1.0, -static_cast<int>(l)));
                             return d;
                           }());
  double width = cfg.panel_phase / std::max(rate_t + 1e-12, 1.0);
  std::vector<double> breaks;
  do {
    breaks = symmetric_breaks(cap_width(half, width));
    width *= 0.5;
  } while ((breaks.size() - 1) * cfg.panel_order < cfg.n_A);
  theta_ = composite_gauss_legendre(breaks, cfg.panel_order);
  std::vector<double> mus(theta_.size());
  for (std::size_t q = 0; q < mus.size(); ++q) mus[q] = std::sin(theta_.nodes[q]);
  hat_A_ = halfline_time_transform(ext, mus);
  for (std::size_t q = 0; q < mus.size(); ++q) hat_A_[q] *= theta_.weights[q] * std::cos(theta_.nodes[q]);

  // |mu| > 1 part in k; the weight |k|/<k> vanishes at k = 0.
  const double rate_k = std::max(x_max + rate_t, 1.0);
  std::vector<double> khalf = dyadic_breaks(1.0, cfg.dyadic_levels);
  if (xi_max > 1.0) {
    auto tail = uniform_breaks(1.0, xi_max, cfg.panel_phase / rate_k);
    khalf.insert(khalf.end(), tail.begin() + 1, tail.end());
  }
  width = cfg.panel_phase / rate_k;
  do {
    breaks = symmetric_breaks(cap_width(khalf, width));
    width *= 0.5;
  } while ((breaks.size() - 1) * cfg.panel_order < cfg.n_B);
  k_ = composite_gauss_legendre(breaks, cfg.panel_order);
  std::vector<double> omegas(k_.size());
  for (std::size_t q = 0; q < omegas.size(); ++q) omegas[q] = -d_symbol(k_.nodes[q]);
  hat_B_ = halfline_time_transform(ext, omegas);
  double peak = std::max(peak_abs(hat_A_), 0.0);
  for (std::size_t q = 0; q < omegas.size(); ++q) {
    const double k = k_.nodes[q];
    hat_B_[q] *= k_.weights[q] * std::abs(k) / japanese(k);
  }
  tail_ = cfg.tail_correction;
  mu0_ = japanese(xi_max);
  std::size_t start = 0;
  while (start < ext.size() && ext.t(start) < -1e-12 * ext.dt) ++start;
  if (start + 1 >= ext.size()) tail_ = false;
  if (tail_) {
    lattice_dt_ = ext.dt;
    lattice_t0_ = ext.t(start);
    const std::size_t K = ext.size() - start;
    auto v = [&](std::size_t i) { return ext.values[start + i]; };
    jump_times_ = {ext.t(start), ext.t_end()};
    jumps_ = {v(0), -v(K - 1)};
    kinks_.assign(K, cplx{});
    kink_times_.resize(K);
    cplx prev_slope{};
    for (std::size_t i = 0; i < K; ++i) {
      const cplx slope = i + 1 < K ? (v(i + 1) - v(i)) / ext.dt : cplx{};
      kinks_[i] = slope - prev_slope;
      kink_times_[i] = ext.t(start + i);
      prev_slope = slope;
    }
  }

  const CVec raw = halfline_time_transform(ext, std::vector<double>{0.0, japanese(xi_max), -japanese(xi_max)});
  peak = std::max(std::abs(raw[0]), 1e-300);
  for (std::size_t q = 0; q < mus.size(); q += 7)
    peak = std::max(peak, std::abs(hat_A_[q] / (theta_.weights[q] * std::cos(theta_.nodes[q]) + 1e-300)));
  truncation_ratio_ = std::max(std::abs(raw[1]), std::abs(raw[2])) / peak;
}

cplx KgBoundaryKernel::A(double x, double t) const {
  cplx acc{};
  for (std::size_t q = 0; q < theta_.size(); ++q) {
    const double c = std::cos(theta_.nodes[q]);
    const double r = rho_cutoff(x * c);
    if (r == 0.0) continue;
    acc += hat_A_[q] * std::exp(I * std::sin(theta_.nodes[q]) * t - x * c) * r;
  }
  return acc;
}

cplx KgBoundaryKernel::tail(double x, double t, bool derivative) const {
  if (!tail_) return {};
  const auto series = phase_series(x, mu0_);
  cplx acc{};
  for (std::size_t i = 0; i < kinks_.size(); ++i) {
    const TailPair c = tail_pair(x, t - kink_times_[i], mu0_, series);
    acc += kinks_[i] * (derivative ? 2.0 * c.c1 : -2.0 * c.c2);
  }
  if (!derivative)
    for (std::size_t i = 0; i < jumps_.size(); ++i)
      acc += jumps_[i] * 2.0 * tail_pair(x, t - jump_times_[i], mu0_, series).c1;
  return acc;
}

void KgBoundaryKernel::add_tail(const SpatialGrid& grid, const TimeGrid& times, SpaceTimeField& field,
                                bool derivative) const {
  if (!tail_) return;
  const double dt = times.dt;
  const double offset = lattice_t0_ / dt;
  const bool on_lattice = std::abs(dt - lattice_dt_) <= 1e-12 * dt && std::abs(offset - std::round(offset)) < 1e-9;
  const double scale = 1.0 / (2.0 * kPi);
  if (!on_lattice) {
    parallel_chunks(grid.size(), [&](std::size_t lo, std::size_t hi) {
      for (std::size_t j = lo; j < hi; ++j)
        for (std::size_t m = 0; m < times.count; ++m) field(m, j) += scale * tail(grid.x(j), times.t(m), derivative);
    });
    return;
  }
  // Kink and jump times sit on the output lattice, so the tail is a discrete
  // convolution over the index difference d = m - s0 - i.
  const long s0 = std::lround(offset);
  const long K = static_cast<long>(kinks_.size()), M = static_cast<long>(times.count);
  const long dmin = -(s0 + K - 1), dmax = M - 1 - s0;
  parallel_chunks(grid.size(), [&](std::size_t lo, std::size_t hi) {
    std::vector<double> c1(static_cast<std::size_t>(dmax - dmin + 1)), c2(c1.size());
    for (std::size_t j = lo; j < hi; ++j) {
      const double x = grid.x(j);
      const auto series = phase_series(x, mu0_);
      for (long d = dmin; d <= dmax; ++d) {
        const TailPair c = tail_pair(x, static_cast<double>(d) * dt, mu0_, series);
        c1[static_cast<std::size_t>(d - dmin)] = c.c1;
        c2[static_cast<std::size_t>(d - dmin)] = c.c2;
      }
      const std::vector<double>& kernel = derivative ? c1 : c2;
      const double weight = derivative ? 2.0 : -2.0;
      for (long m = 0; m < M; ++m) {
        cplx acc{};
        const long base = m - s0 - dmin;
        for (long i = 0; i < K; ++i) acc += kinks_[static_cast<std::size_t>(i)] * kernel[static_cast<std::size_t>(base - i)];
        acc *= weight;
        if (!derivative) {
          acc += 2.0 * jumps_[0] * c1[static_cast<std::size_t>(base)];
          acc += 2.0 * jumps_[1] * c1[static_cast<std::size_t>(base - (K - 1))];
        }
        field(static_cast<std::size_t>(m), j) += scale * acc;
      }
    }
  });
}

cplx KgBoundaryKernel::B(double x, double t) const {
  cplx acc = tail(x, t, false);
  for (std::size_t q = 0; q < k_.size(); ++q) {
    const double k = k_.nodes[q];
    acc += hat_B_[q] * std::exp(-I * t * d_symbol(k) + I * k * x);
  }
  return acc;
}

void KgBoundaryKernel::tabulate(const SpatialGrid& grid, const TimeGrid& times, SpaceTimeField& value,
                                SpaceTimeField* time_derivative) const {
  const std::size_t N = grid.size();
  value = SpaceTimeField(grid, times);
  if (time_derivative) *time_derivative = SpaceTimeField(grid, times);

  std::vector<double> fA(theta_.size()), fB(k_.size());
  for (std::size_t q = 0; q < fA.size(); ++q) fA[q] = std::sin(theta_.nodes[q]);
  for (std::size_t q = 0; q < fB.size(); ++q) fB[q] = -d_symbol(k_.nodes[q]);

  auto spatial_A = [&](std::size_t q0, std::size_t q1, RowMat& S) {
    for (std::size_t q = q0; q < q1; ++q) {
      const double c = std::cos(theta_.nodes[q]);
      for (std::size_t j = 0; j < N; ++j) {
        const double x = grid.x(j), r = rho_cutoff(x * c);
        S(q - q0, j) = r == 0.0 ? cplx{} : hat_A_[q] * (std::exp(-x * c) * r / (2.0 * kPi));
      }
    }
  };
  auto spatial_B = [&](std::size_t q0, std::size_t q1, RowMat& S) {
    for (std::size_t q = q0; q < q1; ++q) {
      const double k = k_.nodes[q];
      const cplx step = std::exp(I * k * grid.dx());
      cplx ph = std::exp(I * k * grid.x(0)) * hat_B_[q] / (2.0 * kPi);
      for (std::size_t j = 0; j < N; ++j) {
        if (j % 64 == 0) ph = std::exp(I * k * grid.x(j)) * hat_B_[q] / (2.0 * kPi);
        S(q - q0, j) = ph;
        ph *= step;
      }
    }
  };
  accumulate_separable(times, fA, spatial_A, value.data(), N, false);
  accumulate_separable(times, fB, spatial_B, value.data(), N, false);
  add_tail(grid, times, value, false);
  if (time_derivative) {
    accumulate_separable(times, fA, spatial_A, time_derivative->data(), N, true);
    accumulate_separable(times, fB, spatial_B, time_derivative->data(), N, true);
    add_tail(grid, times, *time_derivative, true);
  }
}

cplx kg_boundary_A(const TimeSeries& h, double x, double t, const BoundaryKernelConfig& cfg, double xi_max) {
  return KgBoundaryKernel(h, std::abs(x), t, xi_max, cfg).A(x, t);
}

cplx kg_boundary_B(const TimeSeries& h, double x, double t, const BoundaryKernelConfig& cfg, double xi_max) {
  return KgBoundaryKernel(h, std::abs(x), t, xi_max, cfg).B(x, t);
}

namespace {

double project_real(SpaceTimeField& f) {
  double re = 0.0, im = 0.0;
  for (auto& v : f.data()) {
    re = std::max(re, std::abs(v.real()));
    im = std::max(im, std::abs(v.imag()));
    v = cplx(v.real(), 0.0);
  }
  return re > 0.0 ? im / re : (im > 0.0 ? 1.0 : 0.0);
}

}  // namespace

BoundaryField kg_boundary_V0(const TimeSeries& h, const SpatialGrid& grid, const TimeGrid& times,
                             const BoundaryKernelConfig& cfg, bool with_time_derivative) {
  BoundaryField out;
  const double xi_max = cfg.xi_max_factor * grid.max_frequency();
  // Put the data on the output time lattice so the tail is a convolution.
  TimeSeries data = h;
  const double offset = h.t0 / times.dt;
  if (std::abs(h.dt - times.dt) > 1e-12 * times.dt || std::abs(offset - std::round(offset)) > 1e-9) {
    const auto count = static_cast<std::size_t>(std::floor(std::max(0.0, h.t_end()) / times.dt + 1e-9)) + 1;
    data = sample_series(times.dt, count, [&](double t) { return h.value_at(t); });
  }
  KgBoundaryKernel kernel(data, grid.half_width(), times.t_end(), xi_max, cfg);
  if (!cfg.tail_correction && kernel.truncation_ratio() > 1e-3) {
    std::ostringstream os;
    os << "Klein-Gordon boundary data not resolved by Xi_max = " << xi_max
       << " (|h^| ratio " << kernel.truncation_ratio() << ")";
    out.warnings.push_back(os.str());
  }
  kernel.tabulate(grid, times, out.value, with_time_derivative ? &out.time_derivative : nullptr);
  out.imag_residue = project_real(out.value);
  if (with_time_derivative) project_real(out.time_derivative);
  if (out.imag_residue > 1e-4) {
    std::ostringstream os;
    os << "Klein-Gordon boundary field has imaginary residue " << out.imag_residue;
    out.warnings.push_back(os.str());
  }
  return out;
}

SchrodingerBoundaryKernel::SchrodingerBoundaryKernel(const TimeSeries& g, double x_max, double t_max,
                                                     double beta_max, const BoundaryKernelConfig& cfg) {
  cfg.validate();
  const TimeSeries ext = extend_with_taper(g, cfg.taper_length);
  const double rate_t = std::max(t_max, ext.t_end());
  const auto near_zero = dyadic_breaks(std::min(1.0, beta_max), cfg.dyadic_levels + 2);

  auto build = [&](double x_rate) {
    auto rate = [&](double b) { return 2.0 * b * rate_t + x_rate; };
    auto breaks = cap_width(near_zero, cfg.panel_phase / std::max(rate(1.0), 1.0));
    if (beta_max > 1.0) {
      auto tail = adaptive_breaks(1.0, beta_max, cfg.panel_phase, rate);
      breaks.insert(breaks.end(), tail.begin() + 1, tail.end());
    }
    return composite_gauss_legendre(breaks, cfg.panel_order);
  };
  travel_ = build(x_max);
  decay_ = build(0.0);

  std::vector<double> w(travel_.size());
  for (std::size_t q = 0; q < w.size(); ++q) w[q] = -travel_.nodes[q] * travel_.nodes[q];
  hat_travel_ = halfline_time_transform(ext, w);
  for (std::size_t q = 0; q < w.size(); ++q) hat_travel_[q] *= travel_.weights[q] * travel_.nodes[q] / kPi;

  w.resize(decay_.size());
  for (std::size_t q = 0; q < w.size(); ++q) w[q] = decay_.nodes[q] * decay_.nodes[q];
  hat_decay_ = halfline_time_transform(ext, w);
  for (std::size_t q = 0; q < w.size(); ++q) hat_decay_[q] *= decay_.weights[q] * decay_.nodes[q] / kPi;

  const double b2 = beta_max * beta_max;
  const CVec edge = halfline_time_transform(ext, std::vector<double>{b2, -b2});
  CVec sample;
  std::vector<double> probe;
  for (double b = 0.05; b < beta_max; b *= 1.5) probe.push_back(b * b);
  sample = halfline_time_transform(ext, probe);
  double peak = 1e-300;
  for (std::size_t i = 0; i < probe.size(); ++i) peak = std::max(peak, std::sqrt(probe[i]) * std::abs(sample[i]));
  truncation_ratio_ = beta_max * std::max(std::abs(edge[0]), std::abs(edge[1])) / peak;
}

cplx SchrodingerBoundaryKernel::evaluate(double x, double t) const {
  cplx acc{};
  for (std::size_t q = 0; q < travel_.size(); ++q) {
    const double b = travel_.nodes[q];
    acc += hat_travel_[q] * std::exp(-I * b * b * t + I * b * x);
  }
  for (std::size_t q = 0; q < decay_.size(); ++q) {
    const double b = decay_.nodes[q];
    const double r = rho_cutoff(b * x);
    if (r == 0.0) continue;
    acc += hat_decay_[q] * std::exp(I * b * b * t - b * x) * r;
  }
  return acc;
}

void SchrodingerBoundaryKernel::tabulate(const SpatialGrid& grid, const TimeGrid& times,
                                         SpaceTimeField& value) const {
  const std::size_t N = grid.size();
  value = SpaceTimeField(grid, times);
  std::vector<double> f_travel(travel_.size()), f_decay(decay_.size());
  for (std::size_t q = 0; q < f_travel.size(); ++q) f_travel[q] = -travel_.nodes[q] * travel_.nodes[q];
  for (std::size_t q = 0; q < f_decay.size(); ++q) f_decay[q] = decay_.nodes[q] * decay_.nodes[q];
  accumulate_separable(
      times, f_travel,
      [&](std::size_t q0, std::size_t q1, RowMat& S) {
        for (std::size_t q = q0; q < q1; ++q) {
          const double b = travel_.nodes[q];
          const cplx step = std::exp(I * b * grid.dx());
          cplx ph;
          for (std::size_t j = 0; j < N; ++j) {
            if (j % 64 == 0) ph = std::exp(I * b * grid.x(j)) * hat_travel_[q];
            S(q - q0, j) = ph;
            ph *= step;
          }
        }
      },
      value.data(), N, false);
  accumulate_separable(
      times, f_decay,
      [&](std::size_t q0, std::size_t q1, RowMat& S) {
        for (std::size_t q = q0; q < q1; ++q) {
          const double b = decay_.nodes[q];
          for (std::size_t j = 0; j < N; ++j) {
            const double x = grid.x(j), r = rho_cutoff(b * x);
            S(q - q0, j) = r == 0.0 ? cplx{} : hat_decay_[q] * (std::exp(-b * x) * r);
          }
        }
      },
      value.data(), N, false);
}

BoundaryField schrodinger_boundary_W0(const TimeSeries& g, const SpatialGrid& grid, const TimeGrid& times,
                                      const BoundaryKernelConfig& cfg) {
  BoundaryField out;
  const double beta_max = cfg.beta_max_factor * grid.max_frequency();
  SchrodingerBoundaryKernel kernel(g, grid.half_width(), times.t_end(), beta_max, cfg);
  if (kernel.truncation_ratio() > 1e-3) {
    std::ostringstream os;
    os << "Schrodinger boundary data not resolved by beta_max = " << beta_max << " (ratio "
       << kernel.truncation_ratio() << ")";
    out.warnings.push_back(os.str());
  }
  kernel.tabulate(grid, times, out.value);
  return out;
}

namespace {

TimeSeries origin_trace(const SpatialGrid& grid, const TimeGrid& times,
                        const std::function<cplx(std::size_t k, double t)>& coeff) {
  TimeSeries out(0.0, times.dt, CVec(times.count));
  const double scale = 1.0 / (2.0 * grid.half_width());
  for (std::size_t m = 0; m < times.count; ++m) {
    cplx acc{};
    for (std::size_t k = 0; k < grid.size(); ++k) acc += coeff(k, times.t(m));
    out.values[m] = scale * acc;
  }
  return out;
}

}  // namespace

TimeSeries trace_p(const Field& u0e, const TimeGrid& times) {
  const auto U = forward_dft(u0e);
  const auto& grid = u0e.grid;
  auto p = origin_trace(grid, times, [&](std::size_t k, double t) {
    const double xi = grid.xi(k);
    return std::exp(-I * t * xi * xi) * U.coeffs[k];
  });
  for (std::size_t m = 0; m < p.size(); ++m) p.values[m] *= eta(p.t(m));
  return p;
}

TimeSeries trace_r(const PhiPair& phi, const TimeGrid& times) {
  const auto P = forward_dft(phi.plus);
  const auto Mn = forward_dft(phi.minus);
  const auto& grid = phi.plus.grid;
  return origin_trace(grid, times, [&](std::size_t k, double t) {
    const double d = d_symbol(grid.xi(k));
    return 0.5 * (std::exp(I * t * d) * P.coeffs[k] + std::exp(-I * t * d) * Mn.coeffs[k]);
  });
}

void write_kernel_csv(const std::string& path, const SpaceTimeField& f, std::size_t stride) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::Io, "cannot write '" + path + "'");
  out << "x,t,re,im\n";
  out.precision(12);
  stride = std::max<std::size_t>(1, stride);
  for (std::size_t m = 0; m < f.rows(); m += stride)
    for (std::size_t j = f.grid().zero_index(); j < f.cols(); j += stride)
      out << f.grid().x(j) << ',' << f.times().t(m) << ',' << f(m, j).real() << ',' << f(m, j).imag() << '\n';
}

}  // namespace kgs
