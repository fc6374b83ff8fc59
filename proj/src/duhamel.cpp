#include "kgs/core/duhamel.hpp"

#include <algorithm>
#include <cmath>

#include "kgs/core/cutoffs.hpp"
#include "kgs/core/parallel.hpp"
#include "kgs/core/phi_functions.hpp"

namespace kgs {

namespace {

const cplx I{0.0, 1.0};

// Boundary series below this size contribute nothing measurable.
constexpr double kNegligibleSeries = 1e-14;

void rows_forward(SpaceTimeField& f) {
  for (std::size_t m = 0; m < f.rows(); ++m) forward_dft_inplace(f.grid(), f.row(m));
}

void rows_inverse(SpaceTimeField& f) {
  for (std::size_t m = 0; m < f.rows(); ++m) inverse_dft_inplace(f.grid(), f.row(m));
}

// I_m = \int_0^{t_m} e^{-i omega_k (t_m - t')} F_k(t') dt' per mode k.
SpaceTimeField mode_duhamel(const SpaceTimeField& F, const std::vector<double>& omega) {
  SpaceTimeField S = F;
  rows_forward(S);
  const double dt = F.times().dt;
  const std::size_t M = F.rows(), N = F.cols();
  parallel_chunks(N, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t k = lo; k < hi; ++k) {
      const cplx z = -I * omega[k] * dt;
      const cplx decay = std::exp(z);
      const cplx w_old = dt * (phi1(z) - phi2(z)), w_new = dt * phi2(z);
      cplx prev_f = S(0, k), acc{};
      S(0, k) = 0.0;
      for (std::size_t m = 1; m < M; ++m) {
        const cplx f = S(m, k);
        acc = decay * acc + w_old * prev_f + w_new * f;
        S(m, k) = acc;
        prev_f = f;
      }
    }
  });
  rows_inverse(S);
  return S;
}

TimeSeries origin_series(const SpaceTimeField& f, double T) {
  const CVec tr = f.trace();
  TimeSeries out(0.0, f.times().dt, tr);
  for (std::size_t m = 0; m < out.size(); ++m) out.values[m] *= eta_scaled(out.t(m), T);
  return out;
}

TimeSeries scaled(const TimeSeries& s, cplx a) {
  TimeSeries out = s;
  for (auto& v : out.values) v *= a;
  return out;
}

TimeSeries difference(const TimeSeries& a, const TimeSeries& b, const TimeGrid& times) {
  TimeSeries out(0.0, times.dt, CVec(times.count));
  for (std::size_t m = 0; m < times.count; ++m) out.values[m] = a.value_at(times.t(m)) - b.value_at(times.t(m));
  return out;
}

void apply_time_profile(SpaceTimeField& f, const std::function<double(double)>& profile) {
  for (std::size_t m = 0; m < f.rows(); ++m) {
    const double c = profile(f.times().t(m));
    if (c == 1.0) continue;
    for (auto& v : f.row(m)) v *= c;
  }
}

void append(std::vector<std::string>* sink, const std::vector<std::string>& w) {
  if (sink) sink->insert(sink->end(), w.begin(), w.end());
}

// W0(0, g) on the grid, or zero when g is negligible.
SpaceTimeField schrodinger_boundary(const TimeSeries& g, const SpatialGrid& grid, const TimeGrid& times,
                                    const BoundaryKernelConfig& cfg, std::vector<std::string>* warnings) {
  if (g.max_abs() <= kNegligibleSeries) return SpaceTimeField(grid, times);
  auto b = schrodinger_boundary_W0(g, grid, times, cfg);
  append(warnings, b.warnings);
  return std::move(b.value);
}

// Adds the half-wave components of V0(0, h) to (Np, Nm).
void add_kg_boundary(const TimeSeries& h, const TimeGrid& times, const BoundaryKernelConfig& cfg,
                     SpaceTimeField& Np, SpaceTimeField& Nm, std::vector<std::string>* warnings) {
  if (h.max_abs() <= kNegligibleSeries) return;
  auto b = kg_boundary_V0(h, Np.grid(), times, cfg, true);
  append(warnings, b.warnings);
  add_wave_components(b.value, b.time_derivative, Np, Nm);
}

}  // namespace

CutoffProfile make_eta(const TimeGrid& times, double T) {
  CutoffProfile p{times, T, std::vector<double>(times.count)};
  for (std::size_t m = 0; m < times.count; ++m) p.values[m] = eta_scaled(times.t(m), T);
  return p;
}

SpaceTimeField schrodinger_duhamel_field(const SpaceTimeField& F) {
  std::vector<double> omega(F.cols());
  for (std::size_t k = 0; k < omega.size(); ++k) omega[k] = F.grid().xi(k) * F.grid().xi(k);
  return mode_duhamel(F, omega);
}

Field schrodinger_duhamel(const SpaceTimeField& F, std::size_t t_index) {
  return schrodinger_duhamel_field(F).snapshot(t_index);
}

SpaceTimeField halfwave_duhamel(const SpaceTimeField& G, WaveSign sign) {
  std::vector<double> omega(G.cols());
  for (std::size_t k = 0; k < omega.size(); ++k) omega[k] = -sign_value(sign) * d_symbol(G.grid().xi(k));
  return mode_duhamel(G, omega);
}

SpaceTimeField wave_forcing(const SpaceTimeField& u, double T, bool odd_forcing) {
  SpaceTimeField G(u.grid(), u.times());
  const auto& grid = u.grid();
  CVec dinv(grid.size());
  for (std::size_t k = 0; k < dinv.size(); ++k) dinv[k] = 1.0 / d_symbol(grid.xi(k));
  for (std::size_t m = 0; m < u.rows(); ++m) {
    auto src = u.row(m);
    auto dst = G.row(m);
    for (std::size_t j = 0; j < dst.size(); ++j) dst[j] = std::norm(src[j]);
    if (odd_forcing) {
      CVec tmp(dst.begin(), dst.end());
      for (std::size_t j = 0; j < dst.size(); ++j) dst[j] = 0.5 * (tmp[j] - tmp[grid.mirror(j)]);
    }
    forward_dft_inplace(grid, dst);
    const double c = eta_scaled(u.times().t(m), T);
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] *= c * dinv[k];
    inverse_dft_inplace(grid, dst);
  }
  return G;
}

SpaceTimeField kg_duhamel_npm(const SpaceTimeField& u, WaveSign sign, double T, bool odd_forcing) {
  SpaceTimeField out = halfwave_duhamel(wave_forcing(u, T, odd_forcing), sign);
  out *= -I * sign_value(sign);
  return out;
}

TimeSeries trace_q(const SpaceTimeField& F, double T) {
  return trace_q_from_integral(schrodinger_duhamel_field(F), T);
}

TimeSeries trace_q_from_integral(const SpaceTimeField& integral, double T) { return origin_series(integral, T); }

TimeSeries trace_z(const SpaceTimeField& npm_sum, double T) { return origin_series(npm_sum, T); }

SpaceTimeField free_schrodinger(const Field& u0, const TimeGrid& times) {
  SpaceTimeField out(u0.grid, times);
  const auto U = forward_dft(u0);
  for (std::size_t m = 0; m < times.count; ++m) {
    auto row = out.row(m);
    const double t = times.t(m);
    for (std::size_t k = 0; k < row.size(); ++k) {
      const double xi = u0.grid.xi(k);
      row[k] = std::exp(-I * t * xi * xi) * U.coeffs[k];
    }
    inverse_dft_inplace(u0.grid, row);
  }
  return out;
}

SpaceTimeField free_halfwave(const Field& phi, const TimeGrid& times, WaveSign sign) {
  SpaceTimeField out(phi.grid, times);
  const auto P = forward_dft(phi);
  const double s = sign_value(sign);
  for (std::size_t m = 0; m < times.count; ++m) {
    auto row = out.row(m);
    const double t = times.t(m);
    for (std::size_t k = 0; k < row.size(); ++k) row[k] = std::exp(I * s * t * d_symbol(phi.grid.xi(k))) * P.coeffs[k];
    inverse_dft_inplace(phi.grid, row);
  }
  return out;
}

void add_wave_components(const SpaceTimeField& nb, const SpaceTimeField& nb_t, SpaceTimeField& Np,
                         SpaceTimeField& Nm) {
  const auto& grid = nb.grid();
  CVec tmp(grid.size());
  for (std::size_t m = 0; m < nb.rows(); ++m) {
    auto src = nb_t.row(m);
    std::copy(src.begin(), src.end(), tmp.begin());
    forward_dft_inplace(grid, tmp);
    for (std::size_t k = 0; k < tmp.size(); ++k) tmp[k] /= d_symbol(grid.xi(k));
    inverse_dft_inplace(grid, tmp);
    auto n = nb.row(m);
    auto p = Np.row(m), q = Nm.row(m);
    for (std::size_t j = 0; j < tmp.size(); ++j) {
      p[j] += n[j] - I * tmp[j];
      q[j] += n[j] + I * tmp[j];
    }
  }
}

SpaceTimeField Trajectory::n() const {
  SpaceTimeField out = Np;
  out += Nm;
  out *= 0.5;
  return out;
}

SpaceTimeField Trajectory::nt() const {
  SpaceTimeField out = Np;
  out -= Nm;
  const auto& grid = out.grid();
  for (std::size_t m = 0; m < out.rows(); ++m) {
    auto row = out.row(m);
    forward_dft_inplace(grid, row);
    for (std::size_t k = 0; k < row.size(); ++k) row[k] *= 0.5 * I * d_symbol(grid.xi(k));
    inverse_dft_inplace(grid, row);
  }
  return out;
}

Trajectory linear_part(const PreparedData& data, const TimeGrid& times, double T, const GammaConfig& cfg,
                       std::vector<std::string>* warnings) {
  const auto& grid = data.u0e.grid;
  Trajectory out;
  out.u = free_schrodinger(data.u0e, times);
  const TimeSeries p = trace_p(data.u0e, times);
  out.u += schrodinger_boundary(difference(data.g, p, times), grid, times, cfg.kernel, warnings);

  out.Np = free_halfwave(data.phi.plus, times, WaveSign::Plus);
  out.Nm = free_halfwave(data.phi.minus, times, WaveSign::Minus);
  const TimeSeries r = trace_r(data.phi, times);
  add_kg_boundary(difference(data.h, r, times), times, cfg.kernel, out.Np, out.Nm, warnings);

  auto cut = [T](double t) { return eta_scaled(t, T); };
  apply_time_profile(out.u, cut);
  apply_time_profile(out.Np, cut);
  apply_time_profile(out.Nm, cut);
  return out;
}

Trajectory gamma_map(const Trajectory& state, const Trajectory& linear, const PreparedData& data, double T,
                     const GammaConfig& cfg, std::vector<std::string>* warnings) {
  const auto& grid = state.u.grid();
  const auto& times = state.u.times();
  auto cut = [T](double t) { return eta_scaled(t, T); };

  // F(u, n) = eta_T (n + potential) u.
  SpaceTimeField F = state.n();
  if (!data.potential.data().empty()) F += data.potential;
  for (std::size_t i = 0; i < F.data().size(); ++i) F.data()[i] = F.data()[i].real() * state.u.data()[i];
  apply_time_profile(F, cut);

  const SpaceTimeField integral = schrodinger_duhamel_field(F);
  const TimeSeries q = trace_q_from_integral(integral, T);
  Trajectory out;
  out.u = integral;
  out.u *= I * cfg.kappa;
  out.u += schrodinger_boundary(scaled(q, -I * cfg.kappa), grid, times, cfg.kernel, warnings);
  apply_time_profile(out.u, cut);
  out.u += linear.u;

  const SpaceTimeField G = wave_forcing(state.u, T, cfg.odd_forcing);
  SpaceTimeField np = halfwave_duhamel(G, WaveSign::Plus);
  SpaceTimeField nm = halfwave_duhamel(G, WaveSign::Minus);
  np *= -I;
  nm *= I;
  apply_time_profile(np, [](double t) { return eta(t); });
  apply_time_profile(nm, [](double t) { return eta(t); });
  SpaceTimeField sum = np;
  sum += nm;
  const TimeSeries z = trace_z(sum, T);

  out.Np = SpaceTimeField(grid, times);
  out.Nm = SpaceTimeField(grid, times);
  add_kg_boundary(scaled(z, -0.5), times, cfg.kernel, out.Np, out.Nm, warnings);
  apply_time_profile(out.Np, cut);
  apply_time_profile(out.Nm, cut);
  out.Np += np;
  out.Nm += nm;
  out.Np += linear.Np;
  out.Nm += linear.Nm;
  return out;
}

namespace {

double max_diff(const SpaceTimeField& x, const SpaceTimeField& y) {
  double m = 0.0;
  for (std::size_t i = 0; i < x.data().size(); ++i) m = std::max(m, std::abs(x.data()[i] - y.data()[i]));
  return m;
}

}  // namespace

double trajectory_distance(const Trajectory& a, const Trajectory& b) {
  return std::max({max_diff(a.u, b.u), max_diff(a.Np, b.Np), max_diff(a.Nm, b.Nm)});
}

double trajectory_sup(const Trajectory& a) { return std::max({a.u.max_abs(), a.Np.max_abs(), a.Nm.max_abs()}); }

}  // namespace kgs
