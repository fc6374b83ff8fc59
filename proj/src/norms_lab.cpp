#include "kgs/core/norms_lab.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "kgs/core/cutoffs.hpp"
#include "kgs/core/duhamel.hpp"
#include "kgs/core/error.hpp"
#include "kgs/core/parallel.hpp"

namespace kgs {

namespace {

const cplx I{0.0, 1.0};

double bracket(double y) { return std::sqrt(1.0 + y * y); }

double time_frequency(std::size_t l, std::size_t M, double dt) {
  const long signed_l = l < M / 2 ? static_cast<long>(l) : static_cast<long>(l) - static_cast<long>(M);
  return 2.0 * std::numbers::pi * static_cast<double>(signed_l) / (static_cast<double>(M) * dt);
}

void check_localized(const SpaceTimeField& f, std::vector<std::string>* warnings) {
  if (!warnings || f.rows() < 2) return;
  const double peak = f.max_abs();
  if (peak == 0.0) return;
  double edge = 0.0;
  for (const auto& v : f.row(0)) edge = std::max(edge, std::abs(v));
  for (const auto& v : f.row(f.rows() - 1)) edge = std::max(edge, std::abs(v));
  if (edge > 1e-8 * peak) warnings->push_back("field is not time-localized: edge snapshots reach " +
                                              std::to_string(edge / peak) + " of the maximum");
}

SpaceTimeField product(const SpaceTimeField& a, const SpaceTimeField& b, bool conjugate_second) {
  SpaceTimeField out(a.grid(), a.times());
  for (std::size_t i = 0; i < out.data().size(); ++i)
    out.data()[i] = a.data()[i] * (conjugate_second ? std::conj(b.data()[i]) : b.data()[i]);
  return out;
}

RatioResult make_ratio(double num, double den, std::vector<std::string> warnings) {
  RatioResult r;
  r.warnings = std::move(warnings);
  if (den > 0.0 && std::isfinite(num)) {
    r.value = num / den;
    r.defined = true;
  } else {
    r.warnings.push_back("ratio undefined: zero denominator");
  }
  return r;
}

// ---- random ensemble -------------------------------------------------------

struct Modulation {
  std::vector<cplx> amp;
  std::vector<double> freq;
  cplx operator()(double t) const {
    cplx s = 1.0;
    for (std::size_t i = 0; i < amp.size(); ++i) s += amp[i] * std::exp(I * freq[i] * t);
    return s;
  }
};

struct ModeSet {
  std::vector<long> k;
  std::vector<cplx> c;
  std::vector<cplx> c2;  // second coefficient (n1, or backward wave amplitude)
  std::vector<Modulation> mod;
};

struct Member {
  ModeSet u0;     // initial data for the free-flow estimates
  ModeSet u;      // Schrodinger-type space-time field
  ModeSet v;      // second Schrodinger-type field
  ModeSet F;      // off-shell forcing
  ModeSet wave;   // wave-type field / wave data
};

ModeSet draw_modes(std::mt19937_64& rng, const EnsembleParams& p, double mod_amp, double mod_freq) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(-mod_freq, mod_freq);
  ModeSet m;
  const long kmax = static_cast<long>(std::floor(p.band * p.half_width / std::numbers::pi));
  for (long k = -kmax; k <= kmax; ++k) {
    const double xi = std::numbers::pi * static_cast<double>(k) / p.half_width;
    const double scale = std::pow(bracket(xi), -p.decay);
    m.k.push_back(k);
    m.c.push_back(scale * cplx(normal(rng), normal(rng)));
    m.c2.push_back(scale * cplx(normal(rng), normal(rng)));
    Modulation mod;
    for (int h = 0; h < 3; ++h) {
      mod.amp.push_back(mod_amp * cplx(normal(rng), normal(rng)));
      mod.freq.push_back(uniform(rng));
    }
    m.mod.push_back(std::move(mod));
  }
  return m;
}

struct Lattice {
  SpatialGrid grid;
  TimeGrid times;
  double t0;
  double t(std::size_t m) const { return t0 + times.t(m); }
};

double mode_xi(const ModeSet& m, std::size_t i, const Lattice& lat) {
  return std::numbers::pi * static_cast<double>(m.k[i]) / lat.grid.half_width();
}

// Builds sum_i e^{i x xi_i} amplitude_i(t) times a time cut-off.
template <class Amp, class Cut>
SpaceTimeField synthesize(const ModeSet& m, const Lattice& lat, Amp&& amplitude, Cut&& cut) {
  SpaceTimeField f(lat.grid, lat.times);
  const std::size_t N = lat.grid.size();
  for (std::size_t r = 0; r < lat.times.count; ++r) {
    const double t = lat.t(r), c = cut(t);
    if (c == 0.0) continue;
    auto row = f.row(r);
    for (std::size_t i = 0; i < m.k.size(); ++i) {
      const double xi = mode_xi(m, i, lat);
      const cplx a = c * amplitude(i, xi, t);
      const cplx step = std::exp(I * xi * lat.grid.dx());
      cplx ph = std::exp(I * xi * lat.grid.x(0));
      for (std::size_t j = 0; j < N; ++j) {
        row[j] += a * ph;
        ph *= step;
      }
    }
  }
  return f;
}

Field synthesize_data(const ModeSet& m, const Lattice& lat, bool second) {
  Field f(lat.grid);
  for (std::size_t i = 0; i < m.k.size(); ++i) {
    const double xi = mode_xi(m, i, lat);
    for (std::size_t j = 0; j < f.size(); ++j) f[j] += (second ? m.c2[i] : m.c[i]) * std::exp(I * xi * lat.grid.x(j));
  }
  return f;
}

// eta(t) \int_0^t e^{i(t-t')Delta} F dt' on a lattice whose row `origin` is t = 0.
SpaceTimeField duhamel_from_origin(const SpaceTimeField& F, std::size_t origin, const Lattice& lat) {
  SpaceTimeField I0 = schrodinger_duhamel_field(F);
  const auto& grid = lat.grid;
  CVec base(I0.row(origin).begin(), I0.row(origin).end());
  forward_dft_inplace(grid, base);
  CVec tmp(grid.size());
  for (std::size_t r = 0; r < lat.times.count; ++r) {
    const double s = lat.t(r);
    for (std::size_t k = 0; k < tmp.size(); ++k) {
      const double xi = grid.xi(k);
      tmp[k] = std::exp(-I * s * xi * xi) * base[k];
    }
    inverse_dft_inplace(grid, tmp);
    auto row = I0.row(r);
    const double c = eta(s);
    for (std::size_t j = 0; j < tmp.size(); ++j) row[j] = c * (row[j] - tmp[j]);
  }
  return I0;
}

enum Estimate : std::size_t {
  kEq8,
  kEq9,
  kEq10,
  kEq11Schrodinger,
  kEq11Wave,
  kProp210,
  kProp211,
  kEstimateCount
};

const char* estimate_name(std::size_t e) {
  static const char* names[] = {"eq8_free_schrodinger",  "eq9_duhamel",         "eq10_time_localization",
                                "eq11_schrodinger_T",    "eq11_wave_T",         "prop210_wave_target",
                                "prop211_schrodinger_target"};
  return names[e];
}

std::vector<RatioResult> evaluate_member(const Member& mem, const Lattice& lat, std::size_t origin,
                                         const EnsembleParams& p) {
  std::vector<RatioResult> out(kEstimateCount);
  const double b = p.b, T = p.T, b_global = 1.0 / 3.0;
  auto cut = [](double t) { return eta(t); };
  auto cut_T = [T](double t) { return eta_scaled(t, T); };

  auto free_amp = [](const ModeSet& m) {
    return [&m](std::size_t i, double xi, double t) { return m.c[i] * std::exp(-I * t * xi * xi); };
  };
  auto modulated = [](const ModeSet& m) {
    return [&m](std::size_t i, double xi, double t) { return m.c[i] * std::exp(-I * t * xi * xi) * m.mod[i](t); };
  };

  const Field u0 = synthesize_data(mem.u0, lat, false);
  {
    std::vector<std::string> w;
    const double num = xsb_norm(synthesize(mem.u0, lat, free_amp(mem.u0), cut), p.s0, b, &w);
    out[kEq8] = make_ratio(num, sobolev_norm(u0, p.s0), w);
  }
  const SpaceTimeField F = synthesize(mem.F, lat, modulated(mem.F), cut);
  {
    std::vector<std::string> w;
    const double num = xsb_norm(duhamel_from_origin(F, origin, lat), p.s0, 1.0 - b, &w);
    out[kEq9] = make_ratio(num, xsb_norm(F, p.s0, -b, &w), w);
  }
  {
    std::vector<std::string> w;
    const double b1 = 0.1, b2 = b;
    SpaceTimeField FT = F;
    for (std::size_t r = 0; r < lat.times.count; ++r)
      for (auto& v : FT.row(r)) v *= eta_scaled(lat.t(r), T);
    const double num = xsb_norm(FT, p.s0, b1, &w);
    out[kEq10] = make_ratio(num, std::pow(T, b2 - b1) * xsb_norm(F, p.s0, b2, &w), w);
  }
  {
    std::vector<std::string> w;
    const double num = xsb_norm(synthesize(mem.u0, lat, free_amp(mem.u0), cut_T), 0.0, b_global, &w);
    out[kEq11Schrodinger] = make_ratio(num, std::pow(T, 0.5 - b_global) * sobolev_norm(u0, 0.0), w);
  }
  {
    std::vector<std::string> w;
    const ModeSet& m = mem.wave;
    auto kg = [&m](std::size_t i, double xi, double t) {
      const double d = d_symbol(xi);
      return std::cos(t * d) * m.c[i] + std::sin(t * d) / d * m.c2[i];
    };
    const Field n0 = synthesize_data(m, lat, false), n1 = synthesize_data(m, lat, true);
    const double num = ysb_norm(synthesize(m, lat, kg, cut_T), p.s1, b_global, WeightKind::WaveInf, &w);
    const double den = std::pow(T, 0.5 - b_global) * (sobolev_norm(n0, p.s1) + sobolev_norm(n1, p.s1 - 1.0));
    out[kEq11Wave] = make_ratio(num, den, w);
  }
  const SpaceTimeField u = synthesize(mem.u, lat, modulated(mem.u), cut);
  {
    const SpaceTimeField v = synthesize(mem.v, lat, modulated(mem.v), cut);
    out[kProp210] = bilinear_ratio_wave_target(u, v, p.s0, p.s1, p.a, b);
  }
  {
    const ModeSet& m = mem.wave;
    auto waves = [&m](std::size_t i, double xi, double t) {
      const double d = d_symbol(xi);
      return (m.c[i] * std::exp(I * t * d) + m.c2[i] * std::exp(-I * t * d)) * m.mod[i](t);
    };
    const SpaceTimeField n = synthesize(m, lat, waves, cut);
    out[kProp211] = bilinear_ratio_schrodinger_target(u, n, p.s0, p.s1, p.a, b);
  }
  return out;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

const char* to_string(WeightKind k) {
  switch (k) {
    case WeightKind::Schrodinger: return "schrodinger";
    case WeightKind::WavePlus: return "wave_plus";
    case WeightKind::WaveMinus: return "wave_minus";
    case WeightKind::WaveInf: return "wave_inf";
  }
  return "unknown";
}

double BourgainWeight::operator()(double xi, double tau) const {
  const double space = std::pow(bracket(xi), s);
  switch (kind) {
    case WeightKind::Schrodinger: return space * std::pow(bracket(tau + xi * xi), b);
    case WeightKind::WavePlus: return space * std::pow(bracket(tau - xi), b);
    case WeightKind::WaveMinus: return space * std::pow(bracket(tau + xi), b);
    case WeightKind::WaveInf: {
      const double wp = std::pow(bracket(tau - xi), b), wm = std::pow(bracket(tau + xi), b);
      return space / std::sqrt(1.0 / (wp * wp) + 1.0 / (wm * wm));
    }
  }
  return space;
}

double bourgain_norm(const SpaceTimeField& f, const BourgainWeight& w, std::vector<std::string>* warnings) {
  check_localized(f, warnings);
  const std::size_t M = f.rows(), N = f.cols();
  CVec data = f.data();
  fft_2d(M, N, data, false);
  const double dt = f.times().dt, dx = f.grid().dx();
  std::vector<double> xi(N);
  for (std::size_t k = 0; k < N; ++k) xi[k] = f.grid().xi(k);
  double sum = 0.0;
  for (std::size_t l = 0; l < M; ++l) {
    const double tau = time_frequency(l, M, dt);
    for (std::size_t k = 0; k < N; ++k) {
      const double wt = w(xi[k], tau);
      sum += wt * wt * std::norm(data[l * N + k]);
    }
  }
  return std::sqrt(dx * dt / static_cast<double>(N * M) * sum);
}

double xsb_norm(const SpaceTimeField& f, double s, double b, std::vector<std::string>* warnings) {
  return bourgain_norm(f, {WeightKind::Schrodinger, s, b}, warnings);
}

double ysb_norm(const SpaceTimeField& f, double s, double b, WeightKind kind, std::vector<std::string>* warnings) {
  if (kind == WeightKind::Schrodinger) fail(ErrorKind::Config, "ysb_norm needs a wave weight");
  return bourgain_norm(f, {kind, s, b}, warnings);
}

RatioResult bilinear_ratio_wave_target(const SpaceTimeField& u, const SpaceTimeField& v, double s0, double s1,
                                       double a, double b) {
  std::vector<std::string> w;
  if (!(a < 2.0 * s0 - s1 + 2.0 * b - 0.5))
    w.push_back("a violates a < 2 s0 - s1 + 2b - 1/2 for the wave-target bilinear estimate");
  const double num = ysb_norm(product(u, v, true), s1 + a, -b, WeightKind::WaveInf, &w);
  const double den = xsb_norm(u, s0, b, &w) * xsb_norm(v, s0, b, &w);
  return make_ratio(num, den, std::move(w));
}

RatioResult bilinear_ratio_schrodinger_target(const SpaceTimeField& u, const SpaceTimeField& n, double s0,
                                              double s1, double a, double b) {
  std::vector<std::string> w;
  if (!(a < s1 + 2.0 * b - 0.5))
    w.push_back("a violates a < s1 + 2b - 1/2 for the Schrodinger-target bilinear estimate");
  const double num = xsb_norm(product(u, n, false), s0 + a, -b, &w);
  const double den = xsb_norm(u, s0, b, &w) * ysb_norm(n, s1, b, WeightKind::WaveInf, &w);
  return make_ratio(num, den, std::move(w));
}

void EnsembleParams::validate() const {
  if (count < 10) fail(ErrorKind::Config, "ensemble count must be at least 10");
  if (grid_sizes.size() < 2) fail(ErrorKind::Config, "ensemble needs at least two grid sizes");
  if (!(half_width > 0.0) || !(band > 0.0) || !(time_half_window > 0.0))
    fail(ErrorKind::Config, "ensemble geometry must be positive");
  if (time_samples < 16 || time_samples % 2) fail(ErrorKind::Config, "time_samples must be even and >= 16");
  if (time_half_window < 2.0) fail(ErrorKind::Config, "time window must contain the support of eta");
  if (!(T > 0.0 && T <= 1.0)) fail(ErrorKind::Config, "ensemble T must lie in (0, 1]");
  for (std::size_t n : grid_sizes) {
    const double max_freq = std::numbers::pi * static_cast<double>(n / 2) / half_width;
    if (2.0 * band >= max_freq)
      fail(ErrorKind::Config, "band too wide for N = " + std::to_string(n) + ": products would alias");
  }
}

EnsembleReport ensemble_estimate_suite(const EnsembleParams& p) {
  p.validate();
  EnsembleReport rep;
  rep.params = p;

  std::mt19937_64 rng(p.seed);
  std::vector<Member> members(p.count);
  const double on_shell = 0.3, off_shell = 1.0;
  for (auto& m : members) {
    m.u0 = draw_modes(rng, p, 0.0, 1.0);
    m.u = draw_modes(rng, p, on_shell, 3.0);
    m.v = draw_modes(rng, p, on_shell, 3.0);
    m.F = draw_modes(rng, p, off_shell, 10.0);
    m.wave = draw_modes(rng, p, on_shell, 3.0);
  }

  const double dt = 2.0 * p.time_half_window / static_cast<double>(p.time_samples);
  const std::size_t origin = p.time_samples / 2;
  std::vector<std::vector<std::vector<double>>> ratios(
      kEstimateCount, std::vector<std::vector<double>>(p.grid_sizes.size()));
  rep.estimates.resize(kEstimateCount);
  for (std::size_t e = 0; e < kEstimateCount; ++e) {
    rep.estimates[e].name = estimate_name(e);
    rep.estimates[e].grid_sizes = p.grid_sizes;
  }

  for (std::size_t gi = 0; gi < p.grid_sizes.size(); ++gi) {
    const Lattice lat{SpatialGrid(p.half_width, p.grid_sizes[gi]), TimeGrid{dt, p.time_samples},
                      -p.time_half_window};
    std::vector<std::vector<RatioResult>> results(p.count);
    parallel_chunks(p.count, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) results[i] = evaluate_member(members[i], lat, origin, p);
    });
    for (std::size_t i = 0; i < p.count; ++i)
      for (std::size_t e = 0; e < kEstimateCount; ++e) {
        const auto& r = results[i][e];
        if (r.defined)
          ratios[e][gi].push_back(r.value);
        else
          rep.estimates[e].undefined_seen = true;
        for (const auto& w : r.warnings)
          if (std::find(rep.warnings.begin(), rep.warnings.end(), w) == rep.warnings.end()) rep.warnings.push_back(w);
      }
  }

  for (std::size_t e = 0; e < kEstimateCount; ++e) {
    auto& st = rep.estimates[e];
    std::vector<double> lx, ly;
    for (std::size_t gi = 0; gi < p.grid_sizes.size(); ++gi) {
      const auto& r = ratios[e][gi];
      const double mx = r.empty() ? 0.0 : *std::max_element(r.begin(), r.end());
      st.max_ratio.push_back(mx);
      st.median_ratio.push_back(median(r));
      if (mx > 0.0) {
        lx.push_back(std::log(static_cast<double>(p.grid_sizes[gi])));
        ly.push_back(std::log(mx));
      }
    }
    if (lx.size() >= 2) {
      const double n = static_cast<double>(lx.size());
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
      }
      st.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
    if (st.slope > p.slope_tol || st.undefined_seen) rep.refinement_stable = false;
  }
  return rep;
}

}  // namespace kgs
