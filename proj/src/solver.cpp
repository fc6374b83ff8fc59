#include "kgs/core/solver.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "kgs/core/error.hpp"

namespace kgs {

namespace {

const cplx I{0.0, 1.0};

void dedupe_append(std::vector<std::string>& into, const std::vector<std::string>& from) {
  for (const auto& w : from)
    if (std::find(into.begin(), into.end(), w) == into.end()) into.push_back(w);
}

Field real_part(const Field& f) {
  Field out(f.grid);
  for (std::size_t j = 0; j < f.size(); ++j) out[j] = f[j].real();
  return out;
}

double halfline_mass(const Field& u) { return halfline_l2(restrict_to_halfline(u)); }

double monitor_wave_norm(const KGSState& s, double s1) {
  const auto w = s.wave();
  return wave_norm(odd_extension(restrict_to_halfline(real_part(w.n))),
                   odd_extension(restrict_to_halfline(real_part(w.nt))), s1);
}

SpaceTimeField slice_rows(const SpaceTimeField& f, std::size_t first, const TimeGrid& times) {
  SpaceTimeField out(f.grid(), times);
  for (std::size_t m = 0; m < times.count; ++m) {
    auto src = f.row(first + m);
    std::copy(src.begin(), src.end(), out.row(m).begin());
  }
  return out;
}

TimeSeries zero_series(double dt) { return TimeSeries(0.0, dt, CVec(2, cplx{})); }

std::string residual_log(const std::vector<double>& r) {
  std::ostringstream os;
  os.precision(3);
  for (std::size_t i = 0; i < r.size(); ++i) os << (i ? ", " : "") << r[i];
  return os.str();
}

}  // namespace

KGSState state_at(const Trajectory& traj, std::size_t m) {
  return KGSState{traj.u.snapshot(m), traj.Np.snapshot(m), traj.Nm.snapshot(m)};
}

double wave_norm(const Field& n, const Field& nt, double s1) {
  const double a = sobolev_norm(n, s1), b = sobolev_norm(nt, s1 - 1.0);
  return std::sqrt(a * a + b * b);
}

std::vector<std::string> LocalProblem::admissibility_warnings() const {
  std::vector<std::string> out;
  if (!(s0 > -0.25 && s0 < 0.5))
    out.push_back("s0 = " + std::to_string(s0) + " outside the admissible window (-1/4, 1/2)");
  if (!(s1 > -0.5 && s1 < 0.5))
    out.push_back("s1 = " + std::to_string(s1) + " outside the admissible window (-1/2, 1/2)");
  return out;
}

DataNorms data_norms(const LocalProblem& p) {
  DataNorms d;
  d.u0 = halfline_l2(p.u0);
  d.wave = halfline_norm(p.n0, p.s1, p.wave_policy) + halfline_norm(p.n1, p.s1 - 1.0, p.wave_policy);
  if (p.h.size() > 1 && p.h.max_abs() > 0.0) d.wave += time_sobolev_norm(p.h, p.s1);
  return d;
}

double select_T(const LocalProblem& p, double c_T) {
  if (!(c_T > 0.0)) fail(ErrorKind::Config, "c_T must be positive");
  const DataNorms d = data_norms(p);
  double bound = 1.0;
  if (d.u0 > 0.0) bound = std::min(bound, 1.0 / (d.u0 * d.u0));
  if (d.wave > 0.0) bound = std::min(bound, 1.0 / (d.wave * d.wave));
  return std::min(1.0, c_T * bound);
}

double SolveReport::max_ratio() const {
  double m = 0.0;
  for (double r : ratios) m = std::max(m, r);
  return m;
}

PreparedData prepare_data(const LocalProblem& p, const TimeGrid& times) {
  PreparedData d;
  d.u0e = extend(p.u0, p.u_policy);
  const Field n0e = extend(p.n0, p.wave_policy), n1e = extend(p.n1, p.wave_policy);
  d.phi = make_phi(n0e, n1e);
  d.g = p.g.size() > 0 ? p.g : zero_series(times.dt);
  d.h = p.h.size() > 0 ? p.h : zero_series(times.dt);
  return d;
}

LocalSolution local_solve(const LocalProblem& p, double T, const SolverConfig& cfg) {
  return local_solve(p, T, cfg, SpaceTimeField());
}

LocalSolution local_solve(const LocalProblem& p, double T, const SolverConfig& cfg, const SpaceTimeField& potential) {
  if (!(T > 0.0)) fail(ErrorKind::Config, "local time T must be positive");
  if (!(cfg.dt > 0.0)) fail(ErrorKind::Config, "dt must be positive");
  if (cfg.max_iter == 0) fail(ErrorKind::Config, "max_iter must be at least 1");
  const TimeGrid times = TimeGrid::covering(T, cfg.dt);

  LocalSolution sol;
  auto& rep = sol.report;
  rep.T = times.t_end();
  dedupe_append(rep.warnings, p.admissibility_warnings());
  if (p.g.size() > 0) {
    const auto c = compatibility_check(p.u0, p.g, p.s0);
    if (c.status == CompatibilityStatus::Warn) rep.warnings.push_back(c.message);
  }
  if (p.h.size() > 0 && p.s1 > 0.5 && std::abs(p.h.values.front() - p.n0.at_origin()) > 1e-8)
    rep.warnings.push_back("h(0) differs from n0(0) although s1 > 1/2");

  sol.data = prepare_data(p, times);
  if (!potential.data().empty()) {
    if (potential.rows() != times.count || !(potential.grid() == p.grid()))
      fail(ErrorKind::Config, "potential does not match the local space-time grid");
    sol.data.potential = potential;
  }

  std::vector<std::string> w;
  sol.linear = linear_part(sol.data, times, T, cfg.gamma, &w);
  Trajectory X = sol.linear;
  for (std::size_t it = 1; it <= cfg.max_iter; ++it) {
    Trajectory Y = gamma_map(X, sol.linear, sol.data, T, cfg.gamma, &w);
    const double res = trajectory_distance(Y, X);
    const double scale = 1.0 + trajectory_sup(Y);
    rep.residuals.push_back(res);
    X = std::move(Y);
    rep.iterations = it;
    if (res < cfg.tol_fp * scale) {
      rep.converged = true;
      break;
    }
  }
  dedupe_append(rep.warnings, w);
  // Ratios are meaningful only while both residuals sit above round-off.
  const double floor = 1e-13 * (1.0 + trajectory_sup(X));
  for (std::size_t i = 1; i < rep.residuals.size(); ++i)
    if (rep.residuals[i - 1] > floor && rep.residuals[i] > floor)
      rep.ratios.push_back(rep.residuals[i] / rep.residuals[i - 1]);
  if (!rep.converged)
    fail(ErrorKind::Convergence, "Picard iteration did not converge in " + std::to_string(cfg.max_iter) +
                                     " iterations; residuals: " + residual_log(rep.residuals));

  sol.traj = std::move(X);
  for (std::size_t m = 0; m < times.count; ++m) {
    const KGSState s = state_at(sol.traj, m);
    rep.times.push_back(times.t(m));
    rep.mass.push_back(halfline_mass(s.u));
    rep.wave_norm.push_back(monitor_wave_norm(s, p.s1));
  }
  return sol;
}

GlobalSolution global_solve(const LocalProblem& p, double T_final, const SolverConfig& cfg, double T_override) {
  if (!(T_final > 0.0)) fail(ErrorKind::Config, "T_final must be positive");
  if (p.g.size() > 0 && p.g.max_abs() > 1e-14)
    fail(ErrorKind::Config, "the global scheme requires zero Schrodinger boundary data");
  SolverConfig local_cfg = cfg;
  local_cfg.gamma.odd_forcing = true;

  const TimeGrid global_times = TimeGrid::covering(T_final, cfg.dt);
  const double dt = global_times.dt;
  local_cfg.dt = dt;
  const std::size_t total_steps = global_times.count - 1;

  GlobalSolution out;
  auto& rep = out.report;
  SpaceTimeField m_field;
  if (p.h.size() > 0 && p.h.max_abs() > 1e-14) {
    auto b = kg_boundary_V0(p.h, p.grid(), global_times, cfg.gamma.kernel, false);
    dedupe_append(rep.summary.warnings, b.warnings);
    m_field = std::move(b.value);
  }

  LocalProblem cur = p;
  cur.g = TimeSeries();
  cur.h = TimeSeries();
  cur.u_policy = ExtensionPolicy::Zero;
  cur.wave_policy = ExtensionPolicy::Odd;

  KGSState state;
  state.u = extend(cur.u0, cur.u_policy);
  const PhiPair phi0 = make_phi(extend(cur.n0, cur.wave_policy), extend(cur.n1, cur.wave_policy));
  state.Np = phi0.plus;
  state.Nm = phi0.minus;
  rep.summary.times.push_back(0.0);
  rep.summary.mass.push_back(halfline_mass(state.u));
  rep.summary.wave_norm.push_back(monitor_wave_norm(state, p.s1));

  std::size_t index = 0;
  while (index < total_steps) {
    const double T = T_override > 0.0 ? T_override : select_T(cur, cfg.c_T);
    std::size_t steps = static_cast<std::size_t>(std::llround(T / dt));
    steps = std::clamp<std::size_t>(steps, 1, total_steps - index);
    const double T_loc = static_cast<double>(steps) * dt;
    const TimeGrid local_times{dt, steps + 1};

    const DataNorms norms = data_norms(cur);
    rep.step_T.push_back(T_loc);
    rep.step_start.push_back(global_times.t(index));
    rep.step_u_norm.push_back(norms.u0);
    rep.step_wave_norm.push_back(norms.wave);

    LocalSolution sol;
    try {
      sol = m_field.data().empty() ? local_solve(cur, T_loc, local_cfg)
                                   : local_solve(cur, T_loc, local_cfg, slice_rows(m_field, index, local_times));
    } catch (const Error& e) {
      rep.failure = e.what();
      break;
    }
    dedupe_append(rep.summary.warnings, sol.report.warnings);
    rep.step_iterations.push_back(sol.report.iterations);
    rep.step_max_ratio.push_back(sol.report.max_ratio());
    rep.summary.residuals.insert(rep.summary.residuals.end(), sol.report.residuals.begin(),
                                 sol.report.residuals.end());
    rep.summary.ratios.insert(rep.summary.ratios.end(), sol.report.ratios.begin(), sol.report.ratios.end());
    rep.summary.iterations += sol.report.iterations;
    for (std::size_t m = 1; m < local_times.count; ++m) {
      rep.summary.times.push_back(global_times.t(index + m));
      rep.summary.mass.push_back(sol.report.mass[m]);
      rep.summary.wave_norm.push_back(sol.report.wave_norm[m]);
    }

    state = state_at(sol.traj, steps);
    const WaveFields w = state.wave();
    rep.even_part.push_back(even_part_max(real_part(w.n)));

    cur.u0 = restrict_to_halfline(state.u, cur.s0);
    cur.n0 = restrict_to_halfline(real_part(w.n), cur.s1);
    cur.n1 = restrict_to_halfline(real_part(w.nt), cur.s1 - 1.0);
    index += steps;
  }
  rep.completed = index == total_steps;
  rep.summary.converged = rep.completed;
  rep.summary.T = global_times.t(index);
  // Restart state: u zero-extended, wave pair odd-extended.
  out.final_state.u = extend(cur.u0, ExtensionPolicy::Zero);
  const PhiPair phi = make_phi(odd_extension(cur.n0), odd_extension(cur.n1));
  out.final_state.Np = phi.plus;
  out.final_state.Nm = phi.minus;
  return out;
}

ConservationReport conservation_check(const SpaceTimeField& u, const TimeSeries& g) {
  ConservationReport rep;
  const auto& grid = u.grid();
  const std::size_t z = grid.zero_index();
  CVec dmul(grid.size());
  for (std::size_t k = 0; k < dmul.size(); ++k) dmul[k] = I * grid.xi(k);
  std::vector<double> flux_rate(u.rows(), 0.0);
  for (std::size_t m = 0; m < u.rows(); ++m) {
    const Field f = u.snapshot(m);
    rep.mass.push_back(halfline_mass(f));
    const cplx gm = g.size() > 0 ? g.value_at(u.times().t(m)) : cplx{};
    if (gm != cplx{}) {
      const Field fx = apply_multiplier(f, dmul);
      flux_rate[m] = 2.0 * (std::conj(gm) * fx[z]).imag();
    }
  }
  const double m0 = rep.mass.empty() ? 0.0 : rep.mass.front();
  for (double m : rep.mass)
    if (m0 > 0.0) rep.max_relative_drift = std::max(rep.max_relative_drift, std::abs(m - m0) / m0);
  rep.flux.assign(u.rows(), 0.0);
  for (std::size_t m = 1; m < u.rows(); ++m)
    rep.flux[m] = rep.flux[m - 1] + 0.5 * u.times().dt * (flux_rate[m - 1] + flux_rate[m]);
  for (std::size_t m = 0; m < u.rows(); ++m)
    rep.balance_residual =
        std::max(rep.balance_residual, std::abs(rep.mass[m] * rep.mass[m] - m0 * m0 - rep.flux[m]));
  return rep;
}

TailFit fourier_tail_slope(const Field& f, double lambda_min, double lambda_max, std::size_t count) {
  if (!(lambda_min > 0.0) || !(lambda_max > lambda_min) || count < 2)
    fail(ErrorKind::Config, "tail fit needs 0 < lambda_min < lambda_max and at least two cutoffs");
  TailFit fit;
  const auto F = forward_dft(f);
  const double scale = 1.0 / (2.0 * f.grid.half_width());
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < count; ++i) {
    const double lam = lambda_min * std::pow(lambda_max / lambda_min, static_cast<double>(i) / (count - 1));
    double tail = 0.0;
    for (std::size_t k = 0; k < F.coeffs.size(); ++k)
      if (std::abs(f.grid.xi(k)) >= lam) tail += std::norm(F.coeffs[k]);
    tail = std::sqrt(scale * tail);
    fit.cutoffs.push_back(lam);
    fit.tails.push_back(tail);
    if (tail > 0.0) {
      lx.push_back(std::log(lam));
      ly.push_back(std::log(tail));
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
    fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  return fit;
}

SmoothingReport smoothing_diagnostic(const LocalSolution& sol, const LocalProblem& p, double a0, double a1,
                                     double lambda_min, double lambda_max_fraction) {
  SmoothingReport rep;
  const std::size_t last = sol.traj.u.rows() - 1;
  const auto& grid = sol.traj.u.grid();
  const double lambda_max = lambda_max_fraction * grid.max_frequency();

  const Field u_lin = sol.linear.u.snapshot(last);
  Field u_nl = sol.traj.u.snapshot(last);
  for (std::size_t j = 0; j < u_nl.size(); ++j) u_nl[j] -= u_lin[j];

  const KGSState s = state_at(sol.traj, last), l = state_at(sol.linear, last);
  const Field n_lin = real_part(l.wave().n);
  Field n_nl = real_part(s.wave().n);
  for (std::size_t j = 0; j < n_nl.size(); ++j) n_nl[j] -= n_lin[j];

  rep.u_linear = fourier_tail_slope(u_lin, lambda_min, lambda_max);
  rep.u_nonlinear = fourier_tail_slope(u_nl, lambda_min, lambda_max);
  rep.n_linear = fourier_tail_slope(n_lin, lambda_min, lambda_max);
  rep.n_nonlinear = fourier_tail_slope(n_nl, lambda_min, lambda_max);
  rep.u_gap = rep.u_linear.slope - rep.u_nonlinear.slope;
  rep.n_gap = rep.n_linear.slope - rep.n_nonlinear.slope;
  rep.u_nonlinear_norm = sobolev_norm(u_nl, p.s0 + a0);
  rep.n_nonlinear_norm = sobolev_norm(n_nl, p.s1 + a1);
  return rep;
}

ExtensionReport extension_independence_test(const LocalProblem& p, ExtensionPolicy a, ExtensionPolicy b, double T,
                                            const SolverConfig& cfg) {
  LocalProblem pa = p, pb = p;
  pa.wave_policy = a;
  pb.wave_policy = b;
  const LocalSolution sa = local_solve(pa, T, cfg);
  const LocalSolution sb = local_solve(pb, T, cfg);
  const SpaceTimeField na = sa.traj.n(), nb = sb.traj.n();

  ExtensionReport rep;
  rep.sup_u = halfline_sup_diff(sa.traj.u, sb.traj.u);
  rep.sup_n = halfline_sup_diff(na, nb);
  auto rel_l2 = [](const SpaceTimeField& x, const SpaceTimeField& y) {
    SpaceTimeField d = x;
    d -= y;
    const double ref = std::max(halfline_spacetime_l2(x), halfline_spacetime_l2(y));
    return ref > 0.0 ? halfline_spacetime_l2(d) / ref : 0.0;
  };
  rep.rel_l2_u = rel_l2(sa.traj.u, sb.traj.u);
  rep.rel_l2_n = rel_l2(na, nb);
  SpaceTimeField zero(na.grid(), na.times());
  const double ref_u = std::max(halfline_sup_diff(sa.traj.u, zero), 1e-300);
  const double ref_n = std::max(halfline_sup_diff(na, zero), 1e-300);
  const double rel_sup_u = rep.sup_u > 0.0 ? rep.sup_u / ref_u : 0.0;
  const double rel_sup_n = rep.sup_n > 0.0 ? rep.sup_n / ref_n : 0.0;
  rep.max_relative = std::max({rep.rel_l2_u, rep.rel_l2_n, rel_sup_u, rel_sup_n});
  return rep;
}

}  // namespace kgs
