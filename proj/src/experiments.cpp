#include "kgs/core/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "kgs/core/error.hpp"

namespace kgs {

namespace {

namespace fs = std::filesystem;

using Artifacts = std::map<std::string, std::string>;

double rel_l2(const SpaceTimeField& a, const SpaceTimeField& ref) {
  SpaceTimeField d = a;
  d -= ref;
  const double r = halfline_spacetime_l2(ref);
  return r > 0.0 ? halfline_spacetime_l2(d) / r : halfline_spacetime_l2(d);
}

std::vector<double> time_axis(const TimeGrid& times) {
  std::vector<double> t(times.count);
  for (std::size_t m = 0; m < times.count; ++m) t[m] = times.t(m);
  return t;
}

double sup_halfline(const Field& f) {
  double m = 0.0;
  for (std::size_t j = f.grid.zero_index(); j < f.size(); ++j) m = std::max(m, std::abs(f[j]));
  return m;
}

double median(std::vector<double> v) {
  if (v.empty()) return NAN;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

json solve_report_json(const SolveReport& r) {
  return json{{"T", r.T},
              {"iterations", r.iterations},
              {"converged", r.converged},
              {"residuals", r.residuals},
              {"ratios", r.ratios},
              {"max_ratio", r.max_ratio()}};
}

// Residual of a least-squares line through log W(t), relative to the range of log W.
struct GrowthFit {
  double slope = 0.0;
  double rms_residual = 0.0;
  double range = 0.0;
  double relative = 0.0;
};

GrowthFit growth_fit(const std::vector<double>& t, const std::vector<double>& w) {
  GrowthFit fit;
  std::vector<double> x, y;
  for (std::size_t i = 0; i < t.size() && i < w.size(); ++i)
    if (w[i] > 0.0) {
      x.push_back(t[i]);
      y.push_back(std::log(w[i]));
    }
  if (x.size() < 2) return fit;
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double icpt = (sy - fit.slope * sx) / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (icpt + fit.slope * x[i]);
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / n);
  const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  fit.range = *hi - *lo;
  fit.relative = fit.range > 0.0 ? fit.rms_residual / fit.range : 0.0;
  return fit;
}

// Advance per doubling cycle, T^{1/2} W / ||u0||^2, per restart.
double doubling_advance(const GlobalReport& r) {
  std::vector<double> v;
  for (std::size_t i = 0; i < r.step_T.size(); ++i)
    if (r.step_u_norm[i] > 0.0)
      v.push_back(std::sqrt(r.step_T[i]) * r.step_wave_norm[i] / (r.step_u_norm[i] * r.step_u_norm[i]));
  return median(v);
}

LocalProblem scaled_wave(LocalProblem p, double s) {
  for (auto& v : p.n0.samples) v *= s;
  for (auto& v : p.n1.samples) v *= s;
  for (auto& v : p.h.values) v *= s;
  return p;
}

double choose_T(const RunConfig& cfg) {
  if (cfg.T > 0.0) return cfg.T;
  return select_T(make_problem(cfg, 1.0), cfg.solver.c_T);
}

// ---- experiments -----------------------------------------------------------

void linear_kg_check(const RunConfig& cfg, Report& rep, Artifacts& out) {
  const SpatialGrid grid = cfg.grid();
  const TimeGrid times = TimeGrid::covering(cfg.T > 0.0 ? cfg.T : 1.0, cfg.dt);
  const TimeSeries h = make_series(cfg.h, times);
  const BoundaryField V = kg_boundary_V0(h, grid, times, cfg.solver.gamma.kernel, false);
  rep.warn_all(V.warnings);
  const HalfLineFunction zero(grid);
  const FDResult fd = fd_kg_ibvp(zero, zero, h, times, cfg.fd);

  const double scale = std::max(h.max_abs(), 1e-300);
  double trace = 0.0, t0 = 0.0;
  const CVec tr = V.value.trace();
  for (std::size_t m = 0; m < times.count; ++m) trace = std::max(trace, std::abs(tr[m] - h.values[m]));
  t0 = sup_halfline(V.value.snapshot(0));
  const double rel = rel_l2(V.value, fd.n);

  auto& mt = rep.metrics();
  mt["rel_err"] = rel;
  mt["trace_err"] = trace;
  mt["trace_rel"] = trace / scale;
  mt["t0_field"] = t0;
  mt["imag_residue"] = V.imag_residue;
  mt["fd_reflection"] = fd.reflection;
  mt["time_samples"] = times.count;
  rep.check("rel_err_vs_fd", rel, cfg.tol.rel_err);
  rep.check("trace_recovery", trace / scale, cfg.tol.trace_rel);
  rep.check("t0_field", t0, cfg.tol.t0_field);

  out["kg_field.csv"] = spacetime_csv(V.value, cfg.csv_stride);
  out["kg_fd.csv"] = spacetime_csv(fd.n, cfg.csv_stride);
  out["kg_trace.csv"] = series_csv(time_axis(times), tr);
}

void linear_schrodinger_check(const RunConfig& cfg, Report& rep, Artifacts& out) {
  const SpatialGrid grid = cfg.grid();
  const TimeGrid times = TimeGrid::covering(cfg.T > 0.0 ? cfg.T : 1.0, cfg.dt);
  const TimeSeries g = make_series(cfg.g, times);
  const BoundaryField W = schrodinger_boundary_W0(g, grid, times, cfg.solver.gamma.kernel);
  rep.warn_all(W.warnings);
  const HalfLineFunction zero(grid);
  const FDResult fd = fd_schrodinger_ibvp(zero, g, times, cfg.fd);

  const double scale = std::max(g.max_abs(), 1e-300);
  double trace = 0.0;
  const CVec tr = W.value.trace();
  for (std::size_t m = 0; m < times.count; ++m) trace = std::max(trace, std::abs(tr[m] - g.values[m]));
  const double t0 = sup_halfline(W.value.snapshot(0));
  const double rel = rel_l2(W.value, fd.u);

  auto& mt = rep.metrics();
  mt["rel_err"] = rel;
  mt["trace_err"] = trace;
  mt["trace_rel"] = trace / scale;
  mt["t0_field"] = t0;
  mt["fd_reflection"] = fd.reflection;
  mt["time_samples"] = times.count;
  rep.check("rel_err_vs_fd", rel, cfg.tol.rel_err);
  rep.check("trace_recovery", trace / scale, cfg.tol.trace_rel);

  out["schrodinger_field.csv"] = spacetime_csv(W.value, cfg.csv_stride);
  out["schrodinger_fd.csv"] = spacetime_csv(fd.u, cfg.csv_stride);
  out["schrodinger_trace.csv"] = series_csv(time_axis(times), tr);
}

// Seeded smooth data with every data norm at most 1.
LocalProblem random_problem(const RunConfig& cfg, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  RunConfig c = cfg;
  c.u0 = FunctionSpec{};
  c.u0.type = "gaussian";
  c.u0.center = 3.0 + 5.0 * U(rng);
  c.u0.width = 1.0 + U(rng);
  c.u0.k = 4.0 * U(rng) - 2.0;
  c.n0 = FunctionSpec{};
  c.n0.type = "dgaussian";
  c.n0.width = 1.0 + 2.0 * U(rng);
  c.n1 = FunctionSpec{};
  c.n1.type = "bump";
  c.n1.center = 2.0 + 4.0 * U(rng);
  c.n1.width = 1.0 + U(rng);
  c.g = FunctionSpec{};
  c.g.type = "power_exp";
  c.g.power = 2.0;
  c.h = c.g;
  c.h.width = 0.5 + U(rng);

  LocalProblem p = make_problem(c, 1.0);
  auto normalize_halfline = [&](HalfLineFunction& f, double target, double s) {
    const double n = halfline_norm(f, s, ExtensionPolicy::Odd);
    if (n > 0.0)
      for (auto& v : f.samples) v *= target / n;
  };
  auto normalize_series = [&](TimeSeries& g, double target, double s) {
    const double n = time_sobolev_norm(g, s);
    if (n > 0.0)
      for (auto& v : g.values) v *= target / n;
  };
  const double u_norm = halfline_l2(p.u0);
  for (auto& v : p.u0.samples) v *= (0.2 + 0.8 * U(rng)) / u_norm;
  // Wave norm n0 + n1 + h split into three parts of at most 1/3.
  normalize_halfline(p.n0, (0.3 * U(rng)) + 0.03, cfg.s1);
  normalize_halfline(p.n1, (0.3 * U(rng)) + 0.03, cfg.s1 - 1.0);
  normalize_series(p.h, 0.3 * U(rng), cfg.s1);
  normalize_series(p.g, 0.3 * U(rng), cfg.s0);
  return p;
}

LocalProblem resample_boundary(const LocalProblem& p, const TimeGrid& times) {
  LocalProblem q = p;
  q.g = TimeSeries(0.0, times.dt, CVec(times.count));
  q.h = TimeSeries(0.0, times.dt, CVec(times.count));
  for (std::size_t m = 0; m < times.count; ++m) {
    q.g.values[m] = p.g.value_at(times.t(m));
    q.h.values[m] = p.h.value_at(times.t(m));
  }
  return q;
}

void local_solve_experiment(const RunConfig& cfg, Report& rep, Artifacts& out) {
  const double T = choose_T(cfg);
  const LocalProblem p = make_problem(cfg, T);
  const LocalSolution sol = local_solve(p, T, cfg.solver);
  rep.warn_all(sol.report.warnings);
  const auto& sr = sol.report;
  auto& mt = rep.metrics();
  mt["T"] = sr.T;
  mt["solve"] = solve_report_json(sr);
  const DataNorms dn = data_norms(p);
  mt["data_norms"] = json{{"u0", dn.u0}, {"wave", dn.wave}};
  rep.check_flag("converged", sr.converged);
  rep.check("max_residual_ratio", sr.max_ratio(), cfg.tol.residual_ratio);
  rep.check("iterations", static_cast<double>(sr.iterations), static_cast<double>(cfg.tol.max_iterations));

  const SpaceTimeField n = sol.traj.n();
  if (cfg.oracle) {
    const TimeGrid times = sol.traj.u.times();
    const FDResult fd = fd_kgs_coupled(p.u0, p.n0, p.n1, p.g, p.h, times, cfg.fd);
    const double ru = rel_l2(sol.traj.u, fd.u), rn = rel_l2(n, fd.n);
    mt["oracle"] = json{{"rel_err_u", ru}, {"rel_err_n", rn}, {"fd_reflection", fd.reflection}};
    rep.check("oracle_rel_err_u", ru, cfg.tol.oracle_rel);
    rep.check("oracle_rel_err_n", rn, cfg.tol.oracle_rel);
  }

  if (cfg.suite_count > 0) {
    std::mt19937_64 rng(cfg.seed);
    json suite = json::array();
    double worst_ratio = 0.0;
    std::size_t worst_iter = 0;
    bool all_converged = true;
    for (std::size_t i = 0; i < cfg.suite_count; ++i) {
      const LocalProblem q0 = random_problem(cfg, rng);
      const DataNorms qn = data_norms(q0);
      const double Tq = select_T(q0, cfg.solver.c_T);
      const LocalProblem q = resample_boundary(q0, TimeGrid::covering(Tq, cfg.dt));
      json entry{{"u0_norm", qn.u0}, {"wave_norm", qn.wave}, {"T", Tq}};
      try {
        const LocalSolution s = local_solve(q, Tq, cfg.solver);
        entry["iterations"] = s.report.iterations;
        entry["max_ratio"] = s.report.max_ratio();
        entry["residuals"] = s.report.residuals;
        entry["converged"] = s.report.converged;
        worst_ratio = std::max(worst_ratio, s.report.max_ratio());
        worst_iter = std::max(worst_iter, s.report.iterations);
        all_converged = all_converged && s.report.converged;
      } catch (const Error& e) {
        entry["converged"] = false;
        entry["error"] = e.what();
        all_converged = false;
      }
      suite.push_back(entry);
    }
    mt["suite"] = suite;
    rep.check_flag("suite_converged", all_converged);
    rep.check("suite_max_residual_ratio", worst_ratio, cfg.tol.residual_ratio);
    rep.check("suite_max_iterations", static_cast<double>(worst_iter), static_cast<double>(cfg.tol.max_iterations));
  }

  out["u.csv"] = spacetime_csv(sol.traj.u, cfg.csv_stride);
  out["n.csv"] = spacetime_csv(n, cfg.csv_stride);
  out["monitors.csv"] = columns_csv({"t", "mass", "wave_norm"}, {sr.times, sr.mass, sr.wave_norm});
}

void global_solve_experiment(const RunConfig& cfg, Report& rep, Artifacts& out) {
  const LocalProblem p = make_problem(cfg, cfg.T_final);
  const GlobalSolution sol = global_solve(p, cfg.T_final, cfg.solver, cfg.T);
  const GlobalReport& gr = sol.report;
  rep.warn_all(gr.summary.warnings);
  auto& mt = rep.metrics();

  const auto& mass = gr.summary.mass;
  double drift = 0.0;
  for (double m : mass)
    if (mass.front() > 0.0) drift = std::max(drift, std::abs(m - mass.front()) / mass.front());
  const double even = gr.even_part.empty() ? 0.0 : *std::max_element(gr.even_part.begin(), gr.even_part.end());
  const std::size_t restarts = gr.step_T.empty() ? 0 : gr.step_T.size() - 1;

  // Free flow of the odd-extended wave data.
  const Field n0e = odd_extension(p.n0), n1e = odd_extension(p.n1);
  double even_free = 0.0;
  for (int i = 1; i <= 8; ++i) {
    const WaveFields w = kg_flow(n0e, n1e, cfg.T_final * i / 8.0);
    even_free = std::max({even_free, even_part_max(w.n), even_part_max(w.nt)});
  }

  mt["completed"] = gr.completed;
  mt["restarts"] = restarts;
  mt["mass_drift"] = drift;
  mt["even_part_restart"] = even;
  mt["even_part_free"] = even_free;
  mt["steps"] = json{{"start", gr.step_start},
                     {"T", gr.step_T},
                     {"u_norm", gr.step_u_norm},
                     {"wave_norm", gr.step_wave_norm},
                     {"iterations", gr.step_iterations},
                     {"max_ratio", gr.step_max_ratio},
                     {"even_part", gr.even_part}};
  if (!gr.completed) rep.fail_with("global_completion", gr.failure);
  rep.check("mass_drift", drift, cfg.tol.mass_drift);
  rep.check("even_part_restart", even, cfg.tol.even_restart);
  rep.check("even_part_free_flow", even_free, cfg.tol.even_free);

  const GrowthFit fit = growth_fit(gr.summary.times, gr.summary.wave_norm);
  mt["growth"] = json{{"slope", fit.slope},
                      {"rms_residual", fit.rms_residual},
                      {"range", fit.range},
                      {"relative_residual", fit.relative},
                      {"doubling_advance", doubling_advance(gr)}};
  rep.check("growth_fit_residual", fit.relative, cfg.tol.growth_fit);

  if (cfg.dt_halving) {
    SolverConfig half = cfg.solver;
    half.dt = 0.5 * cfg.dt;
    const GlobalSolution fine = global_solve(p, cfg.T_final, half, cfg.T);
    double drift_half = 0.0;
    const auto& mh = fine.report.summary.mass;
    for (double m : mh)
      if (mh.front() > 0.0) drift_half = std::max(drift_half, std::abs(m - mh.front()) / mh.front());
    const double reduction = drift_half > 0.0 ? drift / drift_half : INFINITY;
    mt["dt_halving"] = json{{"mass_drift_half", drift_half}, {"reduction", std::isfinite(reduction) ? json(reduction) : json(nullptr)}};
    if (!fine.report.completed) rep.fail_with("global_completion_half_dt", fine.report.failure);
    rep.check("drift_reduction_on_halving", reduction, cfg.tol.drift_reduction, true);
  }

  if (!cfg.growth_scales.empty()) {
    json runs = json::array();
    std::vector<double> advances;
    for (double s : cfg.growth_scales) {
      const GlobalSolution run = global_solve(scaled_wave(p, s), cfg.T_final, cfg.solver, cfg.T);
      const GrowthFit f = growth_fit(run.report.summary.times, run.report.summary.wave_norm);
      const double adv = doubling_advance(run.report);
      advances.push_back(adv);
      runs.push_back(json{{"scale", s},
                          {"completed", run.report.completed},
                          {"restarts", run.report.step_T.size() ? run.report.step_T.size() - 1 : 0},
                          {"doubling_advance", adv},
                          {"growth_slope", f.slope},
                          {"relative_residual", f.relative}});
      if (!run.report.completed) rep.fail_with("global_completion_scaled", run.report.failure);
      rep.check("growth_fit_residual_scale_" + std::to_string(static_cast<int>(std::lround(s))), f.relative,
                cfg.tol.growth_fit);
    }
    mt["growth_scales"] = runs;
    const auto [lo, hi] = std::minmax_element(advances.begin(), advances.end());
    const double spread = *lo > 0.0 ? *hi / *lo : INFINITY;
    rep.check("doubling_advance_spread", spread, cfg.tol.growth_factor);
  }

  out["monitors.csv"] =
      columns_csv({"t", "mass", "wave_norm"}, {gr.summary.times, gr.summary.mass, gr.summary.wave_norm});
  out["final_u.csv"] = snapshot_csv(sol.final_state.u);
  out["final_n.csv"] = snapshot_csv(sol.final_state.wave().n);
}

void estimates_lab(const RunConfig& cfg, Report& rep, Artifacts& out) {
  const EnsembleReport er = ensemble_estimate_suite(cfg.ensemble);
  rep.warn_all(er.warnings);
  json est = json::object();
  std::vector<std::string> header{"N"};
  std::vector<std::vector<double>> cols(1);
  for (std::size_t n : cfg.ensemble.grid_sizes) cols[0].push_back(static_cast<double>(n));
  for (const auto& e : er.estimates) {
    est[e.name] = json{{"N", e.grid_sizes},
                       {"max", e.max_ratio},
                       {"median", e.median_ratio},
                       {"slope", e.slope},
                       {"undefined_seen", e.undefined_seen}};
    rep.check("slope_" + e.name, e.slope, cfg.tol.slope);
    rep.check_flag("defined_" + e.name, !e.undefined_seen);
    header.push_back(e.name);
    cols.push_back(e.max_ratio);
  }
  auto& mt = rep.metrics();
  mt["estimates"] = est;
  mt["seed"] = cfg.ensemble.seed;
  mt["count"] = cfg.ensemble.count;
  mt["params"] = json{{"s0", cfg.ensemble.s0}, {"s1", cfg.ensemble.s1}, {"b", cfg.ensemble.b},
                      {"a", cfg.ensemble.a}, {"T", cfg.ensemble.T}};
  rep.check_flag("refinement_stable", er.refinement_stable);
  out["max_ratios.csv"] = columns_csv(header, cols);
}

void uniqueness_check(const RunConfig& cfg, Report& rep, Artifacts&) {
  const double T = choose_T(cfg);
  const LocalProblem p = make_problem(cfg, T);
  const ExtensionReport er = extension_independence_test(p, ExtensionPolicy::Odd, ExtensionPolicy::Zero, T, cfg.solver);
  auto& mt = rep.metrics();
  mt["T"] = T;
  mt["sup_u"] = er.sup_u;
  mt["sup_n"] = er.sup_n;
  mt["rel_l2_u"] = er.rel_l2_u;
  mt["rel_l2_n"] = er.rel_l2_n;
  mt["max_relative"] = er.max_relative;
  // Size of the discarded negative-axis data, to show the twins really differ there.
  const Field odd = odd_extension(p.n0), zero = zero_extension(p.n0);
  double diff = 0.0;
  for (std::size_t j = 0; j < odd.size(); ++j) diff = std::max(diff, std::abs(odd[j] - zero[j]));
  mt["extension_difference"] = diff;
  rep.check("extension_independence", er.max_relative, cfg.tol.extension_rel);
}

void smoothing_check(const RunConfig& cfg, Report& rep, Artifacts& out) {
  const double T = choose_T(cfg);
  const LocalProblem p = make_problem(cfg, T);
  const LocalSolution sol = local_solve(p, T, cfg.solver);
  rep.warn_all(sol.report.warnings);
  const SmoothingReport sr =
      smoothing_diagnostic(sol, p, cfg.a0, cfg.a1, cfg.smoothing_lambda_min, cfg.smoothing_lambda_max_fraction);
  auto fit_json = [](const TailFit& f) {
    return json{{"slope", f.slope}, {"cutoffs", f.cutoffs}, {"tails", f.tails}};
  };
  auto& mt = rep.metrics();
  mt["T"] = sol.report.T;
  mt["solve"] = solve_report_json(sol.report);
  mt["u_linear"] = fit_json(sr.u_linear);
  mt["u_nonlinear"] = fit_json(sr.u_nonlinear);
  mt["n_linear"] = fit_json(sr.n_linear);
  mt["n_nonlinear"] = fit_json(sr.n_nonlinear);
  mt["u_gap"] = sr.u_gap;
  mt["n_gap"] = sr.n_gap;
  mt["u_nonlinear_norm"] = sr.u_nonlinear_norm;
  mt["n_nonlinear_norm"] = sr.n_nonlinear_norm;
  rep.check_flag("converged", sol.report.converged);
  rep.check("u_tail_slope_gap", sr.u_gap, cfg.a0 - cfg.tol.smoothing_margin, true);
  out["tails.csv"] = columns_csv({"lambda", "u_linear", "u_nonlinear"},
                                 {sr.u_linear.cutoffs, sr.u_linear.tails, sr.u_nonlinear.tails});
}

std::vector<fs::path> find_reports(const RunConfig& cfg) {
  std::vector<fs::path> paths;
  if (!cfg.report_inputs.empty()) {
    for (const auto& p : cfg.report_inputs) paths.emplace_back(p);
    return paths;
  }
  std::error_code ec;
  if (!fs::is_directory(cfg.out_dir, ec)) return paths;
  for (auto it = fs::recursive_directory_iterator(cfg.out_dir, ec); it != fs::recursive_directory_iterator();
       it.increment(ec)) {
    if (ec) break;
    if (it->is_regular_file() && it->path().filename() == "report.json") paths.push_back(it->path());
  }
  std::sort(paths.begin(), paths.end());
  return paths;
}

void report_experiment(const RunConfig& cfg, Report& rep, Artifacts& out) {
  std::vector<json> reports;
  json inputs = json::array();
  for (const auto& path : find_reports(cfg)) {
    std::ifstream in(path);
    json r;
    try {
      r = json::parse(in);
    } catch (const json::exception& e) {
      rep.fail_with("readable_inputs", "cannot parse '" + path.generic_string() + "'");
      continue;
    }
    if (!r.is_object() || r.value("experiment", "") == "report") continue;
    inputs.push_back(json{{"path", path.generic_string()},
                          {"experiment", r.value("experiment", "")},
                          {"pass", r.value("pass", false)}});
    reports.push_back(std::move(r));
  }
  rep.metrics()["inputs"] = inputs;
  if (reports.empty()) rep.fail_with("inputs_present", "no report.json files found");
  for (const auto& r : reports)
    rep.check_flag("input_" + r.value("experiment", std::string("unknown")), r.value("pass", false));
  out["summary.txt"] = summarize_reports(reports);
}

}  // namespace

LocalProblem make_problem(const RunConfig& cfg, double T) {
  const SpatialGrid grid = cfg.grid();
  const TimeGrid times = TimeGrid::covering(T, cfg.dt);
  LocalProblem p;
  p.u0 = make_halfline(cfg.u0, grid, cfg.s0);
  p.n0 = make_halfline(cfg.n0, grid, cfg.s1);
  p.n1 = make_halfline(cfg.n1, grid, cfg.s1 - 1.0);
  p.g = make_series(cfg.g, times);
  p.h = make_series(cfg.h, times);
  p.s0 = cfg.s0;
  p.s1 = cfg.s1;
  p.u_policy = cfg.u_policy;
  p.wave_policy = cfg.wave_policy;
  // Wave data is real.
  for (auto* f : {&p.n0, &p.n1})
    for (auto& v : f->samples) v = v.real();
  for (auto& v : p.h.values) v = v.real();
  return p;
}

std::string summarize_reports(const std::vector<json>& reports) {
  std::ostringstream os;
  std::size_t passed = 0;
  for (const auto& r : reports) {
    const bool ok = r.value("pass", false);
    passed += ok;
    os << (ok ? "PASS " : "FAIL ") << r.value("experiment", std::string("unknown")) << '\n';
    if (r.contains("checks"))
      for (const auto& c : r["checks"]) {
        os << "  " << (c.value("pass", false) ? "ok   " : "FAIL ") << c.value("name", std::string());
        if (c.contains("value") && c["value"].is_number()) {
          char buf[96];
          std::snprintf(buf, sizeof buf, " = %.4g %s %.4g", c["value"].get<double>(),
                        c.value("relation", std::string("<=")).c_str(), c["threshold"].get<double>());
          os << buf;
        }
        os << '\n';
      }
    if (r.contains("failure")) os << "  failure: " << r["failure"].value("message", std::string()) << '\n';
    if (r.contains("warnings"))
      for (const auto& w : r["warnings"]) os << "  warning: " << w.get<std::string>() << '\n';
  }
  os << passed << "/" << reports.size() << " reports passed\n";
  return os.str();
}

ExperimentOutput run_experiment(const RunConfig& cfg) {
  Report rep(cfg.experiment, cfg.resolved);
  Artifacts artifacts;
  try {
    if (cfg.experiment == "linear-kg-check")
      linear_kg_check(cfg, rep, artifacts);
    else if (cfg.experiment == "linear-schrodinger-check")
      linear_schrodinger_check(cfg, rep, artifacts);
    else if (cfg.experiment == "local-solve")
      local_solve_experiment(cfg, rep, artifacts);
    else if (cfg.experiment == "global-solve")
      global_solve_experiment(cfg, rep, artifacts);
    else if (cfg.experiment == "estimates-lab")
      estimates_lab(cfg, rep, artifacts);
    else if (cfg.experiment == "uniqueness-check")
      uniqueness_check(cfg, rep, artifacts);
    else if (cfg.experiment == "smoothing-check")
      smoothing_check(cfg, rep, artifacts);
    else if (cfg.experiment == "report")
      report_experiment(cfg, rep, artifacts);
    else
      fail(ErrorKind::Config, "unknown experiment '" + cfg.experiment + "'");
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Config) throw;
    const char* kind = e.kind() == ErrorKind::Convergence ? "convergence"
                       : e.kind() == ErrorKind::Numeric   ? "numeric"
                       : e.kind() == ErrorKind::Io        ? "io"
                                                          : "validation";
    rep.fail_with(kind, e.what());
  }

  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) fail(ErrorKind::Io, "cannot create '" + cfg.out_dir + "': " + ec.message());
  ExperimentOutput result;
  for (const auto& [name, content] : artifacts) {
    write_atomic((fs::path(cfg.out_dir) / name).string(), content);
    result.artifacts.push_back(name);
  }
  write_atomic((fs::path(cfg.out_dir) / "report.json").string(), rep.dump());
  result.artifacts.push_back("report.json");
  result.report = rep.root();
  result.passed = rep.passed();
  const auto digest = artifacts.find("summary.txt");
  result.summary = digest != artifacts.end() ? digest->second : summarize_reports({rep.root()});
  return result;
}

}  // namespace kgs
