#include "kgs/core/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "kgs/core/cutoffs.hpp"
#include "kgs/core/error.hpp"

namespace kgs {

namespace {

const cplx I{0.0, 1.0};

const std::set<std::string> kSpecTypes{"zero", "gaussian", "dgaussian", "bump", "power_exp", "rough", "csv"};

json spec_json(const FunctionSpec& s) {
  return json{{"type", s.type}, {"amp", s.amp},     {"center", s.center}, {"width", s.width},
              {"k", s.k},       {"power", s.power}, {"decay", s.decay},   {"lo", s.lo},
              {"hi", s.hi},     {"seed", s.seed},   {"path", s.path}};
}

FunctionSpec spec_of(std::string type, double amp, double center, double width) {
  FunctionSpec s;
  s.type = std::move(type);
  s.amp = amp;
  s.center = center;
  s.width = width;
  return s;
}

json common_defaults() {
  const BoundaryKernelConfig k;
  const FDConfig fd;
  const EnsembleParams e;
  const Tolerances t;
  const FunctionSpec zero;
  return json{
      {"seed", 20240611},
      {"grid", {{"L", 20.0}, {"N", 512}}},
      {"time", {{"T", 0.0}, {"T_final", 1.0}, {"dt", 1e-3}}},
      {"data",
       {{"u0", spec_json(zero)}, {"n0", spec_json(zero)}, {"n1", spec_json(zero)}, {"g", spec_json(zero)},
        {"h", spec_json(zero)}}},
      {"regularity", {{"s0", 0.0}, {"s1", 0.0}, {"a0", 0.4}, {"a1", 0.4}, {"b", 0.4}}},
      {"extension", {{"u", "zero"}, {"wave", "odd"}}},
      {"solver",
       {{"c_T", 0.1}, {"tol_fp", 1e-10}, {"max_iter", 30}, {"kappa", 1.0}, {"odd_forcing", false}}},
      {"kernel",
       {{"panel_order", k.panel_order},
        {"n_A", k.n_A},
        {"n_B", k.n_B},
        {"xi_max_factor", k.xi_max_factor},
        {"beta_max_factor", k.beta_max_factor},
        {"panel_phase", k.panel_phase},
        {"dyadic_levels", k.dyadic_levels},
        {"taper_length", k.taper_length},
        {"tail_correction", k.tail_correction}}},
      {"fd", {{"refine_x", fd.refine_x}, {"refine_t", fd.refine_t}, {"reflection_band", fd.reflection_band}}},
      {"ensemble",
       {{"count", e.count},
        {"grid_sizes", e.grid_sizes},
        {"half_width", e.half_width},
        {"band", e.band},
        {"decay", e.decay},
        {"time_half_window", e.time_half_window},
        {"time_samples", e.time_samples},
        {"a", e.a},
        {"T", e.T}}},
      {"tolerances",
       {{"rel_err", t.rel_err},
        {"trace_rel", t.trace_rel},
        {"t0_field", t.t0_field},
        {"mass_drift", t.mass_drift},
        {"drift_reduction", t.drift_reduction},
        {"even_free", t.even_free},
        {"even_restart", t.even_restart},
        {"residual_ratio", t.residual_ratio},
        {"max_iterations", t.max_iterations},
        {"oracle_rel", t.oracle_rel},
        {"extension_rel", t.extension_rel},
        {"smoothing_margin", t.smoothing_margin},
        {"growth_fit", t.growth_fit},
        {"growth_factor", t.growth_factor},
        {"slope", t.slope}}},
      {"options",
       {{"dt_halving", false},
        {"growth_scales", json::array()},
        {"suite_count", 0},
        {"oracle", true},
        {"lambda_min", 2.0},
        {"lambda_max_fraction", 0.5},
        {"report_inputs", json::array()}}},
      {"output", {{"dir", "out"}, {"csv_stride", 8}}},
  };
}

// Keys whose value may be any array.
bool free_array(const std::string& key) {
  return key == "grid_sizes" || key == "growth_scales" || key == "report_inputs";
}

void check_keys(const json& user, const json& defaults, const std::string& where) {
  if (!user.is_object()) fail(ErrorKind::Config, "'" + where + "' must be an object");
  for (auto it = user.begin(); it != user.end(); ++it) {
    const std::string path = where.empty() ? it.key() : where + "." + it.key();
    if (!defaults.contains(it.key())) fail(ErrorKind::Config, "unknown key '" + path + "'");
    const json& d = defaults.at(it.key());
    if (d.is_object()) {
      check_keys(it.value(), d, path);
    } else if (d.is_array()) {
      if (!it.value().is_array() || !free_array(it.key()))
        fail(ErrorKind::Config, "'" + path + "' must be an array");
    } else if (d.is_boolean() != it.value().is_boolean() || d.is_string() != it.value().is_string() ||
               d.is_number() != it.value().is_number()) {
      fail(ErrorKind::Config, "'" + path + "' has the wrong type");
    }
  }
}

template <class T>
T get(const json& j, const char* section, const char* key) {
  try {
    return j.at(section).at(key).get<T>();
  } catch (const json::exception&) {
    fail(ErrorKind::Config, std::string("bad value for '") + section + "." + key + "'");
  }
}

FunctionSpec parse_spec(const json& j, const std::string& name) {
  FunctionSpec s;
  try {
    s.type = j.at("type").get<std::string>();
    s.amp = j.at("amp").get<double>();
    s.center = j.at("center").get<double>();
    s.width = j.at("width").get<double>();
    s.k = j.at("k").get<double>();
    s.power = j.at("power").get<double>();
    s.decay = j.at("decay").get<double>();
    s.lo = j.at("lo").get<double>();
    s.hi = j.at("hi").get<double>();
    s.seed = j.at("seed").get<std::uint64_t>();
    s.path = j.at("path").get<std::string>();
  } catch (const json::exception&) {
    fail(ErrorKind::Config, "bad data spec 'data." + name + "'");
  }
  if (!kSpecTypes.count(s.type)) fail(ErrorKind::Config, "data." + name + ": unknown type '" + s.type + "'");
  if (!std::isfinite(s.amp) || !(s.width > 0.0))
    fail(ErrorKind::Config, "data." + name + ": amp must be finite and width positive");
  if (s.type == "power_exp" && s.power < 0.0) fail(ErrorKind::Config, "data." + name + ": power must be >= 0");
  if (s.type == "rough" && !(s.hi > s.lo && s.lo >= 0.0))
    fail(ErrorKind::Config, "data." + name + ": rough window needs 0 <= lo < hi");
  if (s.type == "csv" && !std::filesystem::is_regular_file(s.path))
    fail(ErrorKind::Config, "data." + name + ": cannot read '" + s.path + "'");
  return s;
}

double window(double x, double lo, double hi) {
  const double ramp = std::min(1.0, 0.25 * (hi - lo));
  return smooth_step((x - lo) / ramp) * smooth_step((hi - x) / ramp);
}

cplx shape(const FunctionSpec& s, double y) {
  const double r = (y - s.center) / s.width;
  if (s.type == "gaussian") return s.amp * std::exp(-r * r) * std::exp(I * s.k * y);
  if (s.type == "dgaussian") return s.amp * r * std::exp(-r * r);
  if (s.type == "bump") {
    if (std::abs(r) >= 1.0) return 0.0;
    return s.amp * std::exp(1.0 - 1.0 / (1.0 - r * r)) * std::exp(I * s.k * y);
  }
  if (s.type == "power_exp") {
    if (y < 0.0) return 0.0;
    return s.amp * std::pow(y, s.power) * std::exp(-y / s.width);
  }
  return 0.0;
}

Field rough_field(const FunctionSpec& s, const SpatialGrid& grid) {
  std::mt19937_64 rng(s.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  SpectralField F(grid);
  // Coefficients drawn in signed-mode order so the series does not depend on FFT layout.
  const long half = static_cast<long>(grid.size() / 2);
  for (long m = -half; m < half; ++m) {
    const std::size_t k = m >= 0 ? static_cast<std::size_t>(m) : static_cast<std::size_t>(m + 2 * half);
    const double xi = grid.xi(k);
    F.coeffs[k] = std::pow(japanese(xi), -s.decay) * cplx(normal(rng), normal(rng)) * (2.0 * grid.half_width());
  }
  Field f = inverse_dft(F);
  for (std::size_t j = 0; j < f.size(); ++j) f[j] *= window(grid.x(j), s.lo, s.hi);
  const double norm = l2_norm(f);
  if (norm > 0.0)
    for (auto& v : f.values) v *= s.amp / norm;
  return f;
}

}  // namespace

HalfLineFunction make_halfline(const FunctionSpec& spec, const SpatialGrid& grid, double s) {
  if (spec.type == "csv") {
    HalfLineFunction f = load_halfline_csv(spec.path, grid, s);
    for (auto& v : f.samples) v *= spec.amp;
    return f;
  }
  if (spec.type == "rough") return restrict_to_halfline(rough_field(spec, grid), s);
  if (spec.type == "zero") return HalfLineFunction(grid, s);
  return sample_halfline(grid, s, [&](double x) { return shape(spec, x); });
}

TimeSeries make_series(const FunctionSpec& spec, const TimeGrid& times) {
  if (spec.type == "csv") {
    TimeSeries g = load_series_csv(spec.path);
    TimeSeries out(0.0, times.dt, CVec(times.count));
    for (std::size_t m = 0; m < times.count; ++m) out.values[m] = spec.amp * g.value_at(times.t(m));
    return out;
  }
  if (spec.type == "rough") fail(ErrorKind::Config, "rough presets are spatial only");
  return sample_series(times.dt, times.count, [&](double t) { return shape(spec, t); });
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"linear-kg-check", "linear-schrodinger-check", "local-solve",
                                              "global-solve",    "estimates-lab",            "uniqueness-check",
                                              "smoothing-check", "report"};
  return names;
}

json default_config(const std::string& experiment) {
  json d = common_defaults();
  auto set_spec = [&](const char* name, const FunctionSpec& s) { d["data"][name] = spec_json(s); };
  if (experiment == "linear-kg-check") {
    d["time"]["T"] = 1.0;
    FunctionSpec h = spec_of("power_exp", 1.0, 0.0, 1.0);
    h.power = 2.0;
    set_spec("h", h);
  } else if (experiment == "linear-schrodinger-check") {
    d["time"]["T"] = 1.0;
    FunctionSpec g = spec_of("power_exp", 1.0, 0.0, 1.0);
    g.power = 1.0;
    set_spec("g", g);
  } else if (experiment == "local-solve") {
    d["grid"]["N"] = 256;
    FunctionSpec u0 = spec_of("gaussian", 0.5, 5.0, 1.5);
    u0.k = 1.0;
    set_spec("u0", u0);
    set_spec("n0", spec_of("dgaussian", 0.3, 0.0, 2.0));
    FunctionSpec g = spec_of("power_exp", 0.2, 0.0, 1.0), h = g;
    g.power = h.power = 2.0;
    set_spec("g", g);
    set_spec("h", h);
  } else if (experiment == "global-solve") {
    d["grid"]["N"] = 256;
    FunctionSpec u0 = spec_of("gaussian", 0.5, 5.0, 1.5);
    u0.k = 1.0;
    set_spec("u0", u0);
    set_spec("n0", spec_of("bump", 0.5, 4.0, 2.0));
  } else if (experiment == "uniqueness-check") {
    d["grid"]["N"] = 256;
    d["time"]["T"] = 1.0;
    set_spec("u0", spec_of("gaussian", 0.3, 3.0, 1.0));
    set_spec("n0", spec_of("bump", 0.5, 3.0, 2.0));
  } else if (experiment == "smoothing-check") {
    d["time"]["T"] = 0.5;
    d["regularity"]["s0"] = 0.25;
    FunctionSpec u0 = spec_of("rough", 0.5, 0.0, 1.0);
    u0.decay = 0.8;
    u0.lo = 2.0;
    u0.hi = 12.0;
    set_spec("u0", u0);
    set_spec("n0", spec_of("dgaussian", 0.3, 0.0, 2.0));
  } else if (experiment == "estimates-lab" || experiment == "report") {
  } else {
    fail(ErrorKind::Config, "unknown experiment '" + experiment + "'");
  }
  return d;
}

RunConfig resolve_config(const std::string& experiment, const json& user) {
  json merged = default_config(experiment);
  if (!user.is_null()) {
    check_keys(user, merged, "");
    json patch = user;
    // Data specs are replaced as a whole, then completed with spec defaults.
    if (patch.contains("data")) {
      for (auto it = patch["data"].begin(); it != patch["data"].end(); ++it) {
        json full = spec_json(FunctionSpec{});
        full.merge_patch(it.value());
        merged["data"][it.key()] = full;
      }
      patch.erase("data");
    }
    merged.merge_patch(patch);
  }

  RunConfig c;
  c.experiment = experiment;
  c.resolved = merged;
  c.resolved["experiment"] = experiment;
  try {
    c.seed = merged.at("seed").get<std::uint64_t>();
  } catch (const json::exception&) {
    fail(ErrorKind::Config, "seed must be a non-negative integer");
  }
  c.L = get<double>(merged, "grid", "L");
  c.N = get<std::size_t>(merged, "grid", "N");
  c.T = get<double>(merged, "time", "T");
  c.T_final = get<double>(merged, "time", "T_final");
  c.dt = get<double>(merged, "time", "dt");
  if (!(c.L > 0.0)) fail(ErrorKind::Config, "grid.L must be positive");
  if (c.N < 16 || c.N % 2) fail(ErrorKind::Config, "grid.N must be even and at least 16");
  if (!(c.dt > 0.0)) fail(ErrorKind::Config, "time.dt must be positive");
  if (!(c.T >= 0.0 && c.T <= 1.0)) fail(ErrorKind::Config, "time.T must lie in [0, 1] (0 selects it)");
  if (c.T > 0.0 && c.T < 2.0 * c.dt) fail(ErrorKind::Config, "time.T must cover at least two steps");
  if (!(c.T_final > 0.0)) fail(ErrorKind::Config, "time.T_final must be positive");

  const json& data = merged.at("data");
  c.u0 = parse_spec(data.at("u0"), "u0");
  c.n0 = parse_spec(data.at("n0"), "n0");
  c.n1 = parse_spec(data.at("n1"), "n1");
  c.g = parse_spec(data.at("g"), "g");
  c.h = parse_spec(data.at("h"), "h");
  if (c.g.type == "rough" || c.h.type == "rough") fail(ErrorKind::Config, "boundary data cannot be rough presets");

  c.s0 = get<double>(merged, "regularity", "s0");
  c.s1 = get<double>(merged, "regularity", "s1");
  c.a0 = get<double>(merged, "regularity", "a0");
  c.a1 = get<double>(merged, "regularity", "a1");
  c.b = get<double>(merged, "regularity", "b");
  c.u_policy = parse_extension_policy(get<std::string>(merged, "extension", "u"));
  c.wave_policy = parse_extension_policy(get<std::string>(merged, "extension", "wave"));

  c.solver.dt = c.dt;
  c.solver.c_T = get<double>(merged, "solver", "c_T");
  c.solver.tol_fp = get<double>(merged, "solver", "tol_fp");
  c.solver.max_iter = get<std::size_t>(merged, "solver", "max_iter");
  c.solver.gamma.kappa = get<double>(merged, "solver", "kappa");
  c.solver.gamma.odd_forcing = get<bool>(merged, "solver", "odd_forcing");
  if (!(c.solver.c_T > 0.0 && c.solver.c_T <= 1.0)) fail(ErrorKind::Config, "solver.c_T must lie in (0, 1]");
  if (!(c.solver.tol_fp > 0.0)) fail(ErrorKind::Config, "solver.tol_fp must be positive");
  if (c.solver.max_iter == 0) fail(ErrorKind::Config, "solver.max_iter must be positive");

  auto& k = c.solver.gamma.kernel;
  k.panel_order = get<std::size_t>(merged, "kernel", "panel_order");
  k.n_A = get<std::size_t>(merged, "kernel", "n_A");
  k.n_B = get<std::size_t>(merged, "kernel", "n_B");
  k.xi_max_factor = get<double>(merged, "kernel", "xi_max_factor");
  k.beta_max_factor = get<double>(merged, "kernel", "beta_max_factor");
  k.panel_phase = get<double>(merged, "kernel", "panel_phase");
  k.dyadic_levels = get<std::size_t>(merged, "kernel", "dyadic_levels");
  k.taper_length = get<double>(merged, "kernel", "taper_length");
  k.tail_correction = get<bool>(merged, "kernel", "tail_correction");
  k.validate();

  c.fd.refine_x = get<std::size_t>(merged, "fd", "refine_x");
  c.fd.refine_t = get<std::size_t>(merged, "fd", "refine_t");
  c.fd.reflection_band = get<double>(merged, "fd", "reflection_band");
  c.fd.kappa = c.solver.gamma.kappa;
  c.fd.validate();

  auto& e = c.ensemble;
  e.count = get<std::size_t>(merged, "ensemble", "count");
  e.seed = c.seed;
  e.grid_sizes = get<std::vector<std::size_t>>(merged, "ensemble", "grid_sizes");
  e.half_width = get<double>(merged, "ensemble", "half_width");
  e.band = get<double>(merged, "ensemble", "band");
  e.decay = get<double>(merged, "ensemble", "decay");
  e.time_half_window = get<double>(merged, "ensemble", "time_half_window");
  e.time_samples = get<std::size_t>(merged, "ensemble", "time_samples");
  e.a = get<double>(merged, "ensemble", "a");
  e.T = get<double>(merged, "ensemble", "T");
  e.s0 = c.s0;
  e.s1 = c.s1;
  e.b = c.b;

  auto& t = c.tol;
  t.rel_err = get<double>(merged, "tolerances", "rel_err");
  t.trace_rel = get<double>(merged, "tolerances", "trace_rel");
  t.t0_field = get<double>(merged, "tolerances", "t0_field");
  t.mass_drift = get<double>(merged, "tolerances", "mass_drift");
  t.drift_reduction = get<double>(merged, "tolerances", "drift_reduction");
  t.even_free = get<double>(merged, "tolerances", "even_free");
  t.even_restart = get<double>(merged, "tolerances", "even_restart");
  t.residual_ratio = get<double>(merged, "tolerances", "residual_ratio");
  t.max_iterations = get<std::size_t>(merged, "tolerances", "max_iterations");
  t.oracle_rel = get<double>(merged, "tolerances", "oracle_rel");
  t.extension_rel = get<double>(merged, "tolerances", "extension_rel");
  t.smoothing_margin = get<double>(merged, "tolerances", "smoothing_margin");
  t.growth_fit = get<double>(merged, "tolerances", "growth_fit");
  t.growth_factor = get<double>(merged, "tolerances", "growth_factor");
  t.slope = get<double>(merged, "tolerances", "slope");
  for (double v : {t.rel_err, t.trace_rel, t.t0_field, t.mass_drift, t.drift_reduction, t.even_free, t.even_restart,
                   t.residual_ratio, t.oracle_rel, t.extension_rel, t.growth_fit, t.growth_factor, t.slope})
    if (!(v > 0.0)) fail(ErrorKind::Config, "tolerances must be positive");
  if (t.smoothing_margin < 0.0) fail(ErrorKind::Config, "tolerances.smoothing_margin must be non-negative");
  e.slope_tol = t.slope;

  c.dt_halving = get<bool>(merged, "options", "dt_halving");
  c.growth_scales = get<std::vector<double>>(merged, "options", "growth_scales");
  c.suite_count = get<std::size_t>(merged, "options", "suite_count");
  c.oracle = get<bool>(merged, "options", "oracle");
  c.smoothing_lambda_min = get<double>(merged, "options", "lambda_min");
  c.smoothing_lambda_max_fraction = get<double>(merged, "options", "lambda_max_fraction");
  c.report_inputs = get<std::vector<std::string>>(merged, "options", "report_inputs");
  for (double s : c.growth_scales)
    if (!(s > 0.0)) fail(ErrorKind::Config, "options.growth_scales must be positive");
  if (!(c.smoothing_lambda_min > 0.0) ||
      !(c.smoothing_lambda_max_fraction > 0.0 && c.smoothing_lambda_max_fraction <= 1.0))
    fail(ErrorKind::Config, "smoothing fit window is invalid");

  c.out_dir = get<std::string>(merged, "output", "dir");
  c.csv_stride = get<std::size_t>(merged, "output", "csv_stride");
  if (c.out_dir.empty()) fail(ErrorKind::Config, "output.dir must not be empty");
  if (c.csv_stride == 0) fail(ErrorKind::Config, "output.csv_stride must be positive");

  if (experiment == "estimates-lab") e.validate();
  if ((experiment == "linear-kg-check" || experiment == "linear-schrodinger-check") &&
      !(c.u0.is_zero() && c.n0.is_zero() && c.n1.is_zero()))
    fail(ErrorKind::Config, experiment + " takes boundary data only; initial data must be zero");
  if (experiment == "global-solve" && !c.g.is_zero())
    fail(ErrorKind::Config, "global-solve needs g = 0 (mass is only conserved without boundary forcing)");
  if (experiment == "smoothing-check" &&
      c.smoothing_lambda_min >= c.smoothing_lambda_max_fraction * c.grid().max_frequency())
    fail(ErrorKind::Config, "smoothing fit window is empty on this grid");
  return c;
}

RunConfig load_config(const std::string& experiment, const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Config, "cannot open config '" + path + "'");
  json user;
  try {
    user = json::parse(in, nullptr, true, true);  // comments allowed
  } catch (const json::parse_error& e) {
    fail(ErrorKind::Config, "malformed config '" + path + "': " + e.what());
  }
  if (!user.is_object()) fail(ErrorKind::Config, "config root must be an object");
  if (user.contains("experiment")) {
    if (!user["experiment"].is_string() || user["experiment"].get<std::string>() != experiment)
      fail(ErrorKind::Config, "config is for experiment '" + user["experiment"].dump() + "', not '" + experiment + "'");
    user.erase("experiment");
  }
  return resolve_config(experiment, user);
}

}  // namespace kgs
