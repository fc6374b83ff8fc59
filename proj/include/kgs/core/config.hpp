#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "kgs/core/boundary_ops.hpp"
#include "kgs/core/norms_lab.hpp"
#include "kgs/core/oracle_fd.hpp"
#include "kgs/core/solver.hpp"

namespace kgs {

using json = nlohmann::json;

/// Analytic preset or CSV source for one piece of data. The same shapes
/// serve spatial data (variable x) and boundary series (variable t):
///   zero
///   gaussian      amp exp(-((y-center)/width)^2) e^{i k y}
///   dgaussian     amp ((y-center)/width) exp(-((y-center)/width)^2)
///   bump          amp exp(1 - 1/(1-r^2)) e^{i k y} for |r| < 1, r = (y-center)/width
///   power_exp     amp y^power exp(-y/width) for y >= 0
///   rough         smooth window on [lo, hi] times a seeded random series with
///                 coefficients <xi>^-decay over all grid modes, scaled to
///                 L2 norm amp (spatial only)
///   csv           rows from `path`
struct FunctionSpec {
  std::string type = "zero";
  double amp = 1.0;
  double center = 0.0;
  double width = 1.0;
  double k = 0.0;
  double power = 0.0;
  double decay = 1.0;
  double lo = 0.0;
  double hi = 1.0;
  std::uint64_t seed = 1;
  std::string path;

  bool is_zero() const { return type == "zero" || amp == 0.0; }
};

HalfLineFunction make_halfline(const FunctionSpec& spec, const SpatialGrid& grid, double s);
TimeSeries make_series(const FunctionSpec& spec, const TimeGrid& times);

/// Pass thresholds; defaults are the acceptance tolerances.
struct Tolerances {
  double rel_err = 5e-2;           ///< boundary formula vs finite differences
  double trace_rel = 1e-2;         ///< sup |trace - data| / max |data|
  double t0_field = 1e-8;          ///< sup |field(t = 0)|
  double mass_drift = 1e-4;        ///< max relative drift of ||u||_{L2(R+)}
  double drift_reduction = 3.0;    ///< required drift ratio when dt is halved
  double even_free = 1e-12;        ///< free KG flow even part
  double even_restart = 1e-8;      ///< wave even part after restarts
  double residual_ratio = 0.5;     ///< successive Picard residual ratio
  std::size_t max_iterations = 20;
  double oracle_rel = 5e-2;        ///< local solve vs coupled finite differences
  double extension_rel = 1e-3;     ///< odd vs zero wave extension
  double smoothing_margin = 0.1;   ///< tail slope gap must reach a0 - margin
  double growth_fit = 0.1;         ///< linear-fit residual / range of log wave norm
  double growth_factor = 2.0;      ///< mT agreement across wave scalings
  double slope = 0.1;              ///< estimate ratios vs log N
};

struct RunConfig {
  std::string experiment;
  std::uint64_t seed = 20240611;

  double L = 20.0;
  std::size_t N = 512;
  double T = 0.0;  ///< local horizon; 0 selects it from the data
  double T_final = 1.0;
  double dt = 1e-3;

  FunctionSpec u0, n0, n1, g, h;
  double s0 = 0.0, s1 = 0.0, a0 = 0.4, a1 = 0.4, b = 0.4;
  ExtensionPolicy u_policy = ExtensionPolicy::Zero;
  ExtensionPolicy wave_policy = ExtensionPolicy::Odd;

  SolverConfig solver;
  FDConfig fd;
  EnsembleParams ensemble;
  Tolerances tol;

  // Experiment options.
  bool dt_halving = false;           ///< global-solve: rerun at dt/2
  std::vector<double> growth_scales; ///< global-solve: wave data scalings for mT
  std::size_t suite_count = 0;       ///< local-solve: seeded Picard regression suite
  bool oracle = true;                ///< local-solve: compare with coupled FD
  double smoothing_lambda_min = 2.0;
  double smoothing_lambda_max_fraction = 0.5;
  std::vector<std::string> report_inputs;

  std::string out_dir = "out";
  std::size_t csv_stride = 8;

  json resolved;  ///< defaults merged with the file, as embedded in reports

  SpatialGrid grid() const { return SpatialGrid(L, N); }
};

const std::vector<std::string>& experiment_names();

/// Default configuration tree for one experiment.
json default_config(const std::string& experiment);

/// Merges `user` over the defaults, rejects unknown keys and bad values.
/// Throws Error(Config) without touching the file system.
RunConfig resolve_config(const std::string& experiment, const json& user);
RunConfig load_config(const std::string& experiment, const std::string& path);

}  // namespace kgs
