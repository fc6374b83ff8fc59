#pragma once

#include <string>
#include <vector>

#include "kgs/core/duhamel.hpp"
#include "kgs/core/halfline.hpp"

namespace kgs {

/// Snapshot of the coupled state; n = (N+ + N-)/2, n_t = iD(N+ - N-)/2.
struct KGSState {
  Field u;
  Field Np;
  Field Nm;

  WaveFields wave() const { return wave_fields_from_components(Np, Nm); }
};

KGSState state_at(const Trajectory& traj, std::size_t m);

/// Half-line data for one local solve.
struct LocalProblem {
  HalfLineFunction u0;
  HalfLineFunction n0;
  HalfLineFunction n1;
  TimeSeries g;
  TimeSeries h;
  double s0 = 0.0;
  double s1 = 0.0;
  ExtensionPolicy u_policy = ExtensionPolicy::Zero;
  ExtensionPolicy wave_policy = ExtensionPolicy::Odd;

  const SpatialGrid& grid() const { return u0.grid; }
  /// Warnings for regularity labels outside (-1/4, 1/2) x (-1/2, 1/2).
  std::vector<std::string> admissibility_warnings() const;
};

struct SolverConfig {
  double dt = 1e-3;
  double c_T = 0.1;
  double tol_fp = 1e-10;
  std::size_t max_iter = 30;
  GammaConfig gamma;
};

/// Norms entering the step-size rule.
struct DataNorms {
  double u0 = 0.0;    ///< ||u0||_{L2}
  double wave = 0.0;  ///< ||n0||_{H^s1} + ||n1||_{H^{s1-1}} + ||h||_{H^s1}
};

DataNorms data_norms(const LocalProblem& p);

/// T = c_T min(1, ||u0||^-2, wave^-2).
double select_T(const LocalProblem& p, double c_T = 0.1);

struct SolveReport {
  double T = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> residuals;  ///< sup-norm difference of successive iterates
  std::vector<double> ratios;     ///< residual ratios above the round-off floor
  std::vector<double> times;
  std::vector<double> mass;       ///< ||u(t)||_{L2(R+)}
  std::vector<double> wave_norm;  ///< sqrt(||n||^2_{H^s1} + ||n_t||^2_{H^{s1-1}})
  std::vector<std::string> warnings;

  double max_ratio() const;
};

PreparedData prepare_data(const LocalProblem& p, const TimeGrid& times);

struct LocalSolution {
  Trajectory traj;
  Trajectory linear;
  PreparedData data;
  SolveReport report;
};

/// Picard iteration of the fixed-point map on [0, T], starting from the
/// linear part. Throws a convergence error carrying the residual log.
LocalSolution local_solve(const LocalProblem& p, double T, const SolverConfig& cfg);

/// Same, with an external potential added to n in the Schrodinger coupling.
LocalSolution local_solve(const LocalProblem& p, double T, const SolverConfig& cfg,
                          const SpaceTimeField& potential);

struct GlobalReport {
  SolveReport summary;            ///< concatenated per-time monitors
  std::vector<double> step_T;
  std::vector<double> step_start;
  std::vector<double> step_u_norm;
  std::vector<double> step_wave_norm;
  std::vector<std::size_t> step_iterations;
  std::vector<double> step_max_ratio;
  std::vector<double> even_part;  ///< wave even-part after each odd re-extension
  bool completed = false;
  std::string failure;
};

struct GlobalSolution {
  KGSState final_state;
  GlobalReport report;
};

/// Restarted local solves with zero re-extension of u and odd re-extension
/// of the wave pair until T_final. Requires g = 0. Nonzero h enters once as
/// the potential m = V0(0, h) with zero wave boundary data. A fixed
/// `T_override` > 0 replaces select_T.
GlobalSolution global_solve(const LocalProblem& p, double T_final, const SolverConfig& cfg,
                            double T_override = 0.0);

struct ConservationReport {
  std::vector<double> mass;
  double max_relative_drift = 0.0;
  std::vector<double> flux;     ///< 2 Im \int_0^t conj(g) u_x(0, t') dt'
  double balance_residual = 0.0;  ///< max | ||u||^2 - ||u0||^2 - flux |
};

ConservationReport conservation_check(const SpaceTimeField& u, const TimeSeries& g);

struct TailFit {
  double slope = 0.0;
  std::vector<double> cutoffs;
  std::vector<double> tails;
};

/// Least-squares slope of log ||P_{|xi| >= Lambda} f|| against log Lambda.
TailFit fourier_tail_slope(const Field& f, double lambda_min, double lambda_max, std::size_t count = 12);

struct SmoothingReport {
  TailFit u_linear, u_nonlinear;
  TailFit n_linear, n_nonlinear;
  double u_gap = 0.0;
  double n_gap = 0.0;
  double u_nonlinear_norm = 0.0;  ///< ||u - W||_{H^{s0 + a0}} at t = T
  double n_nonlinear_norm = 0.0;  ///< ||n - V||_{H^{s1 + a1}} at t = T
};

/// Tail slopes at t = T fitted on [lambda_min, lambda_max_fraction * max frequency].
SmoothingReport smoothing_diagnostic(const LocalSolution& sol, const LocalProblem& p, double a0, double a1,
                                     double lambda_min = 2.0, double lambda_max_fraction = 0.5);

struct ExtensionReport {
  double sup_u = 0.0, sup_n = 0.0;
  double rel_l2_u = 0.0, rel_l2_n = 0.0;
  double max_relative = 0.0;
};

/// Solves with two wave-extension policies and compares on x >= 0.
ExtensionReport extension_independence_test(const LocalProblem& p, ExtensionPolicy a, ExtensionPolicy b, double T,
                                            const SolverConfig& cfg);

double wave_norm(const Field& n, const Field& nt, double s1);

}  // namespace kgs
