#pragma once

#include <string>
#include <vector>

#include "kgs/core/boundary_ops.hpp"

namespace kgs {

/// eta_T sampled on a time grid; eta_T(t) = eta(t/T).
struct CutoffProfile {
  TimeGrid times;
  double T = 1.0;
  std::vector<double> values;
};

CutoffProfile make_eta(const TimeGrid& times, double T);

/// \int_0^{t_m} e^{i(t_m - t')Delta} F(t') dt' for every m, per mode with
/// exact phases and linearly interpolated forcing.
SpaceTimeField schrodinger_duhamel_field(const SpaceTimeField& F);
Field schrodinger_duhamel(const SpaceTimeField& F, std::size_t t_index);

/// \int_0^{t_m} e^{+-i(t_m - t')D} G(t') dt'.
SpaceTimeField halfwave_duhamel(const SpaceTimeField& G, WaveSign sign);

/// G(u) = eta_T D^{-1}|u|^2. With `odd_forcing` the odd part of |u|^2 is
/// used instead, which keeps the wave field odd.
SpaceTimeField wave_forcing(const SpaceTimeField& u, double T, bool odd_forcing = false);

/// n_+- = -+i \int_0^t e^{+-i(t-t')D} G(u) dt'.
SpaceTimeField kg_duhamel_npm(const SpaceTimeField& u, WaveSign sign, double T, bool odd_forcing = false);

/// q(t) = eta_T(t) [\int_0^t e^{i(t-t')Delta} F dt']_{x=0}.
TimeSeries trace_q(const SpaceTimeField& F, double T);
/// Same, from an already integrated field.
TimeSeries trace_q_from_integral(const SpaceTimeField& integral, double T);
/// z(t) = eta_T(t) [n_+ + n_-]_{x=0}.
TimeSeries trace_z(const SpaceTimeField& npm_sum, double T);

/// e^{itDelta} u0 and e^{+-itD} phi on every time of the grid.
SpaceTimeField free_schrodinger(const Field& u0, const TimeGrid& times);
SpaceTimeField free_halfwave(const Field& phi, const TimeGrid& times, WaveSign sign);

/// Half-wave components of a real wave field n_b with time derivative:
/// N_+- = n_b -+ i D^{-1} d_t n_b.
void add_wave_components(const SpaceTimeField& nb, const SpaceTimeField& nb_t, SpaceTimeField& Np,
                         SpaceTimeField& Nm);

/// (u, N+, N-) on [0, T]. n = (N+ + N-)/2, n_t = iD(N+ - N-)/2.
struct Trajectory {
  SpaceTimeField u;
  SpaceTimeField Np;
  SpaceTimeField Nm;

  SpaceTimeField n() const;
  SpaceTimeField nt() const;
};

/// Extended data entering the fixed-point map.
struct PreparedData {
  Field u0e;
  PhiPair phi;
  TimeSeries g;
  TimeSeries h;
  /// Optional external potential added to n in the Schrodinger coupling.
  SpaceTimeField potential;
};

struct GammaConfig {
  /// Coupling i u_t + Delta u = -kappa n u.
  double kappa = 1.0;
  bool odd_forcing = false;
  BoundaryKernelConfig kernel;
};

/// State-independent part: eta_T W(u0e, g) and eta_T V(phi, h) in components.
Trajectory linear_part(const PreparedData& data, const TimeGrid& times, double T, const GammaConfig& cfg,
                       std::vector<std::string>* warnings = nullptr);

/// One application of the fixed-point map to `state`.
Trajectory gamma_map(const Trajectory& state, const Trajectory& linear, const PreparedData& data, double T,
                     const GammaConfig& cfg, std::vector<std::string>* warnings = nullptr);

/// Sup-norm distance between trajectories over the whole grid; the iterates
/// live on R, so the contraction is measured there.
double trajectory_distance(const Trajectory& a, const Trajectory& b);
double trajectory_sup(const Trajectory& a);

}  // namespace kgs
