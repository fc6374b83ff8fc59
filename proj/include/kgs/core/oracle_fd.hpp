#pragma once

#include "kgs/core/halfline.hpp"
#include "kgs/core/spacetime.hpp"

namespace kgs {

/// Finite-difference reference on [0, L] with Dirichlet ends.
/// Nodes are h = dx/refine_x apart so that every spectral node x >= 0 is an
/// FD node; the step is dt/refine_t. Both schemes are Crank-Nicolson
/// (unconditionally stable, second order).
struct FDConfig {
  std::size_t refine_x = 1;
  std::size_t refine_t = 1;
  /// Coupling i u_t + u_xx = -kappa n u.
  double kappa = 1.0;
  /// Fraction of the domain next to x = L watched for reflections.
  double reflection_band = 0.1;

  void validate() const;
};

struct FDResult {
  SpaceTimeField u;   ///< empty for the pure wave oracle
  SpaceTimeField n;   ///< empty for the pure Schrodinger oracle
  SpaceTimeField nt;
  /// max over time of the L2 mass in the band next to x = L relative to the
  /// total L2 mass.
  double reflection = 0.0;
};

/// i u_t + u_xx = 0, u(0,t) = g(t), u(L,t) = 0.
FDResult fd_schrodinger_ibvp(const HalfLineFunction& u0, const TimeSeries& g, const TimeGrid& times,
                             const FDConfig& cfg = {});

/// n_tt - n_xx + n = 0, n(0,t) = h(t), n(L,t) = 0.
FDResult fd_kg_ibvp(const HalfLineFunction& n0, const HalfLineFunction& n1, const TimeSeries& h,
                    const TimeGrid& times, const FDConfig& cfg = {});

/// Full coupled system by Strang splitting: half linear step, exact
/// pointwise coupling step, half linear step.
FDResult fd_kgs_coupled(const HalfLineFunction& u0, const HalfLineFunction& n0, const HalfLineFunction& n1,
                        const TimeSeries& g, const TimeSeries& h, const TimeGrid& times, const FDConfig& cfg = {});

}  // namespace kgs
