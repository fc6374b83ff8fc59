#pragma once

namespace kgs {

// C^infinity building blocks. psi(x) = e^{-1/x} for x > 0, else 0.
double smooth_psi(double x);

/// 0 for y <= 0, 1 for y >= 1, C^infinity in between.
double smooth_step(double y);

/// Spatial cut-off used inside the boundary operators: 1 for y >= 0, 0 for
/// y <= -1, bridged by psi(1+y) / (psi(1+y) + psi(-y)).
double rho_cutoff(double y);

/// Time bump: 1 on [-1, 1], supported in [-2, 2].
double eta(double t);
inline double eta_scaled(double t, double T) { return eta(t / T); }

}  // namespace kgs
