#pragma once

#include "kgs/core/grid_spectral.hpp"

namespace kgs {

enum class WaveSign { Plus = 1, Minus = -1 };

inline double sign_value(WaveSign s) { return s == WaveSign::Plus ? 1.0 : -1.0; }

/// e^{it Delta} u0: multiplier e^{-it xi^2}.
Field schrodinger_flow(const Field& u0, double t);

/// e^{+-itD} phi: multiplier e^{+-it sgn(xi) <xi>}.
Field halfwave_flow(const Field& phi, double t, WaveSign sign);

struct WaveFields {
  Field n;
  Field nt;
};

/// Whole-line Klein-Gordon flow of (n0, n1) through the even multipliers
/// cos(t<xi>), sin(t<xi>)/<xi> and their time derivatives.
/// Throws a validation error when the data is not real within `tol`.
WaveFields kg_flow(const Field& n0, const Field& n1, double t, double tol = 1e-10);

/// phi_+- = n0 -+ i D^{-1} n1.
struct PhiPair {
  Field plus;
  Field minus;
};

PhiPair make_phi(const Field& n0e, const Field& n1e);

/// (N+ + N-)/2 and iD(N+ - N-)/2.
WaveFields wave_fields_from_components(const Field& Np, const Field& Nm);
/// N+- = n -+ i D^{-1} nt (inverse of the map above).
PhiPair components_from_wave_fields(const Field& n, const Field& nt);

/// max |imag| relative to max |value| (0 for the zero field).
double imaginary_fraction(const Field& f);

/// max_j |(f(x_j) + f(-x_j))/2|, using the periodic mirror of each node.
double even_part_max(const Field& f);

}  // namespace kgs
