#pragma once

#include <string>
#include <vector>

#include "kgs/core/halfline.hpp"
#include "kgs/core/linear_flows.hpp"
#include "kgs/core/quadrature.hpp"
#include "kgs/core/spacetime.hpp"

namespace kgs {

/// Discretization of the half-line boundary operators.
struct BoundaryKernelConfig {
  std::size_t panel_order = 8;      ///< Gauss-Legendre points per panel
  std::size_t n_A = 64;             ///< minimum node count for the |mu| <= 1 integral
  std::size_t n_B = 64;             ///< minimum node count for the |mu| > 1 integral
  double xi_max_factor = 2.0;       ///< Klein-Gordon truncation, in units of the grid's max frequency
  double beta_max_factor = 1.0;     ///< Schrodinger truncation of beta, same units
  double panel_phase = 3.0;         ///< max phase change across one panel (radians)
  std::size_t dyadic_levels = 6;    ///< refinement toward mu = 0 / beta = 0 and theta = +-pi/2
  double taper_length = 0.5;        ///< continuation of boundary data past its last sample
  bool tail_correction = true;      ///< add the |k| > Xi_max part of B in asymptotic form

  void validate() const;
};

/// Trapezoid-type (piecewise-linear Filon) approximation of
///   \int_0^\infty e^{-i mu t} h(t) dt
/// over the sampled support; only samples with t >= 0 contribute. At mu = 0
/// this is exactly the trapezoid rule.
cplx halfline_time_transform(const TimeSeries& h, double mu);
CVec halfline_time_transform(const TimeSeries& h, const std::vector<double>& mus);

struct BoundaryField {
  SpaceTimeField value;
  SpaceTimeField time_derivative;  ///< empty unless requested
  double imag_residue = 0.0;       ///< max|Im| / max|value| before projection
  std::vector<std::string> warnings;
};

/// Zero-initial-data Klein-Gordon half-line solution V_0^t(0, h) written as
/// (A + B) / (2 pi) with
///   A = \int_{-1}^{1} e^{i mu t - x sqrt(1-mu^2)} rho(x sqrt(1-mu^2)) h^(mu) dmu
///   B = \int e^{-i t sgn(k)<k> + i k x} h^(-sgn(k)<k>) |k|/<k> dk.
/// A uses mu = sin(theta); B is integrated by quadrature up to |k| = Xi_max
/// and the remainder is added from the exact transform of the piecewise
/// linear data (jumps and slope kinks) through incomplete exponential
/// integrals.
class KgBoundaryKernel {
 public:
  KgBoundaryKernel(const TimeSeries& h, double x_max, double t_max, double xi_max,
                   const BoundaryKernelConfig& cfg);

  cplx A(double x, double t) const;
  cplx B(double x, double t) const;
  std::size_t nodes_A() const { return theta_.size(); }
  std::size_t nodes_B() const { return k_.size(); }
  /// |h^| at the truncation frequency relative to its peak.
  double truncation_ratio() const { return truncation_ratio_; }

  /// (A + B)/(2 pi) on every grid node and time; optionally d/dt as well.
  void tabulate(const SpatialGrid& grid, const TimeGrid& times, SpaceTimeField& value,
                SpaceTimeField* time_derivative) const;

 private:
  QuadratureRule theta_;
  CVec hat_A_;  // h^(sin theta) * cos theta * weight
  QuadratureRule k_;
  CVec hat_B_;  // h^(-sgn(k)<k>) * |k|/<k> * weight
  double truncation_ratio_ = 0.0;
  bool tail_ = true;
  double mu0_ = 1.0;
  double lattice_dt_ = 1.0;
  double lattice_t0_ = 0.0;
  std::vector<double> jump_times_, kink_times_;
  CVec jumps_, kinks_;  // value jumps and slope jumps of the interpolant

  cplx tail(double x, double t, bool derivative) const;
  void add_tail(const SpatialGrid& grid, const TimeGrid& times, SpaceTimeField& field, bool derivative) const;
};

/// E_q(z) = \int_1^\infty e^{-zu} u^{-q} du for q = 1..count, Re z >= 0, z != 0.
std::vector<cplx> exponential_integrals(cplx z, std::size_t count);

cplx kg_boundary_A(const TimeSeries& h, double x, double t, const BoundaryKernelConfig& cfg,
                   double xi_max = 80.0);
cplx kg_boundary_B(const TimeSeries& h, double x, double t, const BoundaryKernelConfig& cfg,
                   double xi_max = 80.0);

/// Real part of the assembled kernel on the grid; the imaginary residue is
/// reported and a warning issued above 1e-4.
BoundaryField kg_boundary_V0(const TimeSeries& h, const SpatialGrid& grid, const TimeGrid& times,
                             const BoundaryKernelConfig& cfg, bool with_time_derivative = false);

/// Schrodinger half-line solution with zero initial data,
///   W_0^t(0,g) = (1/pi) [ \int_0^bmax e^{-i b^2 t + i b x} b g^(-b^2) db
///                       + \int_0^bmax e^{i b^2 t - b x} rho(b x) b g^(b^2) db ].
class SchrodingerBoundaryKernel {
 public:
  SchrodingerBoundaryKernel(const TimeSeries& g, double x_max, double t_max, double beta_max,
                            const BoundaryKernelConfig& cfg);

  cplx evaluate(double x, double t) const;
  std::size_t nodes() const { return travel_.size() + decay_.size(); }
  double truncation_ratio() const { return truncation_ratio_; }
  void tabulate(const SpatialGrid& grid, const TimeGrid& times, SpaceTimeField& value) const;

 private:
  QuadratureRule travel_;
  CVec hat_travel_;
  QuadratureRule decay_;
  CVec hat_decay_;
  double truncation_ratio_ = 0.0;
};

BoundaryField schrodinger_boundary_W0(const TimeSeries& g, const SpatialGrid& grid,
                                      const TimeGrid& times, const BoundaryKernelConfig& cfg);

/// p(t) = eta(t) [e^{it Delta} u0e]_{x=0}.
TimeSeries trace_p(const Field& u0e, const TimeGrid& times);
/// r(t) = (1/2)[e^{itD} phi+ + e^{-itD} phi-]_{x=0}.
TimeSeries trace_r(const PhiPair& phi, const TimeGrid& times);

/// CSV rows "x,t,re,im" for nodes with x >= 0 (every `stride`-th node/time).
void write_kernel_csv(const std::string& path, const SpaceTimeField& f, std::size_t stride = 1);

}  // namespace kgs
