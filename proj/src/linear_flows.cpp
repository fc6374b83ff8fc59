#include "kgs/core/linear_flows.hpp"

#include <algorithm>
#include <cmath>

#include "kgs/core/error.hpp"

namespace kgs {

namespace {
const cplx I{0.0, 1.0};

void require_real(const Field& f, double tol, const char* what) {
  if (imaginary_fraction(f) > tol)
    fail(ErrorKind::Validation, std::string(what) + " must be real-valued");
}
}  // namespace

Field schrodinger_flow(const Field& u0, double t) {
  return apply_multiplier(u0, multiplier_values(u0.grid, [t](double xi) {
                            return std::exp(-I * t * xi * xi);
                          }));
}

Field halfwave_flow(const Field& phi, double t, WaveSign sign) {
  const double s = sign_value(sign);
  return apply_multiplier(phi, multiplier_values(phi.grid, [t, s](double xi) {
                            return std::exp(I * s * t * d_symbol(xi));
                          }));
}

WaveFields kg_flow(const Field& n0, const Field& n1, double t, double tol) {
  require_real(n0, tol, "n0");
  require_real(n1, tol, "n1");
  const auto& grid = n0.grid;
  auto N0 = forward_dft(n0);
  auto N1 = forward_dft(n1);
  SpectralField n(grid), nt(grid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double w = japanese(grid.xi(k));
    const double c = std::cos(t * w), s = std::sin(t * w);
    n.coeffs[k] = c * N0.coeffs[k] + (s / w) * N1.coeffs[k];
    nt.coeffs[k] = -w * s * N0.coeffs[k] + c * N1.coeffs[k];
  }
  return {inverse_dft(n), inverse_dft(nt)};
}

PhiPair make_phi(const Field& n0e, const Field& n1e) {
  const Field dn1 = d_inverse(n1e);
  PhiPair out{n0e, n0e};
  for (std::size_t j = 0; j < n0e.size(); ++j) {
    out.plus[j] -= I * dn1[j];
    out.minus[j] += I * dn1[j];
  }
  return out;
}

WaveFields wave_fields_from_components(const Field& Np, const Field& Nm) {
  Field sum(Np.grid), diff(Np.grid);
  for (std::size_t j = 0; j < Np.size(); ++j) {
    sum[j] = 0.5 * (Np[j] + Nm[j]);
    diff[j] = 0.5 * I * (Np[j] - Nm[j]);
  }
  return {sum, d_operator(diff)};
}

PhiPair components_from_wave_fields(const Field& n, const Field& nt) { return make_phi(n, nt); }

double imaginary_fraction(const Field& f) {
  double mx = 0.0, im = 0.0;
  for (const auto& v : f.values) {
    mx = std::max(mx, std::abs(v));
    im = std::max(im, std::abs(v.imag()));
  }
  return mx > 0.0 ? im / mx : 0.0;
}

double even_part_max(const Field& f) {
  double m = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j)
    m = std::max(m, 0.5 * std::abs(f[j] + f[f.grid.mirror(j)]));
  return m;
}

}  // namespace kgs
