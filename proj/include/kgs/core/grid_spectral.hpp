#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace kgs {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

/// Uniform periodic mesh on [-L, L): x_j = -L + j*dx, dx = 2L/N.
///
/// N is even, so x_{N/2} = 0 lies exactly on a node. Frequencies are
/// xi_k = pi*k/L for signed k in [-N/2, N/2-1], stored in FFT order.
class SpatialGrid {
 public:
  SpatialGrid() = default;
  SpatialGrid(double half_width, std::size_t points);

  double half_width() const { return L_; }
  std::size_t size() const { return N_; }
  double dx() const { return 2.0 * L_ / static_cast<double>(N_); }
  std::size_t zero_index() const { return N_ / 2; }
  double x(std::size_t j) const { return -L_ + static_cast<double>(j) * dx(); }

  /// Signed wave number for storage slot k (FFT order).
  long signed_mode(std::size_t k) const {
    return k < N_ / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(N_);
  }
  double xi(std::size_t k) const;
  double max_frequency() const;
  /// Slot j' with x_{j'} = -x_j (periodic image; j = 0 maps to itself).
  std::size_t mirror(std::size_t j) const { return j == 0 ? 0 : N_ - j; }

  bool operator==(const SpatialGrid& other) const { return L_ == other.L_ && N_ == other.N_; }

 private:
  double L_ = 1.0;
  std::size_t N_ = 8;
};

SpatialGrid make_grid(double half_width, std::size_t points);

struct Field {
  SpatialGrid grid;
  CVec values;

  Field() = default;
  explicit Field(const SpatialGrid& g) : grid(g), values(g.size(), cplx{}) {}
  Field(const SpatialGrid& g, CVec v);

  std::size_t size() const { return values.size(); }
  cplx& operator[](std::size_t j) { return values[j]; }
  const cplx& operator[](std::size_t j) const { return values[j]; }
  cplx at_origin() const { return values[grid.zero_index()]; }
};

/// Coefficients of f^(xi) = \int e^{-i x xi} f(x) dx, approximated by
/// dx * sum_j. With this convention the discrete Plancherel identity reads
///   dx * sum_j |f_j|^2 = (1/2L) * sum_k |f^_k|^2,
/// i.e. the frequency measure is d(xi)/(2 pi) with d(xi) = pi/L.
struct SpectralField {
  SpatialGrid grid;
  CVec coeffs;

  SpectralField() = default;
  explicit SpectralField(const SpatialGrid& g) : grid(g), coeffs(g.size(), cplx{}) {}
};

SpectralField forward_dft(const Field& f);
Field inverse_dft(const SpectralField& F);

/// In-place variants operating on raw sample/coefficient arrays of length
/// grid.size(); used by the trajectory kernels.
void forward_dft_inplace(const SpatialGrid& grid, std::span<cplx> data);
void inverse_dft_inplace(const SpatialGrid& grid, std::span<cplx> data);

using Multiplier = std::function<cplx(double)>;

/// Samples m(xi_k) in FFT order. Throws a numeric error on NaN/Inf.
CVec multiplier_values(const SpatialGrid& grid, const Multiplier& m);

SpectralField apply_multiplier(const SpectralField& F, const Multiplier& m);
SpectralField apply_multiplier(const SpectralField& F, std::span<const cplx> m);
/// Field -> DFT -> multiply -> inverse DFT.
Field apply_multiplier(const Field& f, std::span<const cplx> m);

/// sgn(xi)*sqrt(1+xi^2) with sgn(0) := 1, so |D| >= 1 everywhere.
double d_symbol(double xi);
inline double japanese(double xi) { return std::sqrt(1.0 + xi * xi); }

Field d_operator(const Field& f);
Field d_inverse(const Field& f);

/// sqrt((1/2L) sum_k <xi_k>^{2s} |f^_k|^2); equals the L2 norm at s = 0.
double sobolev_norm(const Field& f, double s);
double sobolev_norm(const SpectralField& F, double s);

/// Discrete L2 norm over the full grid, sqrt(dx * sum |f|^2).
double l2_norm(const Field& f);

/// Unnormalized row-major 2-D FFT (FFTW sign convention: forward uses
/// e^{-2 pi i jk/n}). Callers own scaling and frequency labels.
void fft_2d(std::size_t rows, std::size_t cols, std::span<cplx> data, bool inverse = false);

}  // namespace kgs
