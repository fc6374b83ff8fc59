#include "kgs/core/grid_spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "kgs/core/error.hpp"

namespace kgs {

namespace {

// FFTW planning is not thread-safe; plans are created once per shape under a
// lock and then executed on caller-owned arrays (new-array execute).
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(std::size_t rows, std::size_t cols, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_tuple(rows, cols, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    const std::size_t n = rows * cols;
    auto* scratch = fftw_alloc_complex(n);
    fftw_plan plan = rows == 1
        ? fftw_plan_dft_1d(static_cast<int>(cols), scratch, scratch, sign,
                           FFTW_ESTIMATE | FFTW_UNALIGNED)
        : fftw_plan_dft_2d(static_cast<int>(rows), static_cast<int>(cols), scratch, scratch,
                           sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    if (!plan) fail(ErrorKind::Numeric, "FFTW failed to create a plan");
    plans_.emplace(key, plan);
    return plan;
  }

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<std::size_t, std::size_t, int>, fftw_plan> plans_;
};

void execute(std::size_t rows, std::size_t cols, std::span<cplx> data, int sign) {
  fftw_plan plan = PlanCache::instance().get(rows, cols, sign);
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, ptr, ptr);
}

void require_same_grid(const SpatialGrid& a, std::size_t n) {
  if (a.size() != n) fail(ErrorKind::Validation, "sample count does not match grid");
}

}  // namespace

SpatialGrid::SpatialGrid(double half_width, std::size_t points) : L_(half_width), N_(points) {
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    fail(ErrorKind::Config, "grid half-width L must be positive");
  if (points % 2 != 0) fail(ErrorKind::Config, "grid point count N must be even");
  if (points < 8) fail(ErrorKind::Config, "grid point count N must be at least 8");
}

double SpatialGrid::xi(std::size_t k) const {
  return std::numbers::pi * static_cast<double>(signed_mode(k)) / L_;
}

double SpatialGrid::max_frequency() const {
  return std::numbers::pi * static_cast<double>(N_ / 2) / L_;
}

SpatialGrid make_grid(double half_width, std::size_t points) {
  return SpatialGrid(half_width, points);
}

Field::Field(const SpatialGrid& g, CVec v) : grid(g), values(std::move(v)) {
  require_same_grid(grid, values.size());
}

void forward_dft_inplace(const SpatialGrid& grid, std::span<cplx> data) {
  require_same_grid(grid, data.size());
  execute(1, data.size(), data, FFTW_FORWARD);
  // e^{-i x_j xi_k} = (-1)^k e^{-2 pi i jk/N} because x_0 = -L.
  const double dx = grid.dx();
  for (std::size_t k = 0; k < data.size(); ++k) data[k] *= (k % 2 == 0 ? dx : -dx);
}

void inverse_dft_inplace(const SpatialGrid& grid, std::span<cplx> data) {
  require_same_grid(grid, data.size());
  for (std::size_t k = 1; k < data.size(); k += 2) data[k] = -data[k];
  execute(1, data.size(), data, FFTW_BACKWARD);
  const double scale = 1.0 / (2.0 * grid.half_width());
  for (auto& v : data) v *= scale;
}

SpectralField forward_dft(const Field& f) {
  SpectralField out(f.grid);
  out.coeffs = f.values;
  forward_dft_inplace(f.grid, out.coeffs);
  return out;
}

Field inverse_dft(const SpectralField& F) {
  Field out(F.grid);
  out.values = F.coeffs;
  inverse_dft_inplace(F.grid, out.values);
  return out;
}

CVec multiplier_values(const SpatialGrid& grid, const Multiplier& m) {
  CVec out(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    out[k] = m(grid.xi(k));
    if (!std::isfinite(out[k].real()) || !std::isfinite(out[k].imag()))
      fail(ErrorKind::Numeric, "multiplier is not finite at a grid frequency");
  }
  return out;
}

SpectralField apply_multiplier(const SpectralField& F, std::span<const cplx> m) {
  require_same_grid(F.grid, m.size());
  SpectralField out(F.grid);
  for (std::size_t k = 0; k < m.size(); ++k) out.coeffs[k] = F.coeffs[k] * m[k];
  return out;
}

SpectralField apply_multiplier(const SpectralField& F, const Multiplier& m) {
  return apply_multiplier(F, multiplier_values(F.grid, m));
}

Field apply_multiplier(const Field& f, std::span<const cplx> m) {
  require_same_grid(f.grid, m.size());
  Field out = f;
  forward_dft_inplace(f.grid, out.values);
  for (std::size_t k = 0; k < m.size(); ++k) out.values[k] *= m[k];
  inverse_dft_inplace(f.grid, out.values);
  return out;
}

double d_symbol(double xi) { return (xi >= 0.0 ? 1.0 : -1.0) * japanese(xi); }

Field d_operator(const Field& f) {
  return apply_multiplier(f, multiplier_values(f.grid, [](double xi) { return cplx(d_symbol(xi)); }));
}

Field d_inverse(const Field& f) {
  return apply_multiplier(f,
                          multiplier_values(f.grid, [](double xi) { return cplx(1.0 / d_symbol(xi)); }));
}

double sobolev_norm(const SpectralField& F, double s) {
  double acc = 0.0;
  for (std::size_t k = 0; k < F.coeffs.size(); ++k) {
    const double w = std::pow(1.0 + F.grid.xi(k) * F.grid.xi(k), s);
    acc += w * std::norm(F.coeffs[k]);
  }
  return std::sqrt(acc / (2.0 * F.grid.half_width()));
}

double sobolev_norm(const Field& f, double s) { return sobolev_norm(forward_dft(f), s); }

double l2_norm(const Field& f) {
  double acc = 0.0;
  for (const auto& v : f.values) acc += std::norm(v);
  return std::sqrt(acc * f.grid.dx());
}

void fft_2d(std::size_t rows, std::size_t cols, std::span<cplx> data, bool inverse) {
  if (data.size() != rows * cols) fail(ErrorKind::Validation, "2-D FFT shape mismatch");
  execute(rows, cols, data, inverse ? FFTW_BACKWARD : FFTW_FORWARD);
}

}  // namespace kgs
