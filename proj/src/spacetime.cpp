#include "kgs/core/spacetime.hpp"

#include <algorithm>
#include <cmath>

#include "kgs/core/error.hpp"

namespace kgs {

TimeGrid TimeGrid::covering(double T, double dt) {
  if (!(dt > 0.0) || !(T >= 0.0)) fail(ErrorKind::Config, "time grid needs dt > 0 and T >= 0");
  const auto steps = static_cast<std::size_t>(std::max(1.0, std::round(T / dt)));
  return TimeGrid{T > 0.0 ? T / static_cast<double>(steps) : dt, T > 0.0 ? steps + 1 : 1};
}

Field SpaceTimeField::snapshot(std::size_t m) const {
  auto r = row(m);
  return Field(grid_, CVec(r.begin(), r.end()));
}

void SpaceTimeField::set_snapshot(std::size_t m, const Field& f) {
  if (f.size() != cols()) fail(ErrorKind::Validation, "snapshot size mismatch");
  std::copy(f.values.begin(), f.values.end(), row(m).begin());
}

SpaceTimeField& SpaceTimeField::operator+=(const SpaceTimeField& o) {
  if (o.data_.size() != data_.size()) fail(ErrorKind::Validation, "space-time shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

SpaceTimeField& SpaceTimeField::operator-=(const SpaceTimeField& o) {
  if (o.data_.size() != data_.size()) fail(ErrorKind::Validation, "space-time shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

SpaceTimeField& SpaceTimeField::operator*=(cplx a) {
  for (auto& v : data_) v *= a;
  return *this;
}

CVec SpaceTimeField::trace() const {
  CVec out(rows());
  for (std::size_t m = 0; m < rows(); ++m) out[m] = (*this)(m, grid_.zero_index());
  return out;
}

double SpaceTimeField::max_abs() const {
  double m = 0.0;
  for (const auto& v : data_) m = std::max(m, std::abs(v));
  return m;
}

double halfline_spacetime_l2(const SpaceTimeField& f) {
  const std::size_t half = f.grid().zero_index(), N = f.cols();
  double acc = 0.0;
  for (std::size_t m = 0; m < f.rows(); ++m) {
    const double wt = (m == 0 || m + 1 == f.rows()) ? 0.5 : 1.0;
    double row = 0.0;
    for (std::size_t j = half; j < N; ++j) row += (j == half ? 0.5 : 1.0) * std::norm(f(m, j));
    acc += wt * row;
  }
  return std::sqrt(acc * f.grid().dx() * f.times().dt);
}

double halfline_sup_diff(const SpaceTimeField& a, const SpaceTimeField& b) {
  double m = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t j = a.grid().zero_index(); j < a.cols(); ++j) m = std::max(m, std::abs(a(r, j) - b(r, j)));
  return m;
}

}  // namespace kgs
