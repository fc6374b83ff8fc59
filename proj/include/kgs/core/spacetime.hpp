#pragma once

#include <span>

#include "kgs/core/grid_spectral.hpp"

namespace kgs {

/// Uniform times t_m = m*dt, m = 0..count-1.
struct TimeGrid {
  double dt = 1.0;
  std::size_t count = 1;

  double t(std::size_t m) const { return static_cast<double>(m) * dt; }
  double t_end() const { return t(count - 1); }
  static TimeGrid covering(double T, double dt);
};

/// count x N complex samples, row m holding the snapshot at t_m.
class SpaceTimeField {
 public:
  SpaceTimeField() = default;
  SpaceTimeField(const SpatialGrid& grid, const TimeGrid& times)
      : grid_(grid), times_(times), data_(grid.size() * times.count, cplx{}) {}

  const SpatialGrid& grid() const { return grid_; }
  const TimeGrid& times() const { return times_; }
  std::size_t rows() const { return times_.count; }
  std::size_t cols() const { return grid_.size(); }

  std::span<cplx> row(std::size_t m) { return {data_.data() + m * cols(), cols()}; }
  std::span<const cplx> row(std::size_t m) const { return {data_.data() + m * cols(), cols()}; }
  cplx& operator()(std::size_t m, std::size_t j) { return data_[m * cols() + j]; }
  const cplx& operator()(std::size_t m, std::size_t j) const { return data_[m * cols() + j]; }

  Field snapshot(std::size_t m) const;
  void set_snapshot(std::size_t m, const Field& f);

  CVec& data() { return data_; }
  const CVec& data() const { return data_; }

  SpaceTimeField& operator+=(const SpaceTimeField& o);
  SpaceTimeField& operator-=(const SpaceTimeField& o);
  SpaceTimeField& operator*=(cplx a);

  /// Values at x = 0 as a series on the time grid.
  CVec trace() const;
  double max_abs() const;

 private:
  SpatialGrid grid_;
  TimeGrid times_;
  CVec data_;
};

/// Space-time L2 norm restricted to x >= 0 (trapezoid in x and t).
double halfline_spacetime_l2(const SpaceTimeField& f);
/// max |a - b| over x >= 0.
double halfline_sup_diff(const SpaceTimeField& a, const SpaceTimeField& b);

}  // namespace kgs
