#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kgs/core/spacetime.hpp"

namespace kgs {

enum class WeightKind { Schrodinger, WavePlus, WaveMinus, WaveInf };

const char* to_string(WeightKind k);

/// <xi>^s <lambda>^b with lambda = tau + xi^2 (Schrodinger) or tau -+ xi
/// (waves), for the transform \int\int e^{-i x xi - i t tau} f dx dt. With
/// this sign the free flows e^{it Delta} and e^{+-itD} sit where the
/// modulation factor is smallest. WaveInf combines the two wave weights as
/// (w+^-2 + w-^-2)^{-1/2}, the pointwise optimal split of n = n+ + n-.
struct BourgainWeight {
  WeightKind kind = WeightKind::Schrodinger;
  double s = 0.0;
  double b = 0.0;

  double operator()(double xi, double tau) const;
};

/// Weighted space-time L2 norm of a field sampled on the rows of `f`.
/// Warns (into `warnings`) when the first or last snapshot is not small.
double bourgain_norm(const SpaceTimeField& f, const BourgainWeight& w, std::vector<std::string>* warnings = nullptr);
double xsb_norm(const SpaceTimeField& f, double s, double b, std::vector<std::string>* warnings = nullptr);
double ysb_norm(const SpaceTimeField& f, double s, double b, WeightKind kind,
                std::vector<std::string>* warnings = nullptr);

struct RatioResult {
  double value = 0.0;
  bool defined = false;
  std::vector<std::string> warnings;
};

/// ||u conj(v)||_{Y^{s1+a,-b}} / (||u||_{X^{s0,b}} ||v||_{X^{s0,b}}).
RatioResult bilinear_ratio_wave_target(const SpaceTimeField& u, const SpaceTimeField& v, double s0, double s1,
                                       double a, double b);
/// ||u n||_{X^{s0+a,-b}} / (||u||_{X^{s0,b}} ||n||_{Y^{s1,b}}).
RatioResult bilinear_ratio_schrodinger_target(const SpaceTimeField& u, const SpaceTimeField& n, double s0,
                                              double s1, double a, double b);

struct EnsembleParams {
  std::size_t count = 50;
  std::uint64_t seed = 20240611;
  std::vector<std::size_t> grid_sizes{64, 128, 256};
  double half_width = 10.0;
  double band = 4.0;          ///< spatial frequencies |xi| <= band
  double decay = 1.0;         ///< amplitude ~ <xi>^{-decay}
  double time_half_window = 4.0;
  std::size_t time_samples = 512;
  double s0 = 0.0;
  double s1 = 0.0;
  double b = 0.4;
  double a = 0.2;
  double T = 0.5;
  double slope_tol = 0.1;

  void validate() const;
};

struct EstimateStats {
  std::string name;
  std::vector<std::size_t> grid_sizes;
  std::vector<double> max_ratio;
  std::vector<double> median_ratio;
  double slope = 0.0;  ///< d log(max ratio) / d log N
  bool undefined_seen = false;
};

struct EnsembleReport {
  EnsembleParams params;
  std::vector<EstimateStats> estimates;
  std::vector<std::string> warnings;
  bool refinement_stable = true;
};

/// Random band-limited, eta-localized members; the same members are sampled
/// on every grid size, so only the discretization changes with N.
EnsembleReport ensemble_estimate_suite(const EnsembleParams& params);

}  // namespace kgs
