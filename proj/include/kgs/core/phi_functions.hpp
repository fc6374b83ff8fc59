#pragma once

#include <complex>

namespace kgs {

// phi1(z) = (e^z - 1)/z and phi2(z) = (e^z - 1 - z)/z^2, evaluated by
// Taylor series near 0 where the closed forms cancel.
inline std::complex<double> phi1(std::complex<double> z) {
  if (std::abs(z) < 0.5) {
    std::complex<double> term = 1.0, sum = 1.0;
    for (int k = 2; k < 22; ++k) {
      term *= z / static_cast<double>(k);
      sum += term;
    }
    return sum;
  }
  return (std::exp(z) - 1.0) / z;
}

inline std::complex<double> phi2(std::complex<double> z) {
  if (std::abs(z) < 0.5) {
    std::complex<double> term = 0.5, sum = 0.5;
    for (int k = 3; k < 23; ++k) {
      term *= z / static_cast<double>(k);
      sum += term;
    }
    return sum;
  }
  return (std::exp(z) - 1.0 - z) / (z * z);
}

}  // namespace kgs
