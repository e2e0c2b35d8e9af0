#pragma once

#include <cmath>
#include <numbers>

#include "genland/error.hpp"

namespace genland {

/// Bessel function of the first kind, order zero, for |x| < 50.
///
/// Power series up to |x| = 12, Hankel asymptotic expansion beyond (summed
/// until the terms stop decreasing). Absolute error stays below 1e-10.
inline double bessel_j0(double x) {
  const double ax = std::abs(x);
  if (!(ax < 50.0)) throw RangeError("bessel_j0: |x| must be below 50");

  if (ax <= 12.0) {
    const double q = 0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; ++k) {
      term *= -q / (static_cast<double>(k) * k);
      sum += term;
      if (std::abs(term) < 1e-18 * std::max(1.0, std::abs(sum))) break;
    }
    return sum;
  }

  // a_k = Π_{j≤k} (−(2j−1)²) / (k! (8x)^k); P collects even k, Q odd k.
  double p = 1.0;
  double q = 0.0;
  double term = 1.0;
  double previous = std::abs(term);
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= -odd * odd / (k * 8.0 * ax);
    if (std::abs(term) > previous) break;
    previous = std::abs(term);
    // term carries a_k/x^k; P = a0 − a2/x² + a4/x⁴ …, Q = a1/x − a3/x³ …
    switch (k % 4) {
      case 0: p += term; break;
      case 1: q += term; break;
      case 2: p -= term; break;
      case 3: q -= term; break;
    }
    if (previous < 1e-17) break;
  }
  const double phase = ax - 0.25 * std::numbers::pi;
  return std::sqrt(2.0 / (std::numbers::pi * ax)) * (p * std::cos(phase) - q * std::sin(phase));
}

}  // namespace genland
