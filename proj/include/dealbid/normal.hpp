#pragma once

#include <cmath>
#include <numbers>

namespace dealbid {

/// Standard normal density.
inline double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) * (std::numbers::inv_sqrtpi / std::numbers::sqrt2);
}

/// Standard normal CDF. erfc keeps full relative precision in both tails.
inline double normal_cdf(double z) {
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

/// Upper tail P(Z > z).
inline double normal_sf(double z) {
  return 0.5 * std::erfc(z / std::numbers::sqrt2);
}

}  // namespace dealbid
