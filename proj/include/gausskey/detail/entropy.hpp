#pragma once

#include <cmath>
#include <numbers>

namespace gausskey::detail {

/// Above this argument h(x) is evaluated as ((x+1)/2)·log₂((1+1/x)/(1−1/x)) +
/// log₂((x−1)/2), which avoids the cancellation of two large x·log x terms.
/// The AVX2 kernel switches at the same point.
inline constexpr double kEntropySplit = 6.0;

/// h(x) for x ≥ 1 with no domain checks; anything ≤ 1 maps to 0.
inline double entropy_h_unchecked(double x) {
  if (!(x > 1.0)) return 0.0;
  const double a = 0.5 * (x + 1.0);
  const double b = 0.5 * (x - 1.0);
  if (x < kEntropySplit) return a * std::log2(a) - b * std::log2(b);
  return a * (2.0 * std::atanh(1.0 / x)) * std::numbers::log2e + std::log2(b);
}

}  // namespace gausskey::detail
