#pragma once

#include <cmath>
#include <span>

namespace infomarket {

/// Neumaier-compensated sum. Keeps means such as (0.8 + 0.4 + 0.4 + 0.4) / 4
/// landing on the exact tie value 0.5.
inline double compensated_sum(std::span<const double> values) {
  double sum = 0.0;
  double carry = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      carry += (sum - t) + v;
    else
      carry += (v - t) + sum;
    sum = t;
  }
  return sum + carry;
}

inline double compensated_mean(std::span<const double> values) {
  return compensated_sum(values) / static_cast<double>(values.size());
}

/// ln(x / (1 - x)).
inline double logit(double x) { return std::log(x) - std::log1p(-x); }

inline double logistic(double m) {
  if (m >= 0.0) return 1.0 / (1.0 + std::exp(-m));
  const double e = std::exp(m);
  return e / (1.0 + e);
}

}  // namespace infomarket
