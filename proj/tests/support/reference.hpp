#pragma once

// Reference values computed without the library solvers.

#include <cmath>
#include <span>

namespace infomarket::testing {

inline double ref_logit(double x) { return std::log(x / (1.0 - x)); }

/// Limit of the finite-k taxed price as k grows: the root of
///   (1 - p) sum_{b_i > p} (l_i - l_p) = p sum_{b_i < p} (l_p - l_i),
/// with l the log-odds, found by plain bisection.
inline double taxed_large_k_root(std::span<const double> beliefs) {
  auto f = [&](double p) {
    const double lp = ref_logit(p);
    double up = 0.0, down = 0.0;
    for (double b : beliefs) {
      if (b > p) up += ref_logit(b) - lp;
      if (b < p) down += lp - ref_logit(b);
    }
    return (1.0 - p) * up - p * down;
  };
  double lo = 1e-9, hi = 1.0 - 1e-9;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Probability that a strict majority of n (odd) jurors of competence q is right.
inline double binomial_majority(int n, double q) {
  double total = 0.0;
  for (int k = n / 2 + 1; k <= n; ++k)
    total += std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) + k * std::log(q) +
                      (n - k) * std::log1p(-q));
  return total;
}

}  // namespace infomarket::testing
