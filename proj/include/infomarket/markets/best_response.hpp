#pragma once

// Price-taking optimal stakes for the three utility models.

#include <cmath>
#include <cstdint>

#include "infomarket/errors.hpp"
#include "infomarket/markets/mechanics.hpp"

namespace infomarket {

/// Optimal fractions on one side under linear utility: {0}, {1} or all of [0, 1].
enum class FractionSet : std::uint8_t { Zero, One, Any };

struct NaiveBestResponse {
  FractionSet a_side;
  FractionSet b_side;

  bool indifferent() const { return a_side == FractionSet::Any; }

  Side side() const {
    if (a_side == FractionSet::One) return Side::A;
    if (b_side == FractionSet::One) return Side::B;
    return Side::None;
  }
};

inline NaiveBestResponse naive_best_response(double b, double p) {
  detail::require_open_price(p, "naive_best_response");
  detail::require_probability(b, "naive_best_response");
  if (b > p) return {FractionSet::One, FractionSet::Zero};
  if (b < p) return {FractionSet::Zero, FractionSet::One};
  return {FractionSet::Any, FractionSet::Any};
}

/// Kelly stake: (b - p)/(1 - p) on A when b > p, (p - b)/p on B when b < p.
inline Position kelly_best_response(double b, double p) {
  detail::require_open_price(p, "kelly_best_response");
  detail::require_probability(b, "kelly_best_response");
  if (b > p) return {Side::A, (b - p) / (1.0 - p)};
  if (b < p) return {Side::B, (p - b) / p};
  return {};
}

/// First-order condition of the A-side taxed utility, as LHS - RHS of
///   k b e^{-ks} / (k p/(1-p) + 1 - e^{-ks}) = (1 - b)/(1 - s).
/// Decreasing in s; positive at s = 0 exactly when b > p.
inline double taxed_foc_residual(double b, double p, double s, TaxParams tax) {
  const double k = tax.k();
  const double decay = std::exp(-k * s);
  return k * b * decay / (k * p / (1.0 - p) - std::expm1(-k * s)) - (1.0 - b) / (1.0 - s);
}

/// Upper end of the stake bracket searched by the taxed best response.
inline constexpr double kStakeCeiling = 1.0 - 1e-9;

namespace detail {

/// Same sign as taxed_foc_residual with both denominators cleared.
inline double taxed_foc_cleared(double b, double p, double s, double k) {
  return k * b * std::exp(-k * s) * (1.0 - s) - (1.0 - b) * (k * p / (1.0 - p) - std::expm1(-k * s));
}

struct RootResult {
  double x;
  int iterations;
  /// False when `max_iterations` ran out before the bracket collapsed.
  bool converged;
};

/// Bisection for a decreasing function with f(lo) > 0 > f(hi), carried until
/// the bracket collapses to adjacent doubles or `max_iterations` is hit.
template <class F>
RootResult bisect_decreasing(F&& f, double lo, double hi, int max_iterations) {
  double f_lo = f(lo);
  double f_hi = f(hi);
  int it = 0;
  while (it < max_iterations) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) return {std::abs(f_lo) <= std::abs(f_hi) ? lo : hi, it, true};
    ++it;
    const double fm = f(mid);
    if (fm > 0.0) {
      lo = mid;
      f_lo = fm;
    } else if (fm < 0.0) {
      hi = mid;
      f_hi = fm;
    } else {
      return {mid, it, true};
    }
  }
  return {std::abs(f_lo) <= std::abs(f_hi) ? lo : hi, it, false};
}

inline double taxed_stake_a_side(double b, double p, double k, int* iterations) {
  auto g = [&](double s) { return taxed_foc_cleared(b, p, s, k); };
  const double g0 = g(0.0);
  if (!(g0 > 0.0)) return 0.0;
  const double g1 = g(kStakeCeiling);
  if (!(g1 < 0.0))
    throw BracketingFailure("taxed_best_response: first-order condition does not change sign on [0, 1 - 1e-9]",
                            g0, g1);
  // Enough halvings to reach subnormal stakes from [0, 1].
  const RootResult r = bisect_decreasing(g, 0.0, kStakeCeiling, 1100);
  if (!r.converged)
    throw ConvergenceFailure("taxed_best_response: stake bisection did not converge (b = " + std::to_string(b) +
                             ", p = " + std::to_string(p) + ", k = " + std::to_string(k) + ")");
  if (iterations) *iterations += r.iterations;
  return r.x;
}

}  // namespace detail

/// Taxed-market stake: the root of the first-order condition on the favoured
/// side, bisected to machine precision; zero when b == p.
inline Position taxed_best_response(double b, double p, TaxParams tax, int* iterations = nullptr) {
  detail::require_open_price(p, "taxed_best_response");
  detail::require_probability(b, "taxed_best_response");
  if (b > p) return {Side::A, detail::taxed_stake_a_side(b, p, tax.k(), iterations)};
  if (b < p) return {Side::B, detail::taxed_stake_a_side(1.0 - b, 1.0 - p, tax.k(), iterations)};
  return {};
}

/// Large-k form of the taxed stake, signed (+A / -B):
/// (1/k) ln((1-p)/p * b/(1-b)).
inline double taxed_asymptotic_strategy(double b, double p, TaxParams tax) {
  detail::require_open_price(p, "taxed_asymptotic_strategy");
  return (logit(b) - logit(p)) / tax.k();
}

}  // namespace infomarket
