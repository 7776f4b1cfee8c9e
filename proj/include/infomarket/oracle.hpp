#pragma once

// Brute-force cross-checks for the market solvers and the accuracy code.
// Everything here is restated from the raw utility and likelihood formulas;
// nothing calls into the solvers or their best-response shortcuts.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "infomarket/errors.hpp"
#include "infomarket/markets/equilibrium.hpp"
#include "infomarket/model.hpp"

namespace infomarket::oracle {

inline constexpr std::size_t kMaxGridAgents = 8;
inline constexpr std::size_t kMaxEnumerationAgents = 12;

struct GridSpec {
  /// Price grid points over [0, 1]; the endpoints themselves are skipped.
  std::size_t resolution = 10'001;
  /// Strategy grid points over [0, 1] for the utility argmax.
  std::size_t strategy_resolution = 1'001;
  /// Accept a grid price when the clearing residual is this close to zero.
  double tolerance = 1e-8;

  void validate() const {
    if (resolution < 3 || strategy_resolution < 3)
      throw ValidationError("grid: resolutions must be >= 3");
    if (!(tolerance > 0.0)) throw ValidationError("grid: tolerance must be > 0");
  }

  double step() const { return 1.0 / static_cast<double>(resolution - 1); }
};

/// Closed price interval that contains a zero of the clearing residual.
struct PriceInterval {
  double lo;
  double hi;

  bool contains(double p, double slack = 0.0) const { return lo - slack <= p && p <= hi + slack; }
  double width() const { return hi - lo; }
};

namespace detail {

inline double xlog(double weight, double x) {
  if (weight == 0.0) return 0.0;
  return x > 0.0 ? weight * std::log(x) : -std::numeric_limits<double>::infinity();
}

/// Utility of staking s on a security priced `price` that pays with
/// probability `win`, for the smooth (log-type) markets.
using StakeUtility = std::function<double(double price, double win, double s)>;

inline StakeUtility kelly_stake_utility() {
  return [](double price, double win, double s) {
    return xlog(win, s / price - s + 1.0) + xlog(1.0 - win, 1.0 - s);
  };
}

inline StakeUtility taxed_stake_utility(double k) {
  return [k](double price, double win, double s) {
    // Net gain s(1-price)/price passed through T(x) = (1 - e^{-c x})/c, c = k price/(1-price).
    const double c = k * price / (1.0 - price);
    const double net = s * (1.0 - price) / price;
    const double taxed = (1.0 - std::exp(-c * net)) / c;
    return xlog(win, 1.0 + taxed) + xlog(1.0 - win, 1.0 - s);
  };
}

/// argmax over [0, 1) of a concave stake utility: grid scan, then golden
/// section inside the neighbouring grid cells.
inline std::pair<double, double> maximize_stake(const StakeUtility& u, double price, double win,
                                                std::size_t resolution) {
  const double top = std::nextafter(1.0, 0.0);
  const double h = 1.0 / static_cast<double>(resolution - 1);
  std::size_t best = 0;
  double best_u = u(price, win, 0.0);
  for (std::size_t j = 1; j < resolution; ++j) {
    const double s = std::min(static_cast<double>(j) * h, top);
    const double v = u(price, win, s);
    if (v > best_u) {
      best_u = v;
      best = j;
    }
  }
  double a = best == 0 ? 0.0 : static_cast<double>(best - 1) * h;
  double b = std::min(static_cast<double>(best + 1) * h, top);
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double u1 = u(price, win, x1);
  double u2 = u(price, win, x2);
  for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
    if (u1 < u2) {
      a = x1;
      x1 = x2;
      u1 = u2;
      x2 = a + phi * (b - a);
      u2 = u(price, win, x2);
    } else {
      b = x2;
      x2 = x1;
      u2 = u1;
      x1 = b - phi * (b - a);
      u1 = u(price, win, x1);
    }
  }
  double s = 0.5 * (a + b);
  double v = u(price, win, s);
  const double v0 = u(price, win, 0.0);
  if (v0 >= v) return {0.0, v0};
  if (best_u > v) return {static_cast<double>(best) * h, best_u};
  return {s, v};
}

/// Residual range [lo, hi] of sum(sA)/p - sum(sB)/(1-p) over all best
/// responses at price p (a range only when some agent is indifferent).
struct ResidualRange {
  double lo;
  double hi;
};

inline ResidualRange naive_residual(std::span<const double> beliefs, double p) {
  double a = 0.0, b = 0.0, free = 0.0;
  for (double belief : beliefs) {
    // Expected wealth of going all-in on A is belief/p, on B (1-belief)/(1-p);
    // holding cash is worth 1.
    const double all_in_a = belief * (1.0 / p - 1.0 + 1.0);
    const double all_in_b = (1.0 - belief) * (1.0 / (1.0 - p) - 1.0 + 1.0);
    if (all_in_a > 1.0)
      a += 1.0;
    else if (all_in_b > 1.0)
      b += 1.0;
    else
      free += 1.0;
  }
  return {a / p - (b + free) / (1.0 - p), (a + free) / p - b / (1.0 - p)};
}

inline ResidualRange smooth_residual(std::span<const double> beliefs, double p, const StakeUtility& u,
                                     std::size_t strategy_resolution) {
  double a = 0.0, b = 0.0;
  for (double belief : beliefs) {
    const auto [sa, ua] = maximize_stake(u, p, belief, strategy_resolution);
    const auto [sb, ub] = maximize_stake(u, 1.0 - p, 1.0 - belief, strategy_resolution);
    if (ua >= ub)
      a += sa;
    else
      b += sb;
  }
  const double r = a / p - b / (1.0 - p);
  return {r, r};
}

}  // namespace detail

/// Scans the price grid for competitive-equilibrium prices. A grid price is a
/// candidate when its residual range touches zero; a grid cell is a candidate
/// when the residual changes sign strictly across it. Adjacent candidates are
/// merged into intervals, returned in increasing price order.
inline std::vector<PriceInterval> grid_equilibrium_search(const BeliefProfile& beliefs, MarketKind kind,
                                                          const GridSpec& grid = {},
                                                          std::optional<TaxParams> tax = std::nullopt) {
  grid.validate();
  if (beliefs.size() > kMaxGridAgents)
    throw ValidationError("grid_equilibrium_search: n = " + std::to_string(beliefs.size()) +
                          " exceeds the limit of " + std::to_string(kMaxGridAgents));

  std::function<detail::ResidualRange(double)> residual;
  switch (kind) {
    case MarketKind::Naive:
      residual = [&](double p) { return detail::naive_residual(beliefs.values(), p); };
      break;
    case MarketKind::Kelly: {
      auto u = detail::kelly_stake_utility();
      residual = [&, u](double p) {
        return detail::smooth_residual(beliefs.values(), p, u, grid.strategy_resolution);
      };
      break;
    }
    case MarketKind::TaxedFinite: {
      if (!tax) throw ValidationError("grid_equilibrium_search: taxed market needs k");
      auto u = detail::taxed_stake_utility(tax->k());
      residual = [&, u](double p) {
        return detail::smooth_residual(beliefs.values(), p, u, grid.strategy_resolution);
      };
      break;
    }
    case MarketKind::TaxedAsymptotic:
      throw ValidationError("grid_equilibrium_search: the asymptotic taxed market has no finite utility");
  }

  const double step = grid.step();
  const double tol = grid.tolerance;
  std::vector<PriceInterval> raw;
  std::optional<detail::ResidualRange> prev;
  double prev_p = 0.0;
  for (std::size_t j = 1; j + 1 < grid.resolution; ++j) {
    const double p = static_cast<double>(j) / static_cast<double>(grid.resolution - 1);
    const detail::ResidualRange r = residual(p);
    if (prev) {
      const bool down = prev->lo > tol && r.hi < -tol;
      const bool up = prev->hi < -tol && r.lo > tol;
      if (down || up) raw.push_back({prev_p, p});
    }
    if (r.lo <= tol && r.hi >= -tol) raw.push_back({p, p});
    prev = r;
    prev_p = p;
  }

  std::vector<PriceInterval> merged;
  for (const PriceInterval& c : raw) {
    if (!merged.empty() && c.lo <= merged.back().hi + 1.5 * step)
      merged.back().hi = std::max(merged.back().hi, c.hi);
    else
      merged.push_back(c);
  }
  return merged;
}

/// An interval narrower than three grid steps counts as a located equilibrium.
inline bool is_located(const PriceInterval& interval, const GridSpec& grid) {
  return interval.width() < 3.0 * grid.step();
}

struct OracleAccuracy {
  double value;
  double given_a;
  double given_b;
};

/// Group accuracy by enumerating every signal realization for both states.
/// Correct singleton decisions score 1, ties 1/2.
inline OracleAccuracy exhaustive_accuracy_oracle(
    const CompetenceProfile& q, const std::function<Decision(const CompetenceProfile&, std::span<const Signal>)>& decide) {
  const std::size_t n = q.size();
  if (n > kMaxEnumerationAgents)
    throw ValidationError("exhaustive_accuracy_oracle: n = " + std::to_string(n) + " exceeds the limit of " +
                          std::to_string(kMaxEnumerationAgents));
  double given[2] = {0.0, 0.0};
  std::vector<Signal> y(n);
  for (int state = 0; state < 2; ++state) {
    const Signal truth = state == 0 ? Signal::A : Signal::B;
    for (unsigned long mask = 0; mask < (1UL << n); ++mask) {
      double likelihood = 1.0;
      for (std::size_t i = 0; i < n; ++i) {
        const bool hit = ((mask >> i) & 1UL) == 0;
        y[i] = hit ? truth : (truth == Signal::A ? Signal::B : Signal::A);
        likelihood *= hit ? q[i] : 1.0 - q[i];
      }
      const Decision d = decide(q, y);
      const bool correct = truth == Signal::A ? d == Decision::A : d == Decision::B;
      given[state] += likelihood * (correct ? 1.0 : d == Decision::Tie ? 0.5 : 0.0);
    }
  }
  return {0.5 * (given[0] + given[1]), given[0], given[1]};
}

}  // namespace infomarket::oracle
