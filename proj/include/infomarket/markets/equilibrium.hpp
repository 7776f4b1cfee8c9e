#pragma once

// Competitive-equilibrium solvers: every agent plays its price-taking best
// response and the market clears at the quoted price.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "infomarket/errors.hpp"
#include "infomarket/markets/best_response.hpp"
#include "infomarket/markets/mechanics.hpp"
#include "infomarket/model.hpp"
#include "infomarket/numeric.hpp"

namespace infomarket {

enum class MarketKind { Naive, Kelly, TaxedAsymptotic, TaxedFinite };

inline constexpr std::string_view to_string(MarketKind kind) {
  switch (kind) {
    case MarketKind::Naive: return "naive";
    case MarketKind::Kelly: return "kelly";
    case MarketKind::TaxedAsymptotic: return "taxed_asymptotic";
    case MarketKind::TaxedFinite: return "taxed_finite";
  }
  return "?";
}

inline MarketKind parse_market_kind(std::string_view name) {
  if (name == "naive") return MarketKind::Naive;
  if (name == "kelly") return MarketKind::Kelly;
  if (name == "taxed_asymptotic") return MarketKind::TaxedAsymptotic;
  if (name == "taxed_finite") return MarketKind::TaxedFinite;
  throw ValidationError("market: unknown kind '" + std::string(name) +
                        "' (expected naive|kelly|taxed_asymptotic|taxed_finite)");
}

struct SolverDiagnostics {
  int iterations = 0;
  /// |sum(sA)/p - sum(sB)/(1-p)| at the returned price.
  double residual = 0.0;
  /// No trade took place; the price is the common indifference point.
  bool degenerate = false;
};

struct EquilibriumResult {
  InvestmentProfile profile;
  double price = 0.0;
  MarketKind kind = MarketKind::Naive;
  std::optional<TaxParams> tax;
  SolverDiagnostics diagnostics;
};

namespace detail {

inline SolverDiagnostics diagnose(const InvestmentProfile& s, double price, int iterations) {
  SolverDiagnostics d;
  d.iterations = iterations;
  d.degenerate = s.total_a() == 0.0 && s.total_b() == 0.0;
  d.residual = clearing_residual(s, price);
  return d;
}

inline bool all_equal(std::span<const double> values) {
  return std::all_of(values.begin(), values.end(), [&](double v) { return v == values.front(); });
}

}  // namespace detail

/// Naive-market equilibrium by the two-routine scan over beliefs sorted from
/// strongest to weakest: first a full-investment split at a grid price i/n,
/// then a split at price b_i with agent i investing partially.
inline EquilibriumResult naive_equilibrium(const BeliefProfile& beliefs) {
  const std::size_t n = beliefs.size();
  const double nd = static_cast<double>(n);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return beliefs[x] > beliefs[y]; });
  std::vector<double> b(n);
  for (std::size_t r = 0; r < n; ++r) b[r] = beliefs[order[r]];

  // Ranked (sorted) stakes; rank r holds the (r+1)-th strongest belief.
  std::vector<double> sa(n, 0.0), sb(n, 0.0);
  double price = 0.0;
  int steps = 0;
  bool found = false;

  for (std::size_t i = 1; i < n && !found; ++i) {
    ++steps;
    const double grid = static_cast<double>(i) / nd;
    if (b[i - 1] >= grid && grid >= b[i]) {
      std::fill(sa.begin(), sa.begin() + static_cast<std::ptrdiff_t>(i), 1.0);
      std::fill(sb.begin() + static_cast<std::ptrdiff_t>(i), sb.end(), 1.0);
      price = grid;
      found = true;
    }
  }

  for (std::size_t i = 1; i <= n && !found; ++i) {
    ++steps;
    const double bi = b[i - 1];
    const double below = static_cast<double>(i - 1);
    const double above = static_cast<double>(n - i);
    if (below / nd < bi && bi < static_cast<double>(i) / nd) {
      std::fill(sa.begin(), sa.begin() + static_cast<std::ptrdiff_t>(i - 1), 1.0);
      std::fill(sb.begin() + static_cast<std::ptrdiff_t>(i), sb.end(), 1.0);
      // (1/b_i)((i-1) + x) = (1/(1-b_i))(n-i): partial A stake.
      const double x = bi * above / (1.0 - bi) - below;
      if (x >= 0.0) {
        sa[i - 1] = std::min(x, 1.0);
      } else {
        // (1/b_i)(i-1) = (1/(1-b_i))((n-i) + x): partial B stake.
        sb[i - 1] = std::clamp((1.0 - bi) * below / bi - above, 0.0, 1.0);
      }
      price = bi;
      found = true;
    }
  }

  if (!found) throw std::logic_error("naive_equilibrium: no routine produced an equilibrium");

  std::vector<double> a(n), bo(n);
  for (std::size_t r = 0; r < n; ++r) {
    a[order[r]] = sa[r];
    bo[order[r]] = sb[r];
  }
  EquilibriumResult result;
  result.profile = InvestmentProfile(std::move(a), std::move(bo));
  result.price = price;
  result.kind = MarketKind::Naive;
  result.diagnostics = detail::diagnose(result.profile, price, steps);
  return result;
}

/// Kelly-market equilibrium: the price is the mean belief.
inline EquilibriumResult kelly_equilibrium(const BeliefProfile& beliefs) {
  const double price = compensated_mean(beliefs.values());
  std::vector<Position> positions(beliefs.size());
  for (std::size_t i = 0; i < beliefs.size(); ++i) positions[i] = kelly_best_response(beliefs[i], price);
  EquilibriumResult result;
  result.profile = InvestmentProfile::from_positions(positions);
  result.price = price;
  result.kind = MarketKind::Kelly;
  result.diagnostics = detail::diagnose(result.profile, price, 0);
  return result;
}

/// Large-k taxed-market price: logistic of the mean belief log-odds.
inline double taxed_equilibrium_asymptotic(const BeliefProfile& beliefs) {
  std::vector<double> log_odds(beliefs.size());
  for (std::size_t i = 0; i < beliefs.size(); ++i) log_odds[i] = logit(beliefs[i]);
  return logistic(compensated_mean(log_odds));
}

struct TaxedSolverOptions {
  /// Price bracket is [margin, 1 - margin].
  double price_margin = 1e-9;
  double residual_tolerance = 1e-9;
  int max_iterations = 200;
};

/// Excess demand for A-securities at price p under taxed best responses.
inline double taxed_excess_demand(const BeliefProfile& beliefs, double p, TaxParams tax) {
  std::vector<double> a, b;
  a.reserve(beliefs.size());
  b.reserve(beliefs.size());
  for (std::size_t i = 0; i < beliefs.size(); ++i) {
    const Position pos = taxed_best_response(beliefs[i], p, tax);
    if (pos.side == Side::A) a.push_back(pos.fraction);
    if (pos.side == Side::B) b.push_back(pos.fraction);
  }
  return compensated_sum(a) / p - compensated_sum(b) / (1.0 - p);
}

/// Finite-k taxed-market equilibrium by nested bisection: outer on the price
/// (excess demand falls from positive to negative), inner on each stake.
inline EquilibriumResult taxed_equilibrium_finite(const BeliefProfile& beliefs, TaxParams tax,
                                                  const TaxedSolverOptions& options = {}) {
  EquilibriumResult result;
  result.kind = MarketKind::TaxedFinite;
  result.tax = tax;

  if (detail::all_equal(beliefs.values())) {
    result.price = beliefs[0];
    result.profile = InvestmentProfile::zeros(beliefs.size());
    result.diagnostics = detail::diagnose(result.profile, result.price, 0);
    return result;
  }

  auto demand = [&](double p) { return taxed_excess_demand(beliefs, p, tax); };
  const double lo = options.price_margin;
  const double hi = 1.0 - options.price_margin;
  const double d_lo = demand(lo);
  const double d_hi = demand(hi);
  if (!(d_lo > 0.0 && d_hi < 0.0))
    throw BracketingFailure("taxed_equilibrium_finite: excess demand does not change sign on the price bracket",
                            d_lo, d_hi);

  const detail::RootResult root = detail::bisect_decreasing(demand, lo, hi, options.max_iterations);

  std::vector<Position> positions(beliefs.size());
  for (std::size_t i = 0; i < beliefs.size(); ++i) positions[i] = taxed_best_response(beliefs[i], root.x, tax);
  result.price = root.x;
  result.profile = InvestmentProfile::from_positions(positions);
  result.diagnostics = detail::diagnose(result.profile, root.x, root.iterations);
  if (!(result.diagnostics.residual <= options.residual_tolerance))
    throw ConvergenceFailure("taxed_equilibrium_finite: clearing residual " +
                             std::to_string(result.diagnostics.residual) + " above tolerance");
  return result;
}

/// Both utilities of the single-security / full-investment comparison.
struct UtilityPair {
  /// Kelly stake on the favoured security, remainder kept as cash.
  double single_security;
  /// Whole endowment split b on A and 1 - b on B.
  double full_investment;
};

/// Compares the full-investment optimum (stake b on A, 1 - b on B) with the
/// single-security Kelly stake plus retained cash; the two coincide.
inline UtilityPair full_investment_equivalence(double b, double p) {
  detail::require_open_price(p, "full_investment_equivalence");
  detail::require_probability(b, "full_investment_equivalence");
  // Unrestricted utility: b ln(sA/p + c) + (1-b) ln(sB/(1-p) + c).
  auto unrestricted = [&](double stake_a, double stake_b, double cash) {
    return detail::weighted_log(b, stake_a / p + cash) +
           detail::weighted_log(1.0 - b, stake_b / (1.0 - p) + cash);
  };
  const Position single = kelly_best_response(b, p);
  const double stake_a = single.side == Side::A ? single.fraction : 0.0;
  const double stake_b = single.side == Side::B ? single.fraction : 0.0;
  return {unrestricted(stake_a, stake_b, 1.0 - single.fraction), unrestricted(b, 1.0 - b, 0.0)};
}

}  // namespace infomarket
