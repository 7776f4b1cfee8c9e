#pragma once

// Election vs. market: binarize the equilibrium price and compare it with the
// weighted-majority outcome under the matching weights.
//
//   simple majority      <-> Naive market
//   weights 2q - 1       <-> Kelly market
//   weights ln(q/(1-q))  <-> taxed market (exact only as k -> infinity)

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "infomarket/markets.hpp"
#include "infomarket/model.hpp"
#include "infomarket/voting.hpp"

namespace infomarket {

enum class EquivalenceScheme { SimpleNaive, LinearKelly, LogOddsTaxed };

inline constexpr std::string_view to_string(EquivalenceScheme s) {
  switch (s) {
    case EquivalenceScheme::SimpleNaive: return "simple_naive";
    case EquivalenceScheme::LinearKelly: return "linear_kelly";
    case EquivalenceScheme::LogOddsTaxed: return "logodds_taxed";
  }
  return "?";
}

struct EquivalenceReport {
  EquivalenceScheme scheme;
  Decision election;
  Decision market;
  bool agree;
  double price;
  double weighted_margin;
  /// False for finite-k taxed markets, where agreement is not a theorem.
  bool guaranteed = true;
  std::optional<TaxParams> tax;
};

namespace detail {

inline EquivalenceReport make_report(EquivalenceScheme scheme, const CompetenceProfile& q,
                                     const SignalProfile& y, WeightScheme weights, double price) {
  const VotingProfile votes = VotingProfile::sincere(beliefs_from_signals(q, y).values());
  const WeightProfile w = weights_for(weights, q);
  EquivalenceReport r{};
  r.scheme = scheme;
  r.weighted_margin = weighted_margin(votes, w);
  r.election = weighted_majority(votes, w, kTieTolerance);
  r.price = price;
  r.market = binarize(price, kTieTolerance);
  r.agree = r.election == r.market;
  return r;
}

}  // namespace detail

inline EquivalenceReport check_simple_naive(const CompetenceProfile& q, const SignalProfile& y) {
  const double price = naive_equilibrium(beliefs_from_signals(q, y)).price;
  return detail::make_report(EquivalenceScheme::SimpleNaive, q, y, WeightScheme::Egalitarian, price);
}

inline EquivalenceReport check_linear_kelly(const CompetenceProfile& q, const SignalProfile& y) {
  const double price = kelly_equilibrium(beliefs_from_signals(q, y)).price;
  return detail::make_report(EquivalenceScheme::LinearKelly, q, y, WeightScheme::Linear, price);
}

/// Without k the market side is the large-k price; with k it is the finite-k
/// equilibrium, whose disagreement is reported but not guaranteed against.
inline EquivalenceReport check_logodds_taxed(const CompetenceProfile& q, const SignalProfile& y,
                                             std::optional<TaxParams> tax = std::nullopt) {
  const BeliefProfile b = beliefs_from_signals(q, y);
  const double price = tax ? taxed_equilibrium_finite(b, *tax).price : taxed_equilibrium_asymptotic(b);
  EquivalenceReport r = detail::make_report(EquivalenceScheme::LogOddsTaxed, q, y, WeightScheme::LogOdds, price);
  r.guaranteed = !tax.has_value();
  r.tax = tax;
  return r;
}

inline EquivalenceReport check_equivalence(EquivalenceScheme scheme, const CompetenceProfile& q,
                                           const SignalProfile& y, std::optional<TaxParams> tax = std::nullopt) {
  switch (scheme) {
    case EquivalenceScheme::SimpleNaive: return check_simple_naive(q, y);
    case EquivalenceScheme::LinearKelly: return check_linear_kelly(q, y);
    case EquivalenceScheme::LogOddsTaxed: return check_logodds_taxed(q, y, tax);
  }
  throw ValidationError("check_equivalence: unknown scheme");
}

/// Every signal profile of q, in the enumeration order of enumerate_signal_space.
inline std::vector<SignalProfile> all_signal_profiles(const CompetenceProfile& q) {
  std::vector<SignalProfile> out;
  for (auto& entry : enumerate_signal_space(q, Signal::A)) out.push_back(std::move(entry.profile));
  return out;
}

struct SweepSummary {
  std::size_t checked = 0;
  std::size_t agreed = 0;
  std::vector<EquivalenceReport> disagreements;

  double agreement_rate() const {
    return checked == 0 ? 1.0 : static_cast<double>(agreed) / static_cast<double>(checked);
  }
};

inline SweepSummary exhaustive_sweep(const CompetenceProfile& q, EquivalenceScheme scheme,
                                     std::optional<TaxParams> tax = std::nullopt) {
  SweepSummary summary;
  for (const SignalProfile& y : all_signal_profiles(q)) {
    EquivalenceReport r = check_equivalence(scheme, q, y, tax);
    ++summary.checked;
    if (r.agree)
      ++summary.agreed;
    else
      summary.disagreements.push_back(r);
  }
  return summary;
}

}  // namespace infomarket
