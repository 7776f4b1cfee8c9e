#pragma once

// Weighted-majority choice functions and the three weight schemes.

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "infomarket/errors.hpp"
#include "infomarket/model.hpp"
#include "infomarket/numeric.hpp"

namespace infomarket {

class WeightProfile {
 public:
  explicit WeightProfile(std::vector<double> w) : w_(std::move(w)) {
    if (w_.empty()) throw ValidationError("weights: need at least one agent");
    bool any_positive = false;
    for (std::size_t i = 0; i < w_.size(); ++i) {
      if (!(std::isfinite(w_[i]) && w_[i] >= 0.0))
        throw ValidationError("weights[" + std::to_string(i) + "]: must be finite and >= 0");
      any_positive = any_positive || w_[i] > 0.0;
    }
    if (!any_positive) throw ValidationError("weights: at least one weight must be positive");
  }

  std::size_t size() const noexcept { return w_.size(); }
  double operator[](std::size_t i) const { return w_[i]; }
  std::span<const double> values() const noexcept { return w_; }
  double total() const { return compensated_sum(w_); }

 private:
  std::vector<double> w_;
};

/// Votes in {1, 0}; 1 is a vote for A.
class VotingProfile {
 public:
  explicit VotingProfile(std::vector<std::uint8_t> v) : v_(std::move(v)) {
    if (v_.empty()) throw ValidationError("votes: need at least one agent");
    for (std::size_t i = 0; i < v_.size(); ++i)
      if (v_[i] > 1) throw ValidationError("votes[" + std::to_string(i) + "]: must be 0 or 1");
  }

  /// Sincere votes: each agent votes for the state its belief favours.
  static VotingProfile sincere(std::span<const double> beliefs) {
    std::vector<std::uint8_t> v(beliefs.size());
    for (std::size_t i = 0; i < beliefs.size(); ++i) {
      const Decision d = binarize(beliefs[i]);
      if (d == Decision::Tie)
        throw ValidationError("votes[" + std::to_string(i) + "]: belief 0.5 casts no vote");
      v[i] = d == Decision::A ? 1 : 0;
    }
    return VotingProfile(std::move(v));
  }

  static VotingProfile from_signals(std::span<const Signal> y) {
    std::vector<std::uint8_t> v(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) v[i] = y[i] == Signal::A ? 1 : 0;
    return VotingProfile(std::move(v));
  }

  std::size_t size() const noexcept { return v_.size(); }
  std::uint8_t operator[](std::size_t i) const { return v_[i]; }
  std::span<const std::uint8_t> values() const noexcept { return v_; }

 private:
  std::vector<std::uint8_t> v_;
};

/// Signed weighted support: sum of weights voting A minus weights voting B.
/// Positive exactly when sum(w_i v_i) > sum(w_i) / 2.
inline double weighted_margin(const VotingProfile& v, const WeightProfile& w) {
  if (v.size() != w.size())
    throw ValidationError("weighted_majority: votes length " + std::to_string(v.size()) +
                          " does not match weights length " + std::to_string(w.size()));
  std::vector<double> signed_w(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) signed_w[i] = v[i] ? w[i] : -w[i];
  return compensated_sum(signed_w);
}

/// Weighted majority. A margin within `relative_tie_tolerance * sum(w)` of zero
/// is a tie; pass 0 for a strict comparison on the computed sums.
inline Decision weighted_majority(const VotingProfile& v, const WeightProfile& w,
                                  double relative_tie_tolerance = kTieTolerance) {
  const double margin = weighted_margin(v, w);
  const double band = relative_tie_tolerance * w.total();
  if (margin > band) return Decision::A;
  if (margin < -band) return Decision::B;
  return Decision::Tie;
}

inline WeightProfile weights_egalitarian(std::size_t n) {
  if (n == 0) throw ValidationError("weights_egalitarian: n must be >= 1");
  return WeightProfile(std::vector<double>(n, 1.0));
}

/// w_i = 2 q_i - 1: the weights a Kelly market implements.
inline WeightProfile weights_linear(const CompetenceProfile& q) {
  std::vector<double> w(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) w[i] = 2.0 * q[i] - 1.0;
  return WeightProfile(std::move(w));
}

/// w_i = ln(q_i / (1 - q_i)): the accuracy-maximizing weights.
inline WeightProfile weights_log_odds(const CompetenceProfile& q) {
  std::vector<double> w(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) w[i] = logit(q[i]);
  return WeightProfile(std::move(w));
}

enum class WeightScheme { Egalitarian, Linear, LogOdds };

inline constexpr std::string_view to_string(WeightScheme s) {
  switch (s) {
    case WeightScheme::Egalitarian: return "egalitarian";
    case WeightScheme::Linear: return "linear";
    case WeightScheme::LogOdds: return "log_odds";
  }
  return "?";
}

inline WeightScheme parse_weight_scheme(std::string_view name) {
  if (name == "egalitarian") return WeightScheme::Egalitarian;
  if (name == "linear") return WeightScheme::Linear;
  if (name == "log_odds") return WeightScheme::LogOdds;
  throw ValidationError("weights: unknown scheme '" + std::string(name) +
                        "' (expected egalitarian|linear|log_odds)");
}

inline WeightProfile weights_for(WeightScheme scheme, const CompetenceProfile& q) {
  switch (scheme) {
    case WeightScheme::Egalitarian: return weights_egalitarian(q.size());
    case WeightScheme::Linear: return weights_linear(q);
    case WeightScheme::LogOdds: return weights_log_odds(q);
  }
  throw ValidationError("weights: unknown scheme");
}

}  // namespace infomarket
