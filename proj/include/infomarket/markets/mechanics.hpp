#pragma once

// Two Arrow securities priced p (A) and 1 - p (B); unit endowments; each
// agent stakes a fraction of its endowment on at most one side.

#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "infomarket/errors.hpp"
#include "infomarket/numeric.hpp"

namespace infomarket {

enum class Side { None, A, B };

inline constexpr std::string_view to_string(Side s) {
  switch (s) {
    case Side::None: return "none";
    case Side::A: return "A";
    case Side::B: return "B";
  }
  return "?";
}

/// One agent's stake: the side bought and the fraction of endowment spent.
struct Position {
  Side side = Side::None;
  double fraction = 0.0;

  /// +fraction for A, -fraction for B.
  double signed_fraction() const {
    return side == Side::A ? fraction : side == Side::B ? -fraction : 0.0;
  }

  friend bool operator==(const Position&, const Position&) = default;
};

namespace detail {

inline void require_open_price(double p, const char* what) {
  if (!(p > 0.0 && p < 1.0))
    throw ValidationError(std::string(what) + ": price must lie in (0, 1), got " + std::to_string(p));
}

inline void require_fraction(double s, const char* what) {
  if (!(s >= 0.0 && s <= 1.0))
    throw ValidationError(std::string(what) + ": fraction must lie in [0, 1], got " + std::to_string(s));
}

inline void require_probability(double b, const char* what) {
  if (!(b >= 0.0 && b <= 1.0))
    throw ValidationError(std::string(what) + ": belief must lie in [0, 1], got " + std::to_string(b));
}

/// Maps a B-side question onto the A-side one: (p, b) -> (1 - p, 1 - b).
inline std::pair<double, double> oriented(double p, double b, Side side) {
  if (side == Side::A) return {p, b};
  if (side == Side::B) return {1.0 - p, 1.0 - b};
  throw ValidationError("utility: side must be A or B");
}

/// weight * ln(x) with the 0 * ln(0) = 0 convention.
inline double weighted_log(double weight, double x) {
  if (weight == 0.0) return 0.0;
  if (x <= 0.0) return -std::numeric_limits<double>::infinity();
  return weight * std::log(x);
}

}  // namespace detail

/// Paired per-agent stakes in A- and B-securities.
class InvestmentProfile {
 public:
  InvestmentProfile() = default;

  InvestmentProfile(std::vector<double> a, std::vector<double> b) : a_(std::move(a)), b_(std::move(b)) {
    if (a_.size() != b_.size())
      throw ValidationError("investment profile: sA length " + std::to_string(a_.size()) +
                            " differs from sB length " + std::to_string(b_.size()));
    for (std::size_t i = 0; i < a_.size(); ++i) {
      detail::require_fraction(a_[i], "investment profile sA");
      detail::require_fraction(b_[i], "investment profile sB");
      if (a_[i] * b_[i] != 0.0)
        throw ValidationError("investment profile: agent " + std::to_string(i) +
                              " invests in both securities");
    }
  }

  static InvestmentProfile zeros(std::size_t n) {
    return InvestmentProfile(std::vector<double>(n, 0.0), std::vector<double>(n, 0.0));
  }

  static InvestmentProfile from_positions(const std::vector<Position>& positions) {
    std::vector<double> a(positions.size(), 0.0), b(positions.size(), 0.0);
    for (std::size_t i = 0; i < positions.size(); ++i) {
      if (positions[i].side == Side::A) a[i] = positions[i].fraction;
      if (positions[i].side == Side::B) b[i] = positions[i].fraction;
    }
    return InvestmentProfile(std::move(a), std::move(b));
  }

  std::size_t size() const noexcept { return a_.size(); }
  const std::vector<double>& a() const noexcept { return a_; }
  const std::vector<double>& b() const noexcept { return b_; }
  double total_a() const { return compensated_sum(a_); }
  double total_b() const { return compensated_sum(b_); }

  Position position(std::size_t i) const {
    if (a_[i] > 0.0) return {Side::A, a_[i]};
    if (b_[i] > 0.0) return {Side::B, b_[i]};
    return {};
  }

 private:
  std::vector<double> a_;
  std::vector<double> b_;
};

/// Price at which A-demand sum(sA)/p equals B-demand sum(sB)/(1-p).
inline double clearing_price(const InvestmentProfile& s) {
  const double a = s.total_a();
  const double b = s.total_b();
  if (a == 0.0 || b == 0.0)
    throw UndefinedPrice("clearing price undefined: no " + std::string(a == 0.0 ? "A" : "B") +
                         "-securities are bought");
  return a / (a + b);
}

/// |sum(sA)/p - sum(sB)/(1-p)|.
inline double clearing_residual(const InvestmentProfile& s, double p) {
  detail::require_open_price(p, "clearing_residual");
  return std::abs(s.total_a() / p - s.total_b() / (1.0 - p));
}

/// Wealth after resolution for a stake `s` bought at price `p`: the securities
/// pay s/p on a win, and the unstaked 1 - s is kept either way.
inline double payout(double p, double s, bool won) {
  detail::require_open_price(p, "payout");
  detail::require_fraction(s, "payout");
  return won ? s / p + (1.0 - s) : 1.0 - s;
}

/// Expected wealth of staking `s` on `side` at A-price `p` with belief `b` in A.
inline double naive_utility(double p, double b, double s, Side side = Side::A) {
  detail::require_open_price(p, "naive_utility");
  detail::require_probability(b, "naive_utility");
  detail::require_fraction(s, "naive_utility");
  const auto [price, belief] = detail::oriented(p, b, side);
  return belief * (s / price - s + 1.0) + (1.0 - belief) * (1.0 - s);
}

/// Expected log wealth. Staking everything (s = 1) against a possible loss
/// yields -infinity.
inline double kelly_utility(double p, double b, double s, Side side = Side::A) {
  detail::require_open_price(p, "kelly_utility");
  detail::require_probability(b, "kelly_utility");
  detail::require_fraction(s, "kelly_utility");
  const auto [price, belief] = detail::oriented(p, b, side);
  return detail::weighted_log(belief, s * (1.0 - price) / price + 1.0) +
         detail::weighted_log(1.0 - belief, 1.0 - s);
}

class TaxParams {
 public:
  explicit TaxParams(double k) : k_(k) {
    if (!(std::isnormal(k) && k > 0.0))
      throw ValidationError("k: taxation parameter must be > 0 and a normal double, got " + std::to_string(k));
  }
  double k() const noexcept { return k_; }

  friend bool operator==(const TaxParams&, const TaxParams&) = default;

 private:
  double k_;
};

/// T(x) = (1 - exp(-k x p/(1-p))) / (k p/(1-p)). Concave, increasing, T(0) = 0,
/// and T(x) -> x as k -> 0.
inline double tax_function(double x, double p, TaxParams tax) {
  detail::require_open_price(p, "tax_function");
  const double c = tax.k() * p / (1.0 - p);
  return -std::expm1(-c * x) / c;
}

/// Taxed Kelly utility: b ln(1 + T(s (1-p)/p)) + (1 - b) ln(1 - s), with the
/// B side obtained by (p, b) -> (1 - p, 1 - b).
inline double taxed_utility(double p, double b, double s, TaxParams tax, Side side = Side::A) {
  detail::require_open_price(p, "taxed_utility");
  detail::require_probability(b, "taxed_utility");
  detail::require_fraction(s, "taxed_utility");
  const auto [price, belief] = detail::oriented(p, b, side);
  const double gain = tax_function(s * (1.0 - price) / price, price, tax);
  return detail::weighted_log(belief, 1.0 + gain) + detail::weighted_log(1.0 - belief, 1.0 - s);
}

}  // namespace infomarket
