#pragma once

// Signal/belief model: binary state, independent private signals with
// symmetric accuracy, Bayesian posteriors under a fair prior.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "infomarket/errors.hpp"

namespace infomarket {

enum class Signal : std::uint8_t { A, B };

/// Nonempty subset of {A, B}; Tie stands for {A, B}.
enum class Decision : std::uint8_t { A, B, Tie };

/// Tolerance used wherever a computed margin or price is compared against an
/// exact tie (relative to total weight for margins, absolute for prices).
inline constexpr double kTieTolerance = 1e-12;

/// Largest n for which the full 2^n signal space is materialized.
inline constexpr std::size_t kEnumerationCap = 20;

inline constexpr Signal opposite(Signal s) { return s == Signal::A ? Signal::B : Signal::A; }

inline constexpr char to_char(Signal s) { return s == Signal::A ? 'A' : 'B'; }

inline Signal signal_from_char(char c) {
  if (c == 'A' || c == 'a') return Signal::A;
  if (c == 'B' || c == 'b') return Signal::B;
  throw ValidationError(std::string("signal must be 'A' or 'B', got '") + c + "'");
}

inline constexpr std::string_view to_string(Decision d) {
  switch (d) {
    case Decision::A: return "A";
    case Decision::B: return "B";
    case Decision::Tie: return "tie";
  }
  return "?";
}

inline constexpr bool contains(Decision d, Signal s) {
  return d == Decision::Tie || (s == Signal::A ? d == Decision::A : d == Decision::B);
}

namespace detail {

inline bool is_competence(double q) { return std::isfinite(q) && q > 0.5 && q < 1.0; }

inline void require_competence(double q, std::string_view what) {
  if (!is_competence(q))
    throw ValidationError(std::string(what) + ": competence must lie in (0.5, 1), got " +
                          std::to_string(q));
}

}  // namespace detail

/// Per-agent signal accuracies q_i in (0.5, 1).
class CompetenceProfile {
 public:
  explicit CompetenceProfile(std::vector<double> q) : q_(std::move(q)) {
    if (q_.empty()) throw ValidationError("competence profile: need at least one agent");
    for (std::size_t i = 0; i < q_.size(); ++i)
      detail::require_competence(q_[i], "competence[" + std::to_string(i) + "]");
  }

  std::size_t size() const noexcept { return q_.size(); }
  double operator[](std::size_t i) const { return q_[i]; }
  std::span<const double> values() const noexcept { return q_; }

 private:
  std::vector<double> q_;
};

class SignalProfile {
 public:
  explicit SignalProfile(std::vector<Signal> y) : y_(std::move(y)) {
    if (y_.empty()) throw ValidationError("signal profile: need at least one agent");
  }

  /// Parses strings like "ABBBA".
  static SignalProfile parse(std::string_view text) {
    std::vector<Signal> y;
    y.reserve(text.size());
    for (char c : text) y.push_back(signal_from_char(c));
    return SignalProfile(std::move(y));
  }

  std::size_t size() const noexcept { return y_.size(); }
  Signal operator[](std::size_t i) const { return y_[i]; }
  std::span<const Signal> values() const noexcept { return y_; }

  std::string str() const {
    std::string out;
    for (Signal s : y_) out.push_back(to_char(s));
    return out;
  }

  friend bool operator==(const SignalProfile&, const SignalProfile&) = default;

 private:
  std::vector<Signal> y_;
};

/// Posterior probabilities of state A, each in the open interval (0, 1).
class BeliefProfile {
 public:
  explicit BeliefProfile(std::vector<double> b) : b_(std::move(b)) {
    if (b_.empty()) throw ValidationError("belief profile: need at least one agent");
    for (std::size_t i = 0; i < b_.size(); ++i) {
      const double v = b_[i];
      if (!(std::isfinite(v) && v > 0.0 && v < 1.0))
        throw ValidationError("belief[" + std::to_string(i) + "]: must lie in (0, 1), got " +
                              std::to_string(v));
    }
  }

  std::size_t size() const noexcept { return b_.size(); }
  double operator[](std::size_t i) const { return b_[i]; }
  std::span<const double> values() const noexcept { return b_; }

 private:
  std::vector<double> b_;
};

/// Fixed model constants. Other values are rejected: every result in this
/// library assumes a fair prior and unit endowments.
struct ModelConfig {
  double prior = 0.5;
  double endowment = 1.0;

  void validate() const {
    if (prior != 0.5) throw ValidationError("prior: must equal 0.5, got " + std::to_string(prior));
    if (endowment != 1.0)
      throw ValidationError("endowment: must equal 1, got " + std::to_string(endowment));
  }
};

inline double posterior_belief(double q, Signal y) {
  detail::require_competence(q, "posterior_belief");
  return y == Signal::A ? q : 1.0 - q;
}

/// Maps a belief or price to a decision. Exact comparison against 0.5 unless a
/// tie tolerance is supplied.
inline Decision binarize(double x, double tie_tolerance = 0.0) {
  if (!(x >= 0.0 && x <= 1.0))
    throw ValidationError("binarize: value must lie in [0, 1], got " + std::to_string(x));
  if (x > 0.5 + tie_tolerance) return Decision::A;
  if (x < 0.5 - tie_tolerance) return Decision::B;
  return Decision::Tie;
}

inline BeliefProfile beliefs_from_signals(const CompetenceProfile& q, std::span<const Signal> y) {
  if (q.size() != y.size())
    throw ValidationError("signals: length " + std::to_string(y.size()) +
                          " does not match competence length " + std::to_string(q.size()));
  std::vector<double> b(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) b[i] = posterior_belief(q[i], y[i]);
  return BeliefProfile(std::move(b));
}

inline BeliefProfile beliefs_from_signals(const CompetenceProfile& q, const SignalProfile& y) {
  return beliefs_from_signals(q, y.values());
}

/// Likelihood P(y | x) under independent signals.
inline double signal_likelihood(const CompetenceProfile& q, std::span<const Signal> y, Signal state) {
  double p = 1.0;
  for (std::size_t i = 0; i < q.size(); ++i) p *= (y[i] == state) ? q[i] : 1.0 - q[i];
  return p;
}

struct WeightedSignalProfile {
  SignalProfile profile;
  double probability;
};

/// All 2^n signal profiles with their likelihood given `state`, in
/// lexicographic order (agent 0 most significant, A before B).
inline std::vector<WeightedSignalProfile> enumerate_signal_space(const CompetenceProfile& q,
                                                                 Signal state) {
  const std::size_t n = q.size();
  if (n > kEnumerationCap)
    throw ValidationError("enumerate_signal_space: n = " + std::to_string(n) +
                          " exceeds the enumeration cap of " + std::to_string(kEnumerationCap));
  const std::size_t count = std::size_t{1} << n;
  std::vector<WeightedSignalProfile> out;
  out.reserve(count);
  std::vector<Signal> y(n);
  for (std::size_t mask = 0; mask < count; ++mask) {
    for (std::size_t i = 0; i < n; ++i)
      y[i] = ((mask >> (n - 1 - i)) & 1U) ? Signal::B : Signal::A;
    const double p = signal_likelihood(q, y, state);
    out.push_back({SignalProfile(y), p});
  }
  return out;
}

}  // namespace infomarket
