#pragma once

// Truth-tracking accuracy Q: probability that an aggregator returns the true
// state, averaged over both states under the fair prior. Ties score 1/2 and
// their probability is reported separately as tie mass.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "infomarket/markets.hpp"
#include "infomarket/model.hpp"
#include "infomarket/voting.hpp"

namespace infomarket {

using DecisionRule = std::function<Decision(const CompetenceProfile&, std::span<const Signal>)>;

struct Aggregator {
  std::string name;
  DecisionRule decide;
};

inline Aggregator weighted_aggregator(std::string name, WeightProfile w) {
  return {std::move(name), [w = std::move(w)](const CompetenceProfile& q, std::span<const Signal> y) {
            return weighted_majority(VotingProfile::sincere(beliefs_from_signals(q, y).values()), w);
          }};
}

inline Aggregator election_aggregator(WeightScheme scheme) {
  return {std::string(to_string(scheme)), [scheme](const CompetenceProfile& q, std::span<const Signal> y) {
            return weighted_majority(VotingProfile::sincere(beliefs_from_signals(q, y).values()),
                                     weights_for(scheme, q));
          }};
}

/// Binarized equilibrium price, with prices within kTieTolerance of 1/2 read
/// as ties.
inline Aggregator market_aggregator(MarketKind kind, std::optional<TaxParams> tax = std::nullopt) {
  if (kind == MarketKind::TaxedFinite && !tax) throw ValidationError("k: required for a taxed_finite market");
  return {std::string(to_string(kind)), [kind, tax](const CompetenceProfile& q, std::span<const Signal> y) {
            const BeliefProfile b = beliefs_from_signals(q, y);
            double price = 0.0;
            switch (kind) {
              case MarketKind::Naive: price = naive_equilibrium(b).price; break;
              case MarketKind::Kelly: price = kelly_equilibrium(b).price; break;
              case MarketKind::TaxedAsymptotic: price = taxed_equilibrium_asymptotic(b); break;
              case MarketKind::TaxedFinite: price = taxed_equilibrium_finite(b, *tax).price; break;
            }
            return binarize(price, kTieTolerance);
          }};
}

inline Aggregator dictator_aggregator(std::size_t agent) {
  return {"dictator_" + std::to_string(agent), [agent](const CompetenceProfile& q, std::span<const Signal> y) {
            if (agent >= q.size()) throw ValidationError("dictator: agent index out of range");
            return y[agent] == Signal::A ? Decision::A : Decision::B;
          }};
}

enum class EstimateMethod { Exact, MonteCarlo };

inline constexpr std::string_view to_string(EstimateMethod m) {
  return m == EstimateMethod::Exact ? "exact" : "monte_carlo";
}

struct AccuracyEstimate {
  double value = 0.0;
  EstimateMethod method = EstimateMethod::Exact;
  std::uint64_t trials = 0;
  double std_error = 0.0;
  double tie_mass = 0.0;
  /// State-conditional accuracies (exact method only).
  double given_a = 0.0;
  double given_b = 0.0;
};

inline constexpr std::size_t kMaxExactAgents = 12;

inline AccuracyEstimate exact_accuracy(const Aggregator& agg, const CompetenceProfile& q) {
  if (q.size() > kMaxExactAgents)
    throw ValidationError("exact_accuracy: n = " + std::to_string(q.size()) + " exceeds the limit of " +
                          std::to_string(kMaxExactAgents) + "; use Monte Carlo");
  double given[2] = {0.0, 0.0};
  double ties[2] = {0.0, 0.0};
  for (int s = 0; s < 2; ++s) {
    const Signal truth = s == 0 ? Signal::A : Signal::B;
    for (const auto& [profile, probability] : enumerate_signal_space(q, truth)) {
      const Decision d = agg.decide(q, profile.values());
      if (d == Decision::Tie) {
        given[s] += 0.5 * probability;
        ties[s] += probability;
      } else if (contains(d, truth)) {
        given[s] += probability;
      }
    }
  }
  if (std::abs(given[0] - given[1]) > 1e-12)
    throw std::logic_error("exact_accuracy: state-conditional accuracies of '" + agg.name +
                           "' differ: " + std::to_string(given[0]) + " vs " + std::to_string(given[1]));
  AccuracyEstimate e;
  e.value = 0.5 * (given[0] + given[1]);
  e.method = EstimateMethod::Exact;
  e.tie_mass = 0.5 * (ties[0] + ties[1]);
  e.given_a = given[0];
  e.given_b = given[1];
  return e;
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct TrialCounts {
  std::uint64_t correct = 0;
  std::uint64_t ties = 0;
};

inline constexpr std::uint64_t kTrialsPerBlock = 1U << 14;

/// One block of trials on its own counter-derived stream, so totals do not
/// depend on how blocks are spread over threads.
inline TrialCounts run_block(const Aggregator& agg, const CompetenceProfile& q, std::uint64_t seed,
                             std::uint64_t block, std::uint64_t trials) {
  std::mt19937_64 rng(splitmix64(seed ^ splitmix64(block + 1)));
  TrialCounts counts;
  std::vector<Signal> y(q.size());
  for (std::uint64_t t = 0; t < trials; ++t) {
    const Signal truth = (rng() >> 63) ? Signal::B : Signal::A;
    for (std::size_t i = 0; i < q.size(); ++i) y[i] = unit_uniform(rng) < q[i] ? truth : opposite(truth);
    const Decision d = agg.decide(q, y);
    if (d == Decision::Tie)
      ++counts.ties;
    else if (contains(d, truth))
      ++counts.correct;
  }
  return counts;
}

}  // namespace detail

/// Seeded Monte Carlo estimate; identical for a given (q, trials, seed)
/// whatever the thread count.
inline AccuracyEstimate monte_carlo_accuracy(const Aggregator& agg, const CompetenceProfile& q,
                                             std::uint64_t trials, std::uint64_t seed, unsigned threads = 0) {
  if (trials == 0) throw ValidationError("trials: must be >= 1");
  const std::uint64_t blocks = (trials + detail::kTrialsPerBlock - 1) / detail::kTrialsPerBlock;
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, blocks));

  std::vector<detail::TrialCounts> partial(threads);
  auto work = [&](unsigned worker) {
    for (std::uint64_t blk = worker; blk < blocks; blk += threads) {
      const std::uint64_t begin = blk * detail::kTrialsPerBlock;
      const std::uint64_t count = std::min(detail::kTrialsPerBlock, trials - begin);
      const detail::TrialCounts c = detail::run_block(agg, q, seed, blk, count);
      partial[worker].correct += c.correct;
      partial[worker].ties += c.ties;
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
  }

  detail::TrialCounts total;
  for (const auto& c : partial) {
    total.correct += c.correct;
    total.ties += c.ties;
  }
  const double n = static_cast<double>(trials);
  const double mean = (static_cast<double>(total.correct) + 0.5 * static_cast<double>(total.ties)) / n;
  const double second = (static_cast<double>(total.correct) + 0.25 * static_cast<double>(total.ties)) / n;
  const double variance = trials > 1 ? std::max(0.0, (second - mean * mean) * n / (n - 1.0)) : 0.0;

  AccuracyEstimate e;
  e.value = mean;
  e.method = EstimateMethod::MonteCarlo;
  e.trials = trials;
  e.std_error = std::sqrt(variance / n);
  e.tie_mass = static_cast<double>(total.ties) / n;
  return e;
}

struct WeightComparison {
  std::string label;
  std::vector<double> weights;
  double accuracy;
};

struct OptimalWeightsReport {
  double log_odds_accuracy = 0.0;
  std::vector<double> log_odds_weights;
  std::vector<WeightComparison> rows;
  bool strictly_better_than_egalitarian = false;
};

inline constexpr std::size_t kMaxOptimalWeightAgents = 10;

/// Exact Q under log-odds weights against egalitarian, linear and random
/// positive weights. Throws std::logic_error if log-odds weights lose.
inline OptimalWeightsReport verify_optimal_weights(const CompetenceProfile& q, std::size_t perturbations,
                                                   std::uint64_t seed) {
  if (q.size() > kMaxOptimalWeightAgents)
    throw ValidationError("verify_optimal_weights: n = " + std::to_string(q.size()) + " exceeds the limit of " +
                          std::to_string(kMaxOptimalWeightAgents));
  auto accuracy_of = [&](const WeightProfile& w) {
    return exact_accuracy(weighted_aggregator("w", w), q).value;
  };

  OptimalWeightsReport report;
  const WeightProfile best = weights_log_odds(q);
  report.log_odds_weights.assign(best.values().begin(), best.values().end());
  report.log_odds_accuracy = accuracy_of(best);

  auto add = [&](std::string label, const WeightProfile& w) {
    report.rows.push_back({std::move(label), {w.values().begin(), w.values().end()}, accuracy_of(w)});
  };
  add("egalitarian", weights_egalitarian(q.size()));
  add("linear", weights_linear(q));

  // Directions drawn uniformly from the positive orthant of the unit sphere.
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t r = 0; r < perturbations; ++r) {
    std::vector<double> w(q.size());
    double norm = 0.0;
    for (double& x : w) {
      x = std::abs(normal(rng));
      norm += x * x;
    }
    norm = std::sqrt(norm);
    if (norm == 0.0) w.assign(q.size(), 1.0), norm = std::sqrt(static_cast<double>(q.size()));
    for (double& x : w) x /= norm;
    add("random_" + std::to_string(r + 1), WeightProfile(std::move(w)));
  }

  for (const WeightComparison& row : report.rows)
    if (row.accuracy > report.log_odds_accuracy + 1e-12)
      throw std::logic_error("verify_optimal_weights: " + row.label + " weights beat log-odds weights");
  report.strictly_better_than_egalitarian = report.log_odds_accuracy > report.rows[0].accuracy + 1e-12;
  return report;
}

}  // namespace infomarket
