#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "infomarket/markets.hpp"
#include "support/profiles.hpp"
#include "support/reference.hpp"

namespace infomarket {
namespace {

const BeliefProfile kFirst({0.9, 0.3, 0.4, 0.4, 0.6});
const BeliefProfile kSecond({0.8, 0.4, 0.4, 0.4});

TEST(ClearingPrice, FirstExampleNaiveStakes) {
  const InvestmentProfile s({1, 0, 0, 0, 1}, {0, 1, 1, 1, 0});
  EXPECT_DOUBLE_EQ(clearing_price(s), 0.4);
  EXPECT_NEAR(clearing_residual(s, 0.4), 0.0, 1e-15);
}

TEST(ClearingPrice, SecondExamplePartialStake) {
  const InvestmentProfile s({1, 1.0 / 3.0, 0, 0}, {0, 0, 1, 1});
  EXPECT_NEAR(clearing_price(s), 0.4, 1e-15);
}

TEST(ClearingPrice, UndefinedWithoutTradeOnOneSide) {
  EXPECT_THROW(clearing_price(InvestmentProfile({0, 0}, {1, 0})), UndefinedPrice);
  EXPECT_THROW(clearing_price(InvestmentProfile({1, 0}, {0, 0})), UndefinedPrice);
}

TEST(InvestmentProfile, Validation) {
  EXPECT_THROW(InvestmentProfile({1, 0}, {0}), ValidationError);
  EXPECT_THROW(InvestmentProfile({1.5}, {0}), ValidationError);
  EXPECT_THROW(InvestmentProfile({0.5}, {0.5}), ValidationError);
}

TEST(Payout, WealthAfterResolution) {
  EXPECT_DOUBLE_EQ(payout(0.4, 1.0, true), 2.5);
  EXPECT_DOUBLE_EQ(payout(0.4, 0.0, false), 1.0);
  EXPECT_DOUBLE_EQ(payout(0.5, 0.5, true), 1.5);
  EXPECT_DOUBLE_EQ(payout(0.5, 0.5, false), 0.5);
}

TEST(NaiveUtility, Values) {
  EXPECT_DOUBLE_EQ(naive_utility(0.3, 0.8, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(naive_utility(0.4, 0.4, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(naive_utility(0.4, 0.9, 1.0), 2.25);
  EXPECT_DOUBLE_EQ(naive_utility(0.4, 0.3, 1.0, Side::B), 0.7 / 0.6);
}

TEST(KellyUtility, Values) {
  EXPECT_EQ(kelly_utility(0.3, 0.8, 0.0), 0.0);
  EXPECT_NEAR(kelly_utility(0.5, 0.9, 0.8), 0.9 * std::log(1.8) + 0.1 * std::log(0.2), 1e-15);
  EXPECT_EQ(kelly_utility(0.5, 0.9, 1.0), -INFINITY);
}

TEST(NaiveBestResponse, Cases) {
  EXPECT_EQ(naive_best_response(0.9, 0.4).side(), Side::A);
  EXPECT_EQ(naive_best_response(0.3, 0.4).side(), Side::B);
  EXPECT_TRUE(naive_best_response(0.4, 0.4).indifferent());
}

TEST(KellyBestResponse, Cases) {
  const Position a = kelly_best_response(0.9, 0.52);
  EXPECT_EQ(a.side, Side::A);
  EXPECT_NEAR(a.fraction, 0.38 / 0.48, 1e-15);
  const Position b = kelly_best_response(0.3, 0.52);
  EXPECT_EQ(b.side, Side::B);
  EXPECT_NEAR(b.fraction, 0.22 / 0.52, 1e-15);
  EXPECT_EQ(kelly_best_response(0.52, 0.52), Position{});
}

TEST(KellyBestResponse, MaximizesUtility) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (int rep = 0; rep < 200; ++rep) {
    const double b = u(rng), p = u(rng);
    const Position pos = kelly_best_response(b, p);
    if (pos.side == Side::None) continue;
    const double best = kelly_utility(p, b, pos.fraction, pos.side);
    for (double d : {-1e-3, 1e-3}) {
      const double s = std::clamp(pos.fraction + d, 0.0, 1.0 - 1e-12);
      EXPECT_LE(kelly_utility(p, b, s, pos.side), best + 1e-15);
    }
  }
}

TEST(NaiveEquilibrium, FirstExample) {
  const EquilibriumResult r = naive_equilibrium(kFirst);
  EXPECT_EQ(r.price, 0.4);
  const std::vector<double> a = {1, 0, 0, 0, 1}, b = {0, 1, 1, 1, 0};
  EXPECT_EQ(r.profile.a(), a);
  EXPECT_EQ(r.profile.b(), b);
  EXPECT_NEAR(r.diagnostics.residual, 0.0, 1e-12);
}

TEST(NaiveEquilibrium, SecondExamplePartialStake) {
  const EquilibriumResult r = naive_equilibrium(kSecond);
  EXPECT_EQ(r.price, 0.4);
  EXPECT_EQ(r.profile.a()[0], 1.0);
  // Exactly one B-signal agent holds 1/3 in A, the other two are all-in on B.
  int partial = 0, full_b = 0;
  for (std::size_t i = 1; i < 4; ++i) {
    if (std::abs(r.profile.a()[i] - 1.0 / 3.0) < 1e-15) ++partial;
    if (r.profile.b()[i] == 1.0) ++full_b;
  }
  EXPECT_EQ(partial, 1);
  EXPECT_EQ(full_b, 2);
  EXPECT_NEAR(clearing_price(r.profile), 0.4, 1e-15);
}

TEST(NaiveEquilibrium, TwoEqualBeliefs) {
  const EquilibriumResult r = naive_equilibrium(BeliefProfile({0.6, 0.6}));
  EXPECT_EQ(r.price, 0.6);
  EXPECT_EQ(r.profile.a()[0], 1.0);
  EXPECT_EQ(r.profile.a()[1], 0.0);
  EXPECT_EQ(r.profile.b()[0], 0.0);
  EXPECT_NEAR(r.profile.b()[1], 2.0 / 3.0, 1e-15);
}

TEST(NaiveEquilibrium, SingleAgentHasNoTrade) {
  const EquilibriumResult r = naive_equilibrium(BeliefProfile({0.7}));
  EXPECT_EQ(r.price, 0.7);
  EXPECT_TRUE(r.diagnostics.degenerate);
}

TEST(NaiveEquilibrium, ClearsAndBestRespondsOnRandomProfiles) {
  std::mt19937_64 rng(21);
  for (int rep = 0; rep < 500; ++rep) {
    const BeliefProfile b = testing::random_beliefs(rng, testing::random_size(rng, 2, 12));
    const EquilibriumResult r = naive_equilibrium(b);
    EXPECT_LE(r.diagnostics.residual, 1e-12);
    for (std::size_t i = 0; i < b.size(); ++i) {
      const Position pos = r.profile.position(i);
      if (b[i] > r.price) { EXPECT_EQ(pos, (Position{Side::A, 1.0})); }
      if (b[i] < r.price) { EXPECT_EQ(pos, (Position{Side::B, 1.0})); }
    }
  }
}

TEST(NaiveEquilibrium, QuantileBracket) {
  std::mt19937_64 rng(22);
  for (int rep = 0; rep < 500; ++rep) {
    const BeliefProfile b = testing::random_beliefs(rng, testing::random_size(rng, 2, 12));
    const double p = naive_equilibrium(b).price;
    const double n = static_cast<double>(b.size());
    std::size_t above = 0, at_or_above = 0, below = 0, at_or_below = 0;
    for (double x : b.values()) {
      above += x > p;
      at_or_above += x >= p;
      below += x < p;
      at_or_below += x <= p;
    }
    EXPECT_LE(static_cast<double>(above), n * p + 1e-9);
    EXPECT_GE(static_cast<double>(at_or_above), n * p - 1e-9);
    EXPECT_LE(static_cast<double>(below), n * (1 - p) + 1e-9);
    EXPECT_GE(static_cast<double>(at_or_below), n * (1 - p) - 1e-9);
    if (above == at_or_above) { EXPECT_NEAR(static_cast<double>(above), n * p, 1e-9); }
  }
}

TEST(KellyEquilibrium, WorkedExamples) {
  const EquilibriumResult r1 = kelly_equilibrium(kFirst);
  EXPECT_EQ(r1.price, 0.52);
  EXPECT_LE(r1.diagnostics.residual, 1e-12);
  EXPECT_NEAR(r1.profile.a()[0], 0.38 / 0.48, 1e-15);
  const EquilibriumResult r2 = kelly_equilibrium(kSecond);
  EXPECT_EQ(r2.price, 0.5);
}

TEST(KellyEquilibrium, EqualBeliefsDoNotTrade) {
  const EquilibriumResult r = kelly_equilibrium(BeliefProfile({0.3, 0.3, 0.3}));
  EXPECT_NEAR(r.price, 0.3, 1e-16);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(r.profile.position(i).side, Side::None);
}

TEST(TaxFunction, Limits) {
  EXPECT_NEAR(tax_function(1.0, 0.5, TaxParams(1.0)), 0.63212055882855768, 1e-15);
  EXPECT_NEAR(tax_function(0.7, 0.3, TaxParams(1e-9)), 0.7, 1e-9);
  EXPECT_EQ(tax_function(0.0, 0.3, TaxParams(5.0)), 0.0);
  EXPECT_THROW(TaxParams(0.0), ValidationError);
  EXPECT_THROW(TaxParams(-1.0), ValidationError);
}

TEST(TaxedBestResponse, ReferenceStake) {
  const Position pos = taxed_best_response(0.9, 0.5, TaxParams(100.0));
  EXPECT_EQ(pos.side, Side::A);
  EXPECT_NEAR(pos.fraction, 0.021665061241138422, 1e-12);
  const double asymptote = std::log(9.0) / 100.0;
  EXPECT_LT(std::abs(pos.fraction - asymptote) / asymptote, 0.10);
}

TEST(TaxedBestResponse, NullTaxationApproachesKelly) {
  for (double b : {0.6, 0.75, 0.9}) {
    const Position pos = taxed_best_response(b, 0.5, TaxParams(1e-6));
    EXPECT_NEAR(pos.fraction, 2 * b - 1, 1e-5);
  }
}

TEST(TaxedBestResponse, StrategyCurvesAtEvenPrice) {
  const double expected[] = {0.018566681515720879, 0.039037113951301866, 0.064219939930456919,
                             0.10233243714059203};
  const double beliefs[] = {0.6, 0.7, 0.8, 0.9};
  for (int i = 0; i < 4; ++i) {
    const Position pos = taxed_best_response(beliefs[i], 0.5, TaxParams(20.0));
    EXPECT_NEAR(pos.fraction, expected[i], 1e-12);
    const double asymptote = testing::ref_logit(beliefs[i]) / 20.0;
    EXPECT_LT(std::abs(pos.fraction - asymptote) / asymptote, 0.10);
  }
}

TEST(TaxedBestResponse, HugeTaxationReachesTinyStakes) {
  for (double k : {1e200, 1e300}) {
    const Position pos = taxed_best_response(0.9, 0.55, TaxParams(k));
    const double asymptote = taxed_asymptotic_strategy(0.9, 0.55, TaxParams(k));
    EXPECT_NEAR(pos.fraction / asymptote, 1.0, 1e-9);
  }
}

TEST(Bisection, ReportsIterationCap) {
  auto f = [](double x) { return 0.3 - x; };
  EXPECT_TRUE(detail::bisect_decreasing(f, 0.0, 1.0, 200).converged);
  const detail::RootResult capped = detail::bisect_decreasing(f, 0.0, 1.0, 5);
  EXPECT_FALSE(capped.converged);
  EXPECT_EQ(capped.iterations, 5);
}

TEST(TaxedBestResponse, SymmetricBSide) {
  const Position a = taxed_best_response(0.8, 0.45, TaxParams(3.0));
  const Position b = taxed_best_response(0.2, 0.55, TaxParams(3.0));
  EXPECT_EQ(b.side, Side::B);
  EXPECT_EQ(a.fraction, b.fraction);
  EXPECT_EQ(taxed_best_response(0.4, 0.4, TaxParams(3.0)), Position{});
}

TEST(TaxedBestResponse, FirstOrderConditionHolds) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.02, 0.98);
  std::uniform_real_distribution<double> logk(std::log(0.1), std::log(100.0));
  for (int rep = 0; rep < 300; ++rep) {
    const double b = u(rng), p = u(rng);
    const TaxParams tax(std::exp(logk(rng)));
    const Position pos = taxed_best_response(b, p, tax);
    if (pos.side == Side::None) continue;
    const double bb = pos.side == Side::A ? b : 1 - b;
    const double pp = pos.side == Side::A ? p : 1 - p;
    EXPECT_NEAR(taxed_foc_residual(bb, pp, pos.fraction, tax), 0.0, 1e-6);
  }
}

TEST(TaxedEquilibriumAsymptotic, WorkedExamples) {
  EXPECT_NEAR(taxed_equilibrium_asymptotic(kFirst), 0.54708316845508931, 1e-14);
  EXPECT_NEAR(taxed_equilibrium_asymptotic(kSecond), 0.51061709365157733, 1e-14);
  EXPECT_NEAR(taxed_equilibrium_asymptotic(BeliefProfile({0.37})), 0.37, 1e-15);
}

TEST(TaxedEquilibriumFinite, ClearsOnWorkedExample) {
  const EquilibriumResult r = taxed_equilibrium_finite(kFirst, TaxParams(5.0));
  EXPECT_LE(r.diagnostics.residual, 1e-9);
  EXPECT_GT(r.price, 0.5);
  for (std::size_t i = 0; i < kFirst.size(); ++i)
    EXPECT_EQ(r.profile.position(i), taxed_best_response(kFirst[i], r.price, TaxParams(5.0)));
}

TEST(TaxedEquilibriumFinite, NullTaxationMatchesKelly) {
  EXPECT_NEAR(taxed_equilibrium_finite(kFirst, TaxParams(1e-4)).price, 0.52, 1e-3);
  EXPECT_NEAR(taxed_equilibrium_finite(kSecond, TaxParams(1e-4)).price, 0.5, 1e-3);
}

TEST(TaxedEquilibriumFinite, LargeKLimitIsTheLogOddsBalancePoint) {
  // Same side of 1/2 as the logistic of the mean log-odds, but not equal to it.
  for (const BeliefProfile* b : {&kFirst, &kSecond}) {
    const double root = testing::taxed_large_k_root(b->values());
    const double p = taxed_equilibrium_finite(*b, TaxParams(1000.0)).price;
    EXPECT_NEAR(p, root, 1e-3);
    EXPECT_EQ(binarize(p), binarize(taxed_equilibrium_asymptotic(*b)));
  }
  EXPECT_NEAR(testing::taxed_large_k_root(kFirst.values()), 0.5328, 1e-4);
}

TEST(TaxedEquilibriumFinite, EqualBeliefsAndSingleAgent) {
  const EquilibriumResult r = taxed_equilibrium_finite(BeliefProfile({0.65}), TaxParams(2.0));
  EXPECT_EQ(r.price, 0.65);
  EXPECT_TRUE(r.diagnostics.degenerate);
  EXPECT_EQ(taxed_equilibrium_finite(BeliefProfile({0.2, 0.2}), TaxParams(2.0)).price, 0.2);
}

TEST(TaxedEquilibriumFinite, RandomProfilesClear) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> logk(std::log(0.1), std::log(100.0));
  for (int rep = 0; rep < 40; ++rep) {
    const BeliefProfile b = testing::random_beliefs(rng, testing::random_size(rng, 2, 8));
    const EquilibriumResult r = taxed_equilibrium_finite(b, TaxParams(std::exp(logk(rng))));
    EXPECT_LE(r.diagnostics.residual, 1e-9);
  }
}

TEST(FullInvestmentEquivalence, ReferenceValues) {
  UtilityPair u = full_investment_equivalence(0.9, 0.5);
  EXPECT_NEAR(u.full_investment, 0.36806420716849712, 1e-12);
  EXPECT_NEAR(u.single_security, u.full_investment, 1e-12);
  u = full_investment_equivalence(0.3, 0.6);
  EXPECT_NEAR(u.full_investment, 0.18378689738681227, 1e-12);
  EXPECT_NEAR(u.single_security, u.full_investment, 1e-12);
  u = full_investment_equivalence(0.4, 0.4);
  EXPECT_EQ(u.single_security, 0.0);
  EXPECT_NEAR(u.full_investment, 0.0, 1e-15);
}

TEST(MarketKind, NamesRoundTrip) {
  for (MarketKind k : {MarketKind::Naive, MarketKind::Kelly, MarketKind::TaxedAsymptotic, MarketKind::TaxedFinite})
    EXPECT_EQ(parse_market_kind(to_string(k)), k);
  EXPECT_THROW(parse_market_kind("lmsr"), ValidationError);
}

}  // namespace
}  // namespace infomarket
