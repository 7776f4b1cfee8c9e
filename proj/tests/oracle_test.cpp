#include <gtest/gtest.h>

#include <random>

#include "infomarket/accuracy.hpp"
#include "infomarket/oracle.hpp"
#include "support/profiles.hpp"

namespace infomarket {
namespace {

const BeliefProfile kFirst({0.9, 0.3, 0.4, 0.4, 0.6});

oracle::GridSpec coarse() {
  oracle::GridSpec g;
  g.resolution = 2001;
  g.strategy_resolution = 401;
  return g;
}

TEST(GridSearch, NaiveFirstExample) {
  const auto iv = oracle::grid_equilibrium_search(kFirst, MarketKind::Naive);
  ASSERT_EQ(iv.size(), 1U);
  EXPECT_TRUE(iv[0].contains(0.4, 1e-12));
  EXPECT_TRUE(oracle::is_located(iv[0], oracle::GridSpec{}));
}

TEST(GridSearch, KellyFirstExample) {
  const auto iv = oracle::grid_equilibrium_search(kFirst, MarketKind::Kelly, coarse());
  ASSERT_EQ(iv.size(), 1U);
  EXPECT_TRUE(iv[0].contains(0.52, coarse().step()));
}

TEST(GridSearch, EqualBeliefsGiveTheIndifferencePoint) {
  const BeliefProfile b({0.35, 0.35});
  for (MarketKind kind : {MarketKind::Naive, MarketKind::Kelly, MarketKind::TaxedFinite}) {
    const auto iv = oracle::grid_equilibrium_search(b, kind, coarse(), TaxParams(2.0));
    ASSERT_EQ(iv.size(), 1U) << to_string(kind);
    EXPECT_TRUE(iv[0].contains(0.35, coarse().step())) << to_string(kind);
  }
}

TEST(GridSearch, TaxedMarketMatchesSolver) {
  const TaxParams tax(5.0);
  const auto iv = oracle::grid_equilibrium_search(kFirst, MarketKind::TaxedFinite, coarse(), tax);
  ASSERT_EQ(iv.size(), 1U);
  EXPECT_TRUE(iv[0].contains(taxed_equilibrium_finite(kFirst, tax).price, coarse().step()));
}

TEST(GridSearch, NaiveAgreesWithSolverOnRandomProfiles) {
  std::mt19937_64 rng(31);
  for (int rep = 0; rep < 30; ++rep) {
    const BeliefProfile b = testing::random_beliefs(rng, testing::random_size(rng, 1, 8));
    const double price = naive_equilibrium(b).price;
    const auto iv = oracle::grid_equilibrium_search(b, MarketKind::Naive, coarse());
    ASSERT_EQ(iv.size(), 1U);
    EXPECT_TRUE(iv[0].contains(price, coarse().step()));
  }
}

TEST(GridSearch, Limits) {
  EXPECT_THROW(oracle::grid_equilibrium_search(BeliefProfile(std::vector<double>(9, 0.6)), MarketKind::Naive),
               ValidationError);
  EXPECT_THROW(oracle::grid_equilibrium_search(kFirst, MarketKind::TaxedFinite), ValidationError);
  EXPECT_THROW(oracle::grid_equilibrium_search(kFirst, MarketKind::TaxedAsymptotic), ValidationError);
  oracle::GridSpec bad;
  bad.resolution = 2;
  EXPECT_THROW(oracle::grid_equilibrium_search(kFirst, MarketKind::Naive, bad), ValidationError);
}

Decision simple_majority(const CompetenceProfile& q, std::span<const Signal> y) {
  return weighted_majority(VotingProfile::from_signals(y), weights_egalitarian(q.size()));
}

TEST(AccuracyOracle, ReferenceValues) {
  EXPECT_NEAR(oracle::exhaustive_accuracy_oracle(CompetenceProfile({0.7}), simple_majority).value, 0.7, 1e-15);
  const CompetenceProfile q3({0.6, 0.6, 0.6});
  EXPECT_NEAR(oracle::exhaustive_accuracy_oracle(q3, simple_majority).value, 0.648, 1e-12);
  const auto dictator = [](const CompetenceProfile&, std::span<const Signal> y) {
    return y[0] == Signal::A ? Decision::A : Decision::B;
  };
  EXPECT_NEAR(oracle::exhaustive_accuracy_oracle(q3, dictator).value, 0.6, 1e-15);
}

TEST(AccuracyOracle, AgreesWithLibrary) {
  std::mt19937_64 rng(4);
  for (int rep = 0; rep < 20; ++rep) {
    const CompetenceProfile q = testing::random_competences(rng, testing::random_size(rng, 1, 8));
    for (WeightScheme s : {WeightScheme::Egalitarian, WeightScheme::Linear, WeightScheme::LogOdds}) {
      const Aggregator agg = election_aggregator(s);
      EXPECT_NEAR(exact_accuracy(agg, q).value, oracle::exhaustive_accuracy_oracle(q, agg.decide).value, 1e-12);
    }
  }
}

TEST(AccuracyOracle, Limit) {
  EXPECT_THROW(oracle::exhaustive_accuracy_oracle(CompetenceProfile(std::vector<double>(13, 0.6)), simple_majority),
               ValidationError);
}

}  // namespace
}  // namespace infomarket
