#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include <gtest/gtest.h>

#include "nomaec/errors.hpp"
#include "nomaec/pairing.hpp"

namespace {

using nomaec::FblParams;
using nomaec::make_pairing;
using nomaec::MonteCarloOptions;
using nomaec::NomaPair;
using nomaec::PairingSet;

const FblParams kFbl{400, 1e-5};
const double kRho20 = 100.0;

MonteCarloOptions options(std::int64_t n) {
  MonteCarloOptions mc;
  mc.n_samples = n;
  mc.seed = 1;
  return mc;
}

TEST(Matchings, CountIsDoubleFactorial) {
  EXPECT_EQ(nomaec::enumerate_matchings(2).size(), 1u);
  EXPECT_EQ(nomaec::enumerate_matchings(4).size(), 3u);
  EXPECT_EQ(nomaec::enumerate_matchings(6).size(), 15u);
  EXPECT_EQ(nomaec::enumerate_matchings(10).size(), 945u);
}

TEST(Matchings, ValidDistinctAndLexicographic) {
  const auto all = nomaec::enumerate_matchings(6);
  std::set<std::string> seen;
  for (std::size_t k = 0; k < all.size(); ++k) {
    EXPECT_NO_THROW(all[k].validate(6));
    EXPECT_TRUE(seen.insert(all[k].to_string()).second);
    EXPECT_EQ(all[k].canonical().to_string(), all[k].to_string());
    if (k > 0) {
      EXPECT_TRUE(std::lexicographical_compare(all[k - 1].pairs.begin(), all[k - 1].pairs.end(),
                                               all[k].pairs.begin(), all[k].pairs.end()));
    }
  }
  EXPECT_EQ(all.front().to_string(), "{(1,2),(3,4),(5,6)}");
  EXPECT_EQ(all.back().to_string(), "{(1,6),(2,5),(3,4)}");
}

TEST(PairingSet, Validation) {
  EXPECT_NO_THROW(make_pairing({{1, 6}, {2, 5}, {3, 4}}).validate(6));
  EXPECT_THROW(make_pairing({{1, 6}, {2, 5}}).validate(6), nomaec::DomainError);
  EXPECT_THROW(make_pairing({{1, 6}, {1, 5}, {3, 4}}).validate(6), nomaec::DomainError);
  EXPECT_THROW(make_pairing({{6, 1}, {2, 5}, {3, 4}}).validate(6), nomaec::DomainError);
  EXPECT_THROW(make_pairing({{1, 2}, {3, 4}}).validate(5), nomaec::DomainError);
}

TEST(PairRates, TimeSharingFactor) {
  const NomaPair pair{1, 2, {}};
  const auto two = nomaec::pair_rates(pair, 10.0, 15.0, 2, kFbl);
  EXPECT_DOUBLE_EQ(two.weak, nomaec::fbl_rate(nomaec::sinr_weak(10.0, pair.power), kFbl));
  EXPECT_DOUBLE_EQ(two.strong, nomaec::fbl_rate(nomaec::sinr_strong(15.0, pair.power), kFbl));
  // alpha_u gamma_u = 3
  EXPECT_NEAR(nomaec::pair_rates(NomaPair{1, 6, {}}, 1.0, 15.0, 6, kFbl).strong, 0.59784, 1e-5);
  const auto zero = nomaec::pair_rates(pair, 0.0, 0.0, 4, kFbl);
  EXPECT_EQ(zero.weak, 0.0);
  EXPECT_EQ(zero.strong, 0.0);
  EXPECT_THROW(nomaec::pair_rates(pair, 1.0, 1.0, 5, kFbl), nomaec::DomainError);
}

TEST(PairEc, TwoUsersReduceToTwoUserEvaluator) {
  const auto mc = options(50000);
  const auto pe = nomaec::pair_ec(NomaPair{1, 2, {}}, 2, kFbl, 0.01, 0.01, kRho20, mc);
  const auto weak = nomaec::ec_monte_carlo(nomaec::UserQoS{0.01, 1, nomaec::UserRole::weak}, {},
                                           kFbl, nomaec::FadingConfig{2, kRho20}, mc);
  EXPECT_EQ(pe.weak.value, weak.value);
}

TEST(PairEc, ZeroAtUnitErrorProbability) {
  const auto pe = nomaec::pair_ec(NomaPair{1, 6, {}}, 6, FblParams{400, 1.0}, 0.01, 0.01, kRho20,
                                  options(1000));
  EXPECT_EQ(pe.weak.value, 0.0);
  EXPECT_EQ(pe.strong.value, 0.0);
  EXPECT_EQ(nomaec::total_ec(make_pairing({{1, 6}, {2, 5}, {3, 4}}), 6, FblParams{400, 1.0}, 0.01,
                             kRho20, options(1000))
                .value,
            0.0);
}

// Frozen from the seeded reference run (seed 1, 10^7 samples).
TEST(PairEc, FrozenReferenceValues) {
  MonteCarloOptions mc = options(10'000'000);
  const auto pe = nomaec::pair_ec(NomaPair{1, 6, {}}, 6, kFbl, 0.01, 0.01, kRho20, mc);
  EXPECT_NEAR(pe.weak.value, 0.45441131078418423, 1e-12);
  EXPECT_NEAR(pe.strong.value, 1.6386273413131842, 1e-12);
}

TEST(PairEc, ClosedFormTracksMonteCarlo) {
  for (const auto& pair : {NomaPair{1, 6, {}}, NomaPair{3, 4, {}}}) {
    const auto mc = nomaec::pair_ec(pair, 6, kFbl, 0.01, 0.01, kRho20, options(1'000'000));
    const auto cf = nomaec::pair_ec_closed(pair, 6, kFbl, 0.01, 0.01, kRho20);
    EXPECT_NEAR(cf.weak.value / mc.weak.value, 1.0, 0.05);
    EXPECT_NEAR(cf.strong.value / mc.strong.value, 1.0, 0.05);
  }
}

TEST(TotalEc, PermutationInvariant) {
  const auto mc = options(100000);
  const auto a = nomaec::total_ec(make_pairing({{1, 6}, {2, 5}, {3, 4}}), 6, kFbl, 0.01, kRho20, mc);
  const auto b = nomaec::total_ec(make_pairing({{3, 4}, {1, 6}, {2, 5}}), 6, kFbl, 0.01, kRho20, mc);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.ci_half_width, b.ci_half_width);
}

TEST(TotalEc, SinglePairIsSumOfBothUsers) {
  const auto mc = options(50000);
  const auto pe = nomaec::pair_ec(NomaPair{1, 2, {}}, 2, kFbl, 0.01, 0.01, kRho20, mc);
  const auto total = nomaec::total_ec(make_pairing({{1, 2}}), 2, kFbl, 0.01, kRho20, mc);
  EXPECT_DOUBLE_EQ(total.value, pe.weak.value + pe.strong.value);
}

TEST(BestPairing, AgreesWithTotalEcOnEveryMatching) {
  const auto mc = options(50000);
  const auto best = nomaec::best_pairing(6, kFbl, 0.01, kRho20, mc);
  ASSERT_EQ(best.ranking.size(), 15u);
  for (const auto& [ps, total] : best.ranking) {
    EXPECT_EQ(total.value, nomaec::total_ec(ps, 6, kFbl, 0.01, kRho20, mc).value) << ps.to_string();
  }
  for (std::size_t k = 1; k < best.ranking.size(); ++k) {
    EXPECT_GE(best.ranking[k - 1].second.value, best.ranking[k].second.value);
  }
}

TEST(BestPairing, DeterministicForFixedSeed) {
  const auto a = nomaec::best_pairing(4, kFbl, 0.01, kRho20, options(50000));
  const auto b = nomaec::best_pairing(4, kFbl, 0.01, kRho20, options(50000));
  EXPECT_EQ(a.pairing.to_string(), b.pairing.to_string());
  EXPECT_EQ(a.total.value, b.total.value);
}

TEST(BestPairing, TwoUsersHaveOneMatching) {
  const auto best = nomaec::best_pairing(2, kFbl, 0.01, kRho20, options(1000));
  EXPECT_EQ(best.pairing.to_string(), "{(1,2)}");
}

// With one power split for every pair, a user's EC depends only on its rank
// and role, so matchings with the same weak set tie exactly. For V = 4 the
// distinct-channel matching {(1,4),(2,3)} ties with {(1,3),(2,4)}, and the
// lexicographic tie-break picks the latter.
TEST(BestPairing, FourUsersTieBetweenMatchingsWithSameWeakSet) {
  const auto best = nomaec::best_pairing(4, kFbl, 0.01, kRho20, options(200000));
  double t13 = 0, t14 = 0, t12 = 0;
  for (const auto& [ps, total] : best.ranking) {
    if (ps.to_string() == "{(1,3),(2,4)}") t13 = total.value;
    if (ps.to_string() == "{(1,4),(2,3)}") t14 = total.value;
    if (ps.to_string() == "{(1,2),(3,4)}") t12 = total.value;
  }
  EXPECT_NEAR(t13, t14, 1e-12 * t14);
  EXPECT_GT(t14, t12);
  EXPECT_EQ(best.pairing.to_string(), "{(1,3),(2,4)}");
}

TEST(BestPairing, RejectsUnsupportedSizes) {
  EXPECT_THROW(nomaec::best_pairing(5, kFbl, 0.01, kRho20, options(10)), nomaec::DomainError);
  EXPECT_THROW(nomaec::best_pairing(14, kFbl, 0.01, kRho20, options(10)), nomaec::DomainError);
}

}  // namespace
