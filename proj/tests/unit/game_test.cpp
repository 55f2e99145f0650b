#include <gtest/gtest.h>

#include "clmm/game.hpp"
#include "clmm/log.hpp"
#include "clmm/metrics.hpp"
#include "common/fixtures.hpp"

using namespace clmm;
namespace ct = clmm::testing;

namespace {

TypeDistribution spread_types(double population) {
  TypeDistribution t({2.0, 8.0}, {0}, 3.0, 16);
  for (std::size_t c = 0; c < t.cells(); ++c) {
    for (std::size_t g = 0; g < t.lambda_points(); ++g) {
      t.set_mass(c, g, std::exp(-std::pow(t.lambda_grid()[g] - 1.0 - 0.5 * static_cast<double>(c), 2)));
    }
  }
  t.normalize();
  t.set_population(population);
  return t;
}

}  // namespace

TEST(MeanField, DecompositionMatchesDirectSimulationForSmallCapital) {
  const PoolState pool = ct::toy_pool();
  const SimulationContext ctx = ct::context_for(pool, 150, 30, 5);
  const MfgActionStats stats = mfg_action_stats(ctx, pool.liquidity(), {0});
  const ActionSpace space(6);
  const LpType tiny{1e-9, 0.0, 0};
  const auto direct = estimate_actions(ctx, space, tiny, pool.liquidity());
  for (std::size_t q = 0; q < space.size(); ++q) {
    const double via_stats = stats.estimate(0, q, tiny).mean;
    EXPECT_NEAR(direct[q].mean, via_stats, 1e-6 * std::abs(via_stats) + 1e-24) << q;
  }
}

TEST(MeanField, LiquidityIsLinearInPopulation) {
  const PoolState pool = ct::toy_pool();
  const SimulationContext ctx = ct::context_for(pool, 50, 10);
  TypeDistribution t = spread_types(1.0);
  const TypeStrategy s = mfg_best_response(ctx, pool.liquidity(), t);
  const auto one = mfg_liquidity(s, t, ctx);
  t.set_population(3.0);
  const auto three = mfg_liquidity(s, t, ctx);
  for (std::size_t i = 0; i < one.size(); ++i) EXPECT_NEAR(three[i], 3.0 * one[i], 1e-9 * three[i] + 1e-12);
}

TEST(MeanField, FictitiousPlayReachesFixedPoint) {
  const PoolState pool = ct::toy_pool();
  const SimulationContext ctx = ct::context_for(pool, 150, 60, 2);
  const TypeDistribution t = spread_types(10.0);
  const MfgResult r = fictitious_play_mfg(pool.liquidity(), t, ctx);
  EXPECT_LT(r.errors.back(), 0.1);
  EXPECT_LT(r.residual, 0.1);
  EXPECT_NEAR(r.residual, mfg_fixed_point_residual(r.liquidity, t, ctx), 1e-12);
  EXPECT_EQ(r.response, mfg_liquidity(r.strategy, t, ctx));
}

TEST(MeanField, NonConvergenceCarriesBestIterate) {
  const PoolState pool = ct::toy_pool();
  const SimulationContext ctx = ct::context_for(pool, 50, 10);
  FictitiousPlayOptions o;
  o.max_iterations = 2;
  o.thresh = 1e-12;
  try {
    fictitious_play_mfg(pool.liquidity(), spread_types(10.0), ctx, o);
    FAIL() << "expected NonConvergenceError";
  } catch (const NonConvergenceError& e) {
    EXPECT_EQ(e.best_liquidity().size(), 6u);
    EXPECT_GT(e.best_error(), 0.0);
  }
}

TEST(NPlayer, ProfileLiquidityAndStreams) {
  const PoolState pool = ct::toy_pool();
  const SimulationContext ctx = ct::context_for(pool, 10, 2);
  const std::vector<LpType> types{{2, 0, 0}, {3, 0, 0}};
  const std::vector<Action> profile{{1, 3}, {2, 4}};
  const auto all = profile_liquidity(ctx, types, profile);
  const auto without = profile_liquidity(ctx, types, profile, 1);
  EXPECT_EQ(all[0], without[0]);
  EXPECT_NEAR(all[1] - without[1], action_units(ctx, {2, 4}, 3), 1e-12);
  EXPECT_EQ(all[3], 0.0);
  EXPECT_NE(player_stream(0), player_stream(1));
}

TEST(NPlayer, FictitiousPlayConvergesOnToyPool) {
  const PoolState pool = ct::toy_pool();
  const SimulationContext ctx = ct::context_for(pool, 120, 80, 4);
  const std::vector<LpType> types{{2.0, 0.5, 0}, {5.0, 1.0, 0}};
  const NPlayerResult r = fictitious_play_nplayer(types, {{1, 7}, {1, 7}}, ctx, pool.liquidity());
  EXPECT_LT(r.errors.back(), 0.1);
  const auto lp = profile_liquidity(ctx, types, r.profile);
  EXPECT_EQ(r.liquidity, lp);
}

TEST(Calibration, MeanFieldRecoversItsOwnOutput) {
  log::set_level(log::Level::quiet);
  const PoolState pool = ct::toy_pool();
  const SimulationContext ctx = ct::context_for(pool, 150, 60, 2);
  const TypeDistribution t = spread_types(10.0);
  const MfgResult eq = fictitious_play_mfg(pool.liquidity(), t, ctx);
  CalibrationOptions o;
  o.capitals = t.capitals();
  o.beliefs = t.beliefs();
  o.lambda_points = 16;
  o.smooth = false;
  const CalibrationResult c = calibrate_mfg(eq.liquidity, ctx, o);
  EXPECT_GT(c.raw.population(), 0.0);
  EXPECT_NEAR(c.raw.total_mass(), 1.0, 1e-9);
  EXPECT_LT(wasserstein1(eq.liquidity, mfg_liquidity(c.strategy, c.raw, ctx)), 0.5);
  log::set_level(log::Level::warn);
}

TEST(Calibration, NPlayerProducesActionLaw) {
  log::set_level(log::Level::quiet);
  const PoolState pool = ct::toy_pool();
  const SimulationContext ctx = ct::context_for(pool, 60, 20, 2);
  CalibrationOptions o;
  o.capitals = {2.0, 8.0};
  o.beliefs = {0};
  o.lambda_points = 4;
  o.opponent_samples = 3;
  const CalibrationResult c = calibrate_nplayer(pool.liquidity(), 4, ctx, o);
  EXPECT_EQ(c.action_law.size(), 21u);
  double total = 0.0;
  for (double x : c.action_law) {
    EXPECT_GE(x, 0.0);
    total += x;
  }
  EXPECT_NEAR(total, 1.0, 1e-9);
  EXPECT_EQ(c.raw.population(), 4.0);
  log::set_level(log::Level::warn);
}
