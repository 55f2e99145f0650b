#include <gtest/gtest.h>

#include <numeric>

#include "clmm/errors.hpp"
#include "clmm/simulation.hpp"
#include "common/fixtures.hpp"

using namespace clmm;
namespace ct = clmm::testing;

namespace {

struct Recorder : BlockSink {
  std::vector<BlockEvent> events;
  void on_block(const BlockEvent& e) override { events.push_back(e); }
};

}  // namespace

TEST(Simulation, DeterministicPerPath) {
  const PoolState pool = ct::toy_pool();
  const SimulationContext ctx = ct::context_for(pool, 300, 4);
  std::vector<double> y1(6, 0.0), y2(6, 0.0);
  const PathTotals a = simulate_path(ctx, pool.liquidity(), 0, streams::kSwaps, 2, y1);
  const PathTotals b = simulate_path(ctx, pool.liquidity(), 0, streams::kSwaps, 2, y2);
  EXPECT_EQ(a.fees, b.fees);
  EXPECT_EQ(a.final_pool_rate, b.final_pool_rate);
  EXPECT_EQ(y1, y2);
}

TEST(Simulation, NoArrivalsMeansNoFees) {
  const PoolState pool = ct::toy_pool();
  SimulationContext ctx = ct::context_for(pool, 200, 4);
  ctx.arrival = ArrivalModel::never();
  std::vector<double> y(6, 0.0);
  const PathTotals t = simulate_path(ctx, pool.liquidity(), 0, streams::kSwaps, 0, y);
  EXPECT_EQ(t.swaps, 0);
  EXPECT_EQ(t.fees, 0.0);
  EXPECT_EQ(t.final_pool_rate, pool.pool_rate());
}

TEST(Simulation, YieldTimesLiquidityEqualsFees) {
  const PoolState pool = ct::toy_pool();
  SimulationContext ctx = ct::context_for(pool, 400, 4);
  ctx.arrival = ArrivalModel::always();
  std::vector<double> y(6, 0.0);
  Recorder rec;
  const PathTotals t = simulate_path(ctx, pool.liquidity(), 0, streams::kSwaps, 1, y, nullptr, &rec);
  double weighted = 0.0;
  for (int i = 0; i < 6; ++i) weighted += y[static_cast<std::size_t>(i)] * pool.liquidity()[static_cast<std::size_t>(i)];
  EXPECT_NEAR(weighted, t.fees, 1e-12 * std::max(1.0, t.fees));
  ASSERT_EQ(rec.events.size(), 401u);
  double fees = 0.0;
  for (const auto& e : rec.events) {
    fees += e.fees;
    EXPECT_NEAR(e.fees, ctx.fee_rate * std::abs(e.executed), 1e-15);
  }
  EXPECT_NEAR(fees, t.fees, 1e-12);
  EXPECT_EQ(rec.events.back().new_pool_rate, t.final_pool_rate);
}

TEST(Simulation, ExogenousMarketPathIsFollowed) {
  const PoolState pool = ct::toy_pool();
  SimulationContext ctx = ct::context_for(pool, 9, 2);
  ctx.market_path = {1.6, 1.61, 1.62, 1.63};
  Recorder rec;
  std::vector<double> y(6, 0.0);
  simulate_path(ctx, pool.liquidity(), 0, streams::kSwaps, 0, y, nullptr, &rec);
  EXPECT_EQ(rec.events[2].market_rate, 1.62);
  EXPECT_EQ(rec.events[9].market_rate, 1.63);
}

TEST(Simulation, YieldMatrixIsThreadInvariant) {
  const PoolState pool = ct::toy_pool();
  SimulationContext ctx = ct::context_for(pool, 100, 12);
  const auto one = simulate_yields(ctx, pool.liquidity(), 0, streams::kSwaps);
  ctx.threads = 4;
  const auto four = simulate_yields(ctx, pool.liquidity(), 0, streams::kSwaps);
  EXPECT_EQ(one.size(), 12u * 6u);
  EXPECT_EQ(one, four);
}

TEST(Simulation, ValidatesContext) {
  const PoolState pool = ct::toy_pool();
  SimulationContext ctx = ct::context_for(pool, 10, 2);
  ctx.sizes = nullptr;
  EXPECT_THROW(ctx.validate(), Error);
  ctx = ct::context_for(pool, 10, 2);
  ctx.pool_rate = 9.0;
  EXPECT_THROW(ctx.validate(), Error);
}
