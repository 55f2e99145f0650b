#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "clmm/errors.hpp"
#include "clmm/pool.hpp"
#include "common/fixtures.hpp"

using namespace clmm;
namespace ct = clmm::testing;

namespace {

// Straight-line tick walk written from the reserve curve, without the
// library's breakpoint table. Returns token A received and the final rate.
std::pair<double, double> walk_oracle(const PriceGrid& g, const std::vector<double>& l, double rate, double x) {
  int i = active_tick(g, rate);
  double sp = std::sqrt(rate), a = 0.0, rem = x;
  while (rem != 0.0) {
    const double li = l[static_cast<std::size_t>(i - 1)];
    if (rem > 0.0) {
      const double cap = li * (g.sqrt_boundary(i + 1) - sp);
      const double take = std::min(rem, cap);
      const double next = li > 0.0 && take < cap ? sp + take / li : g.sqrt_boundary(i + 1);
      if (li > 0.0) a += li * (1.0 / sp - 1.0 / next);
      rem -= take;
      sp = next;
      if (rem > 0.0) ++i;
    } else {
      const double cap = li * (sp - g.sqrt_boundary(i));
      const double take = std::min(-rem, cap);
      const double next = li > 0.0 && take < cap ? sp - take / li : g.sqrt_boundary(i);
      if (li > 0.0) a += li * (1.0 / sp - 1.0 / next);
      rem += take;
      sp = next;
      if (rem < 0.0) --i;
    }
  }
  return {a, sp * sp};
}

}  // namespace

TEST(PriceGrid, RejectsBadBoundaries) {
  EXPECT_THROW(PriceGrid({1.0}), Error);
  EXPECT_THROW(PriceGrid({1.0, 1.0, 2.0}), Error);
  EXPECT_THROW(PriceGrid({0.0, 1.0}), Error);
  EXPECT_EQ(PriceGrid::geometric(1.0, 1.1, 5).ticks(), 5);
}

TEST(ActiveTick, HalfOpenIntervalsWithClosedTop) {
  const PriceGrid g = ct::toy_grid();
  EXPECT_EQ(active_tick(g, 1.0), 1);
  EXPECT_EQ(active_tick(g, 1.2), 1);
  EXPECT_EQ(active_tick(g, 1.21), 1);
  EXPECT_EQ(active_tick(g, 1.2100001), 2);
  EXPECT_EQ(active_tick(g, 1.6), 3);
  EXPECT_EQ(active_tick(g, 2.56), 6);
  EXPECT_THROW(active_tick(g, 0.99), OutOfRangeError);
  EXPECT_THROW(active_tick(g, 2.57), OutOfRangeError);
}

TEST(Reserves, ToyPoolActiveTick) {
  const PoolState pool = ct::toy_pool();
  EXPECT_EQ(pool.active_tick(), 3);
  const TokenAmounts r = pool.reserves(3);
  EXPECT_NEAR(r.a, 2.3697, 1e-4);
  EXPECT_NEAR(r.b, 7.2085, 1e-4);
  // ticks below hold only B, ticks above only A
  EXPECT_EQ(pool.reserves(1).a, 0.0);
  EXPECT_EQ(pool.reserves(5).b, 0.0);
  EXPECT_NEAR(pool.reserves(1).b, 70 * (1.1 - 1.0), 1e-12);
  EXPECT_NEAR(pool.reserves(6).a, 90 * (1 / 1.5 - 1 / 1.6), 1e-12);
}

TEST(Liquidity, PositionCostAndAddition) {
  const PoolState pool = ct::toy_pool(0.0);
  const double cost = position_unit_cost(pool.grid(), 1.6, 2, 5, 1.6);
  EXPECT_NEAR(cost, 0.287, 1e-3);
  EXPECT_NEAR(liquidity_per_tick(pool.grid(), 1.6, 2, 5, 2.87, 1.6), 2.87 / cost, 1e-12);
  const PoolState after = add_liquidity(pool, {2, 5, 10});
  const std::vector<double> want{70, 100, 121.052, 123.75, 105, 90};
  for (int i = 1; i <= 6; ++i) EXPECT_NEAR(after.liquidity(i), want[i - 1], 1e-9);
  EXPECT_EQ(after.pool_rate(), pool.pool_rate());
  EXPECT_EQ(pool.liquidity(2), 90);
}

TEST(Liquidity, OneSidedPositionValuesOnlyOneToken) {
  const PriceGrid g = ct::toy_grid();
  const TokenAmounts above = unit_position_tokens(g, 1.6, 5, 7);
  EXPECT_EQ(above.b, 0.0);
  EXPECT_GT(above.a, 0.0);
  const TokenAmounts below = unit_position_tokens(g, 1.6, 1, 3);
  EXPECT_EQ(below.a, 0.0);
  EXPECT_GT(below.b, 0.0);
}

TEST(Liquidity, ValidatesPositions) {
  const PriceGrid g = ct::toy_grid();
  EXPECT_THROW(validate_position(g, {0, 2, 1}), OutOfRangeError);
  EXPECT_THROW(validate_position(g, {3, 3, 1}), OutOfRangeError);
  EXPECT_THROW(validate_position(g, {1, 8, 1}), OutOfRangeError);
  EXPECT_THROW(validate_position(g, {1, 2, -1}), Error);
  EXPECT_NO_THROW(validate_position(g, {1, 7, 1}));
  EXPECT_EQ(expand_position({2, 4, 3.0}, 5), (std::vector<double>{0, 3, 3, 0, 0}));
}

TEST(Swap, BoundariesOfToks1Pool) {
  const PoolState pool(ct::toy_grid(), {100, 100, 100.956, 113.75, 131.25, 150}, 1.6, 0.0);
  const std::vector<double> want{-26.553, -16.553, -6.553, 3.542, 14.917, 28.042, 43.042};
  const auto beta = swap_boundaries(pool);
  ASSERT_EQ(beta.size(), 7u);
  for (std::size_t i = 0; i < 7; ++i) EXPECT_NEAR(beta[i], want[i], 1e-3);
}

TEST(Swap, GoldenSells) {
  const PoolState pool(ct::toy_grid(), {100, 100, 100.956, 113.75, 131.25, 150}, 1.6, 0.0);
  const SwapOutcome a = execute_swap(pool, -5.0);
  EXPECT_NEAR(a.token_a_delta, -3.2523, 1e-4);
  EXPECT_NEAR(a.new_pool_rate, 1.4772, 1e-4);
  EXPECT_EQ(a.new_active_tick, 3);
  const SwapOutcome b = execute_swap(pool, -10.0);
  EXPECT_NEAR(b.token_a_delta, -6.7817, 1e-4);
  EXPECT_NEAR(b.new_pool_rate, 1.3585, 1e-4);
  EXPECT_EQ(b.new_active_tick, 2);
}

TEST(Swap, MatchesIndependentWalk) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int n = 0; n < 200; ++n) {
    const int d = 2 + static_cast<int>(unit(gen) * 30);
    const PriceGrid g = PriceGrid::geometric(0.5 + unit(gen), 1.01 + 0.1 * unit(gen), d);
    std::vector<double> l(static_cast<std::size_t>(d));
    for (auto& x : l) x = unit(gen) < 0.15 ? 0.0 : 1.0 + 500.0 * unit(gen);
    const double rate = g.boundary(1) + (g.boundary(d + 1) - g.boundary(1)) * (0.02 + 0.96 * unit(gen));
    const PoolState pool(g, l, rate, 0.003);
    const auto beta = swap_boundaries(pool);
    const double x = 0.99 * (beta.front() + (beta.back() - beta.front()) * unit(gen));
    const SwapOutcome o = execute_swap(pool, x);
    const auto [a, r] = walk_oracle(g, l, rate, x);
    EXPECT_NEAR(o.token_a_delta, a, 1e-9 * std::max(1.0, std::abs(a)));
    EXPECT_NEAR(o.new_pool_rate, r, 1e-9 * r);
  }
}

TEST(Swap, FeesDoNotChangeExecution) {
  const PoolState free = ct::toy_pool(0.0);
  const PoolState paid = ct::toy_pool(0.003);
  for (double x : {-20.0, -3.0, 0.5, 12.0}) {
    const SwapOutcome a = execute_swap(free, x);
    const SwapOutcome b = execute_swap(paid, x);
    EXPECT_EQ(a.token_a_delta, b.token_a_delta);
    EXPECT_EQ(a.new_pool_rate, b.new_pool_rate);
    double fees = 0.0;
    for (std::size_t i = 0; i < b.fees_per_tick.size(); ++i) {
      EXPECT_NEAR(b.fees_per_tick[i], 0.003 * std::abs(b.token_b_per_tick[i]), 1e-15);
      fees += b.fees_per_tick[i];
    }
    EXPECT_NEAR(fees, 0.003 * std::abs(x), 1e-12);
  }
}

TEST(Swap, OversizedSwapsThrowOrClamp) {
  const PoolState pool = ct::toy_pool();
  const auto beta = swap_boundaries(pool);
  try {
    execute_swap(pool, beta.back() * 2.0);
    FAIL() << "expected PartialFillError";
  } catch (const PartialFillError& e) {
    EXPECT_NEAR(e.executable(), beta.back(), 1e-9);
    EXPECT_EQ(e.requested(), beta.back() * 2.0);
  }
  const SwapOutcome c = execute_swap_clamped(pool, beta.front() * 3.0);
  EXPECT_TRUE(c.clamped);
  EXPECT_NEAR(c.token_b_executed, beta.front(), 1e-9);
  EXPECT_NEAR(c.new_pool_rate, pool.grid().boundary(1), 1e-12);
}

TEST(Swap, RoundTripRestoresRate) {
  const PoolState pool = ct::toy_pool();
  const SwapOutcome there = execute_swap(pool, 9.0);
  const PoolState moved = apply_swap(pool, there);
  const double back = -there.token_b_executed;
  const SwapOutcome home = execute_swap(moved, back);
  EXPECT_NEAR(home.new_pool_rate, pool.pool_rate(), 1e-12);
  EXPECT_NEAR(home.token_a_delta, -there.token_a_delta, 1e-12);
}

TEST(Swap, WalkAgreesWithOutcome) {
  const PoolState pool = ct::toy_pool();
  std::vector<double> db(6, 0.0), da(6, 0.0);
  const auto trace = detail::swap_walk(pool.grid(), pool.liquidity(), pool.pool_rate(), -12.0, db, da);
  const SwapOutcome o = execute_swap(pool, -12.0);
  EXPECT_EQ(trace.token_a, o.token_a_delta);
  EXPECT_EQ(trace.rate, o.new_pool_rate);
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_EQ(db[i], o.token_b_per_tick[i]);
    EXPECT_EQ(da[i], o.token_a_per_tick[i]);
  }
}

TEST(FeeShare, PreAdditionLiquidity) {
  const PoolState pool = ct::toy_pool();
  EXPECT_NEAR(fee_share({2, 5, 10}, pool, 3), 10 / 121.052, 1e-12);
  EXPECT_EQ(fee_share({2, 5, 10}, pool, 5), 0.0);
}
