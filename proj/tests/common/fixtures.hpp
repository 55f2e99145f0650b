#pragma once

#include <cmath>
#include <memory>
#include <vector>

#include "clmm/pool.hpp"
#include "clmm/random.hpp"
#include "clmm/simulation.hpp"
#include "clmm/stochastic.hpp"

namespace clmm::testing {

// Six-tick toy pool with simple square roots, p* = m* = 1.6.
inline PriceGrid toy_grid() { return PriceGrid({1.0, 1.21, 1.44, 1.69, 1.96, 2.25, 2.56}); }

inline std::vector<double> toy_liquidity() { return {70, 90, 111.052, 113.75, 105, 90}; }

inline PoolState toy_pool(double fee = 0.0005) { return PoolState(toy_grid(), toy_liquidity(), 1.6, fee); }

// Bell-shaped pool on a 2% geometric grid centred on 1.6.
inline PoolState desk_pool(int ticks = 20, double fee = 0.0005) {
  const double ratio = 1.02;
  const double lower = 1.6 / std::pow(ratio, ticks / 2);
  std::vector<double> l(static_cast<std::size_t>(ticks));
  const double mid = (ticks - 1) / 2.0;
  for (int i = 0; i < ticks; ++i) {
    l[static_cast<std::size_t>(i)] = 400.0 * std::exp(-std::pow((i - mid) / (ticks / 5.0), 2)) + 40.0;
  }
  return PoolState(PriceGrid::geometric(lower, ratio, ticks), std::move(l), 1.6, fee);
}

// Swap history scaled to pools with a few hundred units of liquidity per tick.
inline SyntheticHistoryParams small_pool_history() {
  SyntheticHistoryParams p;
  p.count = 3000;
  p.small_mode = 0.12;
  p.large_mode = 0.45;
  p.mode_spread = 0.08;
  p.large_fraction = 0.3;
  p.arbitrage_spread = 0.01;
  return p;
}

inline std::shared_ptr<const SwapSizeModel> small_pool_sizes(std::uint64_t seed = 1) {
  Rng rng(seed, streams::kSynthetic, 0);
  KdeOptions o;
  o.grid_size = 128;
  return std::make_shared<JointSwapDensity>(JointSwapDensity::fit(synthetic_history(small_pool_history(), rng), o));
}

inline SimulationContext context_for(const PoolState& pool, int horizon, int paths, std::uint64_t seed = 1) {
  SimulationContext ctx;
  ctx.grid = pool.grid_ptr();
  ctx.pool_rate = pool.pool_rate();
  ctx.market_rate = pool.pool_rate();
  ctx.fee_rate = pool.fee_rate();
  ctx.horizon = horizon;
  ctx.sizes = small_pool_sizes(seed);
  ctx.n_paths = paths;
  ctx.seed = seed;
  return ctx;
}

}  // namespace clmm::testing
