#pragma once

// Block-by-block horizon simulation shared by the LP, game and bot solvers.
//
// One path runs blocks t = 0..T. Each block consumes a fixed set of draws
// (market shock, arrival, size, bot engagement) from the path's stream, so
// paths with the same stream index see the same swapper randomness whatever
// the liquidity or bot configuration.

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "clmm/pool.hpp"
#include "clmm/stochastic.hpp"

namespace clmm {

struct BotConfig {
  double liquidity = 0.0;     // L, liquidity units added to the active tick
  double gas = 20.0;          // G, token B per attack
  double engagement = 0.5278; // zeta
};

struct SimulationContext {
  std::shared_ptr<const PriceGrid> grid;
  double pool_rate = 0.0;    // p*_0
  double market_rate = 0.0;  // m*_0
  double fee_rate = 0.0005;  // gamma
  int horizon = 7200;        // T
  ArrivalModel arrival;
  std::shared_ptr<const SwapSizeModel> sizes;
  MarketModel market;
  // Exogenous market rates per block; when non-empty it replaces the GBM
  // and block t uses entry min(t, size - 1).
  std::vector<double> market_path;
  int n_paths = 1000;
  std::uint64_t seed = 0;
  int threads = 1;

  int ticks() const { return grid->ticks(); }
  void validate() const;
};

// Per-block record passed to a BlockSink.
struct BlockEvent {
  int block = 0;
  double pool_rate = 0.0;    // before the swap
  double market_rate = 0.0;
  bool arrived = false;
  double swap = 0.0;         // requested, token B
  double executed = 0.0;
  double token_a = 0.0;      // psi of the executed part
  bool clamped = false;
  bool engaged = false;
  bool attacked = false;
  bool contained = true;     // swap stayed inside the active tick
  double fees = 0.0;         // all fees of the swap
  double bot_fees = 0.0;
  double bot_profit = 0.0;   // valued at market_rate, net of gas
  double new_pool_rate = 0.0;
};

class BlockSink {
 public:
  virtual ~BlockSink() = default;
  virtual void on_block(const BlockEvent& event) = 0;
};

struct PathTotals {
  double fees = 0.0;
  double bot_fees = 0.0;
  double attacked_fees = 0.0;  // all fees of attacked swaps
  double bot_profit = 0.0;
  int swaps = 0;
  int attacks = 0;
  int clamps = 0;
  int spills = 0;        // attacked swaps leaving the active tick
  double final_pool_rate = 0.0;
  double final_market_rate = 0.0;
};

// Simulates one path against fixed liquidity and adds the per-tick fee
// yield F_i = sum_t phi_i / l_i (l_i including any bot liquidity during an
// attack) into `yield`. A position holding u units on tick i earns u F_i.
PathTotals simulate_path(const SimulationContext& ctx, std::span<const double> liquidity, int belief,
                         std::uint64_t stream, std::uint64_t path, std::span<double> yield,
                         const BotConfig* bot = nullptr, BlockSink* sink = nullptr);

// Runs ctx.n_paths paths and returns the n_paths x d matrix of fee yields
// (row-major). Paths are independent; the result does not depend on
// ctx.threads.
std::vector<double> simulate_yields(const SimulationContext& ctx, std::span<const double> liquidity,
                                    int belief, std::uint64_t stream, const BotConfig* bot = nullptr);

}  // namespace clmm
