#pragma once

// Just-in-time liquidity bot: value of an attack, closed-form attack
// thresholds and the LP reward under attack.

#include <span>
#include <vector>

#include "clmm/lp.hpp"
#include "clmm/pool.hpp"
#include "clmm/simulation.hpp"

namespace clmm {

struct BotStrategy {
  double lower = 0.0;  // xi bar minus, <= 0
  double upper = 0.0;  // xi bar plus, >= 0

  bool attacks(double xi) const noexcept { return xi < lower || xi > upper; }
};

// Coefficients of C xi^2 + D xi + E > 0, the attack condition for a swap
// contained in the active tick, on the branch sign(xi) = branch.
struct ThresholdQuadratic {
  double c = 0.0;
  double d = 0.0;
  double e = 0.0;
};

ThresholdQuadratic threshold_quadratic(double active_liquidity, double pool_rate, double market_rate,
                                       double bot_liquidity, double gas, double fee_rate, int branch);

BotStrategy bot_thresholds(double active_liquidity, double pool_rate, double market_rate,
                           double bot_liquidity, double gas, double fee_rate);

BotStrategy bot_thresholds(const PoolState& state, double market_rate, const BotConfig& bot);

// V_B(x; xi) = (x L / l1) (xi - m* psi(xi, l1, p*) + gamma |xi|) - x G with
// l1 = l + L on the active tick. Warns when the swap leaves the active tick.
double bot_value(bool attack, double xi, const PoolState& state, double market_rate, const BotConfig& bot);

// LP reward for one swap when the bot's decision is `attack`. `state` holds
// the equilibrium liquidity, which already includes the LP's units.
double stackelberg_reward(double xi, bool attack, const LiquidityPosition& position, const PoolState& state,
                          double bot_liquidity);

// Liquidity units bought by `capital` token B on the active tick alone.
double bot_liquidity_from_capital(const PoolState& state, double capital, double market_rate);


struct LedgerRow {
  int block = 0;
  double swap = 0.0;
  bool engaged = false;
  bool attacked = false;
  double bot_profit = 0.0;
  double lp_fees_total = 0.0;
  double pool_rate = 0.0;
  double market_rate = 0.0;
};

struct BotRun {
  std::vector<LedgerRow> rows;  // one per block
  PathTotals totals;
};

// One path of the block protocol against fixed liquidity l*: the pool
// returns to l* after every attack.
BotRun simulate_with_bot(const SimulationContext& ctx, std::span<const double> liquidity, const BotConfig& bot,
                         std::uint64_t path, int belief = 0, std::uint64_t stream = streams::kBot);

struct BotSummary {
  double bot_profit = 0.0;  // means over paths
  double bot_fees = 0.0;
  double total_fees = 0.0;
  double lp_fees = 0.0;
  double attacks = 0.0;
  double spills = 0.0;
  // Bot fees over all fees of attacked swaps, pooled across paths.
  double fee_share = 0.0;
};

BotSummary bot_summary(const SimulationContext& ctx, std::span<const double> liquidity, const BotConfig& bot,
                       int belief = 0, std::uint64_t stream = streams::kBot);

// optimize_single with rewards under the bot's threshold strategy.
SingleLpResult lp_optimize_with_bot(const SimulationContext& ctx, const LpType& type, std::span<const double> base,
                                    const BotConfig& bot, std::uint64_t stream = streams::kSwaps);

}  // namespace clmm
