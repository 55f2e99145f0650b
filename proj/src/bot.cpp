#include "clmm/bot.hpp"

#include <cmath>

#include "clmm/errors.hpp"
#include "clmm/log.hpp"
#include "clmm/parallel.hpp"

namespace clmm {

ThresholdQuadratic threshold_quadratic(double active_liquidity, double pool_rate, double market_rate,
                                       double bot_liquidity, double gas, double fee_rate, int branch) {
  if (!(bot_liquidity > 0.0)) throw Error("bot liquidity must be positive");
  const double l1 = active_liquidity + bot_liquidity;
  const double sp = std::sqrt(pool_rate);
  const double c = 1.0 + fee_rate * branch;
  ThresholdQuadratic q;
  q.c = c;
  q.d = (c * pool_rate - market_rate) * l1 / sp - gas * l1 / bot_liquidity;
  q.e = -gas * l1 * l1 * sp / bot_liquidity;
  return q;
}

BotStrategy bot_thresholds(double active_liquidity, double pool_rate, double market_rate,
                           double bot_liquidity, double gas, double fee_rate) {
  BotStrategy s;
  const ThresholdQuadratic up =
      threshold_quadratic(active_liquidity, pool_rate, market_rate, bot_liquidity, gas, fee_rate, 1);
  const double disc_up = std::max(up.d * up.d - 4.0 * up.c * up.e, 0.0);
  s.upper = std::max((-up.d + std::sqrt(disc_up)) / (2.0 * up.c), 0.0);

  const ThresholdQuadratic down =
      threshold_quadratic(active_liquidity, pool_rate, market_rate, bot_liquidity, gas, fee_rate, -1);
  const double disc_down = std::max(down.d * down.d - 4.0 * down.c * down.e, 0.0);
  s.lower = std::min((-down.d - std::sqrt(disc_down)) / (2.0 * down.c), 0.0);
  return s;
}

BotStrategy bot_thresholds(const PoolState& state, double market_rate, const BotConfig& bot) {
  return bot_thresholds(state.liquidity(state.active_tick()), state.pool_rate(), market_rate,
                        bot.liquidity, bot.gas, state.fee_rate());
}

namespace {

PoolState with_bot(const PoolState& state, double bot_liquidity) {
  const int active = state.active_tick();
  return add_liquidity(state, {active, active + 1, bot_liquidity});
}

}  // namespace

double bot_value(bool attack, double xi, const PoolState& state, double market_rate, const BotConfig& bot) {
  if (!attack) return 0.0;
  if (!(bot.liquidity > 0.0)) throw Error("bot liquidity must be positive");
  const PoolState attacked = with_bot(state, bot.liquidity);
  const int active = state.active_tick();
  const SwapOutcome out = execute_swap_clamped(attacked, xi);
  if (out.new_active_tick != active || out.clamped) {
    log::warn("attacked swap of " + std::to_string(xi) + " leaves the active tick");
  }
  const double l1 = attacked.liquidity(active);
  return bot.liquidity / l1 * (xi - market_rate * out.token_a_delta + state.fee_rate() * std::abs(xi)) -
         bot.gas;
}

double stackelberg_reward(double xi, bool attack, const LiquidityPosition& position, const PoolState& state,
                          double bot_liquidity) {
  validate_position(state.grid(), position);
  if (position.units <= 0.0) return 0.0;
  const int active = state.active_tick();
  if (attack) {
    if (!position.covers(active)) return 0.0;
    return state.fee_rate() * std::abs(xi) * position.units / (state.liquidity(active) + bot_liquidity);
  }
  const SwapOutcome out = execute_swap_clamped(state, xi);
  double reward = 0.0;
  for (int i = position.lower; i < position.upper; ++i) {
    const double l = state.liquidity(i);
    if (l > 0.0) reward += position.units / l * out.fees_per_tick[static_cast<std::size_t>(i - 1)];
  }
  return reward;
}

double bot_liquidity_from_capital(const PoolState& state, double capital, double market_rate) {
  const int active = state.active_tick();
  return liquidity_per_tick(state.grid(), state.pool_rate(), active, active + 1, capital, market_rate);
}


namespace {

class LedgerSink final : public BlockSink {
 public:
  explicit LedgerSink(std::vector<LedgerRow>& rows) : rows_(rows) {}
  void on_block(const BlockEvent& e) override {
    rows_.push_back({e.block, e.arrived ? e.swap : 0.0, e.engaged, e.attacked, e.bot_profit,
                     e.fees - e.bot_fees, e.pool_rate, e.market_rate});
  }

 private:
  std::vector<LedgerRow>& rows_;
};

}  // namespace

BotRun simulate_with_bot(const SimulationContext& ctx, std::span<const double> liquidity, const BotConfig& bot,
                         std::uint64_t path, int belief, std::uint64_t stream) {
  ctx.validate();
  BotRun run;
  run.rows.reserve(static_cast<std::size_t>(ctx.horizon) + 1);
  LedgerSink sink(run.rows);
  std::vector<double> yield(liquidity.size(), 0.0);
  run.totals = simulate_path(ctx, liquidity, belief, stream, path, yield, &bot, &sink);
  return run;
}

BotSummary bot_summary(const SimulationContext& ctx, std::span<const double> liquidity, const BotConfig& bot,
                       int belief, std::uint64_t stream) {
  ctx.validate();
  const auto n = static_cast<std::size_t>(ctx.n_paths);
  std::vector<PathTotals> totals(n);
  parallel_for(n, ctx.threads, [&](std::size_t p) {
    std::vector<double> yield(liquidity.size(), 0.0);
    totals[p] = simulate_path(ctx, liquidity, belief, stream, p, yield, &bot);
  });
  BotSummary s;
  double attacked_fees = 0.0;
  for (const auto& t : totals) {
    s.bot_profit += t.bot_profit;
    s.bot_fees += t.bot_fees;
    s.total_fees += t.fees;
    s.attacks += t.attacks;
    s.spills += t.spills;
    attacked_fees += t.attacked_fees;
  }
  s.fee_share = attacked_fees > 0.0 ? s.bot_fees / attacked_fees : 0.0;
  const double inv = 1.0 / static_cast<double>(n);
  s.bot_profit *= inv;
  s.bot_fees *= inv;
  s.total_fees *= inv;
  s.attacks *= inv;
  s.spills *= inv;
  s.lp_fees = s.total_fees - s.bot_fees;
  return s;
}

SingleLpResult lp_optimize_with_bot(const SimulationContext& ctx, const LpType& type, std::span<const double> base,
                                    const BotConfig& bot, std::uint64_t stream) {
  EstimateOptions o;
  o.stream = stream;
  o.bot = &bot;
  return optimize_single(ctx, type, base, o);
}

}  // namespace clmm
