#include "clmm/simulation.hpp"

#include <algorithm>
#include <cmath>

#include "clmm/bot.hpp"
#include "clmm/errors.hpp"
#include "clmm/parallel.hpp"

namespace clmm {

void SimulationContext::validate() const {
  if (!grid) throw ConfigError("simulation context has no price grid");
  if (!sizes) throw ConfigError("simulation context has no swap-size model");
  if (!grid->contains(pool_rate)) throw ConfigError("initial pool rate outside the price grid");
  if (!(market_rate > 0.0)) throw ConfigError("initial market rate must be positive");
  if (!(fee_rate >= 0.0 && fee_rate < 1.0)) throw ConfigError("fee rate must lie in [0, 1)");
  if (horizon < 0) throw ConfigError("horizon must be non-negative");
  if (n_paths < 1) throw ConfigError("need at least one path");
}

PathTotals simulate_path(const SimulationContext& ctx, std::span<const double> liquidity, int belief,
                         std::uint64_t stream, std::uint64_t path, std::span<double> yield,
                         const BotConfig* bot, BlockSink* sink) {
  const PriceGrid& grid = *ctx.grid;
  const auto d = static_cast<std::size_t>(grid.ticks());
  std::vector<double> pool(liquidity.begin(), liquidity.end());
  std::vector<double> delta_b(d, 0.0);
  std::vector<double> delta_a(bot ? d : 0, 0.0);
  const bool engage_possible = bot != nullptr && bot->engagement > 0.0 && bot->liquidity > 0.0;

  Rng rng(ctx.seed, stream, path);
  PathTotals totals;
  double p = ctx.pool_rate;
  double m = ctx.market_rate;
  int active = active_tick(grid, p);

  for (int t = 0; t <= ctx.horizon; ++t) {
    const double z = rng.normal();
    const double u_arrival = rng.uniform();
    const double u_size = rng.uniform();
    const double u_engage = rng.uniform();

    if (!ctx.market_path.empty()) {
      m = ctx.market_path[std::min<std::size_t>(static_cast<std::size_t>(t), ctx.market_path.size() - 1)];
    } else if (t > 0) {
      m = ctx.market.step(m, belief, z);
    }

    BlockEvent ev;
    ev.block = t;
    ev.pool_rate = p;
    ev.market_rate = m;
    const double y = p - m;
    ev.arrived = u_arrival < ctx.arrival.prob(y);
    if (!ev.arrived) {
      ev.new_pool_rate = p;
      if (sink) sink->on_block(ev);
      continue;
    }
    const double x = ctx.sizes->sample(y, u_size);
    ev.swap = x;

    const auto k = static_cast<std::size_t>(active - 1);
    ev.engaged = engage_possible && u_engage < bot->engagement;
    if (ev.engaged) {
      const BotStrategy strategy =
          bot_thresholds(pool[k], p, m, bot->liquidity, bot->gas, ctx.fee_rate);
      ev.attacked = strategy.attacks(x);
    }
    const double saved = pool[k];
    if (ev.attacked) pool[k] = saved + bot->liquidity;

    const detail::SwapTrace trace =
        detail::swap_walk(grid, pool, p, x, delta_b, std::span<double>(delta_a));
    ev.executed = trace.token_b;
    ev.token_a = trace.token_a;
    ev.clamped = trace.clamped;
    ev.contained = trace.first == trace.last;
    for (int i = trace.first; i <= trace.last; ++i) {
      const auto u = static_cast<std::size_t>(i);
      const double fee = ctx.fee_rate * std::abs(delta_b[u]);
      ev.fees += fee;
      if (pool[u] > 0.0) yield[u] += fee / pool[u];
    }
    if (ev.attacked) {
      const double share = bot->liquidity / pool[k];
      const double fee_k = ctx.fee_rate * std::abs(delta_b[k]);
      ev.bot_fees = share * fee_k;
      ev.bot_profit = share * (delta_b[k] + m * delta_a[k] + fee_k) - bot->gas;
      pool[k] = saved;
      ++totals.attacks;
      totals.attacked_fees += ev.fees;
      if (!ev.contained) ++totals.spills;
    }
    for (int i = trace.first; i <= trace.last; ++i) {
      delta_b[static_cast<std::size_t>(i)] = 0.0;
      if (!delta_a.empty()) delta_a[static_cast<std::size_t>(i)] = 0.0;
    }

    p = trace.rate;
    active = active_tick(grid, p);
    ev.new_pool_rate = p;
    ++totals.swaps;
    if (trace.clamped) ++totals.clamps;
    totals.fees += ev.fees;
    totals.bot_fees += ev.bot_fees;
    totals.bot_profit += ev.bot_profit;
    if (sink) sink->on_block(ev);
  }
  totals.final_pool_rate = p;
  totals.final_market_rate = m;
  return totals;
}

std::vector<double> simulate_yields(const SimulationContext& ctx, std::span<const double> liquidity,
                                    int belief, std::uint64_t stream, const BotConfig* bot) {
  const auto d = static_cast<std::size_t>(ctx.ticks());
  const auto n = static_cast<std::size_t>(ctx.n_paths);
  std::vector<double> out(n * d, 0.0);
  parallel_for(n, ctx.threads, [&](std::size_t path) {
    simulate_path(ctx, liquidity, belief, stream, path, std::span<double>(out.data() + path * d, d), bot);
  });
  return out;
}

}  // namespace clmm
