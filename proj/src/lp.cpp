#include "clmm/lp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "clmm/errors.hpp"
#include "clmm/parallel.hpp"

namespace clmm {

ActionSpace::ActionSpace(int ticks) : ticks_(ticks) {
  if (ticks < 1) throw Error("action space needs at least one tick");
  actions_.reserve(static_cast<std::size_t>(ticks) * (ticks + 1) / 2);
  for (int lo = 1; lo <= ticks; ++lo) {
    for (int hi = lo + 1; hi <= ticks + 1; ++hi) actions_.push_back({lo, hi});
  }
}

std::size_t ActionSpace::index(const Action& a) const {
  if (a.lower < 1 || a.upper > ticks_ + 1 || a.lower >= a.upper) throw OutOfRangeError("action outside space");
  // rows before a.lower hold (d - j + 1) actions each
  std::size_t q = 0;
  for (int lo = 1; lo < a.lower; ++lo) q += static_cast<std::size_t>(ticks_ - lo + 1);
  return q + static_cast<std::size_t>(a.upper - a.lower - 1);
}

ValueEstimate make_estimate(double mean, double variance, std::size_t n, double lambda) {
  ValueEstimate e;
  e.mean = mean;
  e.variance = std::max(variance, 0.0);
  e.value = e.mean - lambda * e.variance;
  e.n_paths = n;
  e.std_error = n > 0 ? std::sqrt(e.variance / static_cast<double>(n)) : 0.0;
  return e;
}

ValueEstimate make_estimate(std::span<const double> profits, double lambda) {
  const std::size_t n = profits.size();
  if (n == 0) throw Error("no profits to estimate from");
  const double mean = std::accumulate(profits.begin(), profits.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double p : profits) ss += (p - mean) * (p - mean);
  const double var = n > 1 ? ss / static_cast<double>(n - 1) : 0.0;
  return make_estimate(mean, var, n, lambda);
}

double action_units(const SimulationContext& ctx, const Action& action, double capital) {
  return liquidity_per_tick(*ctx.grid, ctx.pool_rate, action.lower, action.upper, capital, ctx.market_rate);
}

double per_swap_reward(double xi, const LiquidityPosition& position, const PoolState& state) {
  validate_position(state.grid(), position);
  if (position.units <= 0.0 || state.fee_rate() == 0.0) return 0.0;
  const SwapOutcome out = execute_swap_clamped(state, xi);
  double reward = 0.0;
  for (int i = position.lower; i < position.upper; ++i) {
    const double l = state.liquidity(i);
    if (l > 0.0) reward += position.units / l * out.fees_per_tick[static_cast<std::size_t>(i - 1)];
  }
  return reward;
}

double per_swap_reward(double xi, const Action& action, const PoolState& base, const LpType& type,
                       double market_rate0) {
  const double u = liquidity_per_tick(base.grid(), base.pool_rate(), action.lower, action.upper,
                                      type.capital, market_rate0);
  const LiquidityPosition position = action.position(u);
  return per_swap_reward(xi, position, add_liquidity(base, position));
}

namespace {

std::vector<double> pool_with(std::span<const double> base, const Action& action, double units) {
  std::vector<double> l(base.begin(), base.end());
  for (int i = action.lower; i < action.upper; ++i) l[static_cast<std::size_t>(i - 1)] += units;
  return l;
}

double position_profit(std::span<const double> yield, const Action& action, double units) {
  double acc = 0.0;
  for (int i = action.lower; i < action.upper; ++i) acc += yield[static_cast<std::size_t>(i - 1)];
  return units * acc;
}

}  // namespace

double simulate_profit(const SimulationContext& ctx, const Action& action, const LpType& type,
                       std::span<const double> base, std::uint64_t stream, std::uint64_t path,
                       const BotConfig* bot) {
  const double u = action_units(ctx, action, type.capital);
  const std::vector<double> pool = pool_with(base, action, u);
  std::vector<double> yield(pool.size(), 0.0);
  simulate_path(ctx, pool, type.belief, stream, path, yield, bot);
  return position_profit(yield, action, u);
}

ValueEstimate estimate_value(const SimulationContext& ctx, const Action& action, const LpType& type,
                             std::span<const double> base, std::uint64_t stream, const BotConfig* bot) {
  const auto n = static_cast<std::size_t>(ctx.n_paths);
  std::vector<double> profits(n);
  parallel_for(n, ctx.threads, [&](std::size_t path) {
    profits[path] = simulate_profit(ctx, action, type, base, stream, path, bot);
  });
  return make_estimate(profits, type.risk_aversion);
}

std::vector<ValueEstimate> estimate_actions(const SimulationContext& ctx, const ActionSpace& space,
                                            const LpType& type, std::span<const double> base,
                                            const EstimateOptions& options) {
  if (static_cast<int>(base.size()) != ctx.ticks()) throw Error("base liquidity length mismatch");
  const std::size_t n = static_cast<std::size_t>(ctx.n_paths);
  const std::size_t na = space.size();
  std::vector<double> profits(na * n);
  parallel_for(na * n, ctx.threads, [&](std::size_t job) {
    const std::size_t q = job / n, path = job % n;
    // redraw mode gives each action its own block of path streams
    const std::uint64_t p = options.common_random_numbers ? path : q * n + path;
    profits[job] = simulate_profit(ctx, space[q], type, base, options.stream, p, options.bot);
  });
  std::vector<ValueEstimate> out(na);
  for (std::size_t q = 0; q < na; ++q) {
    out[q] = make_estimate(std::span<const double>(profits.data() + q * n, n), type.risk_aversion);
  }
  return out;
}

std::size_t argmax_value(const std::vector<ValueEstimate>& estimates) {
  if (estimates.empty()) throw Error("no estimates");
  std::size_t best = 0;
  for (std::size_t q = 1; q < estimates.size(); ++q) {
    if (estimates[q].value > estimates[best].value) best = q;
  }
  return best;
}

SingleLpResult optimize_single(const SimulationContext& ctx, const LpType& type, std::span<const double> base,
                               const EstimateOptions& options) {
  ctx.validate();
  const ActionSpace space(ctx.ticks());
  SingleLpResult r;
  r.all = estimate_actions(ctx, space, type, base, options);
  const std::size_t q = argmax_value(r.all);
  r.action = space[q];
  r.estimate = r.all[q];
  return r;
}

}  // namespace clmm
