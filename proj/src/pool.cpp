#include "clmm/pool.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "clmm/errors.hpp"

namespace clmm {

namespace {

// Leftover token B below this fraction of the request counts as filled.
constexpr double kFillTolerance = 1e-12;

std::string describe_rate(double rate, const PriceGrid& grid) {
  std::ostringstream os;
  os << "rate " << rate << " outside grid [" << grid.points().front() << ", "
     << grid.points().back() << "]";
  return os.str();
}

void check_tick(const PriceGrid& grid, int tick) {
  if (tick < 1 || tick > grid.ticks()) {
    throw OutOfRangeError("tick " + std::to_string(tick) + " outside [1, " +
                          std::to_string(grid.ticks()) + "]");
  }
}

}  // namespace

PriceGrid::PriceGrid(std::vector<double> points) : points_(std::move(points)) {
  if (points_.size() < 2) throw Error("price grid needs at least two boundaries");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!(points_[i] > 0.0) || !std::isfinite(points_[i])) {
      throw Error("price grid boundaries must be positive and finite");
    }
    if (i > 0 && !(points_[i] > points_[i - 1])) {
      throw Error("price grid must be strictly increasing");
    }
  }
  sqrt_points_.resize(points_.size());
  std::transform(points_.begin(), points_.end(), sqrt_points_.begin(),
                 [](double p) { return std::sqrt(p); });
}

PriceGrid PriceGrid::geometric(double lower, double ratio, int ticks) {
  if (ticks < 1 || !(ratio > 1.0)) throw Error("geometric grid needs ticks >= 1 and ratio > 1");
  std::vector<double> points(static_cast<std::size_t>(ticks) + 1);
  for (int i = 0; i <= ticks; ++i) points[static_cast<std::size_t>(i)] = lower * std::pow(ratio, i);
  return PriceGrid(std::move(points));
}

int active_tick(const PriceGrid& grid, double rate) {
  if (!grid.contains(rate)) throw OutOfRangeError(describe_rate(rate, grid));
  const auto pts = grid.points();
  // first boundary >= rate; the tick below it is the last with p_i < rate
  const auto it = std::lower_bound(pts.begin(), pts.end(), rate);
  const int idx = static_cast<int>(it - pts.begin());
  return std::max(idx, 1);
}

TokenAmounts tokens_from_liquidity(const PriceGrid& grid, double rate, int tick, double liquidity) {
  check_tick(grid, tick);
  const int active = active_tick(grid, rate);
  const double lo = grid.sqrt_boundary(tick);
  const double hi = grid.sqrt_boundary(tick + 1);
  if (tick < active) return {0.0, liquidity * (hi - lo)};
  if (tick > active) return {liquidity * (1.0 / lo - 1.0 / hi), 0.0};
  const double sp = std::sqrt(rate);
  return {liquidity * (1.0 / sp - 1.0 / hi), liquidity * (sp - lo)};
}

TokenAmounts unit_position_tokens(const PriceGrid& grid, double rate, int lower, int upper) {
  validate_position(grid, {lower, upper, 0.0});
  TokenAmounts total;
  for (int i = lower; i < upper; ++i) {
    const TokenAmounts t = tokens_from_liquidity(grid, rate, i, 1.0);
    total.a += t.a;
    total.b += t.b;
  }
  return total;
}

double position_unit_cost(const PriceGrid& grid, double rate, int lower, int upper,
                          double market_rate) {
  const TokenAmounts unit = unit_position_tokens(grid, rate, lower, upper);
  return unit.b + market_rate * unit.a;
}

double liquidity_per_tick(const PriceGrid& grid, double rate, int lower, int upper,
                          double capital, double market_rate) {
  if (capital < 0.0) throw Error("capital must be non-negative");
  if (!(market_rate > 0.0)) throw Error("market rate must be positive");
  const double cost = position_unit_cost(grid, rate, lower, upper, market_rate);
  if (!(cost > 0.0)) {
    throw DegeneratePositionError("position [" + std::to_string(lower) + ", " +
                                  std::to_string(upper) + ") has non-positive unit cost");
  }
  return capital / cost;
}

void validate_position(const PriceGrid& grid, const LiquidityPosition& position) {
  if (position.lower < 1 || position.upper > grid.ticks() + 1 || position.lower >= position.upper) {
    throw OutOfRangeError("invalid position [" + std::to_string(position.lower) + ", " +
                          std::to_string(position.upper) + ") on " +
                          std::to_string(grid.ticks()) + " ticks");
  }
  if (!(position.units >= 0.0)) throw Error("position units must be non-negative");
}

std::vector<double> expand_position(const LiquidityPosition& position, int ticks) {
  std::vector<double> out(static_cast<std::size_t>(ticks), 0.0);
  for (int i = position.lower; i < position.upper; ++i) out[static_cast<std::size_t>(i - 1)] = position.units;
  return out;
}

PoolState::PoolState(std::shared_ptr<const PriceGrid> grid, std::vector<double> liquidity,
                     double pool_rate, double fee_rate)
    : grid_(std::move(grid)),
      liquidity_(std::move(liquidity)),
      pool_rate_(pool_rate),
      fee_rate_(fee_rate),
      active_(0) {
  if (!grid_) throw Error("pool state needs a grid");
  if (static_cast<int>(liquidity_.size()) != grid_->ticks()) {
    throw Error("liquidity vector length " + std::to_string(liquidity_.size()) +
                " does not match " + std::to_string(grid_->ticks()) + " ticks");
  }
  for (double l : liquidity_) {
    if (!(l >= 0.0) || !std::isfinite(l)) throw Error("liquidity must be non-negative and finite");
  }
  if (!(fee_rate_ >= 0.0 && fee_rate_ < 1.0)) throw Error("fee rate must lie in [0, 1)");
  active_ = clmm::active_tick(*grid_, pool_rate_);
}

PoolState::PoolState(PriceGrid grid, std::vector<double> liquidity, double pool_rate, double fee_rate)
    : PoolState(std::make_shared<const PriceGrid>(std::move(grid)), std::move(liquidity), pool_rate,
                fee_rate) {}

TokenAmounts PoolState::reserves(int tick) const {
  return tokens_from_liquidity(*grid_, pool_rate_, tick, liquidity(tick));
}

std::vector<TokenAmounts> PoolState::reserves() const {
  std::vector<TokenAmounts> out;
  out.reserve(liquidity_.size());
  for (int i = 1; i <= ticks(); ++i) out.push_back(reserves(i));
  return out;
}

PoolState PoolState::with_liquidity(std::vector<double> liquidity) const {
  return PoolState(grid_, std::move(liquidity), pool_rate_, fee_rate_);
}

PoolState PoolState::with_rate(double pool_rate) const {
  return PoolState(grid_, liquidity_, pool_rate, fee_rate_);
}

PoolState PoolState::with_fee_rate(double fee_rate) const {
  return PoolState(grid_, liquidity_, pool_rate_, fee_rate);
}

PoolState add_liquidity(const PoolState& state, const LiquidityPosition& position) {
  validate_position(state.grid(), position);
  std::vector<double> l(state.liquidity().begin(), state.liquidity().end());
  for (int i = position.lower; i < position.upper; ++i) l[static_cast<std::size_t>(i - 1)] += position.units;
  return state.with_liquidity(std::move(l));
}

std::vector<double> swap_boundaries(const PoolState& state) {
  const int d = state.ticks();
  const int k = state.active_tick() - 1;
  const auto sq = state.grid().sqrt_points();
  const auto l = state.liquidity();
  const double sp = std::sqrt(state.pool_rate());
  std::vector<double> beta(static_cast<std::size_t>(d) + 1, 0.0);

  // withdrawals: beta[i] for i <= k is minus the B held in ticks i..k
  double acc = l[static_cast<std::size_t>(k)] * (sp - sq[static_cast<std::size_t>(k)]);
  beta[static_cast<std::size_t>(k)] = -acc;
  for (int i = k - 1; i >= 0; --i) {
    const auto u = static_cast<std::size_t>(i);
    acc += l[u] * (sq[u + 1] - sq[u]);
    beta[u] = -acc;
  }
  // deposits: beta[i] for i > k is the B needed to push the rate to p_{i+1}
  acc = l[static_cast<std::size_t>(k)] * (sq[static_cast<std::size_t>(k) + 1] - sp);
  beta[static_cast<std::size_t>(k) + 1] = acc;
  for (int i = k + 1; i < d; ++i) {
    const auto u = static_cast<std::size_t>(i);
    acc += l[u] * (sq[u + 1] - sq[u]);
    beta[u + 1] = acc;
  }
  return beta;
}

namespace detail {

SwapTrace swap_walk(const PriceGrid& grid, std::span<const double> liquidity, double rate,
                    double x, std::span<double> delta_b, std::span<double> delta_a) {
  const int d = grid.ticks();
  const auto sq = grid.sqrt_points();
  const auto pts = grid.points();
  const bool track_a = !delta_a.empty();

  int k = active_tick(grid, rate) - 1;
  double sp = std::sqrt(rate);
  SwapTrace trace;
  trace.rate = rate;
  trace.first = trace.last = k;
  if (x == 0.0) return trace;

  const double tolerance = kFillTolerance * std::max(1.0, std::abs(x));
  double rem = std::abs(x);
  // set when the walk stops exactly on a grid boundary
  int boundary = -1;

  if (x > 0.0) {
    for (;;) {
      const auto u = static_cast<std::size_t>(k);
      const double l = liquidity[u];
      const double cap = l * (sq[u + 1] - sp);
      if (rem <= cap) {
        double next = sp + rem / l;
        if (next >= sq[u + 1]) {
          next = sq[u + 1];
          boundary = k + 1;
        }
        const double a_out = l * (1.0 / sp - 1.0 / next);
        delta_b[u] += rem;
        if (track_a) delta_a[u] -= a_out;
        trace.token_a += a_out;
        trace.token_b += rem;
        sp = next;
        rem = 0.0;
        break;
      }
      if (cap > 0.0) {
        const double a_out = l * (1.0 / sp - 1.0 / sq[u + 1]);
        delta_b[u] += cap;
        if (track_a) delta_a[u] -= a_out;
        trace.token_a += a_out;
        trace.token_b += cap;
        rem -= cap;
      }
      sp = sq[u + 1];
      boundary = k + 1;
      if (rem <= tolerance) break;
      if (k == d - 1) {
        trace.clamped = true;
        break;
      }
      ++k;
      boundary = -1;
    }
  } else {
    for (;;) {
      const auto u = static_cast<std::size_t>(k);
      const double l = liquidity[u];
      const double avail = l * (sp - sq[u]);
      if (rem <= avail) {
        double next = sp - rem / l;
        if (next <= sq[u]) {
          next = sq[u];
          boundary = k;
        }
        const double a_in = l * (1.0 / next - 1.0 / sp);
        delta_b[u] -= rem;
        if (track_a) delta_a[u] += a_in;
        trace.token_a -= a_in;
        trace.token_b -= rem;
        sp = next;
        rem = 0.0;
        break;
      }
      if (avail > 0.0) {
        const double a_in = l * (1.0 / sq[u] - 1.0 / sp);
        delta_b[u] -= avail;
        if (track_a) delta_a[u] += a_in;
        trace.token_a -= a_in;
        trace.token_b -= avail;
        rem -= avail;
      }
      sp = sq[u];
      boundary = k;
      if (rem <= tolerance) break;
      if (k == 0) {
        trace.clamped = true;
        break;
      }
      --k;
      boundary = -1;
    }
  }

  trace.first = std::min(trace.first, k);
  trace.last = std::max(trace.last, k);
  trace.rate = boundary >= 0 ? pts[static_cast<std::size_t>(boundary)] : sp * sp;
  trace.rate = std::clamp(trace.rate, pts.front(), pts.back());
  return trace;
}

}  // namespace detail

namespace {

SwapOutcome run_swap(const PoolState& state, double x) {
  const auto d = static_cast<std::size_t>(state.ticks());
  SwapOutcome out;
  out.token_b_per_tick.assign(d, 0.0);
  out.token_a_per_tick.assign(d, 0.0);
  out.fees_per_tick.assign(d, 0.0);
  const detail::SwapTrace trace = detail::swap_walk(state.grid(), state.liquidity(), state.pool_rate(),
                                                    x, out.token_b_per_tick, out.token_a_per_tick);
  for (std::size_t i = 0; i < d; ++i) {
    out.fees_per_tick[i] = state.fee_rate() * std::abs(out.token_b_per_tick[i]);
  }
  out.token_a_delta = trace.token_a;
  out.token_b_executed = trace.token_b;
  out.new_pool_rate = trace.rate;
  out.new_active_tick = active_tick(state.grid(), trace.rate);
  out.clamped = trace.clamped;
  return out;
}

}  // namespace

SwapOutcome execute_swap(const PoolState& state, double x) {
  if (!std::isfinite(x)) throw Error("swap size must be finite");
  SwapOutcome out = run_swap(state, x);
  if (out.clamped) throw PartialFillError(x, out.token_b_executed);
  return out;
}

SwapOutcome execute_swap_clamped(const PoolState& state, double x) {
  if (!std::isfinite(x)) throw Error("swap size must be finite");
  return run_swap(state, x);
}

double fee_share(const LiquidityPosition& position, const PoolState& state, int tick) {
  if (!position.covers(tick) || position.units <= 0.0) return 0.0;
  return position.units / (state.liquidity(tick) + position.units);
}

}  // namespace clmm
