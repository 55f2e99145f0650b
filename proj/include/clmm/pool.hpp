#pragma once

// Concentrated-liquidity constant-product pool.
//
// Ticks are 1-based: tick i covers rates [p_i, p_{i+1}) for i = 1..d, where
// p_1..p_{d+1} are the grid boundaries. Token B is the numeraire; rates are
// quoted in B per A. Each tick holds liquidity l_i and its reserves satisfy
//
//   (B_i + l_i sqrt(p_i)) (A_i + l_i / sqrt(p_{i+1})) = l_i^2.
//
// Swap sizes are signed amounts of token B deposited by the swapper:
// x > 0 buys token A from the pool, x < 0 sells token A into it.

#include <memory>
#include <span>
#include <vector>

namespace clmm {

struct TokenAmounts {
  double a = 0.0;
  double b = 0.0;
};

class PriceGrid {
 public:
  explicit PriceGrid(std::vector<double> points);

  // d ticks with boundaries lower * ratio^i.
  static PriceGrid geometric(double lower, double ratio, int ticks);

  int ticks() const noexcept { return static_cast<int>(points_.size()) - 1; }

  // Boundary p_i, i in [1, d+1].
  double boundary(int i) const { return points_.at(static_cast<std::size_t>(i - 1)); }
  double sqrt_boundary(int i) const { return sqrt_points_.at(static_cast<std::size_t>(i - 1)); }

  double lower(int tick) const { return boundary(tick); }
  double upper(int tick) const { return boundary(tick + 1); }

  std::span<const double> points() const noexcept { return points_; }
  std::span<const double> sqrt_points() const noexcept { return sqrt_points_; }

  bool contains(double rate) const noexcept {
    return rate >= points_.front() && rate <= points_.back();
  }

  friend bool operator==(const PriceGrid& a, const PriceGrid& b) { return a.points_ == b.points_; }

 private:
  std::vector<double> points_;
  std::vector<double> sqrt_points_;
};

// i* = max{i : p_i < rate}; rate == p_1 maps to tick 1 and rate == p_{d+1}
// to tick d.
int active_tick(const PriceGrid& grid, double rate);

// Reserves held by `liquidity` units in `tick` at pool rate `rate`.
TokenAmounts tokens_from_liquidity(const PriceGrid& grid, double rate, int tick, double liquidity);

// Tokens needed for one unit of liquidity on every tick in [lower, upper).
TokenAmounts unit_position_tokens(const PriceGrid& grid, double rate, int lower, int upper);

// Capital (token B, A valued at `market_rate`) per unit of liquidity on [lower, upper).
double position_unit_cost(const PriceGrid& grid, double rate, int lower, int upper,
                          double market_rate);

// Liquidity added to each tick of [lower, upper) by `capital` token B.
double liquidity_per_tick(const PriceGrid& grid, double rate, int lower, int upper,
                          double capital, double market_rate);

struct LiquidityPosition {
  int lower = 1;  // j1, first tick
  int upper = 2;  // j2, one past the last tick
  double units = 0.0;

  bool covers(int tick) const noexcept { return lower <= tick && tick < upper; }
  int width() const noexcept { return upper - lower; }
};

void validate_position(const PriceGrid& grid, const LiquidityPosition& position);

// Length-d vector with `units` on the covered ticks.
std::vector<double> expand_position(const LiquidityPosition& position, int ticks);

class PoolState {
 public:
  PoolState(std::shared_ptr<const PriceGrid> grid, std::vector<double> liquidity,
            double pool_rate, double fee_rate);
  PoolState(PriceGrid grid, std::vector<double> liquidity, double pool_rate, double fee_rate);

  const PriceGrid& grid() const noexcept { return *grid_; }
  const std::shared_ptr<const PriceGrid>& grid_ptr() const noexcept { return grid_; }
  int ticks() const noexcept { return grid_->ticks(); }

  std::span<const double> liquidity() const noexcept { return liquidity_; }
  double liquidity(int tick) const { return liquidity_.at(static_cast<std::size_t>(tick - 1)); }

  double pool_rate() const noexcept { return pool_rate_; }
  double fee_rate() const noexcept { return fee_rate_; }
  int active_tick() const noexcept { return active_; }

  TokenAmounts reserves(int tick) const;
  std::vector<TokenAmounts> reserves() const;

  PoolState with_liquidity(std::vector<double> liquidity) const;
  PoolState with_rate(double pool_rate) const;
  PoolState with_fee_rate(double fee_rate) const;

 private:
  std::shared_ptr<const PriceGrid> grid_;
  std::vector<double> liquidity_;
  double pool_rate_;
  double fee_rate_;
  int active_;
};

PoolState add_liquidity(const PoolState& state, const LiquidityPosition& position);

// d+1 signed breakpoints of the swap function: beta_1..beta_{i*} are minus the
// token B withdrawable down to each lower boundary, beta_{i*+1}..beta_{d+1}
// the token B depositable up to each upper boundary.
std::vector<double> swap_boundaries(const PoolState& state);

struct SwapOutcome {
  double token_a_delta = 0.0;     // psi: token A received by the swapper
  double token_b_executed = 0.0;  // token B actually deposited (signed)
  double new_pool_rate = 0.0;
  int new_active_tick = 0;
  bool clamped = false;
  std::vector<double> fees_per_tick;     // token B, gamma * |dB_i|
  std::vector<double> token_b_per_tick;  // change in pool B per tick
  std::vector<double> token_a_per_tick;  // change in pool A per tick
};

// Throws PartialFillError when |x| exceeds the pool capacity in its direction.
SwapOutcome execute_swap(const PoolState& state, double x);

// Executes as much of x as the pool can absorb and sets `clamped`.
SwapOutcome execute_swap_clamped(const PoolState& state, double x);

inline PoolState apply_swap(const PoolState& state, const SwapOutcome& outcome) {
  return state.with_rate(outcome.new_pool_rate);
}

// u / (l_i + u) on covered ticks, 0 elsewhere (pre-addition liquidity).
double fee_share(const LiquidityPosition& position, const PoolState& state, int tick);

namespace detail {

struct SwapTrace {
  double token_a = 0.0;  // psi
  double token_b = 0.0;  // executed
  double rate = 0.0;
  int first = 0;  // touched tick range, 0-based inclusive
  int last = 0;
  bool clamped = false;
};

// Allocation-free swap walk used by the simulators. Adds per-tick pool
// deltas into delta_b / delta_a (0-based, length d) for the touched range
// only; callers own clearing them.
SwapTrace swap_walk(const PriceGrid& grid, std::span<const double> liquidity, double rate,
                    double x, std::span<double> delta_b, std::span<double> delta_a);

}  // namespace detail

}  // namespace clmm
