#pragma once

// Liquidity-provider types, actions and mean-variance position choice.

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "clmm/pool.hpp"
#include "clmm/simulation.hpp"

namespace clmm {

struct LpType {
  double capital = 0.0;        // k, token B
  double risk_aversion = 0.0;  // lambda
  int belief = 0;              // delta in {-1, 0, 1}
};

// Position [lower, upper) in 1-based ticks.
struct Action {
  int lower = 1;
  int upper = 2;

  auto operator<=>(const Action&) const = default;
  int width() const noexcept { return upper - lower; }
  LiquidityPosition position(double units) const { return {lower, upper, units}; }
};

// All (j1, j2) with 1 <= j1 < j2 <= d + 1 in lexicographic order.
class ActionSpace {
 public:
  explicit ActionSpace(int ticks);

  int ticks() const noexcept { return ticks_; }
  std::size_t size() const noexcept { return actions_.size(); }
  const Action& operator[](std::size_t q) const { return actions_.at(q); }
  std::size_t index(const Action& a) const;
  const std::vector<Action>& actions() const noexcept { return actions_; }

 private:
  int ticks_;
  std::vector<Action> actions_;
};

struct ValueEstimate {
  double mean = 0.0;
  double variance = 0.0;
  double value = 0.0;
  std::size_t n_paths = 0;
  double std_error = 0.0;  // of the mean
};

// Sample mean, unbiased variance and mean - lambda * variance.
ValueEstimate make_estimate(std::span<const double> profits, double lambda);
ValueEstimate make_estimate(double mean, double variance, std::size_t n, double lambda);

// u(j1, j2, k, m*_0) at the context's initial pool and market rates.
double action_units(const SimulationContext& ctx, const Action& action, double capital);

// Fee reward of one swap: sum over the position of u / l1_i * phi_i, where
// `state` already holds l1 = l0 + position.
double per_swap_reward(double xi, const LiquidityPosition& position, const PoolState& state);

// Same, adding the position for `type` (valued at m*_0) to the base pool first.
double per_swap_reward(double xi, const Action& action, const PoolState& base, const LpType& type,
                       double market_rate0);

// Horizon profit of one path: the LP adds u(action) on top of `base` and
// earns its share of the fees of every swap. `bot` enables JIT attacks.
double simulate_profit(const SimulationContext& ctx, const Action& action, const LpType& type,
                       std::span<const double> base, std::uint64_t stream, std::uint64_t path,
                       const BotConfig* bot = nullptr);

ValueEstimate estimate_value(const SimulationContext& ctx, const Action& action, const LpType& type,
                             std::span<const double> base, std::uint64_t stream = streams::kSwaps,
                             const BotConfig* bot = nullptr);

struct EstimateOptions {
  // Common random numbers across actions; false redraws per action.
  bool common_random_numbers = true;
  std::uint64_t stream = streams::kSwaps;
  const BotConfig* bot = nullptr;
};

// Profit mean and variance of every action in `space` for one capital and
// belief; values are filled for `lambda`.
std::vector<ValueEstimate> estimate_actions(const SimulationContext& ctx, const ActionSpace& space,
                                            const LpType& type, std::span<const double> base,
                                            const EstimateOptions& options = {});

// Index of the largest value; ties resolve to the lowest index.
std::size_t argmax_value(const std::vector<ValueEstimate>& estimates);

struct SingleLpResult {
  Action action;
  ValueEstimate estimate;
  std::vector<ValueEstimate> all;  // indexed like the action space
};

SingleLpResult optimize_single(const SimulationContext& ctx, const LpType& type, std::span<const double> base,
                               const EstimateOptions& options = {});

}  // namespace clmm
