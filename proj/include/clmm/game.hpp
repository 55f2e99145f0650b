#pragma once

// Equilibrium solvers and type calibration: N-player and mean-field
// fictitious play, the two calibration procedures and the mean-field
// liquidity map.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "clmm/errors.hpp"
#include "clmm/lp.hpp"
#include "clmm/simulation.hpp"
#include "clmm/types.hpp"

namespace clmm {

// Action index (into ActionSpace) per grid type, laid out [cell][lambda].
struct TypeStrategy {
  std::size_t lambda_points = 0;
  std::vector<std::size_t> action;

  std::size_t at(std::size_t cell, std::size_t l) const { return action.at(cell * lambda_points + l); }
};

class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, double best_error, std::vector<Action> best_profile,
                      std::vector<double> best_liquidity)
      : Error(what),
        best_error_(best_error),
        best_profile_(std::move(best_profile)),
        best_liquidity_(std::move(best_liquidity)) {}

  double best_error() const noexcept { return best_error_; }
  const std::vector<Action>& best_profile() const noexcept { return best_profile_; }
  const std::vector<double>& best_liquidity() const noexcept { return best_liquidity_; }

 private:
  double best_error_;
  std::vector<Action> best_profile_;
  std::vector<double> best_liquidity_;
};

// l_i = M sum_theta Theta(theta) u(j(theta), k(theta), m*_0) 1{j1 <= i < j2}.
std::vector<double> mfg_liquidity(const TypeStrategy& strategy, const TypeDistribution& theta,
                                  const SimulationContext& ctx);

// Per-unit-capital profit mean and variance of every action for the
// representative player facing fixed pool liquidity. Rewards use the share
// u / l_i of the mean field, so the swap paths do not depend on the action.
struct MfgActionStats {
  std::vector<int> beliefs;
  std::vector<std::vector<double>> mean;      // [belief][action]
  std::vector<std::vector<double>> variance;  // [belief][action]
  std::size_t n_paths = 0;

  ValueEstimate estimate(std::size_t belief_index, std::size_t action, const LpType& type) const;
};

MfgActionStats mfg_action_stats(const SimulationContext& ctx, std::span<const double> liquidity,
                                const std::vector<int>& beliefs, const BotConfig* bot = nullptr,
                                std::uint64_t stream = streams::kSwaps);

TypeStrategy mfg_best_response(const SimulationContext& ctx, std::span<const double> liquidity,
                               const TypeDistribution& theta, const BotConfig* bot = nullptr,
                               std::uint64_t stream = streams::kSwaps);

struct FictitiousPlayOptions {
  double thresh = 0.1;
  int max_iterations = 200;
  const BotConfig* bot = nullptr;  // Stackelberg: LPs anticipate the bot
  std::uint64_t stream = streams::kSwaps;
};

struct MfgResult {
  std::vector<double> liquidity;  // l*, the running mean of play
  std::vector<double> response;   // l^I = l_MFG(strategy)
  TypeStrategy strategy;          // best response to l*
  std::vector<double> errors;     // W1 per iteration
  int iterations = 0;
  double residual = 0.0;          // W1(l*, l_MFG(BR(l*)))
};

MfgResult fictitious_play_mfg(std::span<const double> initial, const TypeDistribution& theta,
                              const SimulationContext& ctx, const FictitiousPlayOptions& options = {});

// W1 between l and the mean-field liquidity of the best response to l.
double mfg_fixed_point_residual(std::span<const double> liquidity, const TypeDistribution& theta,
                                const SimulationContext& ctx, const BotConfig* bot = nullptr,
                                std::uint64_t stream = streams::kSwaps);

// Sum over players (optionally skipping one) of u_n on their positions.
std::vector<double> profile_liquidity(const SimulationContext& ctx, const std::vector<LpType>& types,
                                      const std::vector<Action>& profile, int exclude = -1);

// Stream of player n's best-response paths; fixed across iterations.
std::uint64_t player_stream(std::size_t player);

struct NPlayerResult {
  std::vector<Action> profile;
  std::vector<double> liquidity;  // l(j*)
  std::vector<double> errors;
  int iterations = 0;
};

// `background` is liquidity present in the pool besides the players
// (zero vector for a closed game).
NPlayerResult fictitious_play_nplayer(const std::vector<LpType>& types, const std::vector<Action>& initial,
                                      const SimulationContext& ctx, std::span<const double> background,
                                      const FictitiousPlayOptions& options = {});

struct CalibrationOptions {
  std::vector<double> capitals{2124.0, 35786.0, 1706034.0};
  std::vector<int> beliefs{-1, 0, 1};
  double lambda_max = 3.0;
  int lambda_points = 30;
  int opponent_samples = 1000;  // S, N-player only
  bool smooth = true;
};

struct CalibrationResult {
  TypeDistribution raw;           // discrete nu over the grid
  TypeDistribution distribution;  // smoothed when requested
  TypeStrategy strategy;          // grid best responses used in the fit
  std::vector<double> action_law; // mu over the action space (N-player)
  double residual = 0.0;          // nnls residual
  double unmatched_mass = 0.0;    // mu mass without a best-responding type
};

CalibrationResult calibrate_nplayer(std::span<const double> target, int players, const SimulationContext& ctx,
                                    const CalibrationOptions& options = {});

CalibrationResult calibrate_mfg(std::span<const double> target, const SimulationContext& ctx,
                                const CalibrationOptions& options = {});

}  // namespace clmm
