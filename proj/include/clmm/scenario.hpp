#pragma once

// Scenario configuration, the multi-period runner and report files.
//
// A scenario alternates between solving the configured game at the start
// of each period and simulating the period's blocks on the frozen
// liquidity. Reports:
//   summary.json            run metadata, per-period liquidity and metrics
//   rates.csv               block,pool_rate,market_rate
//   ledger.csv              block,swap,engaged,attacked,bot_profit,lp_fees_total,pool_rate,market_rate
//   liquidity_periods.csv   period,tick,price_lower,price_upper,liquidity

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "clmm/bot.hpp"
#include "clmm/game.hpp"
#include "clmm/lp.hpp"
#include "clmm/stochastic.hpp"

namespace clmm {

enum class GameMode { single, nplayer, mfg, stackelberg };

const char* to_string(GameMode mode);
GameMode parse_game_mode(const std::string& s);

struct SwapModelConfig {
  std::string kind = "synthetic";  // synthetic | history | density | point_mass
  std::string path;                // history CSV or density JSON
  SyntheticHistoryParams synthetic;
  double point_mass = 0.0;
  KdeOptions kde;
};

struct ScenarioConfig {
  int schema_version = 1;
  GameMode mode = GameMode::mfg;
  std::string pool_snapshot;
  std::string target_snapshot;     // optional comparison target
  std::string market_file;         // optional minute-level market rates
  std::string types_file;          // optional type distribution JSON
  double market_rate0 = 0.0;       // <= 0: start at the pool rate
  MarketModel market;
  ArrivalModel arrival;
  SwapModelConfig swap_model;
  int horizon = 7200;
  int period_length = 900;
  int periods = 8;
  int game_horizon = 900;
  int n_paths = 200;
  std::uint64_t seed = 1;
  int threads = 1;
  double thresh = 0.1;
  int max_iterations = 200;
  CalibrationOptions calibration;
  LpType single_type{35786.0, 1.0, 0};
  std::vector<LpType> players;
  bool bot_enabled = false;
  BotConfig bot;
  double bot_capital = 0.0;        // > 0: L bought with this much token B on the active tick
  std::string output_dir = "out";

  void validate() const;
};

// Relative paths resolve against base_dir.
ScenarioConfig parse_config(const nlohmann::json& j, const std::string& base_dir = ".");
ScenarioConfig load_config(const std::string& path);

struct PeriodReport {
  int period = 0;
  int start_block = 0;
  std::vector<double> liquidity;
  double lp_fees = 0.0;
  double bot_profit = 0.0;
  int attacks = 0;
  bool converged = true;
  double game_error = 0.0;

  bool operator==(const PeriodReport&) const = default;
};

struct RateRow {
  int block = 0;
  double pool_rate = 0.0;
  double market_rate = 0.0;

  bool operator==(const RateRow&) const = default;
};

struct ReportBundle {
  std::string mode;
  std::uint64_t seed = 0;
  std::vector<double> grid;
  std::vector<PeriodReport> periods;
  std::vector<RateRow> rates;
  std::vector<LedgerRow> ledger;
  double mape = 0.0;
  std::optional<double> w1_target;
  std::optional<double> r_score_target;
  double total_lp_fees = 0.0;
  double total_bot_profit = 0.0;
  int clamped_swaps = 0;
};

bool operator==(const LedgerRow& a, const LedgerRow& b);
bool operator==(const ReportBundle& a, const ReportBundle& b);

// Builds the simulation context shared by the period games.
SimulationContext make_context(const ScenarioConfig& config, const PoolState& pool);
std::shared_ptr<const SwapSizeModel> make_swap_model(const SwapModelConfig& config, std::uint64_t seed);

ReportBundle run_scenario(const ScenarioConfig& config);

// Recomputes the summary metrics from the bundle's series.
void finalize_metrics(ReportBundle& bundle, const std::vector<double>& target);

void emit_reports(const ReportBundle& bundle, const std::string& dir);
ReportBundle read_reports(const std::string& dir);

}  // namespace clmm
