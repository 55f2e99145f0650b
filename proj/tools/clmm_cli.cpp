// clmm: command-line front end for the pool simulator and game solvers.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "clmm/bot.hpp"
#include "clmm/detector.hpp"
#include "clmm/errors.hpp"
#include "clmm/game.hpp"
#include "clmm/io.hpp"
#include "clmm/log.hpp"
#include "clmm/metrics.hpp"
#include "clmm/parallel.hpp"
#include "clmm/scenario.hpp"

namespace {

struct Globals {
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string out;
  bool quiet = false;
  bool verbose = false;
};

void apply_globals(const Globals& g, clmm::ScenarioConfig& c) {
  if (g.seed) c.seed = *g.seed;
  if (g.threads) c.threads = *g.threads > 0 ? *g.threads : clmm::hardware_threads();
  if (!g.out.empty()) c.output_dir = g.out;
}

std::vector<double> load_liquidity(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw clmm::Error("cannot open " + path);
  std::string first;
  std::getline(f, first);
  if (first.rfind("tick_index", 0) == 0) {
    const auto pool = clmm::load_pool_snapshot(path);
    return {pool.liquidity().begin(), pool.liquidity().end()};
  }
  return clmm::load_series(path);
}

void print(const char* key, double v) { std::printf("%s=%.10g\n", key, v); }

int cmd_simulate(const std::string& config_path, const Globals& g) {
  auto config = clmm::load_config(config_path);
  apply_globals(g, config);
  const auto bundle = clmm::run_scenario(config);
  clmm::emit_reports(bundle, config.output_dir);
  std::printf("mode=%s periods=%zu blocks=%zu\n", bundle.mode.c_str(), bundle.periods.size(), bundle.rates.size());
  print("mape_pool_vs_market", bundle.mape);
  if (bundle.w1_target) print("w1_target", *bundle.w1_target);
  if (bundle.r_score_target) print("r_score_target", *bundle.r_score_target);
  print("total_lp_fees", bundle.total_lp_fees);
  print("total_bot_profit", bundle.total_bot_profit);
  for (const auto& p : bundle.periods) {
    if (!p.converged) std::printf("period %d did not converge (error %.4g)\n", p.period, p.game_error);
  }
  std::printf("reports written to %s\n", config.output_dir.c_str());
  return 0;
}

int cmd_calibrate(const std::string& config_path, const Globals& g, bool nplayer, int players) {
  auto config = clmm::load_config(config_path);
  apply_globals(g, config);
  const auto pool =
      clmm::load_pool_snapshot(config.target_snapshot.empty() ? config.pool_snapshot : config.target_snapshot);
  auto ctx = clmm::make_context(config, pool);
  const auto result = nplayer ? clmm::calibrate_nplayer(pool.liquidity(), players, ctx, config.calibration)
                              : clmm::calibrate_mfg(pool.liquidity(), ctx, config.calibration);
  std::filesystem::create_directories(config.output_dir);
  const auto path = (std::filesystem::path(config.output_dir) / "types.json").string();
  result.distribution.save(path);
  const auto regenerated = clmm::mfg_liquidity(result.strategy, result.raw, ctx);
  print("nnls_residual", result.residual);
  print("unmatched_mass", result.unmatched_mass);
  print("population", result.distribution.population());
  print("w1_regenerated", clmm::wasserstein1(regenerated, pool.liquidity()));
  std::printf("type distribution written to %s\n", path.c_str());
  return 0;
}

int cmd_detect(const std::string& path, double tolerance) {
  const auto records = clmm::load_transactions(path);
  const auto attacks = clmm::detect_sandwich_attacks(records, tolerance);
  std::printf("block,front_index,victim_index,back_index,attacker,victim,kind,symmetry_error\n");
  for (const auto& a : attacks) {
    const auto& f = records[a.front];
    std::printf("%ld,%d,%d,%d,%s,%s,%s,%.6g\n", f.block, f.index, records[a.victim].index, records[a.back].index,
                f.account.c_str(), records[a.victim].account.c_str(), clmm::to_string(a.kind), a.symmetry_error);
  }
  std::fprintf(stderr, "%zu attacks in %zu records\n", attacks.size(), records.size());
  return 0;
}

int cmd_thresholds(const std::string& path, double bot_liquidity, double gas, std::optional<double> gamma,
                   std::optional<double> market) {
  auto pool = clmm::load_pool_snapshot(path);
  if (gamma) pool = pool.with_fee_rate(*gamma);
  const double m = market ? *market : pool.pool_rate();
  const clmm::BotConfig bot{bot_liquidity, gas, 1.0};
  const auto s = clmm::bot_thresholds(pool, m, bot);
  std::printf("active_tick=%d\n", pool.active_tick());
  print("active_liquidity", pool.liquidity(pool.active_tick()));
  print("xi_lower", s.lower);
  print("xi_upper", s.upper);
  return 0;
}

int cmd_metrics(const std::string& a_path, const std::string& b_path) {
  const auto a = load_liquidity(a_path);
  const auto b = load_liquidity(b_path);
  if (a.size() != b.size()) throw clmm::Error("series lengths differ");
  print("w1", clmm::wasserstein1(a, b));
  print("total_variation", clmm::total_variation(a, b));
  try {
    print("r_score", clmm::r_score(a, b));
  } catch (const clmm::Error& e) {
    std::printf("r_score=nan  # %s\n", e.what());
  }
  try {
    print("mape", clmm::mape(a, b));
  } catch (const clmm::Error& e) {
    std::printf("mape=nan  # %s\n", e.what());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Concentrated-liquidity pool simulator, LP games and JIT bot analysis"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Override the root seed");
  app.add_option("--threads", g.threads, "Worker threads (0 = all cores)");
  app.add_option("--out", g.out, "Output directory");
  app.add_flag("-q,--quiet", g.quiet, "Suppress warnings");
  app.add_flag("-v,--verbose", g.verbose, "Progress messages");

  std::string config, records, snapshot, a, b;
  auto* simulate = app.add_subcommand("simulate", "Run a multi-period scenario");
  simulate->add_option("config", config, "Scenario config (JSON)")->required()->check(CLI::ExistingFile);

  bool nplayer = false;
  int players = 10;
  auto* calibrate = app.add_subcommand("calibrate", "Fit a type distribution to a snapshot");
  calibrate->add_option("config", config, "Scenario config (JSON)")->required()->check(CLI::ExistingFile);
  calibrate->add_flag("--nplayer", nplayer, "Use the N-player calibration");
  calibrate->add_option("--players", players, "N for --nplayer")->check(CLI::PositiveNumber);

  double tolerance = 0.05;
  auto* detect = app.add_subcommand("detect", "Flag sandwich attacks in a transaction file");
  detect->add_option("records", records, "Transaction CSV")->required()->check(CLI::ExistingFile);
  detect->add_option("--tolerance", tolerance, "Outer-leg symmetry tolerance")->check(CLI::Range(0.0, 1.0));

  double bot_liquidity = 0.0, gas = 20.0;
  std::optional<double> gamma, market;
  auto* thresholds = app.add_subcommand("thresholds", "Bot attack thresholds for a snapshot");
  thresholds->add_option("snapshot", snapshot, "Pool snapshot CSV")->required()->check(CLI::ExistingFile);
  thresholds->add_option("--L", bot_liquidity, "Bot liquidity")->required()->check(CLI::PositiveNumber);
  thresholds->add_option("--G", gas, "Gas cost in token B");
  thresholds->add_option("--gamma", gamma, "Fee rate (default: snapshot)");
  thresholds->add_option("--market", market, "Market rate (default: pool rate)");

  auto* metrics = app.add_subcommand("metrics", "Compare two liquidity distributions");
  metrics->add_option("a", a, "Snapshot or series")->required()->check(CLI::ExistingFile);
  metrics->add_option("b", b, "Snapshot or series (reference)")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);
  clmm::log::set_level(g.quiet ? clmm::log::Level::quiet : g.verbose ? clmm::log::Level::info : clmm::log::Level::warn);
  try {
    if (*simulate) return cmd_simulate(config, g);
    if (*calibrate) return cmd_calibrate(config, g, nplayer, players);
    if (*detect) return cmd_detect(records, tolerance);
    if (*thresholds) return cmd_thresholds(snapshot, bot_liquidity, gas, gamma, market);
    if (*metrics) return cmd_metrics(a, b);
  } catch (const clmm::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
