#include "clmm/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "clmm/errors.hpp"
#include "clmm/io.hpp"
#include "clmm/log.hpp"
#include "clmm/metrics.hpp"

namespace clmm {

namespace fs = std::filesystem;

const char* to_string(GameMode mode) {
  switch (mode) {
    case GameMode::single: return "single";
    case GameMode::nplayer: return "nplayer";
    case GameMode::mfg: return "mfg";
    case GameMode::stackelberg: return "stackelberg";
  }
  return "?";
}

GameMode parse_game_mode(const std::string& s) {
  if (s == "single") return GameMode::single;
  if (s == "nplayer") return GameMode::nplayer;
  if (s == "mfg") return GameMode::mfg;
  if (s == "stackelberg") return GameMode::stackelberg;
  throw ConfigError("unknown game mode '" + s + "'");
}

void ScenarioConfig::validate() const {
  if (schema_version != 1) throw ConfigError("unsupported schema_version " + std::to_string(schema_version));
  if (pool_snapshot.empty()) throw ConfigError("pool_snapshot is required");
  if (period_length < 1 || periods < 1) throw ConfigError("period_length and periods must be positive");
  if (periods > 1 && horizon != period_length * periods) {
    throw ConfigError("horizon " + std::to_string(horizon) + " must equal period_length x periods = " +
                      std::to_string(period_length * periods));
  }
  if (horizon < period_length) throw ConfigError("horizon shorter than one period");
  if (game_horizon < 0 || n_paths < 2) throw ConfigError("game_horizon >= 0 and n_paths >= 2 required");
  if (!(thresh > 0.0) || max_iterations < 1) throw ConfigError("invalid fictitious-play settings");
  if (mode == GameMode::nplayer && players.empty()) throw ConfigError("nplayer mode needs players");
  if ((mode == GameMode::stackelberg || bot_enabled) && !(bot.liquidity > 0.0) && !(bot_capital > 0.0)) {
    throw ConfigError("bot needs liquidity or capital");
  }
  if (!(bot.engagement >= 0.0 && bot.engagement <= 1.0)) throw ConfigError("bot engagement must lie in [0, 1]");
}

namespace {

std::string resolve(const std::string& path, const std::string& base) {
  if (path.empty() || fs::path(path).is_absolute()) return path;
  return (fs::path(base) / path).lexically_normal().string();
}

LpType parse_type(const nlohmann::json& j) {
  return {j.at("capital").get<double>(), j.value("risk_aversion", 0.0), j.value("belief", 0)};
}

}  // namespace

ScenarioConfig parse_config(const nlohmann::json& j, const std::string& base_dir) {
  ScenarioConfig c;
  try {
    c.schema_version = j.at("schema_version").get<int>();
    c.mode = parse_game_mode(j.value("mode", "mfg"));
    c.pool_snapshot = resolve(j.at("pool_snapshot").get<std::string>(), base_dir);
    c.target_snapshot = resolve(j.value("target_snapshot", ""), base_dir);
    c.types_file = resolve(j.value("types", ""), base_dir);
    if (j.contains("market")) {
      const auto& m = j["market"];
      c.market_file = resolve(m.value("file", ""), base_dir);
      c.market_rate0 = m.value("rate0", 0.0);
      c.market.alpha = m.value("alpha", c.market.alpha);
      c.market.sigma = m.value("sigma", c.market.sigma);
      c.market.dt = m.value("dt", c.market.dt);
      c.market.belief_scale = m.value("belief_scale", c.market.belief_scale);
    }
    if (j.contains("arrival")) {
      c.arrival.scale = j["arrival"].value("scale", c.arrival.scale);
      c.arrival.offset = j["arrival"].value("offset", c.arrival.offset);
    }
    if (j.contains("swap_model")) {
      const auto& s = j["swap_model"];
      c.swap_model.kind = s.value("kind", c.swap_model.kind);
      c.swap_model.path = resolve(s.value("path", ""), base_dir);
      c.swap_model.point_mass = s.value("size", 0.0);
      auto& p = c.swap_model.synthetic;
      p.count = s.value("count", p.count);
      p.small_mode = s.value("small_mode", p.small_mode);
      p.large_mode = s.value("large_mode", p.large_mode);
      p.mode_spread = s.value("mode_spread", p.mode_spread);
      p.large_fraction = s.value("large_fraction", p.large_fraction);
      p.arbitrage_spread = s.value("arbitrage_spread", p.arbitrage_spread);
      p.sign_slope = s.value("sign_slope", p.sign_slope);
      c.swap_model.kde.grid_size = s.value("grid_size", c.swap_model.kde.grid_size);
    }
    c.horizon = j.value("horizon", c.horizon);
    c.period_length = j.value("period_length", c.period_length);
    c.periods = j.value("periods", c.periods);
    c.game_horizon = j.value("game_horizon", c.period_length);
    c.n_paths = j.value("n_paths", c.n_paths);
    c.seed = j.value("seed", c.seed);
    c.threads = j.value("threads", c.threads);
    if (j.contains("fictitious_play")) {
      c.thresh = j["fictitious_play"].value("thresh", c.thresh);
      c.max_iterations = j["fictitious_play"].value("max_iterations", c.max_iterations);
    }
    if (j.contains("calibration")) {
      const auto& k = j["calibration"];
      auto& o = c.calibration;
      o.capitals = k.value("capitals", o.capitals);
      o.beliefs = k.value("beliefs", o.beliefs);
      o.lambda_max = k.value("lambda_max", o.lambda_max);
      o.lambda_points = k.value("lambda_points", o.lambda_points);
      o.opponent_samples = k.value("opponent_samples", o.opponent_samples);
      o.smooth = k.value("smooth", o.smooth);
    }
    if (j.contains("single_type")) c.single_type = parse_type(j["single_type"]);
    if (j.contains("players")) {
      for (const auto& p : j["players"]) c.players.push_back(parse_type(p));
    }
    if (j.contains("bot")) {
      const auto& b = j["bot"];
      c.bot_enabled = b.value("enabled", false);
      c.bot.liquidity = b.value("liquidity", 0.0);
      c.bot_capital = b.value("capital", 0.0);
      c.bot.gas = b.value("gas", c.bot.gas);
      c.bot.engagement = b.value("engagement", c.bot.engagement);
    }
    c.output_dir = resolve(j.value("output_dir", c.output_dir), base_dir);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(f);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return parse_config(j, fs::path(path).parent_path().string());
}

std::shared_ptr<const SwapSizeModel> make_swap_model(const SwapModelConfig& config, std::uint64_t seed) {
  if (config.kind == "point_mass") return std::make_shared<PointMassSwapSize>(config.point_mass);
  if (config.kind == "history") {
    return std::make_shared<JointSwapDensity>(
        JointSwapDensity::fit(size_samples(load_swap_history(config.path)), config.kde));
  }
  if (config.kind == "density") {
    std::ifstream f(config.path);
    if (!f) throw ConfigError("cannot open density " + config.path);
    return std::make_shared<JointSwapDensity>(JointSwapDensity::from_json(nlohmann::json::parse(f)));
  }
  if (config.kind == "synthetic") {
    Rng rng(seed, streams::kSynthetic, 0);
    return std::make_shared<JointSwapDensity>(
        JointSwapDensity::fit(synthetic_history(config.synthetic, rng), config.kde));
  }
  throw ConfigError("unknown swap model kind '" + config.kind + "'");
}

SimulationContext make_context(const ScenarioConfig& config, const PoolState& pool) {
  SimulationContext ctx;
  ctx.grid = pool.grid_ptr();
  ctx.pool_rate = pool.pool_rate();
  ctx.market_rate = config.market_rate0 > 0.0 ? config.market_rate0 : pool.pool_rate();
  ctx.fee_rate = pool.fee_rate();
  ctx.horizon = config.game_horizon;
  ctx.arrival = config.arrival;
  ctx.sizes = make_swap_model(config.swap_model, config.seed);
  ctx.market = config.market;
  ctx.n_paths = config.n_paths;
  ctx.seed = config.seed;
  ctx.threads = config.threads;
  return ctx;
}

namespace {

class PeriodSink final : public BlockSink {
 public:
  PeriodSink(ReportBundle& bundle, PeriodReport& period, int offset)
      : bundle_(bundle), period_(period), offset_(offset) {}

  void on_block(const BlockEvent& e) override {
    const int block = e.block + offset_;
    bundle_.rates.push_back({block, e.pool_rate, e.market_rate});
    const double lp = e.fees - e.bot_fees;
    bundle_.ledger.push_back({block, e.arrived ? e.swap : 0.0, e.engaged, e.attacked, e.bot_profit, lp,
                              e.pool_rate, e.market_rate});
    period_.lp_fees += lp;
    period_.bot_profit += e.bot_profit;
    if (e.attacked) ++period_.attacks;
    if (e.clamped) ++bundle_.clamped_swaps;
  }

 private:
  ReportBundle& bundle_;
  PeriodReport& period_;
  int offset_;
};

}  // namespace

ReportBundle run_scenario(const ScenarioConfig& config) {
  config.validate();
  const PoolState snapshot = load_pool_snapshot(config.pool_snapshot);
  SimulationContext base = make_context(config, snapshot);
  base.validate();
  const int d = snapshot.ticks();
  std::vector<double> target;
  if (!config.target_snapshot.empty()) {
    const PoolState t = load_pool_snapshot(config.target_snapshot);
    if (!(t.grid() == snapshot.grid())) throw ConfigError("target snapshot grid differs from the pool grid");
    target.assign(t.liquidity().begin(), t.liquidity().end());
  } else {
    target.assign(snapshot.liquidity().begin(), snapshot.liquidity().end());
  }

  // realized market over the whole horizon
  std::vector<double> market;
  if (!config.market_file.empty()) {
    market = load_market_path(config.market_file, config.horizon);
  } else {
    Rng rng(config.seed, streams::kMarket, 0);
    market = market_path(config.market, base.market_rate, 0, config.horizon - 1, rng);
  }

  BotConfig bot = config.bot;
  const bool use_bot = config.mode == GameMode::stackelberg || config.bot_enabled;
  if (use_bot && config.bot_capital > 0.0) {
    bot.liquidity = bot_liquidity_from_capital(snapshot, config.bot_capital, base.market_rate);
  }

  std::optional<TypeDistribution> theta;
  if (config.mode == GameMode::mfg || config.mode == GameMode::stackelberg) {
    if (!config.types_file.empty()) {
      theta = TypeDistribution::load(config.types_file);
    } else {
      theta = calibrate_mfg(target, base, config.calibration).distribution;
    }
  }

  ReportBundle bundle;
  bundle.mode = to_string(config.mode);
  bundle.seed = config.seed;
  bundle.grid.assign(snapshot.grid().points().begin(), snapshot.grid().points().end());

  std::vector<double> liquidity(snapshot.liquidity().begin(), snapshot.liquidity().end());
  double pool_rate = snapshot.pool_rate();
  const int periods = config.periods;
  for (int h = 0; h < periods; ++h) {
    PeriodReport period;
    period.period = h + 1;
    period.start_block = h * config.period_length;
    const double m_start = market[static_cast<std::size_t>(period.start_block)];

    SimulationContext game = base;
    game.pool_rate = pool_rate;
    game.market_rate = m_start;
    game.seed = derive_seed(config.seed, streams::kPeriods, static_cast<std::uint64_t>(h));
    FictitiousPlayOptions fp;
    fp.thresh = config.thresh;
    fp.max_iterations = config.max_iterations;
    if (config.mode == GameMode::stackelberg) fp.bot = &bot;

    switch (config.mode) {
      case GameMode::single: {
        const SingleLpResult r = optimize_single(game, config.single_type, snapshot.liquidity());
        liquidity.assign(snapshot.liquidity().begin(), snapshot.liquidity().end());
        const double u = action_units(game, r.action, config.single_type.capital);
        for (int i = r.action.lower; i < r.action.upper; ++i) liquidity[static_cast<std::size_t>(i - 1)] += u;
        break;
      }
      case GameMode::nplayer: {
        const std::vector<Action> initial(config.players.size(), Action{1, d + 1});
        const std::vector<double> none(static_cast<std::size_t>(d), 0.0);
        try {
          const NPlayerResult r = fictitious_play_nplayer(config.players, initial, game, none, fp);
          liquidity = r.liquidity;
          period.game_error = r.errors.back();
        } catch (const NonConvergenceError& e) {
          log::warn(std::string(e.what()) + "; using the best iterate");
          liquidity = e.best_liquidity();
          period.converged = false;
          period.game_error = e.best_error();
        }
        break;
      }
      case GameMode::mfg:
      case GameMode::stackelberg: {
        try {
          const MfgResult r = fictitious_play_mfg(liquidity, *theta, game, fp);
          liquidity = r.liquidity;
          period.game_error = r.errors.back();
        } catch (const NonConvergenceError& e) {
          log::warn(std::string(e.what()) + "; using the best iterate");
          liquidity = e.best_liquidity();
          period.converged = false;
          period.game_error = e.best_error();
        }
        break;
      }
    }
    period.liquidity = liquidity;

    SimulationContext realized = game;
    realized.seed = config.seed;
    realized.horizon = config.period_length - 1;
    realized.market_path.assign(market.begin() + period.start_block,
                                market.begin() + period.start_block + config.period_length);
    PeriodSink sink(bundle, period, period.start_block);
    std::vector<double> yield(static_cast<std::size_t>(d), 0.0);
    const PathTotals totals = simulate_path(realized, liquidity, 0, streams::kPeriods, static_cast<std::uint64_t>(h),
                                            yield, use_bot ? &bot : nullptr, &sink);
    pool_rate = totals.final_pool_rate;
    bundle.periods.push_back(std::move(period));
  }
  if (bundle.clamped_swaps > 0) {
    log::warn(std::to_string(bundle.clamped_swaps) + " swaps exceeded pool capacity and were clamped");
  }
  finalize_metrics(bundle, target);
  return bundle;
}

void finalize_metrics(ReportBundle& bundle, const std::vector<double>& target) {
  bundle.total_lp_fees = 0.0;
  bundle.total_bot_profit = 0.0;
  for (const auto& row : bundle.ledger) {
    bundle.total_lp_fees += row.lp_fees_total;
    bundle.total_bot_profit += row.bot_profit;
  }
  bundle.mape = 0.0;
  if (!bundle.rates.empty()) {
    std::vector<double> pool, market;
    for (const auto& r : bundle.rates) {
      pool.push_back(r.pool_rate);
      market.push_back(r.market_rate);
    }
    bundle.mape = mape(pool, market);
  }
  bundle.w1_target.reset();
  bundle.r_score_target.reset();
  if (!bundle.periods.empty() && !target.empty()) {
    const auto& final_liquidity = bundle.periods.back().liquidity;
    bundle.w1_target = wasserstein1(final_liquidity, target);
    try {
      bundle.r_score_target = r_score(final_liquidity, target);
    } catch (const Error&) {
      bundle.r_score_target.reset();
    }
  }
}

bool operator==(const LedgerRow& a, const LedgerRow& b) {
  return a.block == b.block && a.swap == b.swap && a.engaged == b.engaged && a.attacked == b.attacked &&
         a.bot_profit == b.bot_profit && a.lp_fees_total == b.lp_fees_total && a.pool_rate == b.pool_rate &&
         a.market_rate == b.market_rate;
}

bool operator==(const ReportBundle& a, const ReportBundle& b) {
  return a.mode == b.mode && a.seed == b.seed && a.grid == b.grid && a.periods == b.periods && a.rates == b.rates &&
         a.ledger == b.ledger && a.mape == b.mape && a.w1_target == b.w1_target &&
         a.r_score_target == b.r_score_target && a.total_lp_fees == b.total_lp_fees &&
         a.total_bot_profit == b.total_bot_profit && a.clamped_swaps == b.clamped_swaps;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> csv_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

std::ifstream open_report(const fs::path& p) {
  std::ifstream f(p);
  if (!f) throw Error("cannot open " + p.string());
  return f;
}

}  // namespace

void emit_reports(const ReportBundle& bundle, const std::string& dir) {
  fs::create_directories(dir);
  nlohmann::json s;
  s["schema_version"] = 1;
  s["mode"] = bundle.mode;
  s["seed"] = bundle.seed;
  s["grid"] = bundle.grid;
  s["periods"] = nlohmann::json::array();
  for (const auto& p : bundle.periods) {
    s["periods"].push_back({{"period", p.period},
                            {"start_block", p.start_block},
                            {"lp_fees", p.lp_fees},
                            {"bot_profit", p.bot_profit},
                            {"attacks", p.attacks},
                            {"converged", p.converged},
                            {"game_error", p.game_error},
                            {"liquidity", p.liquidity}});
  }
  nlohmann::json m;
  m["mape_pool_vs_market"] = bundle.mape;
  m["w1_target"] = bundle.w1_target ? nlohmann::json(*bundle.w1_target) : nlohmann::json(nullptr);
  m["r_score_target"] = bundle.r_score_target ? nlohmann::json(*bundle.r_score_target) : nlohmann::json(nullptr);
  m["total_lp_fees"] = bundle.total_lp_fees;
  m["total_bot_profit"] = bundle.total_bot_profit;
  m["clamped_swaps"] = bundle.clamped_swaps;
  s["metrics"] = m;
  {
    std::ofstream f(fs::path(dir) / "summary.json");
    if (!f) throw Error("cannot write summary.json in " + dir);
    f << s.dump(2) << '\n';
  }
  if (bundle.periods.empty()) return;

  std::ofstream rates(fs::path(dir) / "rates.csv");
  rates << "block,pool_rate,market_rate\n";
  for (const auto& r : bundle.rates) rates << r.block << ',' << fmt(r.pool_rate) << ',' << fmt(r.market_rate) << '\n';

  std::ofstream ledger(fs::path(dir) / "ledger.csv");
  ledger << "block,swap,engaged,attacked,bot_profit,lp_fees_total,pool_rate,market_rate\n";
  for (const auto& r : bundle.ledger) {
    ledger << r.block << ',' << fmt(r.swap) << ',' << (r.engaged ? 1 : 0) << ',' << (r.attacked ? 1 : 0) << ','
           << fmt(r.bot_profit) << ',' << fmt(r.lp_fees_total) << ',' << fmt(r.pool_rate) << ','
           << fmt(r.market_rate) << '\n';
  }

  std::ofstream hist(fs::path(dir) / "liquidity_periods.csv");
  hist << "period,tick,price_lower,price_upper,liquidity\n";
  for (const auto& p : bundle.periods) {
    for (std::size_t i = 0; i < p.liquidity.size(); ++i) {
      hist << p.period << ',' << i + 1 << ',' << fmt(bundle.grid[i]) << ',' << fmt(bundle.grid[i + 1]) << ','
           << fmt(p.liquidity[i]) << '\n';
    }
  }
}

ReportBundle read_reports(const std::string& dir) {
  ReportBundle b;
  auto sf = open_report(fs::path(dir) / "summary.json");
  const nlohmann::json s = nlohmann::json::parse(sf);
  if (s.value("schema_version", 0) != 1) throw ParseError("summary.json", 0, "unsupported schema");
  b.mode = s.at("mode").get<std::string>();
  b.seed = s.at("seed").get<std::uint64_t>();
  b.grid = s.at("grid").get<std::vector<double>>();
  for (const auto& p : s.at("periods")) {
    PeriodReport r;
    r.period = p.at("period");
    r.start_block = p.at("start_block");
    r.lp_fees = p.at("lp_fees");
    r.bot_profit = p.at("bot_profit");
    r.attacks = p.at("attacks");
    r.converged = p.at("converged");
    r.game_error = p.at("game_error");
    r.liquidity = p.at("liquidity").get<std::vector<double>>();
    b.periods.push_back(std::move(r));
  }
  const auto& m = s.at("metrics");
  b.mape = m.at("mape_pool_vs_market");
  if (!m.at("w1_target").is_null()) b.w1_target = m["w1_target"].get<double>();
  if (!m.at("r_score_target").is_null()) b.r_score_target = m["r_score_target"].get<double>();
  b.total_lp_fees = m.at("total_lp_fees");
  b.total_bot_profit = m.at("total_bot_profit");
  b.clamped_swaps = m.at("clamped_swaps");
  if (b.periods.empty()) return b;

  std::string line;
  auto rf = open_report(fs::path(dir) / "rates.csv");
  std::getline(rf, line);
  while (std::getline(rf, line)) {
    const auto f = csv_fields(line);
    if (f.size() != 3) throw ParseError("rates.csv", 0, "bad row");
    b.rates.push_back({std::stoi(f[0]), std::stod(f[1]), std::stod(f[2])});
  }
  auto lf = open_report(fs::path(dir) / "ledger.csv");
  std::getline(lf, line);
  while (std::getline(lf, line)) {
    const auto f = csv_fields(line);
    if (f.size() != 8) throw ParseError("ledger.csv", 0, "bad row");
    b.ledger.push_back({std::stoi(f[0]), std::stod(f[1]), f[2] == "1", f[3] == "1", std::stod(f[4]),
                        std::stod(f[5]), std::stod(f[6]), std::stod(f[7])});
  }
  return b;
}

}  // namespace clmm
