#include "clmm/game.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "clmm/log.hpp"
#include "clmm/metrics.hpp"
#include "clmm/nnls.hpp"
#include "clmm/parallel.hpp"

namespace clmm {

namespace {

void check_length(std::span<const double> v, const SimulationContext& ctx, const char* what) {
  if (static_cast<int>(v.size()) != ctx.ticks()) {
    throw Error(std::string(what) + " has " + std::to_string(v.size()) + " entries, expected " +
                std::to_string(ctx.ticks()));
  }
}

void add_rectangle(std::vector<double>& l, const Action& a, double units) {
  for (int i = a.lower; i < a.upper; ++i) l[static_cast<std::size_t>(i - 1)] += units;
}

std::size_t argmax_index(const std::vector<double>& values) {
  std::size_t best = 0;
  for (std::size_t q = 1; q < values.size(); ++q) {
    if (values[q] > values[best]) best = q;
  }
  return best;
}

}  // namespace

std::vector<double> mfg_liquidity(const TypeStrategy& strategy, const TypeDistribution& theta,
                                  const SimulationContext& ctx) {
  const ActionSpace space(ctx.ticks());
  std::vector<double> l(static_cast<std::size_t>(ctx.ticks()), 0.0);
  for (std::size_t c = 0; c < theta.cells(); ++c) {
    for (std::size_t g = 0; g < theta.lambda_points(); ++g) {
      const double m = theta.mass(c, g);
      if (m <= 0.0) continue;
      const Action& a = space[strategy.at(c, g)];
      add_rectangle(l, a, theta.population() * m * action_units(ctx, a, theta.cell_capital(c)));
    }
  }
  return l;
}

ValueEstimate MfgActionStats::estimate(std::size_t belief_index, std::size_t action, const LpType& type) const {
  const double k = type.capital;
  return make_estimate(k * mean[belief_index][action], k * k * variance[belief_index][action], n_paths,
                       type.risk_aversion);
}

MfgActionStats mfg_action_stats(const SimulationContext& ctx, std::span<const double> liquidity,
                                const std::vector<int>& beliefs, const BotConfig* bot, std::uint64_t stream) {
  ctx.validate();
  check_length(liquidity, ctx, "liquidity");
  const ActionSpace space(ctx.ticks());
  const auto d = static_cast<std::size_t>(ctx.ticks());
  const auto n = static_cast<std::size_t>(ctx.n_paths);
  std::vector<double> cost(space.size());
  for (std::size_t q = 0; q < space.size(); ++q) {
    cost[q] = position_unit_cost(*ctx.grid, ctx.pool_rate, space[q].lower, space[q].upper, ctx.market_rate);
  }

  MfgActionStats stats;
  stats.beliefs = beliefs;
  stats.n_paths = n;
  for (int belief : beliefs) {
    const std::vector<double> yields = simulate_yields(ctx, liquidity, belief, stream, bot);
    std::vector<double> sum(space.size(), 0.0), sumsq(space.size(), 0.0);
    std::vector<double> prefix(d + 1);
    for (std::size_t p = 0; p < n; ++p) {
      prefix[0] = 0.0;
      for (std::size_t i = 0; i < d; ++i) prefix[i + 1] = prefix[i] + yields[p * d + i];
      for (std::size_t q = 0; q < space.size(); ++q) {
        const Action& a = space[q];
        const double y = (prefix[static_cast<std::size_t>(a.upper - 1)] - prefix[static_cast<std::size_t>(a.lower - 1)]) / cost[q];
        sum[q] += y;
        sumsq[q] += y * y;
      }
    }
    std::vector<double> mean(space.size()), var(space.size());
    for (std::size_t q = 0; q < space.size(); ++q) {
      mean[q] = sum[q] / static_cast<double>(n);
      var[q] = n > 1 ? std::max(sumsq[q] - sum[q] * mean[q], 0.0) / static_cast<double>(n - 1) : 0.0;
    }
    stats.mean.push_back(std::move(mean));
    stats.variance.push_back(std::move(var));
  }
  return stats;
}

TypeStrategy mfg_best_response(const SimulationContext& ctx, std::span<const double> liquidity,
                               const TypeDistribution& theta, const BotConfig* bot, std::uint64_t stream) {
  const MfgActionStats stats = mfg_action_stats(ctx, liquidity, theta.beliefs(), bot, stream);
  const std::size_t na = stats.mean.front().size();
  TypeStrategy s;
  s.lambda_points = theta.lambda_points();
  s.action.resize(theta.cells() * s.lambda_points);
  std::vector<double> values(na);
  for (std::size_t c = 0; c < theta.cells(); ++c) {
    const std::size_t b = c % theta.beliefs().size();
    const double k = theta.cell_capital(c);
    for (std::size_t g = 0; g < s.lambda_points; ++g) {
      const double lambda = theta.lambda_grid()[g];
      for (std::size_t q = 0; q < na; ++q) values[q] = k * stats.mean[b][q] - lambda * k * k * stats.variance[b][q];
      s.action[c * s.lambda_points + g] = argmax_index(values);
    }
  }
  return s;
}

double mfg_fixed_point_residual(std::span<const double> liquidity, const TypeDistribution& theta,
                                const SimulationContext& ctx, const BotConfig* bot, std::uint64_t stream) {
  const TypeStrategy s = mfg_best_response(ctx, liquidity, theta, bot, stream);
  return wasserstein1(liquidity, mfg_liquidity(s, theta, ctx));
}

MfgResult fictitious_play_mfg(std::span<const double> initial, const TypeDistribution& theta,
                              const SimulationContext& ctx, const FictitiousPlayOptions& options) {
  if (!(options.thresh > 0.0)) throw Error("thresh must be positive");
  check_length(initial, ctx, "initial liquidity");
  std::vector<double> hist(initial.begin(), initial.end());
  MfgResult r;
  double best_error = INFINITY;
  std::vector<double> best_liquidity;
  for (int it = 0; it < options.max_iterations; ++it) {
    TypeStrategy s = mfg_best_response(ctx, hist, theta, options.bot, options.stream);
    std::vector<double> li = mfg_liquidity(s, theta, ctx);
    const double err = wasserstein1(hist, li);
    r.errors.push_back(err);
    r.iterations = it + 1;
    if (err < best_error) {
      best_error = err;
      best_liquidity = hist;
    }
    if (err < options.thresh) {
      r.liquidity = std::move(hist);
      r.response = std::move(li);
      r.strategy = std::move(s);
      r.residual = mfg_fixed_point_residual(r.liquidity, theta, ctx, options.bot, options.stream);
      return r;
    }
    // running mean of l^0, l^1, ..., l^I
    const double w = 1.0 / static_cast<double>(it + 2);
    for (std::size_t i = 0; i < hist.size(); ++i) hist[i] += w * (li[i] - hist[i]);
  }
  throw NonConvergenceError("mean-field fictitious play did not converge in " +
                                std::to_string(options.max_iterations) + " iterations",
                            best_error, {}, best_liquidity);
}

std::vector<double> profile_liquidity(const SimulationContext& ctx, const std::vector<LpType>& types,
                                      const std::vector<Action>& profile, int exclude) {
  if (types.size() != profile.size()) throw Error("profile and type counts differ");
  std::vector<double> l(static_cast<std::size_t>(ctx.ticks()), 0.0);
  for (std::size_t n = 0; n < types.size(); ++n) {
    if (static_cast<int>(n) == exclude) continue;
    add_rectangle(l, profile[n], action_units(ctx, profile[n], types[n].capital));
  }
  return l;
}

std::uint64_t player_stream(std::size_t player) { return derive_seed(streams::kPlayers, player); }

NPlayerResult fictitious_play_nplayer(const std::vector<LpType>& types, const std::vector<Action>& initial,
                                      const SimulationContext& ctx, std::span<const double> background,
                                      const FictitiousPlayOptions& options) {
  ctx.validate();
  if (!(options.thresh > 0.0)) throw Error("thresh must be positive");
  if (types.empty()) throw Error("need at least one player");
  check_length(background, ctx, "background liquidity");
  const std::size_t players = types.size();
  const ActionSpace space(ctx.ticks());

  std::vector<double> hist = profile_liquidity(ctx, types, initial);
  std::vector<std::vector<double>> memory(players);
  for (std::size_t n = 0; n < players; ++n) memory[n] = profile_liquidity(ctx, types, initial, static_cast<int>(n));

  NPlayerResult r;
  double best_error = INFINITY;
  std::vector<Action> best_profile;
  std::vector<double> best_liquidity;
  for (int it = 1; it <= options.max_iterations; ++it) {
    std::vector<Action> profile(players);
    for (std::size_t n = 0; n < players; ++n) {
      std::vector<double> base(background.begin(), background.end());
      for (std::size_t i = 0; i < base.size(); ++i) base[i] += memory[n][i];
      EstimateOptions eo;
      eo.stream = player_stream(n);
      eo.bot = options.bot;
      const auto estimates = estimate_actions(ctx, space, types[n], base, eo);
      profile[n] = space[argmax_value(estimates)];
    }
    std::vector<double> li = profile_liquidity(ctx, types, profile);
    const double err = wasserstein1(li, hist);
    r.errors.push_back(err);
    r.iterations = it;
    if (err < best_error) {
      best_error = err;
      best_profile = profile;
      best_liquidity = li;
    }
    const double w = 1.0 / static_cast<double>(it + 1);
    for (std::size_t i = 0; i < hist.size(); ++i) hist[i] += w * (li[i] - hist[i]);
    for (std::size_t n = 0; n < players; ++n) {
      const std::vector<double> others = profile_liquidity(ctx, types, profile, static_cast<int>(n));
      for (std::size_t i = 0; i < hist.size(); ++i) memory[n][i] += w * (others[i] - memory[n][i]);
    }
    if (err < options.thresh) {
      r.profile = std::move(profile);
      r.liquidity = std::move(li);
      return r;
    }
  }
  throw NonConvergenceError("N-player fictitious play did not converge in " +
                                std::to_string(options.max_iterations) + " iterations",
                            best_error, best_profile, best_liquidity);
}

namespace {

TypeDistribution empty_grid(const CalibrationOptions& o) {
  return TypeDistribution(o.capitals, o.beliefs, o.lambda_max, o.lambda_points);
}

double entropy(const TypeDistribution& t) {
  double h = 0.0;
  for (std::size_t c = 0; c < t.cells(); ++c) {
    for (std::size_t g = 0; g < t.lambda_points(); ++g) {
      const double m = t.mass(c, g);
      if (m > 0.0) h -= m * std::log(m);
    }
  }
  return h;
}

}  // namespace

CalibrationResult calibrate_nplayer(std::span<const double> target, int players, const SimulationContext& ctx,
                                    const CalibrationOptions& options) {
  ctx.validate();
  check_length(target, ctx, "target liquidity");
  if (players < 2) throw Error("N-player calibration needs at least two players");
  if (options.opponent_samples < 1) throw Error("need at least one opponent sample");
  const ActionSpace space(ctx.ticks());
  const auto d = static_cast<Eigen::Index>(ctx.ticks());
  const auto na = static_cast<Eigen::Index>(space.size());

  Eigen::MatrixXd jmat = Eigen::MatrixXd::Zero(d, na);
  for (Eigen::Index q = 0; q < na; ++q) {
    const Action& a = space[static_cast<std::size_t>(q)];
    for (int i = a.lower; i < a.upper; ++i) jmat(i - 1, q) = 1.0;
  }
  const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(target.data(), d);
  const NnlsResult fit = nnls(jmat, b);
  const double total = fit.x.sum();
  if (!(total > 0.0)) throw Error("target liquidity has no non-negative representation");
  std::vector<double> mu(space.size());
  for (std::size_t q = 0; q < space.size(); ++q) mu[q] = fit.x(static_cast<Eigen::Index>(q)) / total;
  const double per_player = total / players;

  std::vector<std::vector<double>> opponents(static_cast<std::size_t>(options.opponent_samples));
  for (std::size_t s = 0; s < opponents.size(); ++s) {
    Rng rng(ctx.seed, streams::kOpponents, s);
    std::vector<double> l(static_cast<std::size_t>(d), 0.0);
    for (int n = 1; n < players; ++n) {
      const double u = rng.uniform();
      double acc = 0.0;
      std::size_t q = 0;
      for (; q + 1 < mu.size(); ++q) {
        acc += mu[q];
        if (u < acc) break;
      }
      add_rectangle(l, space[q], per_player);
    }
    opponents[s] = std::move(l);
  }

  TypeDistribution grid = empty_grid(options);
  TypeStrategy strategy;
  strategy.lambda_points = grid.lambda_points();
  strategy.action.assign(grid.cells() * grid.lambda_points(), 0);

  SimulationContext inner = ctx;
  inner.threads = 1;
  std::vector<std::vector<double>> mean(grid.cells(), std::vector<double>(space.size(), 0.0));
  std::vector<std::vector<double>> var = mean;
  // jobs: cell x sample, each a full action scan on its own stream
  const std::size_t samples = opponents.size();
  std::vector<std::vector<ValueEstimate>> scans(grid.cells() * samples);
  parallel_for(scans.size(), ctx.threads, [&](std::size_t job) {
    const std::size_t c = job / samples, s = job % samples;
    EstimateOptions eo;
    eo.stream = derive_seed(streams::kOpponents, s);
    scans[job] = estimate_actions(inner, space, {grid.cell_capital(c), 0.0, grid.cell_belief(c)}, opponents[s], eo);
  });
  for (std::size_t c = 0; c < grid.cells(); ++c) {
    for (std::size_t s = 0; s < samples; ++s) {
      const auto& scan = scans[c * samples + s];
      for (std::size_t q = 0; q < space.size(); ++q) {
        mean[c][q] += scan[q].mean / static_cast<double>(samples);
        var[c][q] += scan[q].variance / static_cast<double>(samples);
      }
    }
  }
  std::vector<double> values(space.size());
  std::vector<double> count(space.size(), 0.0);
  for (std::size_t c = 0; c < grid.cells(); ++c) {
    for (std::size_t g = 0; g < grid.lambda_points(); ++g) {
      const double lambda = grid.lambda_grid()[g];
      for (std::size_t q = 0; q < space.size(); ++q) values[q] = mean[c][q] - lambda * var[c][q];
      const std::size_t best = argmax_index(values);
      strategy.action[c * grid.lambda_points() + g] = best;
      count[best] += 1.0;
    }
  }

  double unmatched = 0.0;
  for (std::size_t q = 0; q < space.size(); ++q) {
    if (mu[q] > 0.0 && count[q] == 0.0) unmatched += mu[q];
  }
  if (unmatched >= 1.0) throw Error("no type best-responds with any action in the support of mu");
  if (unmatched > 0.0) {
    log::warn("calibration: " + std::to_string(unmatched) +
              " of the action law has no best-responding type; renormalizing");
  }
  for (std::size_t c = 0; c < grid.cells(); ++c) {
    for (std::size_t g = 0; g < grid.lambda_points(); ++g) {
      const std::size_t q = strategy.at(c, g);
      grid.set_mass(c, g, mu[q] / count[q]);
    }
  }
  grid.normalize();
  grid.set_population(players);
  log::info("calibration: type entropy " + std::to_string(entropy(grid)));

  CalibrationResult r{grid, options.smooth ? grid.smoothed() : grid, strategy, mu, fit.residual, unmatched};
  return r;
}

CalibrationResult calibrate_mfg(std::span<const double> target, const SimulationContext& ctx,
                                const CalibrationOptions& options) {
  check_length(target, ctx, "target liquidity");
  TypeDistribution grid = empty_grid(options);
  const ActionSpace space(ctx.ticks());
  const TypeStrategy strategy = mfg_best_response(ctx, target, grid);

  // identical rows (same capital and action) share one column; the fitted
  // weight is split equally among the types behind it
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> groups;
  for (std::size_t c = 0; c < grid.cells(); ++c) {
    const std::size_t ki = c / grid.beliefs().size();
    for (std::size_t g = 0; g < grid.lambda_points(); ++g) {
      groups[{ki, strategy.at(c, g)}].push_back(c * grid.lambda_points() + g);
    }
  }
  const auto d = static_cast<Eigen::Index>(ctx.ticks());
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(d, static_cast<Eigen::Index>(groups.size()));
  Eigen::Index col = 0;
  for (const auto& [key, members] : groups) {
    const Action& a = space[key.second];
    const double u = action_units(ctx, a, grid.capitals()[key.first]);
    for (int i = a.lower; i < a.upper; ++i) p(i - 1, col) = u;
    ++col;
  }
  const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(target.data(), d);
  const NnlsResult fit = nnls(p, b);
  const double total = fit.x.sum();
  if (!(total > 0.0)) throw Error("target liquidity has no non-negative representation");

  col = 0;
  for (const auto& [key, members] : groups) {
    const double share = fit.x(col++) / total / static_cast<double>(members.size());
    for (std::size_t flat : members) grid.set_mass(flat / grid.lambda_points(), flat % grid.lambda_points(), share);
  }
  grid.normalize();
  grid.set_population(total);

  CalibrationResult r{grid, options.smooth ? grid.smoothed() : grid, strategy, {}, fit.residual, 0.0};
  return r;
}

}  // namespace clmm
