#include "clmm/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <Eigen/Dense>

#include "clmm/errors.hpp"
#include "clmm/log.hpp"

namespace clmm {

ArrivalModel ArrivalModel::constant(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error("arrival probability must lie in [0, 1]");
  if (p == 0.0) return never();
  if (p == 1.0) return always();
  return {0.0, std::log(1.0 / p - 1.0)};
}

namespace {

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stddev_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  return out;
}

// Antiderivative of decode_size (even, zero at the origin).
double decode_integral(double z) {
  const double a = std::abs(z);
  return std::expm1(a * std::numbers::ln10) / std::numbers::ln10 - a;
}

// Kernel matrix K[g, n] = phi((grid_g - x_n) / h) / h.
Eigen::MatrixXd kernel_matrix(const std::vector<double>& grid, const std::vector<double>& x, double h) {
  Eigen::MatrixXd k(static_cast<Eigen::Index>(grid.size()), static_cast<Eigen::Index>(x.size()));
  const double norm = 1.0 / (h * std::sqrt(2.0 * std::numbers::pi));
  for (Eigen::Index g = 0; g < k.rows(); ++g) {
    for (Eigen::Index n = 0; n < k.cols(); ++n) {
      const double r = (grid[static_cast<std::size_t>(g)] - x[static_cast<std::size_t>(n)]) / h;
      k(g, n) = norm * std::exp(-0.5 * r * r);
    }
  }
  return k;
}

}  // namespace

JointSwapDensity::JointSwapDensity(const JointSwapDensity& other)
    : SwapSizeModel(other),
      sample_z_(other.sample_z_),
      sample_y_(other.sample_y_),
      hz_(other.hz_),
      hy_(other.hy_),
      z_(other.z_),
      y_(other.y_),
      f_(other.f_),
      cdf_(other.cdf_),
      warned_(other.warned_.load()) {}

JointSwapDensity JointSwapDensity::fit(const std::vector<SizeSample>& samples, const KdeOptions& options) {
  JointSwapDensity out;
  for (const auto& s : samples) {
    if (!std::isfinite(s.log_size) || !std::isfinite(s.arbitrage)) throw FitError("non-finite sample");
    if (s.log_size == 0.0) continue;  // zero-size swaps carry no information
    out.sample_z_.push_back(s.log_size);
    out.sample_y_.push_back(s.arbitrage);
  }
  const std::size_t n = out.sample_z_.size();
  if (n < 2) throw FitError("kernel density needs at least two non-zero samples");
  if (options.grid_size < 2) throw FitError("grid size must be at least 2");

  const double scott = std::pow(static_cast<double>(n), -1.0 / 6.0);
  const double sz = stddev_of(out.sample_z_);
  const double sy = stddev_of(out.sample_y_);
  out.hz_ = options.bandwidth_size > 0.0 ? options.bandwidth_size : sz * scott;
  out.hy_ = options.bandwidth_arbitrage > 0.0 ? options.bandwidth_arbitrage : sy * scott;
  if (!(out.hz_ > 0.0) || !(out.hy_ > 0.0)) throw FitError("degenerate sample spread");

  const auto [zmin, zmax] = std::minmax_element(out.sample_z_.begin(), out.sample_z_.end());
  const auto [ymin, ymax] = std::minmax_element(out.sample_y_.begin(), out.sample_y_.end());
  out.z_ = linspace(*zmin - 3.0 * out.hz_, *zmax + 3.0 * out.hz_, options.grid_size);
  out.y_ = linspace(*ymin - 3.0 * out.hy_, *ymax + 3.0 * out.hy_, options.grid_size);

  const Eigen::MatrixXd kz = kernel_matrix(out.z_, out.sample_z_, out.hz_);
  const Eigen::MatrixXd ky = kernel_matrix(out.y_, out.sample_y_, out.hy_);
  const Eigen::MatrixXd f = kz * ky.transpose();

  const std::size_t gz = out.z_.size(), gy = out.y_.size();
  out.f_.resize(gz * gy);
  for (std::size_t i = 0; i < gz; ++i) {
    for (std::size_t j = 0; j < gy; ++j) {
      out.f_[i * gy + j] = f(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  const double cell = (out.z_[1] - out.z_[0]) * (out.y_[1] - out.y_[0]);
  const double total = std::accumulate(out.f_.begin(), out.f_.end(), 0.0) * cell;
  for (double& v : out.f_) v /= total;
  out.build_tables();
  return out;
}

void JointSwapDensity::build_tables() {
  const std::size_t gz = z_.size(), gy = y_.size();
  cdf_.assign(gz * gy, 0.0);
  for (std::size_t j = 0; j < gy; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < gz; ++i) {
      acc += f_[i * gy + j];
      cdf_[j * gz + i] = acc;
    }
  }
}

std::size_t JointSwapDensity::nearest_line(double arbitrage) const {
  if ((arbitrage < y_.front() || arbitrage > y_.back()) && !warned_.exchange(true)) {
    log::warn("arbitrage level " + std::to_string(arbitrage) +
              " outside swap-size grid; clamping to the nearest edge");
  }
  const double step = y_[1] - y_[0];
  const double pos = std::round((arbitrage - y_.front()) / step);
  return static_cast<std::size_t>(std::clamp(pos, 0.0, static_cast<double>(y_.size() - 1)));
}

double JointSwapDensity::sample(double arbitrage, double u) const {
  const std::size_t gz = z_.size();
  const std::size_t line = nearest_line(arbitrage);
  const double* cdf = cdf_.data() + line * gz;
  const double total = cdf[gz - 1];
  const double dz = z_[1] - z_[0];
  if (!(total > 0.0)) return 0.0;  // slice underflowed far outside the data
  const double target = u * total;
  const std::size_t cell = static_cast<std::size_t>(std::upper_bound(cdf, cdf + gz, target) - cdf);
  const std::size_t i = std::min(cell, gz - 1);
  const double below = i == 0 ? 0.0 : cdf[i - 1];
  const double mass = cdf[i] - below;
  const double frac = mass > 0.0 ? std::clamp((target - below) / mass, 0.0, 1.0) : 0.5;
  return decode_size(z_[i] - 0.5 * dz + frac * dz);
}

double JointSwapDensity::conditional_mean(double arbitrage) const {
  const std::vector<double> slice = conditional_slice(arbitrage);
  const double dz = z_[1] - z_[0];
  double mean = 0.0;
  for (std::size_t i = 0; i < z_.size(); ++i) {
    const double a = z_[i] - 0.5 * dz, b = z_[i] + 0.5 * dz;
    const double integral = decode_integral(b) - decode_integral(a);
    mean += slice[i] * integral / dz;
  }
  return mean;
}

double JointSwapDensity::density(double log_size, double arbitrage) const {
  if (sample_z_.empty()) throw Error("density samples not available");
  double acc = 0.0;
  for (std::size_t n = 0; n < sample_z_.size(); ++n) {
    const double rz = (log_size - sample_z_[n]) / hz_;
    const double ry = (arbitrage - sample_y_[n]) / hy_;
    acc += std::exp(-0.5 * (rz * rz + ry * ry));
  }
  return acc / (2.0 * std::numbers::pi * hz_ * hy_ * static_cast<double>(sample_z_.size()));
}

std::vector<double> JointSwapDensity::marginal_size() const {
  const std::size_t gz = z_.size(), gy = y_.size();
  const double dy = y_[1] - y_[0];
  std::vector<double> out(gz, 0.0);
  for (std::size_t i = 0; i < gz; ++i) {
    for (std::size_t j = 0; j < gy; ++j) out[i] += f_[i * gy + j] * dy;
  }
  return out;
}

std::vector<double> JointSwapDensity::conditional_slice(double arbitrage) const {
  const std::size_t gz = z_.size(), gy = y_.size();
  const std::size_t line = nearest_line(arbitrage);
  std::vector<double> out(gz);
  for (std::size_t i = 0; i < gz; ++i) out[i] = f_[i * gy + line];
  const double total = std::accumulate(out.begin(), out.end(), 0.0);
  if (total > 0.0) {
    for (double& v : out) v /= total;
  }
  return out;
}

nlohmann::json JointSwapDensity::to_json() const {
  nlohmann::json j;
  j["kind"] = "joint_swap_density";
  j["schema_version"] = 1;
  j["encoding"] = "sign(s)*log10(1+|s|)";
  j["bandwidth"] = {{"log_size", hz_}, {"arbitrage", hy_}};
  j["log_size_grid"] = z_;
  j["arbitrage_grid"] = y_;
  j["density"] = f_;
  j["samples"] = {{"log_size", sample_z_}, {"arbitrage", sample_y_}};
  return j;
}

JointSwapDensity JointSwapDensity::from_json(const nlohmann::json& j) {
  if (j.value("kind", "") != "joint_swap_density") throw ParseError("json", 0, "not a joint swap density");
  JointSwapDensity out;
  out.hz_ = j.at("bandwidth").at("log_size").get<double>();
  out.hy_ = j.at("bandwidth").at("arbitrage").get<double>();
  out.z_ = j.at("log_size_grid").get<std::vector<double>>();
  out.y_ = j.at("arbitrage_grid").get<std::vector<double>>();
  out.f_ = j.at("density").get<std::vector<double>>();
  if (j.contains("samples")) {
    out.sample_z_ = j["samples"].at("log_size").get<std::vector<double>>();
    out.sample_y_ = j["samples"].at("arbitrage").get<std::vector<double>>();
  }
  if (out.z_.size() < 2 || out.y_.size() < 2 || out.f_.size() != out.z_.size() * out.y_.size()) {
    throw ParseError("json", 0, "inconsistent density grid");
  }
  out.build_tables();
  return out;
}

std::vector<double> market_path(const MarketModel& model, double start, int belief, int steps, Rng& rng) {
  std::vector<double> out(static_cast<std::size_t>(steps) + 1);
  out[0] = start;
  for (int t = 1; t <= steps; ++t) {
    out[static_cast<std::size_t>(t)] = model.step(out[static_cast<std::size_t>(t) - 1], belief, rng);
  }
  return out;
}

std::vector<SizeSample> synthetic_history(const SyntheticHistoryParams& params, Rng& rng) {
  std::vector<SizeSample> out;
  out.reserve(params.count);
  while (out.size() < params.count) {
    const double y = params.arbitrage_spread * rng.normal();
    const bool large = rng.uniform() < params.large_fraction;
    const double mode = large ? params.large_mode : params.small_mode;
    const double magnitude = std::max(mode + params.mode_spread * rng.normal(), 1e-3);
    const double p_sell = 1.0 / (1.0 + std::exp(-params.sign_slope * y / params.arbitrage_spread));
    const double sign = rng.uniform() < p_sell ? -1.0 : 1.0;
    out.push_back({sign * magnitude, y});
  }
  return out;
}

}  // namespace clmm
