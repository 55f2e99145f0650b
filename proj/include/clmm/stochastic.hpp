#pragma once

// Exogenous randomness: swap arrivals, arbitrage-conditional swap sizes and
// the market exchange-rate path.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "clmm/random.hpp"

namespace clmm {

// rho(x) = 1 / (1 + exp(-scale |x| + offset)), x = p* - m*.
struct ArrivalModel {
  double scale = 0.01145;
  double offset = 0.6169;

  double prob(double arbitrage) const {
    return 1.0 / (1.0 + std::exp(-scale * std::abs(arbitrage) + offset));
  }
  bool sample(double arbitrage, Rng& rng) const { return rng.uniform() < prob(arbitrage); }

  static ArrivalModel always() { return {0.0, -INFINITY}; }
  static ArrivalModel never() { return {0.0, INFINITY}; }
  // Constant arrival probability p in [0, 1].
  static ArrivalModel constant(double p);
};

// Signed-log size encoding z = sign(s) log10(1 + |s|); bijective on the reals.
inline double encode_size(double s) { return std::copysign(std::log10(1.0 + std::abs(s)), s); }
inline double decode_size(double z) { return std::copysign(std::expm1(std::abs(z) * std::log(10.0)), z); }

// Conditional law of the signed swap size (token B) given the arbitrage level.
class SwapSizeModel {
 public:
  virtual ~SwapSizeModel() = default;
  // Inverse-CDF draw from the conditional law using a single uniform u in [0, 1).
  virtual double sample(double arbitrage, double u) const = 0;
  double sample(double arbitrage, Rng& rng) const { return sample(arbitrage, rng.uniform()); }
  virtual double conditional_mean(double arbitrage) const = 0;
};

class PointMassSwapSize final : public SwapSizeModel {
 public:
  explicit PointMassSwapSize(double size) : size_(size) {}
  double sample(double, double) const override { return size_; }
  double conditional_mean(double) const override { return size_; }

 private:
  double size_;
};

struct SizeSample {
  double log_size;   // encoded, see encode_size
  double arbitrage;  // p* - m* before the swap
};

struct KdeOptions {
  int grid_size = 256;
  // Bandwidth override per dimension; <= 0 selects Scott's rule.
  double bandwidth_size = 0.0;
  double bandwidth_arbitrage = 0.0;
};

// Gaussian product-kernel estimate of the joint density of (encoded size,
// arbitrage), tabulated on a rectangular grid.
class JointSwapDensity final : public SwapSizeModel {
 public:
  static JointSwapDensity fit(const std::vector<SizeSample>& samples, const KdeOptions& options = {});

  double sample(double arbitrage, double u) const override;
  using SwapSizeModel::sample;
  // Mean of the decoded size under the sampler's conditional law.
  double conditional_mean(double arbitrage) const override;

  // Direct kernel evaluation (not the tabulated grid).
  double density(double log_size, double arbitrage) const;

  const std::vector<double>& size_grid() const noexcept { return z_; }
  const std::vector<double>& arbitrage_grid() const noexcept { return y_; }
  // Tabulated density, row-major [size index][arbitrage index], normalized
  // so that its grid Riemann sum is 1.
  const std::vector<double>& grid_density() const noexcept { return f_; }
  double grid_value(std::size_t iz, std::size_t iy) const { return f_[iz * y_.size() + iy]; }
  double bandwidth_size() const noexcept { return hz_; }
  double bandwidth_arbitrage() const noexcept { return hy_; }

  std::vector<double> marginal_size() const;
  // Conditional slice at the nearest arbitrage grid line, normalized to 1.
  std::vector<double> conditional_slice(double arbitrage) const;

  nlohmann::json to_json() const;
  static JointSwapDensity from_json(const nlohmann::json& j);

  JointSwapDensity(const JointSwapDensity& other);
  JointSwapDensity& operator=(const JointSwapDensity&) = delete;

 private:
  JointSwapDensity() = default;
  void build_tables();
  std::size_t nearest_line(double arbitrage) const;

  std::vector<double> sample_z_, sample_y_;
  double hz_ = 0.0, hy_ = 0.0;
  std::vector<double> z_, y_;
  std::vector<double> f_;
  std::vector<double> cdf_;  // per arbitrage line, length |z| each, cumulative cell mass
  mutable std::atomic<bool> warned_{false};
};

// m_t = m_{t-1} exp((alpha + belief * belief_scale - sigma^2) dt + sigma sqrt(dt) Z).
struct MarketModel {
  double alpha = 0.0;
  double sigma = 0.00106;
  double dt = 12.0;
  double belief_scale = 1e-3;

  double drift(int belief) const { return (alpha + belief * belief_scale - sigma * sigma) * dt; }
  double step(double prev, int belief, double z) const {
    return prev * std::exp(drift(belief) + sigma * std::sqrt(dt) * z);
  }
  double step(double prev, int belief, Rng& rng) const { return step(prev, belief, rng.normal()); }
};

std::vector<double> market_path(const MarketModel& model, double start, int belief, int steps, Rng& rng);

// Synthetic swap history with bimodal encoded sizes whose sign leans
// against the arbitrage level.
struct SyntheticHistoryParams {
  std::size_t count = 5000;
  double small_mode = 0.8;   // encoded size of the small-trade cluster
  double large_mode = 2.4;   // encoded size of the large-trade cluster
  double mode_spread = 0.25;
  double large_fraction = 0.4;
  double arbitrage_spread = 1.0;
  double sign_slope = 1.5;   // logit slope of P(x < 0) in arbitrage / arbitrage_spread
};

std::vector<SizeSample> synthetic_history(const SyntheticHistoryParams& params, Rng& rng);

}  // namespace clmm
