#include "clmm/metrics.hpp"

#include <cmath>
#include <numeric>

#include "clmm/errors.hpp"

namespace clmm {

namespace {

double mass(std::span<const double> v, const char* name) {
  double m = 0.0;
  for (double x : v) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw Error(std::string(name) + " must be non-negative and finite");
    m += x;
  }
  if (!(m > 0.0)) throw Error(std::string(name) + " has zero mass");
  return m;
}

void same_length(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error("length mismatch");
}

}  // namespace

double wasserstein1(std::span<const double> f, std::span<const double> g) {
  same_length(f, g);
  const double mf = mass(f, "f"), mg = mass(g, "g");
  double cf = 0.0, cg = 0.0, w = 0.0;
  for (std::size_t i = 0; i + 1 < f.size(); ++i) {
    cf += f[i] / mf;
    cg += g[i] / mg;
    w += std::abs(cf - cg);
  }
  return w;
}

double r_score(std::span<const double> f, std::span<const double> g) {
  same_length(f, g);
  if (g.empty()) throw Error("empty series");
  const double mean = std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(g.size());
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    ss_res += (g[i] - f[i]) * (g[i] - f[i]);
    ss_tot += (g[i] - mean) * (g[i] - mean);
  }
  if (!(ss_tot > 0.0)) throw Error("r_score undefined for a constant reference series");
  return 1.0 - ss_res / ss_tot;
}

double mape(std::span<const double> a, std::span<const double> b) {
  same_length(a, b);
  if (b.empty()) throw Error("empty series");
  double acc = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (!(b[i] > 0.0)) throw Error("mape reference must be strictly positive");
    acc += std::abs(a[i] - b[i]) / b[i];
  }
  return 100.0 * acc / static_cast<double>(b.size());
}

double total_variation(std::span<const double> f, std::span<const double> g) {
  same_length(f, g);
  const double mf = mass(f, "f"), mg = mass(g, "g");
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) acc += std::abs(f[i] / mf - g[i] / mg);
  return 0.5 * acc;
}

}  // namespace clmm
