#include "clmm/types.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>

#include "clmm/errors.hpp"

namespace clmm {

TypeDistribution::TypeDistribution(std::vector<double> capitals, std::vector<int> beliefs, double lambda_max,
                                   int lambda_points)
    : capitals_(std::move(capitals)), beliefs_(std::move(beliefs)) {
  if (capitals_.empty() || beliefs_.empty()) throw Error("type distribution needs capitals and beliefs");
  for (double k : capitals_) {
    if (!(k > 0.0)) throw Error("capital must be positive");
  }
  if (!(lambda_max >= 0.0) || lambda_points < 1) throw Error("invalid lambda grid");
  if (lambda_max == 0.0) lambda_points = 1;
  lambdas_.resize(static_cast<std::size_t>(lambda_points));
  for (int i = 0; i < lambda_points; ++i) {
    lambdas_[static_cast<std::size_t>(i)] = lambda_points == 1 ? 0.0 : lambda_max * i / (lambda_points - 1);
  }
  mass_.assign(cells() * lambdas_.size(), 0.0);
}

TypeDistribution TypeDistribution::from_atoms(const std::vector<TypeAtom>& atoms, std::vector<double> capitals,
                                              std::vector<int> beliefs, double lambda_max, int lambda_points) {
  TypeDistribution out(std::move(capitals), std::move(beliefs), lambda_max, lambda_points);
  for (const auto& a : atoms) {
    const auto ki = std::find(out.capitals_.begin(), out.capitals_.end(), a.capital);
    const auto bi = std::find(out.beliefs_.begin(), out.beliefs_.end(), a.belief);
    if (ki == out.capitals_.end() || bi == out.beliefs_.end()) throw Error("atom outside the type cells");
    std::size_t l = 0;
    if (out.lambdas_.size() > 1) {
      const double step = out.lambdas_[1];
      l = static_cast<std::size_t>(
          std::clamp(std::round(a.risk_aversion / step), 0.0, static_cast<double>(out.lambdas_.size() - 1)));
    }
    const std::size_t cell = out.cell_index(static_cast<std::size_t>(ki - out.capitals_.begin()),
                                            static_cast<std::size_t>(bi - out.beliefs_.begin()));
    out.mass_[cell * out.lambdas_.size() + l] += a.weight;
  }
  out.normalize();
  return out;
}

void TypeDistribution::set_mass(std::size_t cell, std::size_t l, double m) {
  if (!(m >= 0.0)) throw Error("type mass must be non-negative");
  mass_.at(cell * lambdas_.size() + l) = m;
}

double TypeDistribution::cell_weight(std::size_t cell) const {
  const auto begin = mass_.begin() + static_cast<std::ptrdiff_t>(cell * lambdas_.size());
  return std::accumulate(begin, begin + static_cast<std::ptrdiff_t>(lambdas_.size()), 0.0);
}

double TypeDistribution::quadrature_weight(std::size_t l) const {
  const std::size_t n = lambdas_.size();
  if (n == 1) return 1.0;
  const double h = lambdas_[1] - lambdas_[0];
  return (l == 0 || l == n - 1) ? 0.5 * h : h;
}

double TypeDistribution::density(std::size_t cell, std::size_t l) const {
  return mass(cell, l) / quadrature_weight(l);
}

void TypeDistribution::set_population(double m) {
  if (!(m > 0.0)) throw Error("population must be positive");
  population_ = m;
}

double TypeDistribution::total_mass() const { return std::accumulate(mass_.begin(), mass_.end(), 0.0); }

void TypeDistribution::normalize() {
  const double total = total_mass();
  if (!(total > 0.0)) throw Error("type distribution has zero mass");
  for (double& m : mass_) m /= total;
}

std::vector<double> TypeDistribution::capital_marginal() const {
  std::vector<double> out(capitals_.size(), 0.0);
  for (std::size_t c = 0; c < cells(); ++c) out[c / beliefs_.size()] += cell_weight(c);
  return out;
}

std::vector<TypeAtom> TypeDistribution::atoms(double min_weight) const {
  std::vector<TypeAtom> out;
  for (std::size_t c = 0; c < cells(); ++c) {
    for (std::size_t l = 0; l < lambdas_.size(); ++l) {
      const double m = mass(c, l);
      if (m > min_weight) out.push_back({cell_capital(c), lambdas_[l], cell_belief(c), m});
    }
  }
  return out;
}

LpType TypeDistribution::type(std::size_t cell, std::size_t l) const {
  return {cell_capital(cell), lambdas_.at(l), cell_belief(cell)};
}

TypeDistribution TypeDistribution::smoothed() const {
  TypeDistribution out = *this;
  const std::size_t n = lambdas_.size();
  if (n == 1) return out;
  const double spacing = lambdas_[1] - lambdas_[0];
  for (std::size_t c = 0; c < cells(); ++c) {
    const double w = cell_weight(c);
    if (!(w > 0.0)) continue;
    double mean = 0.0, sq = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
      mean += mass(c, l) * lambdas_[l];
      sq += mass(c, l) * mass(c, l);
    }
    mean /= w;
    double var = 0.0;
    for (std::size_t l = 0; l < n; ++l) var += mass(c, l) * (lambdas_[l] - mean) * (lambdas_[l] - mean);
    var /= w;
    const double n_eff = w * w / sq;
    double h = std::sqrt(var) * std::pow(n_eff, -0.2);
    if (!(h >= spacing)) h = spacing;

    std::vector<double> dens(n, 0.0);
    for (std::size_t g = 0; g < n; ++g) {
      for (std::size_t l = 0; l < n; ++l) {
        const double r = (lambdas_[g] - lambdas_[l]) / h;
        dens[g] += mass(c, l) * std::exp(-0.5 * r * r);
      }
    }
    double integral = 0.0;
    for (std::size_t g = 0; g < n; ++g) integral += dens[g] * quadrature_weight(g);
    for (std::size_t g = 0; g < n; ++g) out.mass_[c * n + g] = w * dens[g] * quadrature_weight(g) / integral;
  }
  return out;
}

nlohmann::json TypeDistribution::to_json() const {
  nlohmann::json j;
  j["kind"] = "type_distribution";
  j["schema_version"] = 1;
  j["capitals"] = capitals_;
  j["beliefs"] = beliefs_;
  j["lambda_max"] = lambda_max();
  j["lambda_points"] = lambdas_.size();
  j["population"] = population_;
  nlohmann::json cells_json = nlohmann::json::array();
  for (std::size_t c = 0; c < cells(); ++c) {
    std::vector<double> dens(lambdas_.size());
    for (std::size_t l = 0; l < lambdas_.size(); ++l) dens[l] = density(c, l);
    cells_json.push_back({{"capital", cell_capital(c)},
                          {"belief", cell_belief(c)},
                          {"weight", cell_weight(c)},
                          {"lambda_density", dens}});
  }
  j["cells"] = cells_json;
  return j;
}

TypeDistribution TypeDistribution::from_json(const nlohmann::json& j) {
  if (j.value("kind", "") != "type_distribution") throw ParseError("json", 0, "not a type distribution");
  if (j.value("schema_version", 0) != 1) throw ParseError("json", 0, "unsupported type distribution schema");
  TypeDistribution out(j.at("capitals").get<std::vector<double>>(), j.at("beliefs").get<std::vector<int>>(),
                       j.at("lambda_max").get<double>(), j.at("lambda_points").get<int>());
  out.population_ = j.value("population", 1.0);
  const auto& cells_json = j.at("cells");
  if (cells_json.size() != out.cells()) throw ParseError("json", 0, "cell count mismatch");
  for (std::size_t c = 0; c < out.cells(); ++c) {
    const auto dens = cells_json[c].at("lambda_density").get<std::vector<double>>();
    if (dens.size() != out.lambdas_.size()) throw ParseError("json", 0, "lambda grid mismatch");
    for (std::size_t l = 0; l < dens.size(); ++l) out.set_mass(c, l, dens[l] * out.quadrature_weight(l));
  }
  return out;
}

void TypeDistribution::save(const std::string& path) const {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path);
  f << to_json().dump(2) << '\n';
}

TypeDistribution TypeDistribution::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot read " + path);
  return from_json(nlohmann::json::parse(f));
}

}  // namespace clmm
