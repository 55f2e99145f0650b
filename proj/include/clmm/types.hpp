#pragma once

// Distribution of LP types: weights over (capital, belief) cells, each with
// a density in risk aversion tabulated on an equispaced lambda grid.

#include <string>
#include <vector>

#include <json.hpp>

#include "clmm/lp.hpp"

namespace clmm {

struct TypeAtom {
  double capital = 0.0;
  double risk_aversion = 0.0;
  int belief = 0;
  double weight = 0.0;
};

class TypeDistribution {
 public:
  TypeDistribution(std::vector<double> capitals, std::vector<int> beliefs, double lambda_max,
                   int lambda_points = 30);

  // Atoms snap to the nearest lambda grid point.
  static TypeDistribution from_atoms(const std::vector<TypeAtom>& atoms, std::vector<double> capitals,
                                     std::vector<int> beliefs, double lambda_max, int lambda_points = 30);

  const std::vector<double>& capitals() const noexcept { return capitals_; }
  const std::vector<int>& beliefs() const noexcept { return beliefs_; }
  const std::vector<double>& lambda_grid() const noexcept { return lambdas_; }
  double lambda_max() const noexcept { return lambdas_.back(); }
  std::size_t cells() const noexcept { return capitals_.size() * beliefs_.size(); }
  std::size_t lambda_points() const noexcept { return lambdas_.size(); }

  double cell_capital(std::size_t cell) const { return capitals_.at(cell / beliefs_.size()); }
  int cell_belief(std::size_t cell) const { return beliefs_.at(cell % beliefs_.size()); }
  std::size_t cell_index(std::size_t capital_index, std::size_t belief_index) const {
    return capital_index * beliefs_.size() + belief_index;
  }

  // Probability mass of grid type (cell, lambda index); all masses sum to 1.
  double mass(std::size_t cell, std::size_t l) const { return mass_.at(cell * lambdas_.size() + l); }
  void set_mass(std::size_t cell, std::size_t l, double m);
  double cell_weight(std::size_t cell) const;
  // Density in lambda: mass over the trapezoid quadrature weight.
  double density(std::size_t cell, std::size_t l) const;
  double quadrature_weight(std::size_t l) const;

  // Number of LPs represented; l_MFG scales with it.
  double population() const noexcept { return population_; }
  void set_population(double m);

  void normalize();
  double total_mass() const;
  std::vector<double> capital_marginal() const;
  std::vector<TypeAtom> atoms(double min_weight = 0.0) const;
  LpType type(std::size_t cell, std::size_t l) const;

  // Gaussian KDE in lambda within each cell, truncated to [0, lambda_max]
  // and renormalized to the cell weight.
  TypeDistribution smoothed() const;

  nlohmann::json to_json() const;
  static TypeDistribution from_json(const nlohmann::json& j);
  void save(const std::string& path) const;
  static TypeDistribution load(const std::string& path);

 private:
  std::vector<double> capitals_;
  std::vector<int> beliefs_;
  std::vector<double> lambdas_;
  std::vector<double> mass_;
  double population_ = 1.0;
};

}  // namespace clmm
