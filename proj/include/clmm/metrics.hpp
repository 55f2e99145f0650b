#pragma once

#include <span>

namespace clmm {

// W1 between f and g after normalizing each to unit mass; ground metric is
// the tick index, so the result is in ticks.
double wasserstein1(std::span<const double> f, std::span<const double> g);

// Coefficient of determination of f as a prediction of g: 1 - SS_res / SS_tot.
double r_score(std::span<const double> f, std::span<const double> g);

// Mean absolute percentage error of a against b, in percent.
double mape(std::span<const double> a, std::span<const double> b);

// Half the L1 distance between two mass-normalized vectors.
double total_variation(std::span<const double> f, std::span<const double> g);

}  // namespace clmm
