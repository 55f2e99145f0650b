#include "clmm/nnls.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "clmm/errors.hpp"

namespace clmm {

namespace {

// Least squares on the passive columns; zero elsewhere.
Eigen::VectorXd passive_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const std::vector<bool>& passive) {
  std::vector<Eigen::Index> cols;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    if (passive[static_cast<std::size_t>(j)]) cols.push_back(j);
  }
  Eigen::VectorXd z = Eigen::VectorXd::Zero(a.cols());
  if (cols.empty()) return z;
  Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) sub.col(static_cast<Eigen::Index>(c)) = a.col(cols[c]);
  const Eigen::VectorXd s = sub.colPivHouseholderQr().solve(b);
  for (std::size_t c = 0; c < cols.size(); ++c) z(cols[c]) = s(static_cast<Eigen::Index>(c));
  return z;
}

}  // namespace

NnlsResult nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, int max_iterations, double tolerance) {
  if (a.rows() != b.size()) throw Error("nnls dimension mismatch");
  const Eigen::Index n = a.cols();
  if (max_iterations <= 0) max_iterations = static_cast<int>(3 * n + 30);
  if (tolerance <= 0.0) {
    tolerance = 10.0 * std::numeric_limits<double>::epsilon() * a.norm() * std::max(b.norm(), 1.0) *
                static_cast<double>(std::max(a.rows(), n));
  }

  NnlsResult r;
  r.x = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  Eigen::VectorXd w = a.transpose() * (b - a * r.x);

  while (r.iterations < max_iterations) {
    // most positive gradient among active (zero) variables
    Eigen::Index best = -1;
    double best_w = tolerance;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[static_cast<std::size_t>(j)] && w(j) > best_w) {
        best_w = w(j);
        best = j;
      }
    }
    if (best < 0) break;
    passive[static_cast<std::size_t>(best)] = true;

    for (;;) {
      ++r.iterations;
      Eigen::VectorXd z = passive_solve(a, b, passive);
      bool feasible = true;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && z(j) <= 0.0) feasible = false;
      }
      if (feasible) {
        r.x = z;
        break;
      }
      double alpha = 1.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && z(j) <= 0.0) {
          alpha = std::min(alpha, r.x(j) / (r.x(j) - z(j)));
        }
      }
      r.x += alpha * (z - r.x);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && r.x(j) <= tolerance) {
          passive[static_cast<std::size_t>(j)] = false;
          r.x(j) = 0.0;
        }
      }
      if (r.iterations >= max_iterations) break;
    }
    w = a.transpose() * (b - a * r.x);
  }
  r.x = r.x.cwiseMax(0.0);
  r.residual = (a * r.x - b).norm();
  return r;
}

}  // namespace clmm
