#include <gtest/gtest.h>

#include <random>

#include "clmm/nnls.hpp"

using namespace clmm;

namespace {

// Exhaustive oracle: least squares on every support, keep the best feasible.
double brute_force_residual(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  const int n = static_cast<int>(a.cols());
  double best = b.norm();
  for (int mask = 1; mask < (1 << n); ++mask) {
    std::vector<int> cols;
    for (int j = 0; j < n; ++j) {
      if (mask & (1 << j)) cols.push_back(j);
    }
    Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = a.col(cols[k]);
    const Eigen::VectorXd x = sub.colPivHouseholderQr().solve(b);
    if ((x.array() >= -1e-12).all()) best = std::min(best, (sub * x - b).norm());
  }
  return best;
}

}  // namespace

TEST(Nnls, MatchesExhaustiveSearch) {
  std::mt19937_64 gen(9);
  std::normal_distribution<double> z;
  for (int trial = 0; trial < 60; ++trial) {
    const int m = 6 + trial % 5, n = 2 + trial % 6;
    Eigen::MatrixXd a(m, n);
    Eigen::VectorXd b(m);
    for (int i = 0; i < m; ++i) {
      b(i) = z(gen);
      for (int j = 0; j < n; ++j) a(i, j) = z(gen);
    }
    const NnlsResult r = nnls(a, b);
    EXPECT_TRUE((r.x.array() >= 0.0).all());
    EXPECT_NEAR(r.residual, (a * r.x - b).norm(), 1e-12);
    EXPECT_NEAR(r.residual, brute_force_residual(a, b), 1e-9);
  }
}

TEST(Nnls, KktConditions) {
  std::mt19937_64 gen(10);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd a(30, 12);
  Eigen::VectorXd b(30);
  for (int i = 0; i < 30; ++i) {
    b(i) = u(gen);
    for (int j = 0; j < 12; ++j) a(i, j) = u(gen) < 0.3 ? 1.0 : 0.0;
  }
  const NnlsResult r = nnls(a, b);
  const Eigen::VectorXd w = a.transpose() * (b - a * r.x);
  for (int j = 0; j < 12; ++j) {
    EXPECT_LE(w(j), 1e-9);
    if (r.x(j) > 1e-12) EXPECT_NEAR(w(j), 0.0, 1e-9);
  }
}

TEST(Nnls, RecoversNonNegativeTruth) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(4, 4);
  a(0, 1) = 0.5;
  Eigen::VectorXd x(4);
  x << 1.0, 0.0, 2.0, 0.5;
  const NnlsResult r = nnls(a, a * x);
  EXPECT_LT((r.x - x).norm(), 1e-12);
}
