#include <gtest/gtest.h>

#include <random>

#include "clmm/errors.hpp"
#include "clmm/metrics.hpp"

using namespace clmm;

TEST(Wasserstein, ShiftOfPointMass) {
  EXPECT_DOUBLE_EQ(wasserstein1(std::vector<double>{1, 0, 0, 0}, std::vector<double>{0, 0, 0, 5}), 3.0);
  EXPECT_DOUBLE_EQ(wasserstein1(std::vector<double>{1, 1, 0}, std::vector<double>{0, 1, 1}), 1.0);
}

TEST(Wasserstein, MetricProperties) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int n = 0; n < 100; ++n) {
    std::vector<double> a(12), b(12), c(12);
    for (int i = 0; i < 12; ++i) {
      a[i] = u(gen);
      b[i] = u(gen);
      c[i] = u(gen);
    }
    EXPECT_EQ(wasserstein1(a, a), 0.0);
    EXPECT_NEAR(wasserstein1(a, b), wasserstein1(b, a), 1e-12);
    EXPECT_LE(wasserstein1(a, c), wasserstein1(a, b) + wasserstein1(b, c) + 1e-12);
    std::vector<double> scaled(a);
    for (auto& x : scaled) x *= 7.0;
    EXPECT_NEAR(wasserstein1(a, scaled), 0.0, 1e-12);
  }
}

TEST(Wasserstein, RejectsBadInput) {
  EXPECT_THROW(wasserstein1(std::vector<double>{1, 2}, std::vector<double>{1}), Error);
  EXPECT_THROW(wasserstein1(std::vector<double>{0, 0}, std::vector<double>{1, 1}), Error);
  EXPECT_THROW(wasserstein1(std::vector<double>{-1, 2}, std::vector<double>{1, 1}), Error);
}

TEST(RScore, CoefficientOfDetermination) {
  const std::vector<double> g{1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(r_score(g, g), 1.0);
  EXPECT_DOUBLE_EQ(r_score(std::vector<double>(4, 2.5), g), 0.0);
  EXPECT_DOUBLE_EQ(r_score(std::vector<double>{2, 2, 3, 4}, g), 1.0 - 1.0 / 5.0);
  EXPECT_THROW(r_score(g, std::vector<double>(4, 1.0)), Error);
}

TEST(Mape, Percent) {
  EXPECT_DOUBLE_EQ(mape(std::vector<double>{110, 90}, std::vector<double>{100, 100}), 10.0);
  EXPECT_THROW(mape(std::vector<double>{1}, std::vector<double>{0}), Error);
}

TEST(TotalVariation, HalfL1OfNormalized) {
  EXPECT_DOUBLE_EQ(total_variation(std::vector<double>{1, 0}, std::vector<double>{0, 3}), 1.0);
  EXPECT_DOUBLE_EQ(total_variation(std::vector<double>{1, 1}, std::vector<double>{2, 2}), 0.0);
}
