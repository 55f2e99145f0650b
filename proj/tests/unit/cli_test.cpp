#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <memory>
#include <string>

namespace {

struct CliRun {
  int status = -1;
  std::string out;
};

CliRun run(const std::string& args) {
  const std::string cmd = std::string(CLMM_CLI) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 256> buf{};
  while (fgets(buf.data(), buf.size(), p)) r.out += buf.data();
  r.status = pclose(p);
  return r;
}

const std::string data = CLMM_DATA_DIR;

}  // namespace

TEST(Cli, Detect) {
  const CliRun r = run("detect " + data + "/transactions.csv");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("liquidity_based"), std::string::npos);
  EXPECT_NE(r.out.find("swap_based"), std::string::npos);
  EXPECT_EQ(r.out.find("0xrouter"), std::string::npos);
}

TEST(Cli, Thresholds) {
  const CliRun r = run("thresholds " + data + "/toy_pool.csv --L 500 --G 0.001 --gamma 0.003");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("active_tick=3"), std::string::npos);
  EXPECT_NE(r.out.find("xi_upper="), std::string::npos);
}

TEST(Cli, Metrics) {
  const CliRun r = run("metrics " + data + "/toy_pool.csv " + data + "/toy_pool.csv");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("w1=0\n"), std::string::npos);
  EXPECT_NE(r.out.find("r_score=1\n"), std::string::npos);
}

TEST(Cli, Errors) {
  EXPECT_NE(run("").status, 0);
  EXPECT_NE(run("thresholds " + data + "/toy_pool.csv").status, 0);
  EXPECT_NE(run("detect " + data + "/toy_pool.csv").status, 0);
}
