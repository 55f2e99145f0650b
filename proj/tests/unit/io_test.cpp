#include <gtest/gtest.h>

#include <sstream>

#include "clmm/errors.hpp"
#include "clmm/io.hpp"
#include "clmm/log.hpp"
#include "common/fixtures.hpp"

using namespace clmm;
namespace ct = clmm::testing;

namespace {

const char* kToy =
    "tick_index,price_lower,price_upper,liquidity\n"
    "1,1,1.21,70\n2,1.21,1.44,90\n3,1.44,1.69,111.052\n4,1.69,1.96,113.75\n5,1.96,2.25,105\n6,2.25,2.56,90\n"
    "meta,1.6,0.0005\n";

PoolState parse(const std::string& s) {
  std::istringstream in(s);
  return parse_pool_snapshot(in);
}

template <class Fn>
std::size_t error_line(Fn fn) {
  try {
    fn();
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST(Snapshot, ToyFile) {
  const PoolState p = load_pool_snapshot(std::string(CLMM_DATA_DIR) + "/toy_pool.csv");
  const PoolState want = ct::toy_pool();
  EXPECT_EQ(p.grid(), want.grid());
  EXPECT_EQ(std::vector<double>(p.liquidity().begin(), p.liquidity().end()), ct::toy_liquidity());
  EXPECT_EQ(p.pool_rate(), 1.6);
  EXPECT_EQ(p.fee_rate(), 0.0005);
  EXPECT_EQ(p.active_tick(), 3);
}

TEST(Snapshot, ShuffledRowsAndZeroBasedIndexing) {
  const std::string shuffled =
      "tick_index,price_lower,price_upper,liquidity\n"
      "meta,1.6,0.0005\n5,1.96,2.25,105\n1,1,1.21,70\n6,2.25,2.56,90\n3,1.44,1.69,111.052\n2,1.21,1.44,90\n"
      "4,1.69,1.96,113.75\n";
  const PoolState a = parse(kToy), b = parse(shuffled);
  EXPECT_EQ(a.grid(), b.grid());
  EXPECT_TRUE(std::equal(a.liquidity().begin(), a.liquidity().end(), b.liquidity().begin()));
  const std::string zero = "tick_index,price_lower,price_upper,liquidity\n0,1,2,5\n1,2,3,6\nmeta,1.5,0.003\n";
  EXPECT_EQ(parse(zero).liquidity(2), 6.0);
}

TEST(Snapshot, EmptyLiquidityIsZeroWithWarning) {
  log::set_level(log::Level::quiet);
  log::reset_warning_count();
  const PoolState p = parse("tick_index,price_lower,price_upper,liquidity\n1,1,2,\n2,2,3,\nmeta,1.5,0.003\n");
  EXPECT_EQ(p.liquidity(1), 0.0);
  EXPECT_EQ(p.liquidity(2), 0.0);
  EXPECT_EQ(log::warning_count(), 1u);
  log::set_level(log::Level::warn);
}

TEST(Snapshot, DescriptiveErrors) {
  const std::string h = "tick_index,price_lower,price_upper,liquidity\n";
  EXPECT_EQ(error_line([&] { parse(h + "1,1,2,5\n2,2,3,-1\nmeta,1.5,0\n"); }), 3u);
  EXPECT_EQ(error_line([&] { parse(h + "1,1,2,5\n2,2.1,3,1\nmeta,1.5,0\n"); }), 3u);
  EXPECT_EQ(error_line([&] { parse(h + "1,1,2,5\n3,2,3,1\nmeta,1.5,0\n"); }), 3u);
  EXPECT_EQ(error_line([&] { parse(h + "1,1,2,5\n1,2,3,1\nmeta,1.5,0\n"); }), 3u);
  EXPECT_EQ(error_line([&] { parse(h + "1,2,1,5\nmeta,1.5,0\n"); }), 2u);
  EXPECT_EQ(error_line([&] { parse(h + "1,1,2,abc\nmeta,1.5,0\n"); }), 2u);
  EXPECT_EQ(error_line([&] { parse("tick,lo,hi,l\n1,1,2,5\n"); }), 1u);
  EXPECT_THROW(parse(h + "1,1,2,5\n"), ParseError);
  EXPECT_THROW(load_pool_snapshot("/nonexistent/pool.csv"), Error);
}

TEST(Snapshot, WriteParseRoundTripIsExact) {
  const PoolState pool = ct::desk_pool(13);
  std::ostringstream out;
  write_pool_snapshot(out, pool);
  const PoolState back = parse(out.str());
  EXPECT_EQ(back.grid(), pool.grid());
  EXPECT_TRUE(std::equal(back.liquidity().begin(), back.liquidity().end(), pool.liquidity().begin()));
  EXPECT_EQ(back.pool_rate(), pool.pool_rate());
  EXPECT_EQ(back.fee_rate(), pool.fee_rate());
}

TEST(SwapHistory, ParsesAndEncodes) {
  std::istringstream in(
      "block,signed_size_tokenB,pool_rate_before,market_rate_before\n10,-99,1.6,1.5\n11,0,1.6,1.6\n12,9,1.5,1.6\n");
  const auto rec = parse_swap_history(in);
  ASSERT_EQ(rec.size(), 3u);
  const auto s = size_samples(rec);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_NEAR(s[0].log_size, -2.0, 1e-15);
  EXPECT_NEAR(s[0].arbitrage, 0.1, 1e-15);
  EXPECT_NEAR(s[1].log_size, 1.0, 1e-15);
  EXPECT_GT(load_swap_history(std::string(CLMM_DATA_DIR) + "/swap_history.csv").size(), 100u);
}

TEST(MarketFile, MinutesStepToBlocks) {
  std::istringstream in("minute,market_rate\n0,1.5\n1,1.6\n2,1.7\n");
  const auto minutes = parse_market_minutes(in);
  const auto blocks = minutes_to_blocks(minutes, 12);
  const std::vector<double> want{1.5, 1.5, 1.5, 1.5, 1.5, 1.6, 1.6, 1.6, 1.6, 1.6, 1.7, 1.7};
  EXPECT_EQ(blocks, want);
  std::istringstream gap("minute,market_rate\n0,1.5\n2,1.6\n");
  EXPECT_THROW(parse_market_minutes(gap), ParseError);
  EXPECT_EQ(load_market_path(std::string(CLMM_DATA_DIR) + "/market_minutes.csv", 600).size(), 600u);
}

TEST(Transactions, ParseFile) {
  const auto t = load_transactions(std::string(CLMM_DATA_DIR) + "/transactions.csv");
  ASSERT_EQ(t.size(), 9u);
  EXPECT_EQ(t[0].kind, TxKind::add_liquidity);
  EXPECT_EQ(t[0].account, "0xbot");
  EXPECT_EQ(detect_sandwich_attacks(t).size(), 2u);
  std::istringstream dup("block,index,account,kind,token_a,token_b\n1,0,a,swap,1,1\n1,0,b,swap,1,1\n");
  EXPECT_THROW(parse_transactions(dup), ParseError);
}
