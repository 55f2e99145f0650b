#pragma once

// File ingestion. All inputs are comma-separated text with a header row;
// blank lines and lines starting with '#' are skipped.
//
// Pool snapshot:
//   tick_index,price_lower,price_upper,liquidity
//   1,1,1.21,70
//   ...
//   meta,<pool_rate>,<fee_rate>
// Tick indices may be 0- or 1-based and rows may come in any order.
//
// Swap history:   block,signed_size_tokenB,pool_rate_before,market_rate_before
// Market path:    minute,market_rate   (one row per minute)
// Transactions:   block,index,account,kind,token_a,token_b
//                 kind in {swap, add_liquidity, remove_liquidity}; deltas
//                 are pool-side (positive means the pool received tokens).

#include <iosfwd>
#include <string>
#include <vector>

#include "clmm/detector.hpp"
#include "clmm/pool.hpp"
#include "clmm/stochastic.hpp"

namespace clmm {

PoolState parse_pool_snapshot(std::istream& in, const std::string& source = "snapshot");
PoolState load_pool_snapshot(const std::string& path);
void write_pool_snapshot(std::ostream& out, const PoolState& state);
void save_pool_snapshot(const std::string& path, const PoolState& state);

struct SwapRecord {
  long block = 0;
  double size = 0.0;  // signed token B
  double pool_rate = 0.0;
  double market_rate = 0.0;
};

std::vector<SwapRecord> parse_swap_history(std::istream& in, const std::string& source = "history");
std::vector<SwapRecord> load_swap_history(const std::string& path);
// Encoded (size, arbitrage) pairs; zero-size swaps are dropped.
std::vector<SizeSample> size_samples(const std::vector<SwapRecord>& records);

// Minute-level rates stepped onto 12-second blocks: block b uses minute
// floor(b / blocks_per_minute).
std::vector<double> parse_market_minutes(std::istream& in, const std::string& source = "market");
std::vector<double> minutes_to_blocks(const std::vector<double>& minutes, int blocks, int blocks_per_minute = 5);
std::vector<double> load_market_path(const std::string& path, int blocks, int blocks_per_minute = 5);

std::vector<TransactionRecord> parse_transactions(std::istream& in, const std::string& source = "transactions");
std::vector<TransactionRecord> load_transactions(const std::string& path);

// Whitespace- or comma-separated numbers; a non-numeric first line is a header.
std::vector<double> load_series(const std::string& path);

}  // namespace clmm
