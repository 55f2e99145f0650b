#include "clmm/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "clmm/errors.hpp"
#include "clmm/log.hpp"

namespace clmm {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool skip(const std::string& line) {
  const std::string t = trim(line);
  return t.empty() || t[0] == '#';
}

double number(const std::string& field, const std::string& source, std::size_t line, const char* what) {
  double v = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto r = std::from_chars(begin, end, v);
  if (r.ec != std::errc() || r.ptr != end || !std::isfinite(v)) {
    throw ParseError(source, line, std::string("invalid ") + what + " '" + field + "'");
  }
  return v;
}

long integer(const std::string& field, const std::string& source, std::size_t line, const char* what) {
  long v = 0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto r = std::from_chars(begin, end, v);
  if (r.ec != std::errc() || r.ptr != end) {
    throw ParseError(source, line, std::string("invalid ") + what + " '" + field + "'");
  }
  return v;
}

// Reads the header line and checks its column names.
std::size_t expect_header(std::istream& in, const std::string& source, const std::vector<std::string>& columns) {
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (skip(line)) continue;
    const auto fields = split(line);
    if (fields != columns) {
      std::string want;
      for (const auto& c : columns) want += (want.empty() ? "" : ",") + c;
      throw ParseError(source, n, "expected header '" + want + "'");
    }
    return n;
  }
  throw ParseError(source, n, "missing header");
}

std::ifstream open(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open " + path);
  return f;
}

void check_columns(const std::vector<std::string>& fields, std::size_t want, const std::string& source,
                   std::size_t line) {
  if (fields.size() != want) {
    throw ParseError(source, line, "expected " + std::to_string(want) + " columns, found " +
                                       std::to_string(fields.size()));
  }
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

PoolState parse_pool_snapshot(std::istream& in, const std::string& source) {
  std::size_t n = expect_header(in, source, {"tick_index", "price_lower", "price_upper", "liquidity"});
  struct Row {
    double lower, upper, liquidity;
    std::size_t line;
  };
  std::map<long, Row> rows;
  bool have_meta = false, warned_empty = false;
  double pool_rate = 0.0, fee_rate = 0.0;
  std::string line;
  while (std::getline(in, line)) {
    ++n;
    if (skip(line)) continue;
    const auto f = split(line);
    if (!f.empty() && f[0] == "meta") {
      check_columns(f, 3, source, n);
      pool_rate = number(f[1], source, n, "pool rate");
      fee_rate = number(f[2], source, n, "fee rate");
      have_meta = true;
      continue;
    }
    check_columns(f, 4, source, n);
    const long tick = integer(f[0], source, n, "tick index");
    Row r{number(f[1], source, n, "price_lower"), number(f[2], source, n, "price_upper"), 0.0, n};
    if (f[3].empty()) {
      if (!warned_empty) log::warn(source + ": empty liquidity read as 0");
      warned_empty = true;
    } else {
      r.liquidity = number(f[3], source, n, "liquidity");
    }
    if (r.liquidity < 0.0) throw ParseError(source, n, "negative liquidity");
    if (!(r.lower > 0.0) || !(r.upper > r.lower)) throw ParseError(source, n, "tick bounds must satisfy 0 < lower < upper");
    if (!rows.emplace(tick, r).second) throw ParseError(source, n, "duplicate tick index " + std::to_string(tick));
  }
  if (rows.empty()) throw ParseError(source, n, "no tick rows");
  if (!have_meta) throw ParseError(source, n, "missing meta row with pool and fee rates");

  const long first = rows.begin()->first;
  if (first != 0 && first != 1) throw ParseError(source, rows.begin()->second.line, "tick indices must start at 0 or 1");
  std::vector<double> points;
  std::vector<double> liquidity;
  long expected = first;
  for (const auto& [tick, r] : rows) {
    if (tick != expected) throw ParseError(source, r.line, "missing tick " + std::to_string(expected));
    if (points.empty()) {
      points.push_back(r.lower);
    } else if (std::abs(points.back() - r.lower) > 1e-12 * points.back()) {
      throw ParseError(source, r.line, "tick lower bound does not match the previous upper bound");
    }
    points.push_back(r.upper);
    liquidity.push_back(r.liquidity);
    ++expected;
  }
  try {
    return PoolState(PriceGrid(std::move(points)), std::move(liquidity), pool_rate, fee_rate);
  } catch (const Error& e) {
    throw ParseError(source, n, e.what());
  }
}

PoolState load_pool_snapshot(const std::string& path) {
  auto f = open(path);
  return parse_pool_snapshot(f, path);
}

void write_pool_snapshot(std::ostream& out, const PoolState& state) {
  out << "tick_index,price_lower,price_upper,liquidity\n";
  for (int i = 1; i <= state.ticks(); ++i) {
    out << i << ',' << format_double(state.grid().lower(i)) << ',' << format_double(state.grid().upper(i)) << ','
        << format_double(state.liquidity(i)) << '\n';
  }
  out << "meta," << format_double(state.pool_rate()) << ',' << format_double(state.fee_rate()) << '\n';
}

void save_pool_snapshot(const std::string& path, const PoolState& state) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path);
  write_pool_snapshot(f, state);
}

std::vector<SwapRecord> parse_swap_history(std::istream& in, const std::string& source) {
  std::size_t n =
      expect_header(in, source, {"block", "signed_size_tokenB", "pool_rate_before", "market_rate_before"});
  std::vector<SwapRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    ++n;
    if (skip(line)) continue;
    const auto f = split(line);
    check_columns(f, 4, source, n);
    SwapRecord r{integer(f[0], source, n, "block"), number(f[1], source, n, "size"),
                 number(f[2], source, n, "pool rate"), number(f[3], source, n, "market rate")};
    if (!(r.pool_rate > 0.0) || !(r.market_rate > 0.0)) throw ParseError(source, n, "rates must be positive");
    out.push_back(r);
  }
  return out;
}

std::vector<SwapRecord> load_swap_history(const std::string& path) {
  auto f = open(path);
  return parse_swap_history(f, path);
}

std::vector<SizeSample> size_samples(const std::vector<SwapRecord>& records) {
  std::vector<SizeSample> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    if (r.size == 0.0) continue;
    out.push_back({encode_size(r.size), r.pool_rate - r.market_rate});
  }
  return out;
}

std::vector<double> parse_market_minutes(std::istream& in, const std::string& source) {
  std::size_t n = expect_header(in, source, {"minute", "market_rate"});
  std::vector<double> out;
  long previous = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++n;
    if (skip(line)) continue;
    const auto f = split(line);
    check_columns(f, 2, source, n);
    const long minute = integer(f[0], source, n, "minute");
    const double rate = number(f[1], source, n, "market rate");
    if (!out.empty() && minute != previous + 1) throw ParseError(source, n, "minutes must be consecutive");
    if (!(rate > 0.0)) throw ParseError(source, n, "market rate must be positive");
    previous = minute;
    out.push_back(rate);
  }
  if (out.empty()) throw ParseError(source, n, "no market rates");
  return out;
}

std::vector<double> minutes_to_blocks(const std::vector<double>& minutes, int blocks, int blocks_per_minute) {
  if (minutes.empty() || blocks_per_minute < 1) throw Error("invalid minute series");
  std::vector<double> out(static_cast<std::size_t>(std::max(blocks, 0)));
  for (std::size_t b = 0; b < out.size(); ++b) {
    out[b] = minutes[std::min(b / static_cast<std::size_t>(blocks_per_minute), minutes.size() - 1)];
  }
  if (static_cast<std::size_t>(blocks) > minutes.size() * static_cast<std::size_t>(blocks_per_minute)) {
    log::warn("market file shorter than the horizon; holding the last rate");
  }
  return out;
}

std::vector<double> load_market_path(const std::string& path, int blocks, int blocks_per_minute) {
  auto f = open(path);
  return minutes_to_blocks(parse_market_minutes(f, path), blocks, blocks_per_minute);
}

std::vector<TransactionRecord> parse_transactions(std::istream& in, const std::string& source) {
  std::size_t n = expect_header(in, source, {"block", "index", "account", "kind", "token_a", "token_b"});
  std::vector<TransactionRecord> out;
  std::set<std::pair<long, int>> seen;
  std::string line;
  while (std::getline(in, line)) {
    ++n;
    if (skip(line)) continue;
    const auto f = split(line);
    check_columns(f, 6, source, n);
    TransactionRecord r;
    r.block = integer(f[0], source, n, "block");
    r.index = static_cast<int>(integer(f[1], source, n, "index"));
    if (!seen.emplace(r.block, r.index).second) throw ParseError(source, n, "duplicate (block, index)");
    r.account = f[2];
    try {
      r.kind = parse_tx_kind(f[3]);
    } catch (const Error& e) {
      throw ParseError(source, n, e.what());
    }
    r.token_a = number(f[4], source, n, "token_a");
    r.token_b = number(f[5], source, n, "token_b");
    out.push_back(r);
  }
  return out;
}

std::vector<TransactionRecord> load_transactions(const std::string& path) {
  auto f = open(path);
  return parse_transactions(f, path);
}

std::vector<double> load_series(const std::string& path) {
  auto f = open(path);
  std::vector<double> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(f, line)) {
    ++n;
    if (skip(line)) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    std::string tok;
    std::vector<double> row;
    bool numeric = true;
    while (ss >> tok) {
      double v = 0.0;
      const auto r = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (r.ec != std::errc() || r.ptr != tok.data() + tok.size()) {
        numeric = false;
        break;
      }
      row.push_back(v);
    }
    if (!numeric) {
      if (out.empty()) continue;  // header
      throw ParseError(path, n, "non-numeric value");
    }
    out.insert(out.end(), row.begin(), row.end());
  }
  return out;
}

}  // namespace clmm
