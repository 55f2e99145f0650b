#include "clmm/detector.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "clmm/errors.hpp"

namespace clmm {

const char* to_string(TxKind kind) {
  switch (kind) {
    case TxKind::swap: return "swap";
    case TxKind::add_liquidity: return "add_liquidity";
    case TxKind::remove_liquidity: return "remove_liquidity";
  }
  return "?";
}

TxKind parse_tx_kind(const std::string& s) {
  if (s == "swap") return TxKind::swap;
  if (s == "add_liquidity" || s == "add") return TxKind::add_liquidity;
  if (s == "remove_liquidity" || s == "remove") return TxKind::remove_liquidity;
  throw Error("unknown transaction kind '" + s + "'");
}

const char* to_string(AttackKind kind) {
  return kind == AttackKind::swap_based ? "swap_based" : "liquidity_based";
}

namespace {

double mismatch(double first, double last) {
  if (first == 0.0) return INFINITY;
  return std::abs(std::abs(first) - std::abs(last)) / std::abs(first);
}

bool opposite_legs(const TransactionRecord& a, const TransactionRecord& c, AttackKind& kind) {
  if (a.kind == TxKind::add_liquidity && c.kind == TxKind::remove_liquidity) {
    kind = AttackKind::liquidity_based;
    return true;
  }
  if (a.kind == TxKind::swap && c.kind == TxKind::swap) {
    kind = AttackKind::swap_based;
    return (a.token_a > 0.0 && c.token_a < 0.0) || (a.token_a < 0.0 && c.token_a > 0.0);
  }
  return false;
}

}  // namespace

std::vector<SandwichAttack> detect_sandwich_attacks(const std::vector<TransactionRecord>& records,
                                                    double tolerance) {
  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    const auto& a = records[x];
    const auto& b = records[y];
    return a.block != b.block ? a.block < b.block : a.index < b.index;
  });

  std::vector<SandwichAttack> out;
  for (std::size_t k = 0; k + 2 < order.size(); ++k) {
    const auto& first = records[order[k]];
    const auto& middle = records[order[k + 1]];
    const auto& last = records[order[k + 2]];
    if (first.block != middle.block || middle.block != last.block) continue;
    if (middle.kind != TxKind::swap) continue;
    if (first.account != last.account || middle.account == first.account) continue;
    AttackKind kind;
    if (!opposite_legs(first, last, kind)) continue;
    const double ea = mismatch(first.token_a, last.token_a);
    const double eb = mismatch(first.token_b, last.token_b);
    if (std::min(ea, eb) > tolerance) continue;
    SandwichAttack attack;
    attack.front = order[k];
    attack.victim = order[k + 1];
    attack.back = order[k + 2];
    attack.kind = kind;
    attack.error_a = ea;
    attack.error_b = eb;
    attack.symmetry_error = std::max(ea, eb);
    out.push_back(attack);
  }
  return out;
}

}  // namespace clmm
