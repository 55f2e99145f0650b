#pragma once

// Sandwich-attack detection over a block-ordered transaction log.

#include <string>
#include <vector>

namespace clmm {

enum class TxKind { swap, add_liquidity, remove_liquidity };

struct TransactionRecord {
  long block = 0;
  int index = 0;  // position within the block
  std::string account;
  TxKind kind = TxKind::swap;
  double token_a = 0.0;  // pool-side deltas
  double token_b = 0.0;
};

enum class AttackKind { swap_based, liquidity_based };

struct SandwichAttack {
  // Indices into the input vector.
  std::size_t front = 0;
  std::size_t victim = 0;
  std::size_t back = 0;
  AttackKind kind = AttackKind::swap_based;
  double error_a = 0.0;  // ||a1| - |a3|| / |a1|
  double error_b = 0.0;
  // Worst per-token mismatch; the attack qualifies through the best one.
  double symmetry_error = 0.0;
};

const char* to_string(TxKind kind);
TxKind parse_tx_kind(const std::string& s);
const char* to_string(AttackKind kind);

// Flags adjacent same-block triples whose outer legs are opposite (swap
// pair or add/remove pair) by one account around a swap by another account,
// symmetric within `tolerance` in token A or token B.
std::vector<SandwichAttack> detect_sandwich_attacks(const std::vector<TransactionRecord>& records,
                                                    double tolerance = 0.05);

}  // namespace clmm
