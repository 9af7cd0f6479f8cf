#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <vector>

#include "recall/conflict.hpp"

namespace recall {

using ActionTrace = std::vector<ConcurrentActionSet>;
using DeonticTrace = std::vector<std::set<DeonticTag>>;

/// Finite-trace satisfaction evaluated straight from the rules: length
/// mismatch fails, ⊥ never holds, the empty trace satisfies everything else,
/// obligations need their tag in σ_d(0) and either the action now or the
/// reparation on the rest, prohibitions and boxes constrain the rest only
/// when their action happens now.
bool satisfies(const ActionTrace& sigma, const DeonticTrace& sigma_d, const Formula& f,
               const std::set<Individual>& individuals);

struct OracleVerdict {
  bool conflict = false;
  /// Actions leading to the first conflicting residual, when one was found.
  ActionTrace witness;
  std::optional<DeonticTag> left;
  std::optional<DeonticTag> right;
  std::size_t residuals_explored = 0;
};

/// Largest per-step universe the oracle will enumerate subsets of.
inline constexpr std::size_t kOracleMaxUniverse = 16;

/// Breadth-first search over every action trace of length <= max_len,
/// re-decomposing from the root and testing each residual for clashing
/// tags. Throws std::domain_error when a step would need more than
/// kOracleMaxUniverse triples.
OracleVerdict oracle_verdict(const ContractSpec& spec, std::size_t max_len);

}  // namespace recall
