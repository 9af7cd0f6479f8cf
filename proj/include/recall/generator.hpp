#pragma once

#include <cstdint>

#include "recall/formula.hpp"

namespace recall {

struct GeneratorParams {
  std::size_t individuals = 2;
  std::size_t actions = 2;
  std::size_t clauses = 2;
  std::size_t max_depth = 3;
  std::uint64_t seed = 0;
};

/// Random contract over individuals i1..in and actions a1..am. The same
/// params always give the same spec.
///
/// max_depth bounds the height of each clause tree with action nodes counted
/// as levels too, so O(a) has depth 2 (the smallest possible clause; lower
/// values are raised to 2) and [a.b]O(c) has depth 3.
ContractSpec generate(const GeneratorParams& params);

}  // namespace recall
