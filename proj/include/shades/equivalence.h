#pragma once

// Equivalence and duality of types through their compiled automata: exact
// when both machines are finite-state, bounded by word length otherwise.

#include <cstddef>

#include "shades/core.h"
#include "shades/trace.h"

namespace shades {

struct EquivResult {
  enum class Status : std::uint8_t { Equivalent, NotEquivalent, EquivalentUpTo };

  Status status = Status::Equivalent;
  Word witness;           // NotEquivalent: accepted by exactly one side
  std::size_t depth = 0;  // EquivalentUpTo: word length explored
  std::size_t pairs = 0;  // configuration pairs visited
};

const char* to_string(EquivResult::Status s);

// Throws Formation when either side is not a well-formed type.
EquivResult equiv(const EquationSystem& a, const TypeExpr& root_a, const EquationSystem& b,
                  const TypeExpr& root_b, std::size_t fuel);
EquivResult dual_check(const EquationSystem& a, const TypeExpr& root_a, const EquationSystem& b,
                       const TypeExpr& root_b, std::size_t fuel);

}  // namespace shades
