#pragma once

// Decision procedures on equation systems: contractiveness, the terminated
// predicate of context-free systems, and type formation.

#include <string>
#include <utility>
#include <vector>

#include "shades/core.h"
#include "shades/verdict.h"

namespace shades {

// (ctor, parameter shape): "" for recursive, z/s for one counter, eps or the
// top symbol for pushdown.
struct BadSet {
  std::vector<std::pair<std::string, std::string>> ids;

  bool contains(const std::string& ctor, const std::string& shape) const;
  bool empty() const { return ids.empty(); }
};

struct ContractiveResult {
  Verdict verdict;
  BadSet bad;
  std::size_t steps = 0;  // rewrite steps spent
};

// Recursive, one-counter and pushdown exactly; nested via conversion;
// context-free and two-counter are dispatched to their own checks.
ContractiveResult check_contractive(const EquationSystem& sys);
Verdict check_contractive_cf(const EquationSystem& sys);
bool is_terminated(const EquationSystem& sys, const TypeExpr& expr);
Verdict check_contractive_bounded(const EquationSystem& sys, std::size_t fuel);

Verdict check_formation(const EquationSystem& sys, const TypeExpr& expr);
Verdict check_formation(const EquationSystem& sys);

}  // namespace shades
