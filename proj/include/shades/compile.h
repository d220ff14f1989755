#pragma once

// Equation systems to deterministic automata.

#include "shades/automata.h"
#include "shades/core.h"

namespace shades {

// Every right-hand side becomes a call, end, or one constructor whose
// immediate parts are calls. The root becomes a call.
EquationSystem normalize_equations(const EquationSystem& sys);

// Every call moves its parameter by at most one automaton operation from
// the equation's pattern; longer jumps and resets go through fresh ctors.
EquationSystem normalize_counter_params(const EquationSystem& sys);

// States q_<ctor> plus q_end; missing entries fall into the implicit sink.
// Context-free and nested systems are converted to pushdown first.
Automaton compile(const EquationSystem& sys);

}  // namespace shades
