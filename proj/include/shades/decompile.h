#pragma once

// Obviously prefix-closed automata back to equation systems.

#include "shades/automata.h"
#include "shades/core.h"

namespace shades {

// One ctor X_<state> per accepting state. Throws NotObviouslyPrefixClosed,
// ShapeViolation (with the offending word), Unsupported for two counters.
EquationSystem decompile(const Automaton& aut);

}  // namespace shades
