#pragma once

// Concrete syntax: `.st` equation systems and `.aut` automata.

#include <string>
#include <string_view>

#include "shades/automata.h"
#include "shades/core.h"

namespace shades {

// Parses and validates. Throws Syntax (with span) or Validation.
EquationSystem parse_system(std::string_view text);
// Parses without validating.
EquationSystem parse_system_unchecked(std::string_view text);
std::string print_system(const EquationSystem& sys);
std::string print_expr(const TypeExpr& e);

Automaton parse_automaton(std::string_view text);
std::string print_automaton(const Automaton& aut);

}  // namespace shades
