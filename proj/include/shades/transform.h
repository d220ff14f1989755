#pragma once

// Conversions between system classes, and the dual of a system.

#include <map>
#include <string>

#include "shades/core.h"

namespace shades {

EquationSystem rec_to_onecounter(const EquationSystem& sys);
EquationSystem onecounter_to_pushdown(const EquationSystem& sys);

// Every right-hand side becomes skip, a message on a variable, a choice of
// variables, X;Y, or a variable. The root becomes a variable.
EquationSystem cf_normal_form(const EquationSystem& sys);
// One ctor X, one stack symbol per variable of the normal form.
// Throws NotContractive.
EquationSystem cf_to_pushdown(const EquationSystem& sys);

// Ctors <X>_eps (arity 0) and <X>_<sym> (arity = number of ctors).
EquationSystem pushdown_to_nested(const EquationSystem& sys);

struct PushdownEncoding {
  EquationSystem sys;
  // stack symbol -> the expression or tuple it stands for
  std::map<std::string, std::string> display;
};

PushdownEncoding nested_to_pushdown_encoded(const EquationSystem& sys);
EquationSystem nested_to_pushdown(const EquationSystem& sys);

// Adds <X>_bar for every ctor; the root becomes the dual of the root.
// Nested systems are converted to pushdown first.
EquationSystem dualize(const EquationSystem& sys);

// Best route from the system's class to the target class.
EquationSystem convert(const EquationSystem& sys, SystemClass target);

}  // namespace shades
