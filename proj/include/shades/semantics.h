#pragma once

// Reference semantics: trees and trace languages by direct unfolding of
// equations, with no automata involved.

#include <map>
#include <string>
#include <vector>

#include "shades/core.h"
#include "shades/trace.h"

namespace shades {

struct TreeView {
  // path (d, c or labels) -> node label (end, ?, !, &[..], +[..])
  std::map<std::vector<std::string>, std::string> nodes;
  std::string text;  // indented dump, d before c, labels sorted
};

TreeView tree_view(const EquationSystem& sys, const TypeExpr& expr, std::size_t depth);

// Words of length <= max_len. Dispatches to the context-free unfolder for
// context-free systems. Throws NonContractiveLoop, MissingEquation.
WordSet unfold_traces(const EquationSystem& sys, const TypeExpr& expr, std::size_t max_len);
WordSet unfold_traces(const EquationSystem& sys, std::size_t max_len);
WordSet unfold_traces_cf(const EquationSystem& sys, const TypeExpr& expr, std::size_t max_len);

bool check_prefix_closed(const WordSet& ws);
// Siblings agree on the node they leave from.
bool check_tree_shaped(const WordSet& ws);
std::string node_label(const TraceSymbol& sym);

WordSet dual_image(const WordSet& ws);

}  // namespace shades
