#pragma once

// Trivial-rewrite loop detection over (control, top-of-stack) pairs with
// pop summaries, shared by contractiveness and automaton loop-freedom.

#include <string>
#include <utility>
#include <vector>

namespace shades::detail {

struct RewriteRule {
  enum class Kind : std::uint8_t { Stop, Missing, Trivial };
  Kind kind = Kind::Stop;
  int next = 0;
  bool pop = false;    // drop the tested top symbol
  bool reset = false;  // discard the whole stack first
  std::vector<int> push;  // top first
};

enum class RenderStyle : std::uint8_t { Plain, Counter, Stack };

struct RewriteSystem {
  std::vector<std::string> controls;
  std::vector<std::string> symbols;
  std::vector<RewriteRule> rules;  // index control * (|symbols| + 1) + top + 1
  RenderStyle style = RenderStyle::Plain;

  std::size_t index(int control, int top) const {
    return static_cast<std::size_t>(control) * (symbols.size() + 1) + static_cast<std::size_t>(top + 1);
  }
  RewriteRule& rule(int control, int top) { return rules[index(control, top)]; }
  const RewriteRule& rule(int control, int top) const { return rules[index(control, top)]; }
  void resize() { rules.assign(controls.size() * (symbols.size() + 1), {}); }
};

struct LoopReport {
  std::vector<std::pair<int, int>> bad;      // (control, top), top -1 for empty
  std::vector<std::pair<int, int>> missing;
  std::vector<std::string> witness;           // first loop found
  std::size_t steps = 0;
};

LoopReport analyze_loops(const RewriteSystem& sys);

std::string render_config(const RewriteSystem& sys, int control, const std::vector<int>& stack,
                          bool opaque_bottom);

}  // namespace shades::detail
