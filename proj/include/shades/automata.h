#pragma once

// Deterministic automata with no memory, one counter, a stack, or two
// counters. Missing table entries lead to an implicit rejecting sink.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "shades/trace.h"
#include "shades/verdict.h"

namespace shades {

enum class Model : std::uint8_t { FiniteState, OneCounter, Pushdown, TwoCounter };

const char* to_string(Model m);
std::optional<Model> model_from_string(const std::string& name);

enum class CounterOp : std::uint8_t { Keep, Inc, Dec };

// Counter models use first (and second); pushdown uses first in {Keep, Dec}
// or push >= 0.
struct MemOp {
  CounterOp first = CounterOp::Keep;
  CounterOp second = CounterOp::Keep;
  int push = -1;

  static MemOp keep() { return {}; }
  static MemOp inc() { return {CounterOp::Inc, CounterOp::Keep, -1}; }
  static MemOp dec() { return {CounterOp::Dec, CounterOp::Keep, -1}; }
  static MemOp pushing(int symbol) { return {CounterOp::Keep, CounterOp::Keep, symbol}; }
  static MemOp pair(CounterOp a, CounterOp b) { return {a, b, -1}; }

  bool operator==(const MemOp&) const = default;
};

struct Move {
  MemOp op;
  int target = 0;

  bool operator==(const Move&) const = default;
};

struct Mode {
  std::optional<Move> epsilon;
  std::map<TraceSymbol, Move> reads;

  bool operator==(const Mode&) const = default;
};

struct Memory {
  std::uint64_t c1 = 0;
  std::uint64_t c2 = 0;
  std::vector<int> stack;  // top at back

  auto operator<=>(const Memory&) const = default;
  std::size_t size() const { return c1 + c2 + stack.size(); }
};

inline constexpr int kImplicitSink = -1;

struct Config {
  int state = 0;
  Memory mem;

  auto operator<=>(const Config&) const = default;
};

struct Automaton {
  Model model = Model::FiniteState;
  std::vector<std::string> states;
  std::vector<std::string> stack_alphabet;
  std::vector<bool> accepting;
  int initial = 0;
  Memory initial_memory;
  std::optional<int> sink;  // target of missing entries when materialized
  std::map<std::pair<int, int>, Mode> table;

  int add_state(const std::string& name, bool accept);
  std::optional<int> find_state(const std::string& name) const;
  int find_symbol(const std::string& name) const;  // -1 if absent

  int test_count() const;
  int test_of(const Memory& m) const;
  std::string test_name(int test) const;
  std::optional<int> parse_test(const std::string& text) const;
  std::string op_name(const MemOp& op) const;
  std::optional<MemOp> parse_op(const std::string& text) const;
  std::string memory_name(const Memory& m) const;
  std::string config_name(const Config& c) const;

  const Mode* mode(int state, int test) const;
  Mode& mode_at(int state, int test) { return table[{state, test}]; }
  bool is_accepting(int state) const { return state >= 0 && accepting[state]; }
  Memory apply(const MemOp& op, const Memory& m) const;
  Config initial_config() const { return {initial, initial_memory}; }
  std::set<TraceSymbol> alphabet() const;

  bool operator==(const Automaton&) const = default;
};

// Structural checks: op guards, symbol ranges, model/op agreement.
void check_automaton(const Automaton& aut);

struct Closure {
  Config last;          // reading configuration, unless diverged
  bool accepted = false;
  bool diverged = false;
  std::size_t steps = 0;
};

// Follows the uniquely determined ε-moves from start.
Closure close(const Automaton& aut, const Config& start);
// One read from a reading configuration; the sink when no entry exists.
Config read(const Automaton& aut, const Config& at, const TraceSymbol& sym);

enum class RunResult : std::uint8_t { Accept, Reject, Diverge };
const char* to_string(RunResult r);

RunResult run(const Automaton& aut, const Word& word);
WordSet enumerate_accepted(const Automaton& aut, std::size_t max_len);

struct LoopFreeResult {
  bool loop_free = true;
  bool exact = true;
  std::vector<std::string> witness;
};

LoopFreeResult check_loop_free(const Automaton& aut);
Automaton eliminate_epsilon_fsa(const Automaton& aut);
Verdict check_normal_form_bounded(const Automaton& aut, std::size_t max_len);
bool is_obviously_prefix_closed(const Automaton& aut);
Automaton to_obviously_prefix_closed(const Automaton& aut);
// Names the implicit sink as an explicit rejecting state.
Automaton materialize_sink(const Automaton& aut, const std::string& name = "q_error");

}  // namespace shades
