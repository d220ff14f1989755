#include <algorithm>

#include "shades/automata.h"

namespace shades {

const char* to_string(Model m) {
  switch (m) {
    case Model::FiniteState: return "fsa";
    case Model::OneCounter: return "onecounter";
    case Model::Pushdown: return "pushdown";
    case Model::TwoCounter: return "twocounter";
  }
  return "?";
}

std::optional<Model> model_from_string(const std::string& name) {
  if (name == "fsa") return Model::FiniteState;
  if (name == "onecounter") return Model::OneCounter;
  if (name == "pushdown") return Model::Pushdown;
  if (name == "twocounter") return Model::TwoCounter;
  return std::nullopt;
}

int Automaton::add_state(const std::string& name, bool accept) {
  states.push_back(name);
  accepting.push_back(accept);
  return static_cast<int>(states.size()) - 1;
}

std::optional<int> Automaton::find_state(const std::string& name) const {
  auto it = std::find(states.begin(), states.end(), name);
  if (it == states.end()) return std::nullopt;
  return static_cast<int>(it - states.begin());
}

int Automaton::find_symbol(const std::string& name) const {
  auto it = std::find(stack_alphabet.begin(), stack_alphabet.end(), name);
  return it == stack_alphabet.end() ? -1 : static_cast<int>(it - stack_alphabet.begin());
}

int Automaton::test_count() const {
  switch (model) {
    case Model::FiniteState: return 1;
    case Model::OneCounter: return 2;
    case Model::Pushdown: return static_cast<int>(stack_alphabet.size()) + 1;
    case Model::TwoCounter: return 4;
  }
  return 1;
}

int Automaton::test_of(const Memory& m) const {
  switch (model) {
    case Model::FiniteState: return 0;
    case Model::OneCounter: return m.c1 > 0 ? 1 : 0;
    case Model::Pushdown: return m.stack.empty() ? 0 : m.stack.back() + 1;
    case Model::TwoCounter: return (m.c1 > 0 ? 1 : 0) | (m.c2 > 0 ? 2 : 0);
  }
  return 0;
}

namespace {

const char* zs(bool nonzero) { return nonzero ? "s" : "z"; }

const char* counter_op(CounterOp op) {
  switch (op) {
    case CounterOp::Keep: return "=";
    case CounterOp::Inc: return "+";
    case CounterOp::Dec: return "-";
  }
  return "?";
}

std::optional<CounterOp> counter_op(const std::string& s) {
  if (s == "=") return CounterOp::Keep;
  if (s == "+") return CounterOp::Inc;
  if (s == "-") return CounterOp::Dec;
  return std::nullopt;
}

// "(a,b)" -> {a, b}
std::optional<std::pair<std::string, std::string>> pair_of(const std::string& s) {
  if (s.size() < 5 || s.front() != '(' || s.back() != ')') return std::nullopt;
  auto comma = s.find(',');
  if (comma == std::string::npos) return std::nullopt;
  return std::pair{s.substr(1, comma - 1), s.substr(comma + 1, s.size() - comma - 2)};
}

}  // namespace

std::string Automaton::test_name(int test) const {
  switch (model) {
    case Model::FiniteState: return "-";
    case Model::OneCounter: return zs(test == 1);
    case Model::Pushdown: return test == 0 ? "eps" : stack_alphabet[test - 1];
    case Model::TwoCounter: return std::string("(") + zs(test & 1) + "," + zs(test & 2) + ")";
  }
  return "?";
}

std::optional<int> Automaton::parse_test(const std::string& text) const {
  for (int t = 0; t < test_count(); ++t)
    if (test_name(t) == text) return t;
  return std::nullopt;
}

std::string Automaton::op_name(const MemOp& op) const {
  switch (model) {
    case Model::FiniteState:
    case Model::OneCounter: return counter_op(op.first);
    case Model::Pushdown:
      if (op.push >= 0) return "+" + stack_alphabet[op.push];
      return counter_op(op.first);
    case Model::TwoCounter:
      return std::string("(") + counter_op(op.first) + "," + counter_op(op.second) + ")";
  }
  return "?";
}

std::optional<MemOp> Automaton::parse_op(const std::string& text) const {
  switch (model) {
    case Model::FiniteState:
      if (text == "=") return MemOp::keep();
      return std::nullopt;
    case Model::OneCounter: {
      auto c = counter_op(text);
      if (!c) return std::nullopt;
      return MemOp{*c, CounterOp::Keep, -1};
    }
    case Model::Pushdown: {
      if (text == "=") return MemOp::keep();
      if (text == "-") return MemOp::dec();
      if (text.size() > 1 && text[0] == '+') {
        int sym = find_symbol(text.substr(1));
        if (sym < 0) return std::nullopt;
        return MemOp::pushing(sym);
      }
      return std::nullopt;
    }
    case Model::TwoCounter: {
      auto p = pair_of(text);
      if (!p) return std::nullopt;
      auto a = counter_op(p->first), b = counter_op(p->second);
      if (!a || !b) return std::nullopt;
      return MemOp::pair(*a, *b);
    }
  }
  return std::nullopt;
}

std::string Automaton::memory_name(const Memory& m) const {
  switch (model) {
    case Model::FiniteState: return "";
    case Model::OneCounter: return std::to_string(m.c1);
    case Model::Pushdown: {
      std::string out;
      for (auto it = m.stack.rbegin(); it != m.stack.rend(); ++it)
        out += (out.empty() ? "" : " ") + stack_alphabet[*it];
      return out;
    }
    case Model::TwoCounter: return std::to_string(m.c1) + "," + std::to_string(m.c2);
  }
  return "";
}

std::string Automaton::config_name(const Config& c) const {
  std::string q = c.state < 0 ? "<sink>" : states[c.state];
  if (model == Model::FiniteState) return q;
  auto mem = memory_name(c.mem);
  return q + "(" + (mem.empty() ? "eps" : mem) + ")";
}

const Mode* Automaton::mode(int state, int test) const {
  auto it = table.find({state, test});
  return it == table.end() ? nullptr : &it->second;
}

Memory Automaton::apply(const MemOp& op, const Memory& m) const {
  Memory out = m;
  auto step = [](std::uint64_t& c, CounterOp o) {
    if (o == CounterOp::Inc) ++c;
    if (o == CounterOp::Dec) {
      if (c == 0) throw Error(ErrorKind::PreconditionBreach, "decrement at zero");
      --c;
    }
  };
  switch (model) {
    case Model::FiniteState: break;
    case Model::OneCounter: step(out.c1, op.first); break;
    case Model::TwoCounter:
      step(out.c1, op.first);
      step(out.c2, op.second);
      break;
    case Model::Pushdown:
      if (op.push >= 0) out.stack.push_back(op.push);
      else if (op.first == CounterOp::Dec) {
        if (out.stack.empty()) throw Error(ErrorKind::PreconditionBreach, "pop on empty stack");
        out.stack.pop_back();
      }
      break;
  }
  return out;
}

std::set<TraceSymbol> Automaton::alphabet() const {
  std::set<TraceSymbol> out;
  for (const auto& [_, mode] : table)
    for (const auto& [sym, __] : mode.reads) out.insert(sym);
  return out;
}

void check_automaton(const Automaton& aut) {
  auto bad = [](const std::string& msg) { return Error(ErrorKind::Validation, msg); };
  int n = static_cast<int>(aut.states.size());
  if (n == 0) throw bad("no states");
  if (aut.accepting.size() != aut.states.size()) throw bad("acceptance vector size");
  if (aut.initial < 0 || aut.initial >= n) throw bad("initial state out of range");
  if (aut.sink && (*aut.sink < 0 || *aut.sink >= n)) throw bad("sink out of range");
  if (aut.model != Model::Pushdown && !aut.initial_memory.stack.empty()) throw bad("stack on a counter model");
  for (int s : aut.initial_memory.stack)
    if (s < 0 || s >= static_cast<int>(aut.stack_alphabet.size())) throw bad("initial stack symbol out of range");
  auto check = [&](int q, int test, const Move& m) {
    std::string where = aut.states[q] + " , " + aut.test_name(test);
    if (m.target < 0 || m.target >= n) throw bad(where + ": target out of range");
    const MemOp& op = m.op;
    switch (aut.model) {
      case Model::FiniteState:
        if (!(op == MemOp::keep())) throw bad(where + ": memory operation on a finite-state automaton");
        break;
      case Model::OneCounter:
        if (op.second != CounterOp::Keep || op.push >= 0) throw bad(where + ": bad counter operation");
        if (test == 0 && op.first == CounterOp::Dec) throw bad(where + ": decrement at zero");
        break;
      case Model::TwoCounter:
        if (op.push >= 0) throw bad(where + ": bad counter operation");
        if (!(test & 1) && op.first == CounterOp::Dec) throw bad(where + ": decrement at zero");
        if (!(test & 2) && op.second == CounterOp::Dec) throw bad(where + ": decrement at zero");
        break;
      case Model::Pushdown:
        if (op.second != CounterOp::Keep || op.first == CounterOp::Inc) throw bad(where + ": bad stack operation");
        if (op.push >= static_cast<int>(aut.stack_alphabet.size())) throw bad(where + ": push out of range");
        if (op.push >= 0 && op.first != CounterOp::Keep) throw bad(where + ": pop and push together");
        if (test == 0 && op.first == CounterOp::Dec) throw bad(where + ": pop on empty stack");
        break;
    }
  };
  for (const auto& [key, mode] : aut.table) {
    auto [q, test] = key;
    if (q < 0 || q >= n || test < 0 || test >= aut.test_count()) throw bad("table key out of range");
    if (mode.epsilon && !mode.reads.empty())
      throw Error(ErrorKind::Nondeterministic, aut.states[q] + " , " + aut.test_name(test));
    if (mode.epsilon) check(q, test, *mode.epsilon);
    for (const auto& [_, m] : mode.reads) check(q, test, m);
  }
}

}  // namespace shades
