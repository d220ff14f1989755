#include "shades/decompile.h"

#include <algorithm>
#include <deque>
#include <optional>
#include <set>

#include "shades/semantics.h"

namespace shades {

namespace {

constexpr std::size_t kAuditDepth = 8;

enum class Bundle : std::uint8_t { Empty, End, Msg, Choice, Illegal };

// Reads of a mode that do not reject.
std::map<TraceSymbol, Move> live_reads(const Automaton& aut, const Mode& mode) {
  std::map<TraceSymbol, Move> out;
  for (const auto& [sym, m] : mode.reads)
    if (aut.is_accepting(m.target)) out.emplace(sym, m);
  return out;
}

Bundle classify(const std::map<TraceSymbol, Move>& reads) {
  if (reads.empty()) return Bundle::Empty;
  const TraceSymbol& first = reads.begin()->first;
  switch (first.kind()) {
    case TraceSymbol::Kind::End: return reads.size() == 1 ? Bundle::End : Bundle::Illegal;
    case TraceSymbol::Kind::Data:
    case TraceSymbol::Kind::Cont: {
      if (reads.size() != 2) return Bundle::Illegal;
      Polarity p = first.polarity();
      return reads.count(TraceSymbol::data(p)) && reads.count(TraceSymbol::cont(p)) ? Bundle::Msg : Bundle::Illegal;
    }
    case TraceSymbol::Kind::Choice: {
      const auto& labels = first.labels();
      if (reads.size() != labels.size()) return Bundle::Illegal;
      for (const auto& l : labels)
        if (!reads.count(TraceSymbol::choice(first.view(), labels, l))) return Bundle::Illegal;
      return Bundle::Choice;
    }
  }
  return Bundle::Illegal;
}

std::string ctor_of(const Automaton& aut, int state) { return "X_" + aut.states[state]; }

Pattern pattern_of(const Automaton& aut, int test) {
  switch (aut.model) {
    case Model::OneCounter: return test ? Pattern::succ("N") : Pattern::zero();
    case Model::Pushdown: return test ? Pattern::cons(aut.stack_alphabet[test - 1], "S") : Pattern::empty_stack();
    default: return Pattern::none();
  }
}

// Arguments after applying op to the value a pattern matched.
ParamArgs args_after(const Automaton& aut, int test, const MemOp& op) {
  switch (aut.model) {
    case Model::OneCounter: {
      NatTerm n = test ? NatTerm{1, "N"} : NatTerm{0, ""};
      if (op.first == CounterOp::Inc) n.succs++;
      if (op.first == CounterOp::Dec) n.succs--;
      return ParamArgs::nat(n);
    }
    case Model::Pushdown: {
      WordTerm w;
      if (test) w = WordTerm{{aut.stack_alphabet[test - 1]}, "S"};
      if (op.push >= 0) w.symbols.insert(w.symbols.begin(), aut.stack_alphabet[op.push]);
      else if (op.first == CounterOp::Dec) w.symbols.erase(w.symbols.begin());
      return ParamArgs::stack(w);
    }
    default: return ParamArgs::none();
  }
}

ParamArgs initial_args(const Automaton& aut) {
  switch (aut.model) {
    case Model::OneCounter: return ParamArgs::nat(NatTerm{aut.initial_memory.c1, ""});
    case Model::Pushdown: {
      WordTerm w;
      const auto& st = aut.initial_memory.stack;
      for (auto it = st.rbegin(); it != st.rend(); ++it) w.symbols.push_back(aut.stack_alphabet[*it]);
      return ParamArgs::stack(w);
    }
    default: return ParamArgs::none();
  }
}

// Reading configurations reachable by words of length <= depth, with a
// shortest word reaching each (state, test) mode.
std::map<std::pair<int, int>, Word> reachable_modes(const Automaton& aut, std::size_t depth) {
  std::map<std::pair<int, int>, Word> seen;
  std::set<Config> visited;
  std::deque<std::pair<Config, Word>> queue;
  queue.emplace_back(aut.initial_config(), Word{});
  while (!queue.empty()) {
    auto [c, w] = queue.front();
    queue.pop_front();
    Closure cl = close(aut, c);
    if (cl.diverged || cl.last.state < 0 || !aut.is_accepting(cl.last.state)) continue;
    if (!visited.insert(cl.last).second) continue;
    int t = aut.test_of(cl.last.mem);
    seen.emplace(std::pair{cl.last.state, t}, w);
    if (w.size() == depth) continue;
    const Mode* m = aut.mode(cl.last.state, t);
    if (!m) continue;
    for (const auto& [sym, move] : m->reads) {
      Word next = w;
      next.push_back(sym);
      queue.emplace_back(Config{move.target, aut.apply(move.op, cl.last.mem)}, std::move(next));
    }
  }
  return seen;
}

std::string spelled(const Word& w) { return w.empty() ? "<eps>" : spell_word(w); }

// A word stops exactly when it ends in end.
std::optional<Word> bad_ending(const WordSet& ws, std::size_t depth) {
  for (const auto& w : ws) {
    bool ended = !w.empty() && w.back().kind() == TraceSymbol::Kind::End;
    auto it = ws.upper_bound(w);
    bool extended = it != ws.end() && it->size() > w.size() && std::equal(w.begin(), w.end(), it->begin());
    if (ended && extended) return w;
    if (!ended && !extended && w.size() < depth) return w;
  }
  return std::nullopt;
}

}  // namespace

EquationSystem decompile(const Automaton& aut) {
  if (aut.model == Model::TwoCounter) throw Error(ErrorKind::Unsupported, "decompiling two-counter automata");
  check_automaton(aut);
  if (!is_obviously_prefix_closed(aut))
    throw Error(ErrorKind::NotObviouslyPrefixClosed, "need exactly one rejecting state and it must be a dead sink");
  if (!aut.is_accepting(aut.initial)) throw Error(ErrorKind::ShapeViolation, "empty language: <eps> rejected");

  WordSet ws = enumerate_accepted(aut, kAuditDepth);
  if (!check_prefix_closed(ws)) throw Error(ErrorKind::ShapeViolation, "accepted words are not prefix-closed");
  if (!check_tree_shaped(ws)) throw Error(ErrorKind::ShapeViolation, "accepted words do not form a tree");
  if (auto w = bad_ending(ws, kAuditDepth))
    throw Error(ErrorKind::ShapeViolation, "accepted word " + spelled(*w) + " must continue exactly when it does not end in end");
  auto reach = reachable_modes(aut, kAuditDepth);

  EquationSystem sys;
  sys.cls = aut.model == Model::OneCounter ? SystemClass::OneCounter
            : aut.model == Model::Pushdown ? SystemClass::Pushdown
                                           : SystemClass::Recursive;
  sys.stack_alphabet = aut.stack_alphabet;
  sys.root_name = "t";

  auto call = [&](int test, const Move& m) { return TypeExpr::call(ctor_of(aut, m.target), args_after(aut, test, m.op)); };
  for (int q = 0; q < static_cast<int>(aut.states.size()); ++q) {
    if (!aut.accepting[q]) continue;
    for (int t = 0; t < aut.test_count(); ++t) {
      const Mode* mode = aut.mode(q, t);
      TypeExpr body = TypeExpr::end();
      if (mode && mode->epsilon) {
        if (aut.is_accepting(mode->epsilon->target)) body = call(t, *mode->epsilon);
      } else if (mode) {
        auto reads = live_reads(aut, *mode);
        const TraceSymbol* first = reads.empty() ? nullptr : &reads.begin()->first;
        switch (classify(reads)) {
          case Bundle::Empty:
          case Bundle::End: break;
          case Bundle::Msg: {
            Polarity p = first->polarity();
            body = TypeExpr::msg(p, call(t, reads.at(TraceSymbol::data(p))), call(t, reads.at(TraceSymbol::cont(p))));
            break;
          }
          case Bundle::Choice: {
            Branches bs;
            for (const auto& [sym, m] : reads) bs.emplace(sym.chosen(), call(t, m));
            body = TypeExpr::choice(first->view(), std::move(bs));
            break;
          }
          case Bundle::Illegal:
            if (auto it = reach.find({q, t}); it != reach.end())
              throw Error(ErrorKind::ShapeViolation, "state " + aut.states[q] + " reads an illegal bundle after " + spelled(it->second));
            break;
        }
      }
      sys.equations.push_back({ctor_of(aut, q), pattern_of(aut, t), body});
    }
  }
  sys.root = TypeExpr::call(ctor_of(aut, aut.initial), initial_args(aut));
  sys.canonicalize();
  require_valid(sys);
  return sys;
}

}  // namespace shades
