#include "shades/compile.h"

#include <algorithm>
#include <functional>
#include <set>

#include "shades/transform.h"

namespace shades {

namespace {

using K = TypeExpr::Kind;

bool parameterized(SystemClass c) {
  return c == SystemClass::OneCounter || c == SystemClass::Pushdown || c == SystemClass::TwoCounter;
}

// The arguments that pass a pattern's value on unchanged.
ParamArgs pattern_args(const Pattern& p) {
  auto nat = [](const CounterPattern& c) {
    switch (c.shape) {
      case CounterShape::Zero: return NatTerm{0, ""};
      case CounterShape::Succ: return NatTerm{1, c.var};
      case CounterShape::Any: return NatTerm{0, c.var};
    }
    return NatTerm{};
  };
  switch (p.kind) {
    case Pattern::Kind::Nat: return ParamArgs::nat(nat(p.counters[0]));
    case Pattern::Kind::NatPair: return ParamArgs::nat_pair(nat(p.counters[0]), nat(p.counters[1]));
    case Pattern::Kind::Word:
      if (!p.top) return ParamArgs::stack({});
      return ParamArgs::stack(WordTerm{{*p.top}, p.stack_var});
    default: return ParamArgs::none();
  }
}

CounterPattern zero_c() { return {CounterShape::Zero, ""}; }
CounterPattern succ_c(const std::string& v) { return {CounterShape::Succ, v}; }
CounterPattern any_c(const std::string& v) { return {CounterShape::Any, v}; }

bool covers(const CounterPattern& c, bool nonzero) {
  return c.shape == CounterShape::Any || (c.shape == CounterShape::Succ) == nonzero;
}

// Patterns of the same parameter kind that p does not cover.
std::vector<Pattern> complement(const Pattern& p, const std::vector<std::string>& alphabet) {
  std::vector<Pattern> out;
  switch (p.kind) {
    case Pattern::Kind::Nat:
      out.push_back(p.counters[0].shape == CounterShape::Zero ? Pattern::succ("N") : Pattern::zero());
      break;
    case Pattern::Kind::Word:
      if (p.top) out.push_back(Pattern::empty_stack());
      for (const auto& s : alphabet)
        if (p.top != s) out.push_back(Pattern::cons(s, "S"));
      break;
    case Pattern::Kind::NatPair:
      for (bool a : {false, true})
        for (bool b : {false, true})
          if (!covers(p.counters[0], a) || !covers(p.counters[1], b))
            out.push_back(Pattern::pair(a ? succ_c("N") : zero_c(), b ? succ_c("M") : zero_c()));
      break;
    default: break;
  }
  return out;
}

Pattern base_pattern(SystemClass c) {
  switch (c) {
    case SystemClass::OneCounter: return Pattern::zero();
    case SystemClass::Pushdown: return Pattern::empty_stack();
    case SystemClass::TwoCounter: return Pattern::pair(zero_c(), zero_c());
    default: return Pattern::none();
  }
}

std::set<std::string> taken_names(const EquationSystem& sys) {
  auto names = sys.ctor_names();
  return {names.begin(), names.end()};
}

}  // namespace

EquationSystem normalize_equations(const EquationSystem& in) {
  require_valid(in);
  using C = SystemClass;
  if (in.cls == C::ContextFree || in.cls == C::Nested)
    throw Error(ErrorKind::Unsupported, std::string("normalize_equations: ") + to_string(in.cls) + " systems go through convert");
  EquationSystem out;
  out.cls = in.cls == C::Finite ? C::Recursive : in.cls;
  out.stack_alphabet = in.stack_alphabet;
  out.root_name = in.root_name;
  auto taken = taken_names(in);

  std::function<TypeExpr(const TypeExpr&, const Pattern&, const std::string&)> name_of;
  auto norm = [&](const TypeExpr& e, const Pattern& p, const std::string& base) -> TypeExpr {
    switch (e.kind()) {
      case K::End:
      case K::Call: return e;
      case K::Msg: return TypeExpr::msg(e.polarity(), name_of(e.payload(), p, base), name_of(e.cont(), p, base));
      case K::Choice: {
        Branches bs;
        for (const auto& [l, b] : e.branches()) bs.emplace(l, name_of(b, p, base));
        return TypeExpr::choice(e.view(), std::move(bs));
      }
      default: throw Error(ErrorKind::Validation, "unexpected construct for this class");
    }
  };
  name_of = [&](const TypeExpr& e, const Pattern& p, const std::string& base) -> TypeExpr {
    if (e.is(K::Call)) return e;
    std::string fresh = fresh_indexed(base, taken);
    out.equations.push_back({fresh, p, norm(e, p, base)});
    for (const auto& q : complement(p, in.stack_alphabet)) out.equations.push_back({fresh, q, TypeExpr::end()});
    return TypeExpr::call(fresh, pattern_args(p));
  };

  for (const auto& eq : in.equations) out.equations.push_back({eq.ctor, eq.pattern, norm(eq.body, eq.pattern, eq.ctor)});
  out.root = name_of(in.root, base_pattern(out.cls), in.root_name.empty() ? "T" : in.root_name);
  out.canonicalize();
  return out;
}

namespace {

// Unit steps between a pattern's value and a call's argument.
struct Step {
  enum class Kind : std::uint8_t { Inc, Dec, Drain, Push, Pop } kind;
  std::size_t comp = 0;
  std::string symbol;
};

std::vector<std::vector<Step>> counter_program(const Pattern& p, const ParamArgs& a) {
  std::vector<std::vector<Step>> per;
  for (std::size_t i = 0; i < p.counters.size(); ++i) {
    const auto& cp = p.counters[i];
    const auto& n = a.nats[i];
    std::vector<Step> steps;
    long incs;
    if (n.closed()) {
      if (cp.shape != CounterShape::Zero) steps.push_back({Step::Kind::Drain, i, ""});
      incs = static_cast<long>(n.succs);
    } else {
      incs = static_cast<long>(n.succs) - (cp.shape == CounterShape::Succ ? 1 : 0);
    }
    if (incs < 0) steps.push_back({Step::Kind::Dec, i, ""});
    for (long k = 0; k < incs; ++k) steps.push_back({Step::Kind::Inc, i, ""});
    per.push_back(std::move(steps));
  }
  return per;
}

std::vector<Step> stack_program(const Pattern& p, const WordTerm& w) {
  std::vector<Step> steps;
  std::vector<std::string> push = w.symbols;
  if (p.top) {
    if (w.closed()) {
      steps.push_back({Step::Kind::Drain, 0, ""});
    } else if (!push.empty() && push.back() == *p.top) {
      push.pop_back();
    } else {
      steps.push_back({Step::Kind::Pop, 0, ""});
    }
  }
  for (auto it = push.rbegin(); it != push.rend(); ++it) steps.push_back({Step::Kind::Push, 0, *it});
  return steps;
}

// Fresh ctors realizing one call's steps, one ctor per step position.
class Chain {
 public:
  Chain(EquationSystem& out, std::set<std::string>& taken, std::string base, TypeExpr target, std::vector<Step> steps)
      : out_(out), taken_(taken), base_(std::move(base)), target_(std::move(target)), steps_(std::move(steps)) {}

  TypeExpr call_from(const ParamArgs& args) { return advance(0, args); }

 private:
  TypeExpr advance(std::size_t j, const ParamArgs& args) {
    if (j == steps_.size()) return TypeExpr::call(target_.name(), args);
    const Step& st = steps_[j];
    if (st.kind == Step::Kind::Drain) {
      ParamArgs a = args;
      if (nonempty(a, st.comp)) a = apply({Step::Kind::Dec, st.comp, ""}, a);
      return TypeExpr::call(ctor_for(j), a);
    }
    ParamArgs next = apply(st, args);
    if (j + 1 == steps_.size()) return TypeExpr::call(target_.name(), next);
    return TypeExpr::call(ctor_for(j + 1), next);
  }

  static bool nonempty(const ParamArgs& a, std::size_t comp) {
    if (a.kind == ParamArgs::Kind::Word) return !a.word.symbols.empty();
    return a.nats[comp].succs > 0;
  }

  static ParamArgs apply(const Step& st, ParamArgs a) {
    switch (st.kind) {
      case Step::Kind::Inc: a.nats[st.comp].succs++; break;
      case Step::Kind::Dec:
        if (a.kind == ParamArgs::Kind::Word) a.word.symbols.erase(a.word.symbols.begin());
        else a.nats[st.comp].succs--;
        break;
      case Step::Kind::Pop: a.word.symbols.erase(a.word.symbols.begin()); break;
      case Step::Kind::Push: a.word.symbols.insert(a.word.symbols.begin(), st.symbol); break;
      case Step::Kind::Drain: break;
    }
    return a;
  }

  // Patterns for the ctor at step j, each flagged when the step cannot fire.
  std::vector<Pattern> cases(const Step& st) const {
    std::vector<Pattern> ps;
    switch (out_.cls) {
      case SystemClass::OneCounter: ps = {Pattern::zero(), Pattern::succ("N")}; break;
      case SystemClass::Pushdown:
        ps.push_back(Pattern::empty_stack());
        for (const auto& s : out_.stack_alphabet) ps.push_back(Pattern::cons(s, "S"));
        break;
      case SystemClass::TwoCounter: {
        std::string v = st.comp == 0 ? "N" : "M";
        std::vector<CounterPattern> mine;
        if (st.kind == Step::Kind::Inc) mine = {any_c(v)};
        else mine = {zero_c(), succ_c(v)};
        for (const auto& c : mine) {
          if (st.comp == 0) ps.push_back(Pattern::pair(c, any_c("M")));
          else ps.push_back(Pattern::pair(any_c("N"), c));
        }
        break;
      }
      default: break;
    }
    return ps;
  }

  std::string ctor_for(std::size_t j) {
    auto it = ctors_.find(j);
    if (it != ctors_.end()) return it->second;
    std::string name = fresh_indexed(base_, taken_);
    ctors_[j] = name;
    const Step& st = steps_[j];
    for (const auto& p : cases(st)) {
      ParamArgs args = pattern_args(p);
      bool empty = !nonempty(args, st.comp);
      TypeExpr body;
      switch (st.kind) {
        case Step::Kind::Inc:
        case Step::Kind::Push: body = advance(j, args); break;
        case Step::Kind::Dec:
        case Step::Kind::Pop: body = empty ? TypeExpr::end() : advance(j, args); break;
        case Step::Kind::Drain:
          body = empty ? advance(j + 1, args) : TypeExpr::call(name, apply({Step::Kind::Dec, st.comp, ""}, args));
          break;
      }
      out_.equations.push_back({name, p, body});
    }
    return name;
  }

  EquationSystem& out_;
  std::set<std::string>& taken_;
  std::string base_;
  TypeExpr target_;
  std::vector<Step> steps_;
  std::map<std::size_t, std::string> ctors_;
};

bool is_direct(const std::vector<Step>& steps) {
  return steps.empty() || (steps.size() == 1 && steps[0].kind != Step::Kind::Drain);
}

}  // namespace

EquationSystem normalize_counter_params(const EquationSystem& sys) {
  require_valid(sys);
  if (!parameterized(sys.cls)) return sys;
  EquationSystem out;
  out.cls = sys.cls;
  out.stack_alphabet = sys.stack_alphabet;
  out.root_name = sys.root_name;
  out.root = sys.root;
  auto taken = taken_names(sys);

  std::function<TypeExpr(const TypeExpr&, const Equation&)> fix = [&](const TypeExpr& e, const Equation& eq) -> TypeExpr {
    switch (e.kind()) {
      case K::Msg: return TypeExpr::msg(e.polarity(), fix(e.payload(), eq), fix(e.cont(), eq));
      case K::Choice: {
        Branches bs;
        for (const auto& [l, b] : e.branches()) bs.emplace(l, fix(b, eq));
        return TypeExpr::choice(e.view(), std::move(bs));
      }
      case K::Call: break;
      default: return e;
    }
    std::vector<Step> steps;
    bool direct = true;
    if (sys.cls == SystemClass::Pushdown) {
      steps = stack_program(eq.pattern, e.args().word);
      direct = is_direct(steps);
    } else {
      for (auto& comp : counter_program(eq.pattern, e.args())) {
        direct = direct && is_direct(comp);
        steps.insert(steps.end(), comp.begin(), comp.end());
      }
    }
    if (direct) return e;
    Chain chain(out, taken, eq.ctor, e, std::move(steps));
    return chain.call_from(pattern_args(eq.pattern));
  };

  for (const auto& eq : sys.equations) {
    TypeExpr body = fix(eq.body, eq);
    out.equations.push_back({eq.ctor, eq.pattern, body});
  }
  out.canonicalize();
  return out;
}

namespace {

Model model_of(SystemClass c) {
  switch (c) {
    case SystemClass::OneCounter: return Model::OneCounter;
    case SystemClass::Pushdown: return Model::Pushdown;
    case SystemClass::TwoCounter: return Model::TwoCounter;
    default: return Model::FiniteState;
  }
}

// Representative closed argument for each memory test.
ParamArgs probe(const Automaton& aut, int test) {
  switch (aut.model) {
    case Model::OneCounter: return ParamArgs::nat(NatTerm{static_cast<std::uint64_t>(test), ""});
    case Model::Pushdown:
      if (test == 0) return ParamArgs::stack({});
      return ParamArgs::stack(WordTerm{{aut.stack_alphabet[test - 1]}, ""});
    case Model::TwoCounter:
      return ParamArgs::nat_pair(NatTerm{static_cast<std::uint64_t>(test & 1), ""},
                                 NatTerm{static_cast<std::uint64_t>((test >> 1) & 1), ""});
    default: return ParamArgs::none();
  }
}

CounterOp counter_delta(long d) {
  if (d == 0) return CounterOp::Keep;
  if (d == 1) return CounterOp::Inc;
  if (d == -1) return CounterOp::Dec;
  throw Error(ErrorKind::PreconditionBreach, "parameter jump left after normalization");
}

long delta(const CounterPattern& cp, const NatTerm& n) {
  long base = n.closed() ? 0 : (cp.shape == CounterShape::Succ ? 1 : 0);
  if (n.closed() && cp.shape != CounterShape::Zero)
    throw Error(ErrorKind::PreconditionBreach, "counter reset left after normalization");
  return static_cast<long>(n.succs) - base;
}

MemOp op_for(const Automaton& aut, const Pattern& p, const ParamArgs& a) {
  switch (aut.model) {
    case Model::FiniteState: return MemOp::keep();
    case Model::OneCounter: return MemOp{counter_delta(delta(p.counters[0], a.nats[0])), CounterOp::Keep, -1};
    case Model::TwoCounter:
      return MemOp::pair(counter_delta(delta(p.counters[0], a.nats[0])), counter_delta(delta(p.counters[1], a.nats[1])));
    case Model::Pushdown: {
      auto steps = stack_program(p, a.word);
      if (steps.empty()) return MemOp::keep();
      if (!is_direct(steps)) throw Error(ErrorKind::PreconditionBreach, "stack jump left after normalization");
      if (steps[0].kind == Step::Kind::Pop) return MemOp::dec();
      return MemOp::pushing(aut.find_symbol(steps[0].symbol));
    }
  }
  return MemOp::keep();
}

Memory memory_of(const Automaton& aut, const ParamArgs& a) {
  Memory m;
  switch (aut.model) {
    case Model::OneCounter: m.c1 = a.nats[0].succs; break;
    case Model::TwoCounter:
      m.c1 = a.nats[0].succs;
      m.c2 = a.nats[1].succs;
      break;
    case Model::Pushdown:
      for (auto it = a.word.symbols.rbegin(); it != a.word.symbols.rend(); ++it) m.stack.push_back(aut.find_symbol(*it));
      break;
    default: break;
  }
  return m;
}

}  // namespace

Automaton compile(const EquationSystem& input) {
  require_valid(input);
  if (input.cls == SystemClass::ContextFree || input.cls == SystemClass::Nested)
    return compile(convert(input, SystemClass::Pushdown));
  EquationSystem sys = normalize_counter_params(normalize_equations(input));

  Automaton aut;
  aut.model = model_of(sys.cls);
  aut.stack_alphabet = sys.stack_alphabet;
  std::map<std::string, int> state;
  for (const auto& c : sys.ctor_names()) state[c] = aut.add_state("q_" + c, true);
  int end_state = aut.add_state("q_end", true);

  EquationIndex idx(sys);
  auto move_to = [&](const Pattern& p, const TypeExpr& call) {
    return Move{op_for(aut, p, call.args()), state.at(call.name())};
  };
  for (const auto& [ctor, q] : state) {
    for (int t = 0; t < aut.test_count(); ++t) {
      const Equation* eq = idx.find(ctor, probe(aut, t));
      if (!eq) continue;
      const TypeExpr& b = eq->body;
      Mode& mode = aut.mode_at(q, t);
      switch (b.kind()) {
        case K::Call: mode.epsilon = move_to(eq->pattern, b); break;
        case K::End: mode.reads[TraceSymbol::end_mark()] = Move{MemOp::keep(), end_state}; break;
        case K::Msg:
          mode.reads[TraceSymbol::data(b.polarity())] = move_to(eq->pattern, b.payload());
          mode.reads[TraceSymbol::cont(b.polarity())] = move_to(eq->pattern, b.cont());
          break;
        case K::Choice: {
          std::vector<std::string> labels;
          for (const auto& [l, _] : b.branches()) labels.push_back(l);
          for (const auto& [l, c] : b.branches())
            mode.reads[TraceSymbol::choice(b.view(), labels, l)] = move_to(eq->pattern, c);
          break;
        }
        default: throw Error(ErrorKind::PreconditionBreach, "equation not in normal form");
      }
    }
  }
  aut.initial = state.at(sys.root.name());
  aut.initial_memory = memory_of(aut, sys.root.args());
  check_automaton(aut);
  if (aut.model == Model::FiniteState && check_loop_free(aut).loop_free) return eliminate_epsilon_fsa(aut);
  return aut;
}

}  // namespace shades
