#include "shades/transform.h"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>

#include "shades/analysis.h"
#include "shades/surface.h"

namespace shades {

namespace {

using K = TypeExpr::Kind;
using Leaf = std::function<TypeExpr(const TypeExpr&)>;

// Rebuilds the constructor spine, handing Call and Var nodes to leaf.
TypeExpr rebuild(const TypeExpr& e, const Leaf& leaf) {
  switch (e.kind()) {
    case K::End:
    case K::Skip: return e;
    case K::Msg: return TypeExpr::msg(e.polarity(), rebuild(e.payload(), leaf), rebuild(e.cont(), leaf));
    case K::MsgCF: return TypeExpr::msg_cf(e.polarity(), rebuild(e.payload(), leaf));
    case K::Seq: return TypeExpr::seq(rebuild(e.left(), leaf), rebuild(e.right(), leaf));
    case K::Choice: {
      Branches bs;
      for (const auto& [l, b] : e.branches()) bs.emplace(l, rebuild(b, leaf));
      return TypeExpr::choice(e.view(), std::move(bs));
    }
    case K::Call:
    case K::Var: return leaf(e);
  }
  return e;
}

TypeExpr nested_call(const std::string& ctor, std::vector<TypeExpr> args) {
  if (args.empty()) return TypeExpr::call(ctor);
  return TypeExpr::call(ctor, ParamArgs::type_args(std::move(args)));
}

std::vector<TypeExpr> call_args(const TypeExpr& call) {
  if (call.args().kind != ParamArgs::Kind::Types) return {};
  return call.args().types;
}

TypeExpr stack_call(const std::string& ctor, std::vector<std::string> symbols, bool open) {
  return TypeExpr::call(ctor, ParamArgs::stack(WordTerm{std::move(symbols), open ? "S" : ""}));
}

std::set<std::string> reserved_names() { return {"S", "N", "end", "skip", "eps", "z", "s", "stack", "system", "type"}; }

}  // namespace

EquationSystem rec_to_onecounter(const EquationSystem& sys) {
  require_valid(sys);
  if (sys.cls != SystemClass::Recursive && sys.cls != SystemClass::Finite)
    throw Error(ErrorKind::Unsupported, "rec_to_onecounter expects a recursive system");
  EquationSystem out;
  out.cls = SystemClass::OneCounter;
  out.root_name = sys.root_name;
  auto pass = [](const NatTerm& n) {
    return Leaf([n](const TypeExpr& c) { return TypeExpr::call(c.name(), ParamArgs::nat(n)); });
  };
  for (const auto& eq : sys.equations) {
    out.equations.push_back({eq.ctor, Pattern::zero(), rebuild(eq.body, pass(NatTerm{0, ""}))});
    out.equations.push_back({eq.ctor, Pattern::succ("N"), rebuild(eq.body, pass(NatTerm{1, "N"}))});
  }
  out.root = rebuild(sys.root, pass(NatTerm{0, ""}));
  out.canonicalize();
  return out;
}

EquationSystem onecounter_to_pushdown(const EquationSystem& sys) {
  require_valid(sys);
  if (sys.cls != SystemClass::OneCounter)
    throw Error(ErrorKind::Unsupported, "onecounter_to_pushdown expects a one-counter system");
  const std::string unit = "u";
  EquationSystem out;
  out.cls = SystemClass::Pushdown;
  out.stack_alphabet = {unit};
  out.root_name = sys.root_name;
  Leaf leaf = [&](const TypeExpr& c) {
    const NatTerm& n = c.args().nats.at(0);
    std::string var = n.closed() ? "" : "S";
    return TypeExpr::call(c.name(), ParamArgs::stack(WordTerm{std::vector<std::string>(n.succs, unit), var}));
  };
  for (const auto& eq : sys.equations) {
    const auto& cp = eq.pattern.counters.at(0);
    Pattern p = cp.shape == CounterShape::Zero ? Pattern::empty_stack() : Pattern::cons(unit, "S");
    out.equations.push_back({eq.ctor, p, rebuild(eq.body, leaf)});
  }
  out.root = rebuild(sys.root, leaf);
  out.canonicalize();
  return out;
}

// ---- context-free ----

EquationSystem cf_normal_form(const EquationSystem& sys) {
  require_valid(sys);
  if (sys.cls != SystemClass::ContextFree)
    throw Error(ErrorKind::Unsupported, "cf_normal_form expects a context-free system");
  std::set<std::string> taken = reserved_names();
  for (const auto& c : sys.ctor_names()) taken.insert(c);
  EquationSystem out;
  out.cls = SystemClass::ContextFree;
  out.root_name = sys.root_name;

  std::function<TypeExpr(const TypeExpr&, const std::string&)> name_of;
  // One construct whose immediate parts are variables.
  std::function<TypeExpr(const TypeExpr&, const std::string&)> norm =
      [&](const TypeExpr& e, const std::string& base) -> TypeExpr {
    switch (e.kind()) {
      case K::Skip:
      case K::Call: return e;
      case K::MsgCF: return TypeExpr::msg_cf(e.polarity(), name_of(e.payload(), base));
      case K::Seq: return TypeExpr::seq(name_of(e.left(), base), name_of(e.right(), base));
      case K::Choice: {
        Branches bs;
        for (const auto& [l, b] : e.branches()) bs.emplace(l, name_of(b, base));
        return TypeExpr::choice(e.view(), std::move(bs));
      }
      default: throw Error(ErrorKind::Validation, "unexpected construct in context-free system");
    }
  };
  name_of = [&](const TypeExpr& e, const std::string& base) -> TypeExpr {
    if (e.is(K::Call)) return e;
    std::string fresh = fresh_indexed(base, taken);
    out.equations.push_back({fresh, Pattern::none(), norm(e, base)});
    return TypeExpr::call(fresh);
  };

  for (const auto& eq : sys.equations) out.equations.push_back({eq.ctor, eq.pattern, norm(eq.body, eq.ctor)});
  out.root = name_of(sys.root, sys.root_name.empty() ? "T" : sys.root_name);
  out.canonicalize();
  return out;
}

EquationSystem cf_to_pushdown(const EquationSystem& sys) {
  auto verdict = check_contractive_cf(sys);
  if (!verdict.is_ok()) {
    std::string w;
    for (const auto& s : verdict.witness) w += (w.empty() ? "" : " -> ") + s;
    throw Error(ErrorKind::NotContractive, verdict.reason + (w.empty() ? "" : ": " + w));
  }
  EquationSystem nf = cf_normal_form(sys);
  auto vars = nf.ctor_names();
  std::set<std::string> taken = reserved_names();
  std::map<std::string, std::string> sym;  // variable -> stack symbol
  for (const auto& v : vars) sym[v] = fresh_name(v, taken);
  // ctors and stack symbols live apart, so X is always free
  const std::string x = "X";

  EquationSystem out;
  out.cls = SystemClass::Pushdown;
  out.root_name = sys.root_name;
  for (const auto& v : vars) out.stack_alphabet.push_back(sym[v]);

  auto top = [&](const TypeExpr& call, bool open) { return stack_call(x, {sym.at(call.name())}, open); };
  for (const auto& eq : nf.equations) {
    const TypeExpr& b = eq.body;
    TypeExpr rhs;
    switch (b.kind()) {
      case K::Skip: rhs = stack_call(x, {}, true); break;
      case K::MsgCF: rhs = TypeExpr::msg(b.polarity(), top(b.payload(), false), stack_call(x, {}, true)); break;
      case K::Choice: {
        Branches bs;
        for (const auto& [l, c] : b.branches()) bs.emplace(l, top(c, true));
        rhs = TypeExpr::choice(b.view(), std::move(bs));
        break;
      }
      case K::Seq:
        rhs = stack_call(x, {sym.at(b.left().name()), sym.at(b.right().name())}, true);
        break;
      case K::Call: rhs = top(b, true); break;
      default: throw Error(ErrorKind::Validation, "context-free normal form expected");
    }
    out.equations.push_back({x, Pattern::cons(sym.at(eq.ctor), "S"), rhs});
  }
  out.equations.push_back({x, Pattern::empty_stack(), TypeExpr::end()});
  out.root = top(nf.root, false);
  out.canonicalize();
  return out;
}

// ---- pushdown <-> nested ----

EquationSystem pushdown_to_nested(const EquationSystem& sys) {
  require_valid(sys);
  if (sys.cls != SystemClass::Pushdown)
    throw Error(ErrorKind::Unsupported, "pushdown_to_nested expects a pushdown system");
  auto ctors = sys.ctor_names();
  const std::size_t n = ctors.size();
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index[ctors[i]] = i;

  std::set<std::string> taken;
  std::map<std::pair<std::string, std::string>, std::string> name;  // (ctor, symbol or "") -> nested ctor
  for (const auto& c : ctors) {
    name[{c, ""}] = fresh_name(c + "_eps", taken);
    for (const auto& s : sys.stack_alphabet) name[{c, s}] = fresh_name(c + "_" + s, taken);
  }
  std::vector<std::string> alphas;
  for (std::size_t i = 1; i <= n; ++i) alphas.push_back(fresh_name("a" + std::to_string(i), taken));

  // Arguments standing for the stack below the word consumed so far.
  std::function<std::vector<TypeExpr>(const std::vector<std::string>&, std::size_t, bool)> below =
      [&](const std::vector<std::string>& w, std::size_t from, bool open) {
        std::vector<TypeExpr> args;
        for (const auto& c : ctors) {
          if (from < w.size())
            args.push_back(nested_call(name.at({c, w[from]}), below(w, from + 1, open)));
          else if (open)
            args.push_back(TypeExpr::var(alphas[index.at(c)]));
          else
            args.push_back(TypeExpr::call(name.at({c, ""})));
        }
        return args;
      };
  Leaf leaf = [&](const TypeExpr& call) -> TypeExpr {
    const WordTerm& w = call.args().word;
    bool open = !w.closed();
    if (w.symbols.empty())
      return open ? TypeExpr::var(alphas[index.at(call.name())]) : TypeExpr::call(name.at({call.name(), ""}));
    return nested_call(name.at({call.name(), w.symbols[0]}), below(w.symbols, 1, open));
  };

  EquationSystem out;
  out.cls = SystemClass::Nested;
  out.root_name = sys.root_name;
  EquationIndex idx(sys);
  for (const auto& c : ctors) {
    const Equation* eps = nullptr;
    for (const auto* eq : idx.of(c))
      if (!eq->pattern.top) eps = eq;
    out.equations.push_back({name.at({c, ""}), Pattern::nested({}), eps ? rebuild(eps->body, leaf) : TypeExpr::end()});
    for (const auto& s : sys.stack_alphabet) {
      const Equation* hit = nullptr;
      for (const auto* eq : idx.of(c))
        if (eq->pattern.top == s) hit = eq;
      TypeExpr body = hit ? rebuild(hit->body, leaf) : TypeExpr::end();
      out.equations.push_back({name.at({c, s}), Pattern::nested(alphas), body});
    }
  }
  out.root = rebuild(sys.root, leaf);
  out.canonicalize();
  return out;
}

namespace {

std::size_t max_arity(const EquationSystem& sys) {
  std::size_t n = 0;
  for (const auto& eq : sys.equations) n = std::max(n, eq.pattern.vars.size());
  return n;
}

// Bodies with their parameters renamed a1..ak by position.
std::map<std::string, TypeExpr> positional_bodies(const EquationSystem& sys) {
  std::map<std::string, TypeExpr> out;
  for (const auto& eq : sys.equations) {
    Binding b;
    for (std::size_t i = 0; i < eq.pattern.vars.size(); ++i)
      b.types[eq.pattern.vars[i]] = TypeExpr::var("a" + std::to_string(i + 1));
    out[eq.ctor] = substitute(eq.body, b);
  }
  return out;
}

PushdownEncoding unary_nested_to_pushdown(const EquationSystem& sys) {
  std::set<std::string> taken = reserved_names();
  std::map<std::string, std::string> sym;
  auto ctors = sys.ctor_names();
  for (const auto& c : ctors) sym[c] = fresh_name(c, taken);
  const std::string x = fresh_name("X", taken);

  PushdownEncoding enc;
  EquationSystem& out = enc.sys;
  out.cls = SystemClass::Pushdown;
  out.root_name = sys.root_name;
  for (const auto& c : ctors) {
    out.stack_alphabet.push_back(sym[c]);
    enc.display[sym[c]] = c;
  }
  auto chain = [&](const TypeExpr& e, bool open) {
    std::vector<std::string> word;
    const TypeExpr* cur = &e;
    while (cur->is(K::Call)) {
      word.push_back(sym.at(cur->name()));
      auto args = call_args(*cur);
      if (args.empty()) break;
      cur = &cur->args().types[0];
    }
    return stack_call(x, std::move(word), open);
  };
  auto bodies = positional_bodies(sys);
  for (const auto& c : ctors)
    out.equations.push_back({x, Pattern::cons(sym[c], "S"), rebuild(bodies.at(c), [&](const TypeExpr& e) { return chain(e, true); })});
  out.equations.push_back({x, Pattern::empty_stack(), TypeExpr::end()});
  out.root = rebuild(sys.root, [&](const TypeExpr& e) { return chain(e, false); });
  out.canonicalize();
  return enc;
}

// Stack symbols are subexpressions of the source (e<k>) and tuples of
// their direct children (p<k>), discovered from the root outwards.
class TreeStackEncoder {
 public:
  explicit TreeStackEncoder(const EquationSystem& sys)
      : sys_(sys), n_(max_arity(sys)), bodies_(positional_bodies(sys)) {
    for (std::size_t j = 1; j <= n_; ++j) ctors_.push_back("X_" + std::to_string(j));
  }

  PushdownEncoding run() {
    PushdownEncoding enc;
    EquationSystem& out = enc.sys;
    out.cls = SystemClass::Pushdown;
    out.root_name = sys_.root_name;
    out.root = rebuild(sys_.root, [&](const TypeExpr& e) { return stack_call(ctors_[0], {expr_symbol(e)}, false); });
    while (!todo_.empty()) {
      auto [symbol, e] = todo_.front();
      todo_.pop_front();
      define_expr(out, symbol, e);
    }
    for (const auto& [key, symbol] : tuple_ids_) define_tuple(out, symbol, tuples_.at(symbol));
    for (const auto& c : ctors_) out.equations.push_back({c, Pattern::empty_stack(), TypeExpr::end()});
    for (std::size_t j = 1; j < n_; ++j)
      for (const auto& [key, symbol] : expr_ids_) out.equations.push_back({ctors_[j], Pattern::cons(symbol, "S"), TypeExpr::end()});
    for (const auto& [symbol, text] : display_) out.stack_alphabet.push_back(symbol);
    out.canonicalize();
    enc.display = display_;
    return enc;
  }

 private:
  std::string expr_symbol(const TypeExpr& e) {
    std::string key = print_expr(e);
    auto it = expr_ids_.find(key);
    if (it != expr_ids_.end()) return it->second;
    std::string symbol = "e" + std::to_string(expr_ids_.size() + 1);
    expr_ids_[key] = symbol;
    display_[symbol] = key;
    todo_.emplace_back(symbol, e);
    return symbol;
  }

  std::string tuple_symbol(const std::vector<TypeExpr>& parts) {
    std::string key = "(";
    for (std::size_t i = 0; i < n_; ++i) {
      if (i) key += ", ";
      key += i < parts.size() ? print_expr(parts[i]) : "eps";
    }
    key += ")";
    auto it = tuple_ids_.find(key);
    if (it != tuple_ids_.end()) return it->second;
    std::string symbol = "p" + std::to_string(tuple_ids_.size() + 1);
    tuple_ids_[key] = symbol;
    display_[symbol] = key;
    tuples_[symbol] = parts;
    for (const auto& p : parts) expr_symbol(p);
    return symbol;
  }

  void define_expr(EquationSystem& out, const std::string& symbol, const TypeExpr& e) {
    if (e.is(K::Var)) {
      std::size_t j = std::stoul(e.name().substr(1));
      out.equations.push_back({ctors_[0], Pattern::cons(symbol, "S"), stack_call(ctors_[j - 1], {}, true)});
      return;
    }
    auto kids = call_args(e);
    TypeExpr body = rebuild(bodies_.at(e.name()), [&](const TypeExpr& leaf) {
      if (!has_type_vars(leaf)) return stack_call(ctors_[0], {expr_symbol(leaf)}, true);
      std::string top = expr_symbol(leaf);
      return stack_call(ctors_[0], {top, tuple_symbol(kids)}, true);
    });
    out.equations.push_back({ctors_[0], Pattern::cons(symbol, "S"), body});
  }

  void define_tuple(EquationSystem& out, const std::string& symbol, const std::vector<TypeExpr>& parts) {
    for (std::size_t j = 0; j < n_; ++j) {
      TypeExpr body = j < parts.size() ? stack_call(ctors_[0], {expr_symbol(parts[j])}, true) : TypeExpr::end();
      out.equations.push_back({ctors_[j], Pattern::cons(symbol, "S"), body});
    }
  }

  const EquationSystem& sys_;
  std::size_t n_;
  std::map<std::string, TypeExpr> bodies_;
  std::vector<std::string> ctors_;
  std::map<std::string, std::string> expr_ids_;   // printed expression -> symbol
  std::map<std::string, std::string> tuple_ids_;  // printed tuple -> symbol
  std::map<std::string, std::vector<TypeExpr>> tuples_;
  std::map<std::string, std::string> display_;
  std::deque<std::pair<std::string, TypeExpr>> todo_;
};

}  // namespace

PushdownEncoding nested_to_pushdown_encoded(const EquationSystem& sys) {
  require_valid(sys);
  if (sys.cls != SystemClass::Nested)
    throw Error(ErrorKind::Unsupported, "nested_to_pushdown expects a nested system");
  if (max_arity(sys) <= 1) return unary_nested_to_pushdown(sys);
  return TreeStackEncoder(sys).run();
}

EquationSystem nested_to_pushdown(const EquationSystem& sys) { return nested_to_pushdown_encoded(sys).sys; }

// ---- duality ----

namespace {

TypeExpr dual_body(const TypeExpr& e, const std::map<std::string, std::string>& bar) {
  switch (e.kind()) {
    case K::End:
    case K::Skip: return e;
    case K::Msg: return TypeExpr::msg(dual(e.polarity()), e.payload(), dual_body(e.cont(), bar));
    case K::MsgCF: return TypeExpr::msg_cf(dual(e.polarity()), e.payload());
    case K::Seq: return TypeExpr::seq(dual_body(e.left(), bar), dual_body(e.right(), bar));
    case K::Choice: {
      Branches bs;
      for (const auto& [l, b] : e.branches()) bs.emplace(l, dual_body(b, bar));
      return TypeExpr::choice(dual(e.view()), std::move(bs));
    }
    case K::Call: return TypeExpr::call(bar.at(e.name()), e.args());
    case K::Var: throw Error(ErrorKind::Unsupported, "dual of a type variable");
  }
  return e;
}

}  // namespace

EquationSystem dualize(const EquationSystem& sys) {
  if (sys.cls == SystemClass::Nested) return dualize(nested_to_pushdown(sys));
  require_valid(sys);
  std::set<std::string> taken;
  auto ctors = sys.ctor_names();
  for (const auto& c : ctors) taken.insert(c);
  std::map<std::string, std::string> bar;
  for (const auto& c : ctors) bar[c] = fresh_name(c + "_bar", taken);
  EquationSystem out = sys;
  for (const auto& eq : sys.equations) out.equations.push_back({bar.at(eq.ctor), eq.pattern, dual_body(eq.body, bar)});
  out.root = dual_body(sys.root, bar);
  out.canonicalize();
  return out;
}

EquationSystem convert(const EquationSystem& sys, SystemClass target) {
  using C = SystemClass;
  if (sys.cls == target) return sys;
  auto unsupported = [&]() -> EquationSystem {
    throw Error(ErrorKind::Unsupported, std::string("no conversion from ") + to_string(sys.cls) + " to " + to_string(target));
  };
  switch (target) {
    case C::Recursive:
      if (sys.cls == C::Finite) {
        EquationSystem out = sys;
        out.cls = C::Recursive;
        return out;
      }
      return unsupported();
    case C::OneCounter:
      if (sys.cls == C::Finite || sys.cls == C::Recursive) return rec_to_onecounter(sys);
      return unsupported();
    case C::Pushdown:
      switch (sys.cls) {
        case C::Finite:
        case C::Recursive: return onecounter_to_pushdown(rec_to_onecounter(sys));
        case C::OneCounter: return onecounter_to_pushdown(sys);
        case C::ContextFree: return cf_to_pushdown(sys);
        case C::Nested: return nested_to_pushdown(sys);
        default: return unsupported();
      }
    case C::Nested:
      if (sys.cls == C::TwoCounter) return unsupported();
      return pushdown_to_nested(convert(sys, C::Pushdown));
    default: return unsupported();
  }
}

}  // namespace shades
