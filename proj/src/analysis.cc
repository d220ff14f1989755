#include "shades/analysis.h"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>

#include "loops.h"
#include "shades/transform.h"

namespace shades {

bool BadSet::contains(const std::string& ctor, const std::string& shape) const {
  return std::find(ids.begin(), ids.end(), std::pair{ctor, shape}) != ids.end();
}

namespace {

void collect_calls(const TypeExpr& e, std::vector<TypeExpr>& out) {
  using K = TypeExpr::Kind;
  switch (e.kind()) {
    case K::Call: out.push_back(e); break;
    case K::Msg:
      collect_calls(e.payload(), out);
      collect_calls(e.cont(), out);
      break;
    case K::MsgCF: collect_calls(e.payload(), out); break;
    case K::Seq:
      collect_calls(e.left(), out);
      collect_calls(e.right(), out);
      break;
    case K::Choice:
      for (const auto& [_, b] : e.branches()) collect_calls(b, out);
      break;
    default: break;
  }
}

// Stack view of a parameter: symbols pushed (top first) and whether the
// caller's stack survives underneath.
struct StackArg {
  std::vector<int> push;
  bool open = false;
};

// Recursive, one-counter and pushdown systems seen as rewrite systems over
// (ctor, top) pairs. One counter: a single symbol "s", z is the empty stack.
struct StackModel {
  const EquationSystem& sys;
  std::vector<std::string> ctors;
  std::map<std::string, int> ctor_ids;
  std::vector<std::string> symbols;
  detail::RenderStyle style = detail::RenderStyle::Plain;

  explicit StackModel(const EquationSystem& s) : sys(s), ctors(s.ctor_names()) {
    for (std::size_t i = 0; i < ctors.size(); ++i) ctor_ids[ctors[i]] = static_cast<int>(i);
    if (sys.cls == SystemClass::OneCounter) {
      symbols = {"s"};
      style = detail::RenderStyle::Counter;
    } else if (sys.cls == SystemClass::Pushdown) {
      symbols = sys.stack_alphabet;
      style = detail::RenderStyle::Stack;
    }
  }

  int symbol(const std::string& name) const {
    auto it = std::find(symbols.begin(), symbols.end(), name);
    return static_cast<int>(it - symbols.begin());
  }

  // top -1 for z / eps
  int top_of(const Pattern& p) const {
    switch (p.kind) {
      case Pattern::Kind::Nat: return p.counters[0].shape == CounterShape::Zero ? -1 : 0;
      case Pattern::Kind::Word: return p.top ? symbol(*p.top) : -1;
      default: return -1;
    }
  }

  std::string shape_name(int top) const {
    switch (sys.cls) {
      case SystemClass::OneCounter: return top < 0 ? "z" : "s";
      case SystemClass::Pushdown: return top < 0 ? "eps" : symbols[top];
      default: return "";
    }
  }

  StackArg arg_of(const ParamArgs& a) const {
    StackArg out;
    switch (a.kind) {
      case ParamArgs::Kind::Nat:
        out.push.assign(a.nats[0].succs, 0);
        out.open = !a.nats[0].closed();
        break;
      case ParamArgs::Kind::Word:
        for (const auto& s : a.word.symbols) out.push.push_back(symbol(s));
        out.open = !a.word.closed();
        break;
      default: break;
    }
    return out;
  }

  const Equation* equation(int ctor, int top) const {
    for (const Equation* eq : sys.equations_of(ctors[ctor]))
      if (top_of(eq->pattern) == top) return eq;
    return nullptr;
  }

  detail::RewriteSystem rewrite_system() const {
    detail::RewriteSystem rs;
    rs.controls = ctors;
    rs.symbols = symbols;
    rs.style = style;
    rs.resize();
    for (int c = 0; c < static_cast<int>(ctors.size()); ++c)
      for (int t = -1; t < static_cast<int>(symbols.size()); ++t) {
        auto& r = rs.rule(c, t);
        const Equation* eq = equation(c, t);
        if (!eq) {
          r.kind = detail::RewriteRule::Kind::Missing;
          continue;
        }
        if (!eq->body.is(TypeExpr::Kind::Call)) continue;  // a constructor: Stop
        r.kind = detail::RewriteRule::Kind::Trivial;
        r.next = ctor_ids.at(eq->body.name());
        StackArg a = arg_of(eq->body.args());
        r.push = a.push;
        if (a.open) r.pop = t >= 0;
        else r.reset = true;
      }
    return rs;
  }

  std::string render(int ctor, const std::vector<int>& stack, bool opaque) const {
    detail::RewriteSystem rs;
    rs.controls = ctors;
    rs.symbols = symbols;
    rs.style = style;
    return detail::render_config(rs, ctor, stack, opaque);
  }
};

ContractiveResult contractive_stack(const EquationSystem& sys) {
  StackModel m(sys);
  auto rep = detail::analyze_loops(m.rewrite_system());
  ContractiveResult res;
  res.steps = rep.steps;
  for (auto [c, t] : rep.bad) res.bad.ids.emplace_back(m.ctors[c], m.shape_name(t));
  if (!rep.bad.empty()) res.verdict = Verdict::fail("not contractive", rep.witness);
  return res;
}

// Least fixed points over ctor names.
class CfFacts {
 public:
  explicit CfFacts(const EquationSystem& sys) : sys_(sys) {
    for (const auto& eq : sys.equations) body_[eq.ctor] = eq.body;
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& [x, body] : body_) {
        if (!done_.count(x) && done(body)) done_.insert(x), changed = true;
      }
    }
    changed = true;
    while (changed) {
      changed = false;
      for (const auto& [x, body] : body_) {
        if (!contr_.count(x) && contractive(body)) contr_.insert(x), changed = true;
      }
    }
  }

  bool done(const TypeExpr& e) const {
    switch (e.kind()) {
      case TypeExpr::Kind::Skip: return true;
      case TypeExpr::Kind::Seq: return done(e.left()) && done(e.right());
      case TypeExpr::Kind::Call: return done_.count(e.name()) > 0;
      default: return false;
    }
  }

  bool contractive(const TypeExpr& e) const {
    switch (e.kind()) {
      case TypeExpr::Kind::Seq:
        return done(e.left()) ? contractive(e.right()) : contractive(e.left());
      case TypeExpr::Kind::Call: return contr_.count(e.name()) > 0;
      case TypeExpr::Kind::Var: return false;
      default: return true;
    }
  }

  bool contractive_ctor(const std::string& x) const { return contr_.count(x) > 0; }

  // how x fails: follow the head position until it repeats
  std::vector<std::string> cycle(const std::string& x) const {
    std::vector<std::string> path{x};
    std::string cur = x;
    while (true) {
      auto it = body_.find(cur);
      if (it == body_.end()) return path;
      auto next = head_ctor(it->second);
      if (!next) return path;
      bool seen = std::find(path.begin(), path.end(), *next) != path.end();
      path.push_back(*next);
      if (seen) return path;
      cur = *next;
    }
  }

 private:
  std::optional<std::string> head_ctor(const TypeExpr& e) const {
    switch (e.kind()) {
      case TypeExpr::Kind::Call: return e.name();
      case TypeExpr::Kind::Seq: return done(e.left()) ? head_ctor(e.right()) : head_ctor(e.left());
      default: return std::nullopt;
    }
  }

  const EquationSystem& sys_;
  std::map<std::string, TypeExpr> body_;
  std::set<std::string> done_, contr_;
};

}  // namespace

Verdict check_contractive_cf(const EquationSystem& sys) {
  if (sys.cls != SystemClass::ContextFree)
    throw Error(ErrorKind::PreconditionBreach, "context-free system expected");
  CfFacts facts(sys);
  for (const auto& x : sys.ctor_names())
    if (!facts.contractive_ctor(x)) return Verdict::fail("not contractive", facts.cycle(x));
  return Verdict::ok();
}

bool is_terminated(const EquationSystem& sys, const TypeExpr& expr) {
  return CfFacts(sys).done(expr);
}

Verdict check_contractive_bounded(const EquationSystem& sys, std::size_t fuel) {
  if (sys.cls != SystemClass::TwoCounter)
    throw Error(ErrorKind::PreconditionBreach, "two-counter system expected");
  EquationIndex index(sys);
  std::size_t spent = 0;
  bool unknown = false;
  auto show = [](const TypeExpr& call) { return call.name() + "(" + format_args(call.args()) + ")"; };
  for (const auto& x : sys.ctor_names())
    for (std::uint64_t a = 0; a <= 1; ++a)
      for (std::uint64_t b = 0; b <= 1; ++b) {
        TypeExpr cur = TypeExpr::call(x, ParamArgs::nat_pair(NatTerm{a, ""}, NatTerm{b, ""}));
        std::vector<TypeExpr> seen{cur};
        std::size_t steps = 0;
        while (true) {
          const Equation* eq = index.find(cur.name(), cur.args());
          if (!eq || !eq->body.is(TypeExpr::Kind::Call)) break;
          if (steps == fuel) {
            unknown = true;
            break;
          }
          ++steps;
          cur = index.expand(cur);
          if (std::find(seen.begin(), seen.end(), cur) != seen.end()) {
            std::vector<std::string> w;
            auto from = std::find(seen.begin(), seen.end(), cur);
            for (auto it = from; it != seen.end(); ++it) w.push_back(show(*it));
            w.push_back(show(cur));
            return Verdict::fail("not contractive", w);
          }
          seen.push_back(cur);
        }
        spent += steps;
      }
  if (unknown) return Verdict::unknown(spent);
  return Verdict::ok();
}

ContractiveResult check_contractive(const EquationSystem& sys) {
  switch (sys.cls) {
    case SystemClass::Finite: return {};
    case SystemClass::ContextFree: return {check_contractive_cf(sys), {}, 0};
    case SystemClass::TwoCounter: return {check_contractive_bounded(sys, 1000), {}, 0};
    case SystemClass::Nested: return contractive_stack(nested_to_pushdown(sys));
    default: return contractive_stack(sys);
  }
}

namespace {

// Which heads (ctor, top) the unfolding of expr can visit; fails on a bad
// or equation-less head.
Verdict formation_stack(const EquationSystem& sys, const TypeExpr& expr) {
  StackModel m(sys);
  auto contr = contractive_stack(sys);
  const int nc = static_cast<int>(m.ctors.size());
  const int ns = static_cast<int>(m.symbols.size());
  auto slot = [&](int c, int t) { return static_cast<std::size_t>(c) * (ns + 1) + (t + 1); };

  // ret[(c, s)]: ctors reached right after the s on top is popped
  std::vector<std::set<int>> ret(static_cast<std::size_t>(nc) * (ns + 1));
  auto chain = [&](int start, const std::vector<int>& word, const std::function<void(int, int)>& visit) {
    std::set<int> cur{start};
    for (int s : word) {
      std::set<int> next;
      for (int c : cur) {
        visit(c, s);
        const auto& r = ret[slot(c, s)];
        next.insert(r.begin(), r.end());
      }
      cur = std::move(next);
    }
    return cur;
  };
  bool changed = true;
  auto nothing = [](int, int) {};
  while (changed) {
    changed = false;
    for (int c = 0; c < nc; ++c)
      for (int t = 0; t < ns; ++t) {
        const Equation* eq = m.equation(c, t);
        if (!eq) continue;
        std::vector<TypeExpr> calls;
        collect_calls(eq->body, calls);
        for (const auto& call : calls) {
          StackArg a = m.arg_of(call.args());
          if (!a.open) continue;
          for (int z : chain(m.ctor_ids.at(call.name()), a.push, nothing))
            if (ret[slot(c, t)].insert(z).second) changed = true;
        }
      }
  }

  std::vector<int> parent(ret.size(), -2);  // -2 unvisited, -1 start
  std::deque<std::size_t> queue;
  int from = -1;
  auto visit = [&](int c, int t) {
    auto k = slot(c, t);
    if (parent[k] != -2) return;
    parent[k] = from;
    queue.push_back(k);
  };
  auto start = [&](const TypeExpr& call) {
    StackArg a = m.arg_of(call.args());
    for (int z : chain(m.ctor_ids.at(call.name()), a.push, visit)) visit(z, -1);
  };
  std::vector<TypeExpr> roots;
  collect_calls(expr, roots);
  for (const auto& call : roots) {
    if (!m.ctor_ids.count(call.name())) throw Error(ErrorKind::Validation, "undeclared " + call.name());
    start(call);
  }
  auto witness = [&](std::size_t k) {
    std::vector<std::string> path;
    for (int cur = static_cast<int>(k); cur >= 0; cur = parent[cur]) {
      int c = cur / (ns + 1), t = cur % (ns + 1) - 1;
      std::vector<int> stack;
      if (t >= 0) stack.push_back(t);
      path.push_back(m.render(c, stack, t >= 0));
    }
    std::reverse(path.begin(), path.end());
    return path;
  };
  while (!queue.empty()) {
    auto k = queue.front();
    queue.pop_front();
    int c = static_cast<int>(k) / (ns + 1), t = static_cast<int>(k) % (ns + 1) - 1;
    if (contr.bad.contains(m.ctors[c], m.shape_name(t)))
      return Verdict::fail("reaches a non-contractive identifier", witness(k));
    const Equation* eq = m.equation(c, t);
    if (!eq) return Verdict::fail("reaches an identifier without equation", witness(k));
    from = static_cast<int>(k);
    std::vector<TypeExpr> calls;
    collect_calls(eq->body, calls);
    for (const auto& call : calls) {
      StackArg a = m.arg_of(call.args());
      if (a.open && t >= 0) chain(m.ctor_ids.at(call.name()), a.push, visit);
      else start(call);
    }
  }
  return Verdict::ok();
}

}  // namespace

Verdict check_formation(const EquationSystem& sys, const TypeExpr& expr) {
  require_valid(sys);
  switch (sys.cls) {
    case SystemClass::Finite: return Verdict::ok();
    case SystemClass::ContextFree: {
      CfFacts facts(sys);
      std::set<std::string> seen;
      std::vector<TypeExpr> todo;
      collect_calls(expr, todo);
      while (!todo.empty()) {
        auto name = todo.back().name();
        todo.pop_back();
        if (!seen.insert(name).second) continue;
        if (!facts.contractive_ctor(name)) return Verdict::fail("reaches a non-contractive identifier", facts.cycle(name));
        for (const Equation* eq : sys.equations_of(name)) collect_calls(eq->body, todo);
      }
      return Verdict::ok();
    }
    case SystemClass::TwoCounter: return check_contractive_bounded(sys, 1000);
    case SystemClass::Nested: {
      EquationSystem rooted = sys;
      rooted.root = expr;
      auto pd = nested_to_pushdown(rooted);
      return formation_stack(pd, pd.root);
    }
    default: return formation_stack(sys, expr);
  }
}

Verdict check_formation(const EquationSystem& sys) { return check_formation(sys, sys.root); }

}  // namespace shades
