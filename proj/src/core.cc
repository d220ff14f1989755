#include "shades/core.h"

#include "shades/surface.h"

#include <algorithm>
#include <set>
#include <sstream>

namespace shades {

const char* to_string(SystemClass cls) {
  switch (cls) {
    case SystemClass::Finite: return "finite";
    case SystemClass::Recursive: return "recursive";
    case SystemClass::OneCounter: return "onecounter";
    case SystemClass::ContextFree: return "contextfree";
    case SystemClass::Pushdown: return "pushdown";
    case SystemClass::Nested: return "nested";
    case SystemClass::TwoCounter: return "twocounter";
  }
  return "?";
}

std::optional<SystemClass> class_from_string(const std::string& name) {
  for (auto cls : {SystemClass::Finite, SystemClass::Recursive, SystemClass::OneCounter,
                   SystemClass::ContextFree, SystemClass::Pushdown, SystemClass::Nested,
                   SystemClass::TwoCounter})
    if (name == to_string(cls)) return cls;
  return std::nullopt;
}

// ---- TypeExpr ----

struct TypeExpr::Node {
  Kind kind = Kind::End;
  Polarity pol = Polarity::In;
  View view = View::External;
  std::vector<TypeExpr> kids;
  Branches branches;
  std::string name;
  ParamArgs args;
};

TypeExpr::TypeExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

TypeExpr::TypeExpr() : TypeExpr(end()) {}

TypeExpr TypeExpr::end() {
  static const auto node = std::make_shared<const Node>();
  return TypeExpr(node);
}

TypeExpr TypeExpr::skip() {
  static const auto node = [] {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Skip;
    return std::shared_ptr<const Node>(n);
  }();
  return TypeExpr(node);
}

TypeExpr TypeExpr::msg(Polarity pol, TypeExpr payload, TypeExpr cont) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Msg;
  n->pol = pol;
  n->kids = {std::move(payload), std::move(cont)};
  return TypeExpr(std::move(n));
}

TypeExpr TypeExpr::msg_cf(Polarity pol, TypeExpr payload) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::MsgCF;
  n->pol = pol;
  n->kids = {std::move(payload)};
  return TypeExpr(std::move(n));
}

TypeExpr TypeExpr::choice(View view, Branches branches) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Choice;
  n->view = view;
  n->branches = std::move(branches);
  return TypeExpr(std::move(n));
}

TypeExpr TypeExpr::seq(TypeExpr left, TypeExpr right) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Seq;
  n->kids = {std::move(left), std::move(right)};
  return TypeExpr(std::move(n));
}

TypeExpr TypeExpr::call(std::string ctor) { return call(std::move(ctor), ParamArgs::none()); }

TypeExpr TypeExpr::call(std::string ctor, ParamArgs args) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Call;
  n->name = std::move(ctor);
  n->args = std::move(args);
  return TypeExpr(std::move(n));
}

TypeExpr TypeExpr::var(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->name = std::move(name);
  return TypeExpr(std::move(n));
}

TypeExpr::Kind TypeExpr::kind() const { return node_->kind; }
Polarity TypeExpr::polarity() const { return node_->pol; }
View TypeExpr::view() const { return node_->view; }
const TypeExpr& TypeExpr::payload() const { return node_->kids.at(0); }
const TypeExpr& TypeExpr::cont() const { return node_->kids.at(1); }
const TypeExpr& TypeExpr::left() const { return node_->kids.at(0); }
const TypeExpr& TypeExpr::right() const { return node_->kids.at(1); }
const Branches& TypeExpr::branches() const { return node_->branches; }
const std::string& TypeExpr::name() const { return node_->name; }
const ParamArgs& TypeExpr::args() const { return node_->args; }

std::size_t TypeExpr::weight() const {
  std::size_t w = 1;
  for (const auto& k : node_->kids) w += k.weight();
  for (const auto& [_, b] : node_->branches) w += b.weight();
  const auto& a = node_->args;
  for (const auto& n : a.nats) w += n.succs;
  w += a.word.symbols.size();
  for (const auto& t : a.types) w += t.weight();
  return w;
}

bool TypeExpr::operator==(const TypeExpr& other) const {
  if (node_ == other.node_) return true;
  const Node& a = *node_;
  const Node& b = *other.node_;
  return a.kind == b.kind && a.pol == b.pol && a.view == b.view && a.name == b.name &&
         a.kids == b.kids && a.branches == b.branches && a.args == b.args;
}

// ---- ParamArgs ----

ParamArgs ParamArgs::nat(NatTerm n) {
  ParamArgs a;
  a.kind = Kind::Nat;
  a.nats = {std::move(n)};
  return a;
}

ParamArgs ParamArgs::nat_pair(NatTerm x, NatTerm y) {
  ParamArgs a;
  a.kind = Kind::NatPair;
  a.nats = {std::move(x), std::move(y)};
  return a;
}

ParamArgs ParamArgs::stack(WordTerm w) {
  ParamArgs a;
  a.kind = Kind::Word;
  a.word = std::move(w);
  return a;
}

ParamArgs ParamArgs::type_args(std::vector<TypeExpr> ts) {
  ParamArgs a;
  a.kind = Kind::Types;
  a.types = std::move(ts);
  return a;
}

namespace {

bool has_vars(const TypeExpr& e) {
  switch (e.kind()) {
    case TypeExpr::Kind::Var: return true;
    case TypeExpr::Kind::End:
    case TypeExpr::Kind::Skip: return false;
    case TypeExpr::Kind::Msg: return has_vars(e.payload()) || has_vars(e.cont());
    case TypeExpr::Kind::MsgCF: return has_vars(e.payload());
    case TypeExpr::Kind::Seq: return has_vars(e.left()) || has_vars(e.right());
    case TypeExpr::Kind::Choice:
      for (const auto& [_, b] : e.branches())
        if (has_vars(b)) return true;
      return false;
    case TypeExpr::Kind::Call: return !e.args().closed();
  }
  return false;
}

}  // namespace

bool ParamArgs::closed() const {
  for (const auto& n : nats)
    if (!n.closed()) return false;
  if (!word.closed()) return false;
  for (const auto& t : types)
    if (has_vars(t)) return false;
  return true;
}

bool ParamArgs::operator==(const ParamArgs& other) const {
  return kind == other.kind && nats == other.nats && word == other.word && types == other.types;
}

// ---- Pattern ----

Pattern Pattern::zero() {
  Pattern p;
  p.kind = Kind::Nat;
  p.counters = {{CounterShape::Zero, ""}};
  return p;
}

Pattern Pattern::succ(std::string var) {
  Pattern p;
  p.kind = Kind::Nat;
  p.counters = {{CounterShape::Succ, std::move(var)}};
  return p;
}

Pattern Pattern::pair(CounterPattern a, CounterPattern b) {
  Pattern p;
  p.kind = Kind::NatPair;
  p.counters = {std::move(a), std::move(b)};
  return p;
}

Pattern Pattern::empty_stack() {
  Pattern p;
  p.kind = Kind::Word;
  return p;
}

Pattern Pattern::cons(std::string symbol, std::string var) {
  Pattern p;
  p.kind = Kind::Word;
  p.top = std::move(symbol);
  p.stack_var = std::move(var);
  return p;
}

Pattern Pattern::nested(std::vector<std::string> vars) {
  Pattern p;
  p.kind = Kind::Nested;
  p.vars = std::move(vars);
  return p;
}

bool Pattern::operator<(const Pattern& other) const {
  if (kind != other.kind) return kind < other.kind;
  auto shapes = [](const Pattern& p) {
    std::vector<CounterShape> s;
    for (const auto& c : p.counters) s.push_back(c.shape);
    return s;
  };
  auto sa = shapes(*this), sb = shapes(other);
  if (sa != sb) return sa < sb;
  if (top != other.top) return top < other.top;  // nullopt sorts first
  return vars < other.vars;
}

// ---- EquationSystem ----

void EquationSystem::canonicalize() {
  std::stable_sort(equations.begin(), equations.end(), [](const Equation& a, const Equation& b) {
    if (a.ctor != b.ctor) return a.ctor < b.ctor;
    return a.pattern < b.pattern;
  });
}

std::vector<std::string> EquationSystem::ctor_names() const {
  std::set<std::string> names;
  for (const auto& eq : equations) names.insert(eq.ctor);
  return {names.begin(), names.end()};
}

std::vector<const Equation*> EquationSystem::equations_of(const std::string& ctor) const {
  std::vector<const Equation*> out;
  for (const auto& eq : equations)
    if (eq.ctor == ctor) out.push_back(&eq);
  return out;
}

std::optional<std::size_t> EquationSystem::arity(const std::string& ctor) const {
  for (const auto& eq : equations)
    if (eq.ctor == ctor) return eq.pattern.vars.size();
  return std::nullopt;
}

bool EquationSystem::declares(const std::string& ctor) const {
  return std::any_of(equations.begin(), equations.end(),
                     [&](const Equation& eq) { return eq.ctor == ctor; });
}

// ---- substitution and matching ----

namespace {

NatTerm subst_nat(const NatTerm& n, const Binding& b) {
  if (n.closed()) return n;
  auto it = b.nats.find(n.var);
  if (it == b.nats.end()) throw Error(ErrorKind::UnboundVariable, n.var);
  return NatTerm{n.succs + it->second.succs, it->second.var};
}

WordTerm subst_word(const WordTerm& w, const Binding& b) {
  if (w.closed()) return w;
  auto it = b.words.find(w.var);
  if (it == b.words.end()) throw Error(ErrorKind::UnboundVariable, w.var);
  WordTerm out{w.symbols, it->second.var};
  out.symbols.insert(out.symbols.end(), it->second.symbols.begin(), it->second.symbols.end());
  return out;
}

}  // namespace

ParamArgs substitute(const ParamArgs& args, const Binding& binding) {
  ParamArgs out = args;
  for (auto& n : out.nats) n = subst_nat(n, binding);
  out.word = subst_word(out.word, binding);
  for (auto& t : out.types) t = substitute(t, binding);
  return out;
}

TypeExpr substitute(const TypeExpr& body, const Binding& binding) {
  switch (body.kind()) {
    case TypeExpr::Kind::End:
    case TypeExpr::Kind::Skip: return body;
    case TypeExpr::Kind::Var: {
      auto it = binding.types.find(body.name());
      if (it == binding.types.end()) throw Error(ErrorKind::UnboundVariable, body.name());
      return it->second;
    }
    case TypeExpr::Kind::Msg:
      return TypeExpr::msg(body.polarity(), substitute(body.payload(), binding),
                           substitute(body.cont(), binding));
    case TypeExpr::Kind::MsgCF:
      return TypeExpr::msg_cf(body.polarity(), substitute(body.payload(), binding));
    case TypeExpr::Kind::Seq:
      return TypeExpr::seq(substitute(body.left(), binding), substitute(body.right(), binding));
    case TypeExpr::Kind::Choice: {
      Branches bs;
      for (const auto& [l, b] : body.branches()) bs.emplace(l, substitute(b, binding));
      return TypeExpr::choice(body.view(), std::move(bs));
    }
    case TypeExpr::Kind::Call:
      if (body.args().kind == ParamArgs::Kind::None) return body;
      return TypeExpr::call(body.name(), substitute(body.args(), binding));
  }
  return body;
}

namespace {

bool match_counter(const CounterPattern& p, const NatTerm& n, Binding& b) {
  switch (p.shape) {
    case CounterShape::Zero: return n.succs == 0;
    case CounterShape::Succ:
      if (n.succs == 0) return false;
      b.nats[p.var] = NatTerm{n.succs - 1, ""};
      return true;
    case CounterShape::Any: b.nats[p.var] = n; return true;
  }
  return false;
}

}  // namespace

std::optional<Binding> match(const Pattern& pattern, const ParamArgs& args) {
  Binding b;
  switch (pattern.kind) {
    case Pattern::Kind::None:
      if (args.kind != ParamArgs::Kind::None) return std::nullopt;
      return b;
    case Pattern::Kind::Nat:
    case Pattern::Kind::NatPair:
      if (args.nats.size() != pattern.counters.size()) return std::nullopt;
      for (std::size_t i = 0; i < args.nats.size(); ++i) {
        if (!args.nats[i].closed()) return std::nullopt;
        if (!match_counter(pattern.counters[i], args.nats[i], b)) return std::nullopt;
      }
      return b;
    case Pattern::Kind::Word: {
      if (args.kind != ParamArgs::Kind::Word || !args.word.closed()) return std::nullopt;
      const auto& w = args.word.symbols;
      if (!pattern.top) {
        if (!w.empty()) return std::nullopt;
        return b;
      }
      if (w.empty() || w.front() != *pattern.top) return std::nullopt;
      b.words[pattern.stack_var] = WordTerm{{w.begin() + 1, w.end()}, ""};
      return b;
    }
    case Pattern::Kind::Nested:
      if (args.kind == ParamArgs::Kind::None && pattern.vars.empty()) return b;
      if (args.kind != ParamArgs::Kind::Types || args.types.size() != pattern.vars.size())
        return std::nullopt;
      for (std::size_t i = 0; i < args.types.size(); ++i) b.types[pattern.vars[i]] = args.types[i];
      return b;
  }
  return std::nullopt;
}

// ---- EquationIndex ----

EquationIndex::EquationIndex(const EquationSystem& sys) {
  for (const auto& eq : sys.equations) by_ctor_[eq.ctor].push_back(&eq);
  count_ = sys.equations.size();
}

const std::vector<const Equation*>& EquationIndex::of(const std::string& ctor) const {
  static const std::vector<const Equation*> none;
  auto it = by_ctor_.find(ctor);
  return it == by_ctor_.end() ? none : it->second;
}

const Equation* EquationIndex::find(const std::string& ctor, const ParamArgs& args) const {
  for (const Equation* eq : of(ctor))
    if (match(eq->pattern, args)) return eq;
  return nullptr;
}

TypeExpr EquationIndex::expand(const TypeExpr& call) const {
  for (const Equation* eq : of(call.name()))
    if (auto b = match(eq->pattern, call.args())) return substitute(eq->body, *b);
  std::string id = call.name();
  if (call.args().kind != ParamArgs::Kind::None) id += "(" + format_args(call.args()) + ")";
  throw Error(ErrorKind::MissingEquation, id);
}

// ---- formatting of parameters (shared with the printer) ----

namespace {

std::string format_nat(const NatTerm& n) {
  std::string out;
  for (std::uint64_t i = 0; i < n.succs; ++i) out += "s ";
  out += n.closed() ? "z" : n.var;
  return out;
}

std::string format_counter(const CounterPattern& c) {
  switch (c.shape) {
    case CounterShape::Zero: return "z";
    case CounterShape::Succ: return "s " + c.var;
    case CounterShape::Any: return c.var;
  }
  return "?";
}

}  // namespace

std::string format_pattern(const Pattern& p) {
  switch (p.kind) {
    case Pattern::Kind::None: return "";
    case Pattern::Kind::Nat: return format_counter(p.counters[0]);
    case Pattern::Kind::NatPair:
      return format_counter(p.counters[0]) + ", " + format_counter(p.counters[1]);
    case Pattern::Kind::Word: return p.top ? *p.top + " " + p.stack_var : "eps";
    case Pattern::Kind::Nested: {
      std::string out;
      for (std::size_t i = 0; i < p.vars.size(); ++i) out += (i ? ", " : "") + p.vars[i];
      return out;
    }
  }
  return "";
}

std::string format_args(const ParamArgs& a) {
  switch (a.kind) {
    case ParamArgs::Kind::None: return "";
    case ParamArgs::Kind::Nat: return format_nat(a.nats[0]);
    case ParamArgs::Kind::NatPair: return format_nat(a.nats[0]) + ", " + format_nat(a.nats[1]);
    case ParamArgs::Kind::Word: {
      std::string out;
      for (const auto& s : a.word.symbols) out += (out.empty() ? "" : " ") + s;
      if (!a.word.closed()) out += (out.empty() ? "" : " ") + a.word.var;
      return out.empty() ? "eps" : out;
    }
    case ParamArgs::Kind::Types: {
      std::string out;
      for (std::size_t i = 0; i < a.types.size(); ++i)
        out += (i ? ", " : "") + print_expr(a.types[i]);
      return out;
    }
  }
  return "";
}

std::string fresh_name(const std::string& base, std::set<std::string>& taken) {
  std::string name = base;
  while (taken.count(name)) name += "'";
  taken.insert(name);
  return name;
}

std::string fresh_indexed(const std::string& base, std::set<std::string>& taken) {
  std::string name;
  for (std::size_t i = 1;; ++i) {
    name = base + "_" + std::to_string(i);
    if (!taken.count(name)) break;
  }
  taken.insert(name);
  return name;
}

void collect_leaves(const TypeExpr& e, std::vector<TypeExpr>& out) {
  using K = TypeExpr::Kind;
  switch (e.kind()) {
    case K::Call:
    case K::Var: out.push_back(e); break;
    case K::Msg:
      collect_leaves(e.payload(), out);
      collect_leaves(e.cont(), out);
      break;
    case K::MsgCF: collect_leaves(e.payload(), out); break;
    case K::Seq:
      collect_leaves(e.left(), out);
      collect_leaves(e.right(), out);
      break;
    case K::Choice:
      for (const auto& [_, b] : e.branches()) collect_leaves(b, out);
      break;
    default: break;
  }
}

bool has_type_vars(const TypeExpr& e) { return has_vars(e); }

// ---- validation ----

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::UndeclaredCtor: return "UndeclaredCtor";
    case ViolationKind::ArityMismatch: return "ArityMismatch";
    case ViolationKind::DuplicateEquation: return "DuplicateEquation";
    case ViolationKind::WrongClassConstruct: return "WrongClassConstruct";
    case ViolationKind::UnboundVariable: return "UnboundVariable";
    case ViolationKind::UnknownStackSymbol: return "UnknownStackSymbol";
  }
  return "?";
}

std::string ValidationReport::summary() const {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += std::string(to_string(v.kind)) + ": " + v.detail;
  }
  return out;
}

namespace {

class Validator {
 public:
  explicit Validator(const EquationSystem& sys) : sys_(sys) {
    for (const auto& s : sys.stack_alphabet) alphabet_.insert(s);
    for (const auto& eq : sys.equations)
      if (!arity_.count(eq.ctor)) arity_[eq.ctor] = eq.pattern.vars.size();
  }

  ValidationReport run() {
    if (sys_.cls == SystemClass::Finite && !sys_.equations.empty())
      add(ViolationKind::WrongClassConstruct, "finite systems have no equations");
    std::map<std::string, std::vector<const Equation*>> by_ctor;
    for (const auto& eq : sys_.equations) {
      check_pattern(eq);
      by_ctor[eq.ctor].push_back(&eq);
    }
    for (const auto& [ctor, eqs] : by_ctor) check_duplicates(ctor, eqs);
    for (const auto& eq : sys_.equations) {
      pattern_ = &eq.pattern;
      where_ = "equation " + eq.ctor;
      check_expr(eq.body, false);
    }
    static const Pattern closed_root;
    pattern_ = &closed_root;
    where_ = "root";
    check_expr(sys_.root, false);
    return std::move(report_);
  }

 private:
  void add(ViolationKind k, std::string detail) { report_.violations.push_back({k, std::move(detail)}); }

  void check_pattern(const Equation& eq) {
    const Pattern& p = eq.pattern;
    auto wrong = [&] {
      add(ViolationKind::WrongClassConstruct,
          "pattern of " + eq.ctor + " does not fit class " + to_string(sys_.cls));
    };
    switch (sys_.cls) {
      case SystemClass::Finite:
      case SystemClass::Recursive:
      case SystemClass::ContextFree:
        if (p.kind != Pattern::Kind::None) wrong();
        break;
      case SystemClass::OneCounter:
        if (p.kind != Pattern::Kind::Nat || p.counters[0].shape == CounterShape::Any) wrong();
        break;
      case SystemClass::Pushdown:
        if (p.kind != Pattern::Kind::Word) wrong();
        else if (p.top && !alphabet_.count(*p.top))
          add(ViolationKind::UnknownStackSymbol, *p.top + " in pattern of " + eq.ctor);
        break;
      case SystemClass::TwoCounter:
        if (p.kind != Pattern::Kind::NatPair) wrong();
        else if (!p.counters[0].var.empty() && p.counters[0].var == p.counters[1].var)
          add(ViolationKind::WrongClassConstruct, "repeated variable in pattern of " + eq.ctor);
        break;
      case SystemClass::Nested: {
        if (p.kind != Pattern::Kind::Nested) {
          wrong();
          break;
        }
        std::set<std::string> seen(p.vars.begin(), p.vars.end());
        if (seen.size() != p.vars.size())
          add(ViolationKind::WrongClassConstruct, "repeated variable in pattern of " + eq.ctor);
        if (arity_[eq.ctor] != p.vars.size())
          add(ViolationKind::ArityMismatch, "equations of " + eq.ctor + " disagree on arity");
        break;
      }
    }
  }

  static bool overlap(const Pattern& a, const Pattern& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
      case Pattern::Kind::Word: return a.top == b.top;
      case Pattern::Kind::Nat:
      case Pattern::Kind::NatPair:
        for (std::size_t i = 0; i < a.counters.size() && i < b.counters.size(); ++i) {
          auto x = a.counters[i].shape, y = b.counters[i].shape;
          if (x != CounterShape::Any && y != CounterShape::Any && x != y) return false;
        }
        return true;
      default: return true;
    }
  }

  void check_duplicates(const std::string& ctor, const std::vector<const Equation*>& eqs) {
    for (std::size_t i = 0; i < eqs.size(); ++i)
      for (std::size_t j = i + 1; j < eqs.size(); ++j)
        if (overlap(eqs[i]->pattern, eqs[j]->pattern))
          add(ViolationKind::DuplicateEquation,
              ctor + "(" + format_pattern(eqs[i]->pattern) + ")");
  }

  bool is_cf() const { return sys_.cls == SystemClass::ContextFree; }

  void check_nat(const NatTerm& n, std::size_t component) {
    if (n.closed()) return;
    const auto& cs = pattern_->counters;
    for (std::size_t i = 0; i < cs.size(); ++i) {
      if (cs[i].shape == CounterShape::Zero || cs[i].var != n.var) continue;
      if (i != component)
        add(ViolationKind::WrongClassConstruct,
            "counter variable " + n.var + " used in the other component in " + where_);
      return;
    }
    add(ViolationKind::UnboundVariable, n.var + " in " + where_);
  }

  void check_call(const TypeExpr& e) {
    const auto& a = e.args();
    if (!sys_.declares(e.name())) {
      add(ViolationKind::UndeclaredCtor, e.name() + " in " + where_);
    }
    auto wrong = [&] {
      add(ViolationKind::WrongClassConstruct,
          "arguments of " + e.name() + " do not fit class " + to_string(sys_.cls) + " in " + where_);
    };
    switch (sys_.cls) {
      case SystemClass::Finite:
      case SystemClass::Recursive:
      case SystemClass::ContextFree:
        if (a.kind != ParamArgs::Kind::None) wrong();
        break;
      case SystemClass::OneCounter:
        if (a.kind != ParamArgs::Kind::Nat) wrong();
        else check_nat(a.nats[0], 0);
        break;
      case SystemClass::TwoCounter:
        if (a.kind != ParamArgs::Kind::NatPair) wrong();
        else {
          check_nat(a.nats[0], 0);
          check_nat(a.nats[1], 1);
        }
        break;
      case SystemClass::Pushdown:
        if (a.kind != ParamArgs::Kind::Word) {
          wrong();
          break;
        }
        for (const auto& s : a.word.symbols)
          if (!alphabet_.count(s)) add(ViolationKind::UnknownStackSymbol, s + " in " + where_);
        if (!a.word.closed() && (pattern_->kind != Pattern::Kind::Word || !pattern_->top ||
                                 pattern_->stack_var != a.word.var))
          add(ViolationKind::UnboundVariable, a.word.var + " in " + where_);
        break;
      case SystemClass::Nested: {
        std::size_t given = a.kind == ParamArgs::Kind::Types ? a.types.size() : 0;
        if (a.kind != ParamArgs::Kind::None && a.kind != ParamArgs::Kind::Types) {
          wrong();
          break;
        }
        auto it = arity_.find(e.name());
        if (it != arity_.end() && it->second != given)
          add(ViolationKind::ArityMismatch, e.name() + " applied to " + std::to_string(given) +
                                                " arguments in " + where_);
        for (const auto& t : a.types) check_expr(t, true);
        break;
      }
    }
  }

  void check_expr(const TypeExpr& e, bool nesting_arg) {
    using K = TypeExpr::Kind;
    if (nesting_arg && e.kind() != K::Call && e.kind() != K::Var) {
      add(ViolationKind::WrongClassConstruct,
          "constructor arguments must be constructor applications or variables in " + where_);
      return;
    }
    switch (e.kind()) {
      case K::End:
        if (is_cf()) add(ViolationKind::WrongClassConstruct, "end in context-free " + where_);
        break;
      case K::Skip:
        if (!is_cf()) add(ViolationKind::WrongClassConstruct, "skip outside context-free " + where_);
        break;
      case K::Msg:
        if (is_cf()) add(ViolationKind::WrongClassConstruct, "continuation message in " + where_);
        check_expr(e.payload(), false);
        check_expr(e.cont(), false);
        break;
      case K::MsgCF:
        if (!is_cf()) add(ViolationKind::WrongClassConstruct, "message without continuation in " + where_);
        check_expr(e.payload(), false);
        break;
      case K::Seq:
        if (!is_cf()) add(ViolationKind::WrongClassConstruct, "sequential composition in " + where_);
        check_expr(e.left(), false);
        check_expr(e.right(), false);
        break;
      case K::Choice:
        if (e.branches().empty()) add(ViolationKind::WrongClassConstruct, "empty choice in " + where_);
        for (const auto& [_, b] : e.branches()) check_expr(b, false);
        break;
      case K::Call: check_call(e); break;
      case K::Var:
        if (sys_.cls != SystemClass::Nested)
          add(ViolationKind::WrongClassConstruct, "type variable " + e.name() + " in " + where_);
        else if (std::find(pattern_->vars.begin(), pattern_->vars.end(), e.name()) ==
                 pattern_->vars.end())
          add(ViolationKind::UnboundVariable, e.name() + " in " + where_);
        break;
    }
  }

  const EquationSystem& sys_;
  std::set<std::string> alphabet_;
  std::map<std::string, std::size_t> arity_;
  const Pattern* pattern_ = nullptr;
  std::string where_;
  ValidationReport report_;
};

}  // namespace

ValidationReport validate_system(const EquationSystem& sys) { return Validator(sys).run(); }

void require_valid(const EquationSystem& sys) {
  auto report = validate_system(sys);
  if (!report.ok()) throw Error(ErrorKind::Validation, report.summary());
}

}  // namespace shades
