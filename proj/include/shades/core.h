#pragma once

// Abstract syntax shared by every module: type expressions, parameter
// patterns and terms, equation systems, substitution.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "shades/error.h"

namespace shades {

enum class Polarity : std::uint8_t { In, Out };
enum class View : std::uint8_t { External, Internal };

constexpr Polarity dual(Polarity p) { return p == Polarity::In ? Polarity::Out : Polarity::In; }
constexpr View dual(View v) { return v == View::External ? View::Internal : View::External; }

enum class SystemClass : std::uint8_t {
  Finite,
  Recursive,
  OneCounter,
  ContextFree,
  Pushdown,
  Nested,
  TwoCounter,
};

const char* to_string(SystemClass cls);
std::optional<SystemClass> class_from_string(const std::string& name);

// s^succs applied to z (var empty) or to a bound variable.
struct NatTerm {
  std::uint64_t succs = 0;
  std::string var;

  bool closed() const { return var.empty(); }
  bool operator==(const NatTerm&) const = default;
};

// Stack word, top first, optionally ending in a bound variable.
struct WordTerm {
  std::vector<std::string> symbols;
  std::string var;

  bool closed() const { return var.empty(); }
  bool operator==(const WordTerm&) const = default;
};

struct ParamArgs;
class TypeExpr;
using Branches = std::map<std::string, TypeExpr>;

class TypeExpr {
 public:
  enum class Kind : std::uint8_t { End, Skip, Msg, MsgCF, Choice, Seq, Call, Var };

  TypeExpr();  // end

  static TypeExpr end();
  static TypeExpr skip();
  static TypeExpr msg(Polarity pol, TypeExpr payload, TypeExpr cont);
  static TypeExpr msg_cf(Polarity pol, TypeExpr payload);
  static TypeExpr choice(View view, Branches branches);
  static TypeExpr seq(TypeExpr left, TypeExpr right);
  static TypeExpr call(std::string ctor);
  static TypeExpr call(std::string ctor, ParamArgs args);
  static TypeExpr var(std::string name);

  Kind kind() const;
  bool is(Kind k) const { return kind() == k; }

  Polarity polarity() const;              // Msg, MsgCF
  View view() const;                      // Choice
  const TypeExpr& payload() const;        // Msg, MsgCF
  const TypeExpr& cont() const;           // Msg
  const TypeExpr& left() const;           // Seq
  const TypeExpr& right() const;          // Seq
  const Branches& branches() const;       // Choice
  const std::string& name() const;        // Call ctor, Var name
  const ParamArgs& args() const;          // Call

  // Node count plus counter magnitudes and stack lengths.
  std::size_t weight() const;

  bool operator==(const TypeExpr& other) const;

 private:
  struct Node;
  explicit TypeExpr(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

struct ParamArgs {
  enum class Kind : std::uint8_t { None, Nat, Word, NatPair, Types };

  Kind kind = Kind::None;
  std::vector<NatTerm> nats;  // one for Nat, two for NatPair
  WordTerm word;
  std::vector<TypeExpr> types;

  static ParamArgs none() { return {}; }
  static ParamArgs nat(NatTerm n);
  static ParamArgs nat_pair(NatTerm a, NatTerm b);
  static ParamArgs stack(WordTerm w);
  static ParamArgs type_args(std::vector<TypeExpr> ts);

  bool closed() const;
  bool operator==(const ParamArgs& other) const;
};

enum class CounterShape : std::uint8_t { Zero, Succ, Any };

struct CounterPattern {
  CounterShape shape = CounterShape::Zero;
  std::string var;  // bound by Succ (predecessor) or Any (value)

  bool operator==(const CounterPattern&) const = default;
};

struct Pattern {
  enum class Kind : std::uint8_t { None, Nat, Word, NatPair, Nested };

  Kind kind = Kind::None;
  std::vector<CounterPattern> counters;
  std::optional<std::string> top;  // Word: nullopt is the empty stack
  std::string stack_var;
  std::vector<std::string> vars;   // Nested

  static Pattern none() { return {}; }
  static Pattern zero();
  static Pattern succ(std::string var);
  static Pattern pair(CounterPattern a, CounterPattern b);
  static Pattern empty_stack();
  static Pattern cons(std::string symbol, std::string var);
  static Pattern nested(std::vector<std::string> vars);

  bool operator==(const Pattern&) const = default;
  // Canonical equation order: z before s, eps before symbols.
  bool operator<(const Pattern& other) const;
};

struct Equation {
  std::string ctor;
  Pattern pattern;
  TypeExpr body;

  bool operator==(const Equation&) const = default;
};

struct EquationSystem {
  SystemClass cls = SystemClass::Recursive;
  std::vector<std::string> stack_alphabet;
  std::vector<Equation> equations;  // kept sorted by canonicalize()
  TypeExpr root;
  std::string root_name = "t";

  void canonicalize();
  std::vector<std::string> ctor_names() const;
  std::vector<const Equation*> equations_of(const std::string& ctor) const;
  std::optional<std::size_t> arity(const std::string& ctor) const;
  bool declares(const std::string& ctor) const;

  bool operator==(const EquationSystem&) const = default;
};

struct Binding {
  std::map<std::string, NatTerm> nats;
  std::map<std::string, WordTerm> words;
  std::map<std::string, TypeExpr> types;
};

TypeExpr substitute(const TypeExpr& body, const Binding& binding);
ParamArgs substitute(const ParamArgs& args, const Binding& binding);

// Binding for closed args against an equation pattern, or nullopt.
std::optional<Binding> match(const Pattern& pattern, const ParamArgs& args);

class EquationIndex {
 public:
  explicit EquationIndex(const EquationSystem& sys);

  const std::vector<const Equation*>& of(const std::string& ctor) const;
  // Matching equation for a closed call, or nullptr.
  const Equation* find(const std::string& ctor, const ParamArgs& args) const;
  // Body of the matching equation with the call's arguments substituted.
  // Throws MissingEquation.
  TypeExpr expand(const TypeExpr& call) const;
  std::size_t equation_count() const { return count_; }

 private:
  std::map<std::string, std::vector<const Equation*>> by_ctor_;
  std::size_t count_ = 0;
};

enum class ViolationKind : std::uint8_t {
  UndeclaredCtor,
  ArityMismatch,
  DuplicateEquation,
  WrongClassConstruct,
  UnboundVariable,
  UnknownStackSymbol,
};

const char* to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

ValidationReport validate_system(const EquationSystem& sys);
// Throws Error(Validation) with the summary when the report is not ok.
void require_valid(const EquationSystem& sys);

std::string format_args(const ParamArgs& args);

// base, base', base'', ... whichever is not taken yet; records it as taken.
std::string fresh_name(const std::string& base, std::set<std::string>& taken);
// base_1, base_2, ... whichever is not taken yet; records it as taken.
std::string fresh_indexed(const std::string& base, std::set<std::string>& taken);
// Every Call and Var node, left to right.
void collect_leaves(const TypeExpr& e, std::vector<TypeExpr>& out);
bool has_type_vars(const TypeExpr& e);
std::string format_pattern(const Pattern& pattern);

}  // namespace shades
