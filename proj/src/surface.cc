#include "shades/surface.h"

#include <algorithm>
#include <cctype>
#include <set>

namespace shades {

namespace {

struct Token {
  enum class Kind : std::uint8_t { Ident, Punct, Newline, Eof };
  Kind kind = Kind::Eof;
  std::string text;
  SourceSpan span;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

// Newlines inside brackets are dropped so long equations may wrap.
std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1, depth = 0;
  std::size_t i = 0;
  auto span_at = [&](std::size_t start, std::size_t end, int c) {
    return SourceSpan{start, end, line, c};
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '\n') {
      if (depth == 0) out.push_back({Token::Kind::Newline, "\n", span_at(i, i + 1, col)});
      ++i;
      ++line;
      col = 1;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      ++col;
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    if (ident_start(c)) {
      std::size_t start = i;
      int c0 = col;
      while (i < src.size() && ident_char(src[i])) ++i, ++col;
      out.push_back({Token::Kind::Ident, std::string(src.substr(start, i - start)),
                     span_at(start, i, c0)});
      continue;
    }
    if (std::string_view("(){},:.;=?!&+").find(c) != std::string_view::npos) {
      if (c == '(' || c == '{') ++depth;
      if ((c == ')' || c == '}') && depth > 0) --depth;
      out.push_back({Token::Kind::Punct, std::string(1, c), span_at(i, i + 1, col)});
      ++i;
      ++col;
      continue;
    }
    throw Error(ErrorKind::Syntax, std::string("unexpected character '") + c + "'",
                span_at(i, i + 1, col));
  }
  out.push_back({Token::Kind::Eof, "", span_at(src.size(), src.size(), col)});
  return out;
}

class SystemParser {
 public:
  explicit SystemParser(std::string_view src) : toks_(lex(src)) {}

  EquationSystem parse() {
    skip_newlines();
    expect_word("system");
    auto cls_tok = take_ident("system class");
    auto cls = class_from_string(cls_tok.text);
    if (!cls) fail("unknown system class '" + cls_tok.text + "'", cls_tok);
    sys_.cls = *cls;
    end_line();
    if (peek_word("stack")) {
      next();
      while (peek().kind == Token::Kind::Ident) {
        auto sym = next().text;
        if (reserved(sym)) fail("reserved word as stack symbol", toks_[pos_ - 1]);
        sys_.stack_alphabet.push_back(sym);
      }
      end_line();
    }
    expect_word("type");
    sys_.root_name = take_ident("type name").text;
    expect_punct("=");
    bound_ = {};
    sys_.root = parse_expr();
    end_line();
    while (peek().kind != Token::Kind::Eof) {
      parse_equation();
      end_line();
    }
    sys_.canonicalize();
    return std::move(sys_);
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  [[noreturn]] void fail(const std::string& msg, const Token& at) const {
    throw Error(ErrorKind::Syntax, msg, at.span);
  }
  bool peek_punct(const char* p) const {
    return peek().kind == Token::Kind::Punct && peek().text == p;
  }
  bool peek_word(const char* w) const {
    return peek().kind == Token::Kind::Ident && peek().text == w;
  }
  void expect_punct(const char* p) {
    if (!peek_punct(p)) fail(std::string("expected '") + p + "'", peek());
    next();
  }
  void expect_word(const char* w) {
    if (!peek_word(w)) fail(std::string("expected '") + w + "'", peek());
    next();
  }
  Token take_ident(const char* what) {
    if (peek().kind != Token::Kind::Ident) fail(std::string("expected ") + what, peek());
    return next();
  }
  void skip_newlines() {
    while (peek().kind == Token::Kind::Newline) next();
  }
  void end_line() {
    if (peek().kind == Token::Kind::Eof) return;
    if (peek().kind != Token::Kind::Newline) fail("expected end of line", peek());
    skip_newlines();
  }
  static bool reserved(const std::string& w) {
    return w == "end" || w == "skip" || w == "eps" || w == "z" || w == "s" || w == "system" ||
           w == "stack" || w == "type";
  }
  bool is_stack_symbol(const std::string& w) const {
    return std::find(sys_.stack_alphabet.begin(), sys_.stack_alphabet.end(), w) !=
           sys_.stack_alphabet.end();
  }

  CounterPattern parse_counter_pattern() {
    auto t = take_ident("counter pattern");
    if (t.text == "z") return {CounterShape::Zero, ""};
    if (t.text == "s") {
      auto v = take_ident("variable");
      if (reserved(v.text)) fail("expected variable after 's'", v);
      return {CounterShape::Succ, v.text};
    }
    if (reserved(t.text)) fail("malformed counter pattern", t);
    return {CounterShape::Any, t.text};
  }

  Pattern parse_pattern() {
    switch (sys_.cls) {
      case SystemClass::OneCounter: {
        Pattern p;
        p.kind = Pattern::Kind::Nat;
        p.counters = {parse_counter_pattern()};
        return p;
      }
      case SystemClass::TwoCounter: {
        auto a = parse_counter_pattern();
        expect_punct(",");
        auto b = parse_counter_pattern();
        return Pattern::pair(a, b);
      }
      case SystemClass::Pushdown: {
        auto t = take_ident("stack pattern");
        if (t.text == "eps") return Pattern::empty_stack();
        auto v = take_ident("stack variable");
        return Pattern::cons(t.text, v.text);
      }
      case SystemClass::Nested: {
        std::vector<std::string> vars;
        do {
          if (!vars.empty()) next();
          auto v = take_ident("type variable");
          if (reserved(v.text)) fail("reserved word as type variable", v);
          vars.push_back(v.text);
        } while (peek_punct(","));
        return Pattern::nested(std::move(vars));
      }
      default: fail(std::string("class ") + to_string(sys_.cls) + " takes no parameters", peek());
    }
  }

  void parse_equation() {
    auto name = take_ident("constructor name");
    if (reserved(name.text)) fail("reserved word as constructor", name);
    Pattern pattern;
    if (sys_.cls == SystemClass::Nested) pattern = Pattern::nested({});
    if (peek_punct("(")) {
      next();
      pattern = parse_pattern();
      expect_punct(")");
    } else if (sys_.cls != SystemClass::Recursive && sys_.cls != SystemClass::ContextFree &&
               sys_.cls != SystemClass::Finite && sys_.cls != SystemClass::Nested) {
      fail("equation needs a parameter pattern", peek());
    }
    expect_punct("=");
    bound_ = pattern.vars;
    auto body = parse_expr();
    sys_.equations.push_back({name.text, std::move(pattern), std::move(body)});
  }

  NatTerm parse_nat() {
    NatTerm n;
    while (peek_word("s")) {
      next();
      ++n.succs;
    }
    auto t = take_ident("'z' or a counter variable");
    if (t.text == "z") return n;
    if (reserved(t.text)) fail("malformed counter term", t);
    n.var = t.text;
    return n;
  }

  ParamArgs parse_args(const Token& head) {
    switch (sys_.cls) {
      case SystemClass::OneCounter: return ParamArgs::nat(parse_nat());
      case SystemClass::TwoCounter: {
        auto a = parse_nat();
        expect_punct(",");
        return ParamArgs::nat_pair(a, parse_nat());
      }
      case SystemClass::Pushdown: {
        WordTerm w;
        if (peek_word("eps")) {
          next();
          return ParamArgs::stack(w);
        }
        while (peek().kind == Token::Kind::Ident) {
          auto t = next();
          if (!w.var.empty()) fail("stack variable must come last", t);
          if (is_stack_symbol(t.text)) w.symbols.push_back(t.text);
          else w.var = t.text;
        }
        if (w.symbols.empty() && w.var.empty()) fail("empty stack word; write eps", peek());
        return ParamArgs::stack(std::move(w));
      }
      case SystemClass::Nested: {
        std::vector<TypeExpr> args;
        do {
          if (!args.empty()) next();
          args.push_back(parse_expr());
        } while (peek_punct(","));
        return ParamArgs::type_args(std::move(args));
      }
      default:
        // Parsed so validation can report the misuse.
        if (peek_word("s") || peek_word("z")) return ParamArgs::nat(parse_nat());
        fail(std::string("class ") + to_string(sys_.cls) + " takes no arguments", head);
    }
  }

  TypeExpr parse_expr() {
    auto left = parse_prefix();
    if (peek_punct(";")) {
      next();
      return TypeExpr::seq(std::move(left), parse_expr());
    }
    return left;
  }

  TypeExpr parse_prefix() {
    if (peek_punct("?") || peek_punct("!")) {
      Polarity pol = next().text == "?" ? Polarity::In : Polarity::Out;
      auto payload = parse_atom();
      if (peek_punct(".")) {
        next();
        return TypeExpr::msg(pol, std::move(payload), parse_prefix());
      }
      return TypeExpr::msg_cf(pol, std::move(payload));
    }
    return parse_atom();
  }

  TypeExpr parse_atom() {
    const Token& t = peek();
    if (t.kind == Token::Kind::Punct) {
      if (t.text == "(") {
        next();
        auto e = parse_expr();
        expect_punct(")");
        return e;
      }
      if (t.text == "&" || t.text == "+") {
        View view = next().text == "&" ? View::External : View::Internal;
        expect_punct("{");
        Branches bs;
        do {
          if (!bs.empty()) next();
          auto label = take_ident("label");
          expect_punct(":");
          if (bs.count(label.text)) fail("duplicate label '" + label.text + "'", label);
          bs.emplace(label.text, parse_expr());
        } while (peek_punct(","));
        expect_punct("}");
        return TypeExpr::choice(view, std::move(bs));
      }
      fail("expected a type", t);
    }
    if (t.kind != Token::Kind::Ident) fail("expected a type", t);
    auto head = next();
    if (head.text == "end") return TypeExpr::end();
    if (head.text == "skip") return TypeExpr::skip();
    if (reserved(head.text)) fail("unexpected '" + head.text + "'", head);
    if (peek_punct("(")) {
      next();
      auto args = parse_args(head);
      expect_punct(")");
      return TypeExpr::call(head.text, std::move(args));
    }
    if (std::find(bound_.begin(), bound_.end(), head.text) != bound_.end())
      return TypeExpr::var(head.text);
    return TypeExpr::call(head.text);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  EquationSystem sys_;
  std::vector<std::string> bound_;
};

// ---- printing ----

const char* pol_text(Polarity p) { return p == Polarity::In ? "?" : "!"; }

std::string print_prefix(const TypeExpr& e);

std::string print_atom(const TypeExpr& e) {
  using K = TypeExpr::Kind;
  if (e.is(K::Msg) || e.is(K::MsgCF) || e.is(K::Seq)) return "(" + print_expr(e) + ")";
  return print_expr(e);
}

std::string print_prefix(const TypeExpr& e) {
  if (e.is(TypeExpr::Kind::Seq)) return "(" + print_expr(e) + ")";
  return print_expr(e);
}

}  // namespace

std::string print_expr(const TypeExpr& e) {
  using K = TypeExpr::Kind;
  switch (e.kind()) {
    case K::End: return "end";
    case K::Skip: return "skip";
    case K::Var: return e.name();
    case K::Call:
      if (e.args().kind == ParamArgs::Kind::None) return e.name();
      return e.name() + "(" + format_args(e.args()) + ")";
    case K::Msg: return pol_text(e.polarity()) + print_atom(e.payload()) + "." + print_prefix(e.cont());
    case K::MsgCF: return pol_text(e.polarity()) + print_atom(e.payload());
    case K::Seq: {
      std::string l = print_expr(e.left());
      if (e.left().is(K::Seq)) l = "(" + l + ")";
      return l + "; " + print_expr(e.right());
    }
    case K::Choice: {
      std::string out = e.view() == View::External ? "&{" : "+{";
      bool first = true;
      for (const auto& [l, b] : e.branches()) {
        if (!first) out += ", ";
        first = false;
        out += l + ": " + print_expr(b);
      }
      return out + "}";
    }
  }
  return "?";
}

EquationSystem parse_system_unchecked(std::string_view text) { return SystemParser(text).parse(); }

EquationSystem parse_system(std::string_view text) {
  auto sys = parse_system_unchecked(text);
  require_valid(sys);
  return sys;
}

std::string print_system(const EquationSystem& sys) {
  EquationSystem sorted = sys;
  sorted.canonicalize();
  std::string out = std::string("system ") + to_string(sys.cls) + "\n";
  if (sys.cls == SystemClass::Pushdown) {
    out += "stack";
    for (const auto& s : sys.stack_alphabet) out += " " + s;
    out += "\n";
  }
  out += "type " + sys.root_name + " = " + print_expr(sys.root) + "\n";
  for (const auto& eq : sorted.equations) {
    out += eq.ctor;
    bool bare = eq.pattern.kind == Pattern::Kind::None ||
                (eq.pattern.kind == Pattern::Kind::Nested && eq.pattern.vars.empty());
    if (!bare) out += "(" + format_pattern(eq.pattern) + ")";
    out += " = " + print_expr(eq.body) + "\n";
  }
  return out;
}

// ---- automata ----

namespace {

std::vector<std::string> words_of(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.emplace_back(line.substr(start, i - start));
  }
  return out;
}

}  // namespace

Automaton parse_automaton(std::string_view text) {
  Automaton aut;
  std::size_t offset = 0;
  int line_no = 0;
  bool have_header = false, have_states = false, have_initial = false;
  std::vector<std::string> initial_words;
  std::vector<std::vector<std::string>> rules;
  std::vector<SourceSpan> rule_spans;
  std::vector<std::string> accepting_names;
  std::optional<std::string> sink_name;

  while (offset <= text.size()) {
    auto nl = text.find('\n', offset);
    auto line = text.substr(offset, nl == text.npos ? text.npos : nl - offset);
    ++line_no;
    SourceSpan span{offset, offset + line.size(), line_no, 1};
    offset = nl == text.npos ? text.size() + 1 : nl + 1;
    if (auto hash = line.find('#'); hash != line.npos) line = line.substr(0, hash);
    auto ws = words_of(line);
    if (ws.empty()) continue;
    auto fail = [&](const std::string& msg) -> Error { return Error(ErrorKind::Syntax, msg, span); };
    const std::string& key = ws[0];
    if (!have_header) {
      if (key != "automaton" || ws.size() != 2) throw fail("expected 'automaton <model>'");
      auto m = model_from_string(ws[1]);
      if (!m) throw fail("unknown model '" + ws[1] + "'");
      aut.model = *m;
      have_header = true;
    } else if (key == "stack") {
      aut.stack_alphabet.assign(ws.begin() + 1, ws.end());
    } else if (key == "states") {
      for (std::size_t i = 1; i < ws.size(); ++i) {
        if (aut.find_state(ws[i])) throw fail("duplicate state '" + ws[i] + "'");
        aut.add_state(ws[i], false);
      }
      have_states = true;
    } else if (key == "initial") {
      if (ws.size() < 2) throw fail("expected 'initial <state> [memory]'");
      initial_words.assign(ws.begin() + 1, ws.end());
      have_initial = true;
    } else if (key == "accepting") {
      accepting_names.insert(accepting_names.end(), ws.begin() + 1, ws.end());
    } else if (key == "sink") {
      if (ws.size() != 2) throw fail("expected 'sink <state>'");
      sink_name = ws[1];
    } else {
      if (ws.size() != 9 || ws[1] != "," || ws[3] != "," || ws[5] != "->" || ws[7] != ",")
        throw fail("expected 'q , test , input -> op , q''");
      rules.push_back(ws);
      rule_spans.push_back(span);
    }
  }
  if (!have_header) throw Error(ErrorKind::Syntax, "missing 'automaton' header");
  if (!have_states || !have_initial) throw Error(ErrorKind::Syntax, "missing states or initial line");

  auto state = [&](const std::string& name, const SourceSpan& span) {
    auto q = aut.find_state(name);
    if (!q) throw Error(ErrorKind::Syntax, "unknown state '" + name + "'", span);
    return *q;
  };
  SourceSpan nowhere;
  aut.initial = state(initial_words[0], nowhere);
  Memory mem;
  auto number = [&](const std::string& s) -> std::uint64_t {
    if (s.empty() || !std::all_of(s.begin(), s.end(), ::isdigit))
      throw Error(ErrorKind::Syntax, "bad counter value '" + s + "'");
    return std::stoull(s);
  };
  switch (aut.model) {
    case Model::FiniteState:
      if (initial_words.size() != 1) throw Error(ErrorKind::Syntax, "finite-state memory must be empty");
      break;
    case Model::OneCounter:
      if (initial_words.size() > 2) throw Error(ErrorKind::Syntax, "bad initial counter");
      if (initial_words.size() == 2) mem.c1 = number(initial_words[1]);
      break;
    case Model::TwoCounter:
      if (initial_words.size() == 2) {
        auto comma = initial_words[1].find(',');
        if (comma == std::string::npos) throw Error(ErrorKind::Syntax, "expected 'n,m'");
        mem.c1 = number(initial_words[1].substr(0, comma));
        mem.c2 = number(initial_words[1].substr(comma + 1));
      } else if (initial_words.size() > 2) {
        throw Error(ErrorKind::Syntax, "bad initial counters");
      }
      break;
    case Model::Pushdown:
      for (std::size_t i = initial_words.size(); i-- > 1;) {
        if (initial_words[i] == "eps" && initial_words.size() == 2) break;
        int sym = aut.find_symbol(initial_words[i]);
        if (sym < 0) throw Error(ErrorKind::Syntax, "unknown stack symbol '" + initial_words[i] + "'");
        mem.stack.push_back(sym);
      }
      break;
  }
  aut.initial_memory = mem;
  for (const auto& name : accepting_names) aut.accepting[state(name, nowhere)] = true;
  if (sink_name) aut.sink = state(*sink_name, nowhere);

  for (std::size_t r = 0; r < rules.size(); ++r) {
    const auto& ws = rules[r];
    const auto& span = rule_spans[r];
    int q = state(ws[0], span);
    auto test = aut.parse_test(ws[2]);
    if (!test) throw Error(ErrorKind::Syntax, "bad memory test '" + ws[2] + "'", span);
    auto op = aut.parse_op(ws[6]);
    if (!op) throw Error(ErrorKind::Syntax, "bad memory operation '" + ws[6] + "'", span);
    Move move{*op, state(ws[8], span)};
    Mode& mode = aut.mode_at(q, *test);
    std::string where = "(" + ws[0] + ", " + ws[2] + ")";
    if (ws[4] == "eps") {
      if (mode.epsilon || !mode.reads.empty())
        throw Error(ErrorKind::Nondeterministic, where, span);
      mode.epsilon = move;
    } else {
      TraceSymbol sym = parse_symbol(ws[4]);
      if (mode.epsilon || mode.reads.count(sym))
        throw Error(ErrorKind::Nondeterministic, where + " on " + ws[4], span);
      mode.reads.emplace(sym, move);
    }
  }
  check_automaton(aut);
  return aut;
}

std::string print_automaton(const Automaton& aut) {
  std::string out = std::string("automaton ") + to_string(aut.model) + "\n";
  if (aut.model == Model::Pushdown) {
    out += "stack";
    for (const auto& s : aut.stack_alphabet) out += " " + s;
    out += "\n";
  }
  out += "states";
  for (const auto& q : aut.states) out += " " + q;
  out += "\ninitial " + aut.states[aut.initial];
  std::string mem = aut.memory_name(aut.initial_memory);
  if (!mem.empty()) out += " " + mem;
  out += "\naccepting";
  for (std::size_t q = 0; q < aut.states.size(); ++q)
    if (aut.accepting[q]) out += " " + aut.states[q];
  out += "\n";
  if (aut.sink) out += "sink " + aut.states[*aut.sink] + "\n";
  for (const auto& [key, mode] : aut.table) {
    auto [q, test] = key;
    auto line = [&](const std::string& input, const Move& m) {
      out += aut.states[q] + " , " + aut.test_name(test) + " , " + input + " -> " +
             aut.op_name(m.op) + " , " + aut.states[m.target] + "\n";
    };
    if (mode.epsilon) line("eps", *mode.epsilon);
    for (const auto& [sym, m] : mode.reads) line(sym.spelling(), m);
  }
  return out;
}

}  // namespace shades
