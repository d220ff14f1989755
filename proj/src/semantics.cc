#include "shades/semantics.h"

#include <set>

namespace shades {

namespace {

struct Head {
  enum class Kind : std::uint8_t { End, Node };
  Kind kind = Kind::End;
  std::string label;
  std::vector<std::pair<std::string, TypeExpr>> kids;  // direction -> subtree
  std::vector<TraceSymbol> steps;                      // matching letters
};

std::string choice_label(View v, const Branches& bs) {
  std::string out(1, v == View::External ? '&' : '+');
  out += "[";
  bool first = true;
  for (const auto& [l, _] : bs) {
    out += (first ? "" : ",") + l;
    first = false;
  }
  return out + "]";
}

class Unfolder {
 public:
  explicit Unfolder(const EquationSystem& sys)
      : index_(sys), cf_(sys.cls == SystemClass::ContextFree),
        scale_(2 * (index_.equation_count() + 1) * (sys.stack_alphabet.size() + 1)) {}

  Head head(TypeExpr e) const {
    using K = TypeExpr::Kind;
    const std::size_t cap = scale_ * (e.weight() + 2);
    std::size_t steps = 0;
    auto expand = [&](const TypeExpr& call) {
      if (++steps > cap) {
        std::string id = call.name();
        if (call.args().kind != ParamArgs::Kind::None) id += "(" + format_args(call.args()) + ")";
        throw Error(ErrorKind::NonContractiveLoop, id);
      }
      return index_.expand(call);
    };
    while (true) {
      switch (e.kind()) {
        case K::End:
        case K::Skip: return Head{};
        case K::Msg: return message(e.polarity(), e.payload(), e.cont());
        case K::MsgCF: return message(e.polarity(), e.payload(), TypeExpr::skip());
        case K::Choice: return choice(e, nullptr);
        case K::Call: e = expand(e); break;
        case K::Var: throw Error(ErrorKind::UnboundVariable, e.name());
        case K::Seq: {
          const TypeExpr& l = e.left();
          const TypeExpr& r = e.right();
          switch (l.kind()) {
            case K::Skip: e = r; break;
            case K::MsgCF: return message(l.polarity(), l.payload(), r);
            case K::Choice: return choice(l, &r);
            case K::Call: e = TypeExpr::seq(expand(l), r); break;
            case K::Seq: e = TypeExpr::seq(l.left(), TypeExpr::seq(l.right(), r)); break;
            default: throw Error(ErrorKind::Validation, "sequential composition outside context-free");
          }
          break;
        }
      }
    }
  }

  bool context_free() const { return cf_; }

 private:
  static Head message(Polarity p, const TypeExpr& payload, const TypeExpr& cont) {
    Head h;
    h.kind = Head::Kind::Node;
    h.label = p == Polarity::In ? "?" : "!";
    h.kids = {{"d", payload}, {"c", cont}};
    h.steps = {TraceSymbol::data(p), TraceSymbol::cont(p)};
    return h;
  }

  static Head choice(const TypeExpr& c, const TypeExpr* tail) {
    Head h;
    h.kind = Head::Kind::Node;
    h.label = choice_label(c.view(), c.branches());
    std::vector<std::string> labels;
    for (const auto& [l, _] : c.branches()) labels.push_back(l);
    for (const auto& [l, b] : c.branches()) {
      h.kids.emplace_back(l, tail ? TypeExpr::seq(b, *tail) : b);
      h.steps.push_back(TraceSymbol::choice(c.view(), labels, l));
    }
    return h;
  }

  EquationIndex index_;
  bool cf_;
  std::size_t scale_;
};

void enumerate(const Unfolder& u, const TypeExpr& e, std::size_t left, Word& prefix, WordSet& out) {
  out.insert(prefix);
  if (left == 0) return;
  Head h = u.head(e);
  if (h.kind == Head::Kind::End) {
    prefix.push_back(TraceSymbol::end_mark());
    out.insert(prefix);
    prefix.pop_back();
    return;
  }
  for (std::size_t i = 0; i < h.kids.size(); ++i) {
    prefix.push_back(h.steps[i]);
    enumerate(u, h.kids[i].second, left - 1, prefix, out);
    prefix.pop_back();
  }
}

void draw(const Unfolder& u, const TypeExpr& e, std::size_t left, std::vector<std::string>& path,
          const std::string& indent, TreeView& tv) {
  if (left == 0) return;
  Head h = u.head(e);
  std::string label = h.kind == Head::Kind::End ? "end" : h.label;
  tv.nodes[path] = label;
  if (path.empty()) tv.text += label + "\n";
  else tv.text += indent + path.back() + ": " + label + "\n";
  for (const auto& [dir, kid] : h.kids) {
    path.push_back(dir);
    draw(u, kid, left - 1, path, indent + "  ", tv);
    path.pop_back();
  }
}

}  // namespace

TreeView tree_view(const EquationSystem& sys, const TypeExpr& expr, std::size_t depth) {
  Unfolder u(sys);
  TreeView tv;
  std::vector<std::string> path;
  draw(u, expr, depth, path, "", tv);
  return tv;
}

WordSet unfold_traces(const EquationSystem& sys, const TypeExpr& expr, std::size_t max_len) {
  Unfolder u(sys);
  WordSet out;
  Word prefix;
  enumerate(u, expr, max_len, prefix, out);
  return out;
}

WordSet unfold_traces(const EquationSystem& sys, std::size_t max_len) {
  return unfold_traces(sys, sys.root, max_len);
}

WordSet unfold_traces_cf(const EquationSystem& sys, const TypeExpr& expr, std::size_t max_len) {
  if (sys.cls != SystemClass::ContextFree)
    throw Error(ErrorKind::PreconditionBreach, "context-free system expected");
  return unfold_traces(sys, expr, max_len);
}

bool check_prefix_closed(const WordSet& ws) {
  for (const auto& w : ws) {
    if (w.empty()) continue;
    Word shorter(w.begin(), w.end() - 1);
    if (!ws.count(shorter)) return false;
  }
  return true;
}

std::string node_label(const TraceSymbol& sym) {
  switch (sym.kind()) {
    case TraceSymbol::Kind::End: return "end";
    case TraceSymbol::Kind::Data:
    case TraceSymbol::Kind::Cont: return sym.polarity() == Polarity::In ? "?" : "!";
    case TraceSymbol::Kind::Choice: {
      const auto& s = sym.spelling();
      return s.substr(0, s.find(':'));
    }
  }
  return "";
}

bool check_tree_shaped(const WordSet& ws) {
  std::map<Word, std::string> seen;
  for (const auto& w : ws) {
    if (w.empty()) continue;
    Word parent(w.begin(), w.end() - 1);
    auto label = node_label(w.back());
    auto [it, fresh] = seen.emplace(parent, label);
    if (!fresh && it->second != label) return false;
  }
  return true;
}

WordSet dual_image(const WordSet& ws) {
  WordSet out;
  for (const auto& w : ws) {
    Word d;
    bool below_data = false;
    for (const auto& sym : w) {
      d.push_back(below_data ? sym : sym.flipped());
      if (sym.kind() == TraceSymbol::Kind::Data) below_data = true;
    }
    out.insert(std::move(d));
  }
  return out;
}

}  // namespace shades
