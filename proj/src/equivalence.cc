#include "shades/equivalence.h"

#include <deque>
#include <numeric>
#include <set>

#include "shades/analysis.h"
#include "shades/automata.h"
#include "shades/compile.h"
#include "shades/transform.h"

namespace shades {

const char* to_string(EquivResult::Status s) {
  switch (s) {
    case EquivResult::Status::Equivalent: return "equivalent";
    case EquivResult::Status::NotEquivalent: return "not equivalent";
    case EquivResult::Status::EquivalentUpTo: return "equivalent up to";
  }
  return "?";
}

namespace {

// A reading configuration after ε-closure; dead ones reject every extension.
struct Node {
  int state = kImplicitSink;
  Memory mem;
  bool accepted = false;
  bool dead = true;

  auto operator<=>(const Node&) const = default;
};

Node node_of(const Automaton& aut, const Config& c) {
  Closure cl = close(aut, c);
  Node n;
  n.accepted = cl.accepted;
  n.dead = cl.diverged || cl.last.state < 0 || (aut.sink && cl.last.state == *aut.sink);
  if (!n.dead) {
    n.state = cl.last.state;
    n.mem = cl.last.mem;
  }
  return n;
}

Node step(const Automaton& aut, const Node& n, const TraceSymbol& sym) {
  if (n.dead) return Node{};
  return node_of(aut, read(aut, Config{n.state, n.mem}, sym));
}

Automaton compile_rooted(const EquationSystem& sys, const TypeExpr& root) {
  EquationSystem s = sys;
  s.root = root;
  Verdict v = check_formation(s, root);
  if (v.is_fail()) {
    std::string w;
    for (const auto& id : v.witness) w += (w.empty() ? "" : " -> ") + id;
    throw Error(ErrorKind::Formation, v.reason + (w.empty() ? "" : ": " + w));
  }
  return compile(s);
}

using Pair = std::pair<Node, Node>;

class UnionFind {
 public:
  int id(const Node& n, int side) {
    auto [it, fresh] = ids_.try_emplace({side, n}, static_cast<int>(parent_.size()));
    if (fresh) parent_.push_back(it->second);
    return it->second;
  }
  int find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[a] = b;
    return true;
  }

 private:
  std::map<std::pair<int, Node>, int> ids_;
  std::vector<int> parent_;
};

// Hopcroft-Karp style check on finite-state machines.
bool same_language_fsa(const Automaton& a, const Automaton& b, const std::set<TraceSymbol>& sigma) {
  UnionFind uf;
  std::deque<Pair> todo;
  Pair start{node_of(a, a.initial_config()), node_of(b, b.initial_config())};
  uf.unite(uf.id(start.first, 0), uf.id(start.second, 1));
  todo.push_back(start);
  while (!todo.empty()) {
    auto [x, y] = todo.front();
    todo.pop_front();
    if (x.accepted != y.accepted) return false;
    for (const auto& sym : sigma) {
      Node x2 = step(a, x, sym), y2 = step(b, y, sym);
      if (uf.unite(uf.id(x2, 0), uf.id(y2, 1))) todo.emplace_back(x2, y2);
    }
  }
  return true;
}

}  // namespace

EquivResult equiv(const EquationSystem& sa, const TypeExpr& root_a, const EquationSystem& sb, const TypeExpr& root_b,
                  std::size_t fuel) {
  Automaton a = compile_rooted(sa, root_a);
  Automaton b = compile_rooted(sb, root_b);
  std::set<TraceSymbol> sigma = a.alphabet();
  for (const auto& s : b.alphabet()) sigma.insert(s);

  const bool finite = a.model == Model::FiniteState && b.model == Model::FiniteState;
  const bool bounded_only = a.model == Model::TwoCounter || b.model == Model::TwoCounter;
  bool equal_fsa = finite && same_language_fsa(a, b, sigma);

  EquivResult result;
  std::set<Pair> seen;
  std::vector<std::pair<Pair, Word>> layer;
  Pair start{node_of(a, a.initial_config()), node_of(b, b.initial_config())};
  seen.insert(start);
  if (start.first.accepted != start.second.accepted) {
    result.status = EquivResult::Status::NotEquivalent;
    result.pairs = 1;
    return result;
  }
  if (equal_fsa) {
    result.status = EquivResult::Status::Equivalent;
    return result;
  }
  layer.emplace_back(start, Word{});
  // finite machines have finitely many pairs, so the search ends without fuel
  for (std::size_t depth = 0; finite || depth < fuel; ++depth) {
    std::vector<std::pair<Pair, Word>> next;
    for (const auto& [p, w] : layer) {
      for (const auto& sym : sigma) {
        Pair q{step(a, p.first, sym), step(b, p.second, sym)};
        Word w2 = w;
        w2.push_back(sym);
        if (q.first.accepted != q.second.accepted) {
          result.status = EquivResult::Status::NotEquivalent;
          result.witness = std::move(w2);
          result.pairs = seen.size();
          return result;
        }
        if (seen.insert(q).second) next.emplace_back(q, std::move(w2));
      }
    }
    layer = std::move(next);
    if (layer.empty()) {
      result.pairs = seen.size();
      if (bounded_only) break;
      result.status = EquivResult::Status::Equivalent;
      return result;
    }
  }
  result.status = EquivResult::Status::EquivalentUpTo;
  result.depth = fuel;
  result.pairs = seen.size();
  return result;
}

EquivResult dual_check(const EquationSystem& sa, const TypeExpr& root_a, const EquationSystem& sb, const TypeExpr& root_b,
                       std::size_t fuel) {
  EquationSystem s = sa;
  s.root = root_a;
  EquationSystem d = dualize(s);
  return equiv(d, d.root, sb, root_b, fuel);
}

}  // namespace shades
