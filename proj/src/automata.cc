#include "shades/automata.h"

#include <functional>

#include "loops.h"
#include "shades/semantics.h"

namespace shades {

const char* to_string(RunResult r) {
  switch (r) {
    case RunResult::Accept: return "accept";
    case RunResult::Reject: return "reject";
    case RunResult::Diverge: return "diverge";
  }
  return "?";
}

Closure close(const Automaton& aut, const Config& start) {
  Closure cl;
  cl.last = start;
  cl.accepted = aut.is_accepting(start.state);
  // exact for finite-state and one-counter; a heuristic for stacks
  const std::size_t k = aut.states.size() * static_cast<std::size_t>(aut.test_count()) + 1;
  const std::size_t cap = k * (start.mem.size() + k + 1);
  while (true) {
    if (cl.last.state < 0) return cl;
    const Mode* m = aut.mode(cl.last.state, aut.test_of(cl.last.mem));
    if (!m || !m->epsilon) return cl;
    if (cl.steps >= cap) {
      cl.diverged = true;
      return cl;
    }
    cl.last = {m->epsilon->target, aut.apply(m->epsilon->op, cl.last.mem)};
    ++cl.steps;
    cl.accepted = cl.accepted || aut.is_accepting(cl.last.state);
  }
}

Config read(const Automaton& aut, const Config& at, const TraceSymbol& sym) {
  auto to_sink = [&] { return aut.sink ? Config{*aut.sink, at.mem} : Config{kImplicitSink, {}}; };
  if (at.state < 0) return at;
  const Mode* m = aut.mode(at.state, aut.test_of(at.mem));
  if (!m) return to_sink();
  auto it = m->reads.find(sym);
  if (it == m->reads.end()) return to_sink();
  return {it->second.target, aut.apply(it->second.op, at.mem)};
}

RunResult run(const Automaton& aut, const Word& word) {
  Closure cl = close(aut, aut.initial_config());
  for (const auto& sym : word) {
    if (cl.diverged) return RunResult::Diverge;
    cl = close(aut, read(aut, cl.last, sym));
  }
  if (cl.accepted) return RunResult::Accept;
  return cl.diverged ? RunResult::Diverge : RunResult::Reject;
}

namespace {

bool dead_sink(const Automaton& aut) {
  if (!aut.sink) return true;
  int s = *aut.sink;
  if (aut.accepting[s]) return false;
  for (const auto& [key, mode] : aut.table) {
    if (key.first != s) continue;
    if (mode.epsilon && mode.epsilon->target != s) return false;
    for (const auto& [_, m] : mode.reads)
      if (m.target != s) return false;
  }
  return true;
}

}  // namespace

WordSet enumerate_accepted(const Automaton& aut, std::size_t max_len) {
  if (!dead_sink(aut)) throw Error(ErrorKind::Unsupported, "sink state is not a dead end");
  WordSet out;
  Word prefix;
  std::function<void(const Config&)> walk = [&](const Config& c) {
    Closure cl = close(aut, c);
    if (cl.accepted) out.insert(prefix);
    if (prefix.size() == max_len) return;
    if (cl.diverged) throw Error(ErrorKind::Diverge, "at " + aut.config_name(cl.last));
    if (cl.last.state < 0 || (aut.sink && cl.last.state == *aut.sink)) return;
    const Mode* m = aut.mode(cl.last.state, aut.test_of(cl.last.mem));
    if (!m) return;
    for (const auto& [sym, move] : m->reads) {
      prefix.push_back(sym);
      walk({move.target, aut.apply(move.op, cl.last.mem)});
      prefix.pop_back();
    }
  };
  walk(aut.initial_config());
  return out;
}

namespace {

LoopFreeResult loop_free_two_counter(const Automaton& aut) {
  constexpr std::size_t kSteps = 4096;
  LoopFreeResult res;
  res.exact = false;
  for (int q = 0; q < static_cast<int>(aut.states.size()); ++q)
    for (std::uint64_t a = 0; a <= 2; ++a)
      for (std::uint64_t b = 0; b <= 2; ++b) {
        Config c{q, {a, b, {}}};
        std::set<Config> seen;
        std::vector<std::string> path;
        std::size_t steps = 0;
        while (true) {
          const Mode* m = aut.mode(c.state, aut.test_of(c.mem));
          if (!m || !m->epsilon) break;
          path.push_back(aut.config_name(c));
          if (!seen.insert(c).second || ++steps > kSteps) {
            res.loop_free = false;
            res.witness = std::move(path);
            if (steps > kSteps) res.witness.push_back("no reading configuration within " + std::to_string(kSteps) + " steps");
            return res;
          }
          c = {m->epsilon->target, aut.apply(m->epsilon->op, c.mem)};
        }
      }
  return res;
}

}  // namespace

LoopFreeResult check_loop_free(const Automaton& aut) {
  if (aut.model == Model::TwoCounter) return loop_free_two_counter(aut);
  detail::RewriteSystem rs;
  rs.controls = aut.states;
  switch (aut.model) {
    case Model::OneCounter:
      rs.symbols = {"s"};
      rs.style = detail::RenderStyle::Counter;
      break;
    case Model::Pushdown:
      rs.symbols = aut.stack_alphabet;
      rs.style = detail::RenderStyle::Stack;
      break;
    default: rs.style = detail::RenderStyle::Plain;
  }
  rs.resize();
  for (int q = 0; q < static_cast<int>(aut.states.size()); ++q)
    for (int top = -1; top < static_cast<int>(rs.symbols.size()); ++top) {
      int test = top + 1;
      const Mode* m = aut.mode(q, test);
      auto& r = rs.rule(q, top);
      if (!m || !m->epsilon) continue;  // Stop
      r.kind = detail::RewriteRule::Kind::Trivial;
      r.next = m->epsilon->target;
      const MemOp& op = m->epsilon->op;
      if (op.first == CounterOp::Dec) r.pop = true;
      if (op.first == CounterOp::Inc) r.push = {0};
      if (op.push >= 0) r.push = {op.push};
    }
  auto rep = detail::analyze_loops(rs);
  LoopFreeResult res;
  res.loop_free = rep.bad.empty();
  res.witness = rep.witness;
  return res;
}

Automaton eliminate_epsilon_fsa(const Automaton& aut) {
  if (aut.model != Model::FiniteState)
    throw Error(ErrorKind::PreconditionBreach, "finite-state automaton expected");
  const int n = static_cast<int>(aut.states.size());
  auto eps = [&](int q) -> std::optional<int> {
    const Mode* m = aut.mode(q, 0);
    if (!m || !m->epsilon) return std::nullopt;
    return m->epsilon->target;
  };
  // q -> (terminal state, some state on the way accepts)
  std::vector<std::pair<int, bool>> resolved(n);
  std::vector<bool> self_loop(n, false);
  for (int q = 0; q < n; ++q) {
    std::vector<int> seen{q};
    bool acc = aut.accepting[q];
    int cur = q;
    while (auto nxt = eps(cur)) {
      if (*nxt == cur) {
        self_loop[cur] = true;
        break;
      }
      if (std::find(seen.begin(), seen.end(), *nxt) != seen.end()) {
        std::string cycle;
        for (int s : seen) cycle += aut.states[s] + " -> ";
        throw Error(ErrorKind::NotContractive, "epsilon cycle " + cycle + aut.states[*nxt]);
      }
      seen.push_back(*nxt);
      cur = *nxt;
      acc = acc || aut.accepting[cur];
    }
    resolved[q] = {cur, acc};
  }

  Automaton out;
  out.model = aut.model;
  std::vector<int> renum(n, -1);
  for (int q = 0; q < n; ++q)
    if (!eps(q) || self_loop[q]) renum[q] = out.add_state(aut.states[q], aut.accepting[q]);
  std::map<int, int> clones;  // terminal -> accepting copy
  auto target = [&](int q) {
    auto [t, acc] = resolved[q];
    if (!acc || aut.accepting[t]) return renum[t];
    auto it = clones.find(t);
    if (it != clones.end()) return it->second;
    std::string name = aut.states[t] + "'";
    while (aut.find_state(name) || out.find_state(name)) name += "'";
    int c = out.add_state(name, true);
    clones.emplace(t, c);
    return c;
  };
  out.initial = target(aut.initial);
  if (aut.sink) out.sink = target(*aut.sink);
  for (int q = 0; q < n; ++q) {
    if (renum[q] < 0 || self_loop[q]) continue;
    const Mode* m = aut.mode(q, 0);
    if (!m) continue;
    Mode nm;
    for (const auto& [sym, move] : m->reads) nm.reads.emplace(sym, Move{move.op, target(move.target)});
    out.table[{renum[q], 0}] = nm;
  }
  // copies read like their originals
  for (auto [t, c] : clones)
    if (auto it = out.table.find({renum[t], 0}); it != out.table.end()) out.table[{c, 0}] = it->second;
  return out;
}

Verdict check_normal_form_bounded(const Automaton& aut, std::size_t max_len) {
  Word word;
  std::optional<Verdict> bad;
  std::function<void(const Config&)> walk = [&](const Config& c) {
    if (bad) return;
    Closure cl = close(aut, c);
    auto spelled = [&] { return std::vector<std::string>{word.empty() ? "<eps>" : spell_word(word)}; };
    if (cl.diverged) {
      bad = Verdict::fail("no reading configuration after the word", spelled());
      return;
    }
    if (cl.accepted != aut.is_accepting(c.state)) {
      bad = Verdict::fail("acceptance not immediate after the word", spelled());
      return;
    }
    if (word.size() == max_len || cl.last.state < 0) return;
    const Mode* m = aut.mode(cl.last.state, aut.test_of(cl.last.mem));
    if (!m) return;
    for (const auto& [sym, move] : m->reads) {
      word.push_back(sym);
      walk({move.target, aut.apply(move.op, cl.last.mem)});
      word.pop_back();
      if (bad) return;
    }
  };
  walk(aut.initial_config());
  return bad ? *bad : Verdict::ok();
}

bool is_obviously_prefix_closed(const Automaton& aut) {
  for (int q = 0; q < static_cast<int>(aut.states.size()); ++q) {
    if (aut.accepting[q]) continue;
    if (!aut.sink || *aut.sink != q) return false;
  }
  return dead_sink(aut);
}

Automaton to_obviously_prefix_closed(const Automaton& aut) {
  constexpr std::size_t kAudit = 8;
  if (auto v = check_normal_form_bounded(aut, kAudit); !v.is_ok())
    throw Error(ErrorKind::PreconditionBreach, "not in normal form: " + v.reason);
  auto ws = enumerate_accepted(aut, kAudit);
  if (!ws.count(Word{}) || !check_prefix_closed(ws))
    throw Error(ErrorKind::PreconditionBreach, "accepted language is not prefix-closed");
  Automaton out = aut;
  std::string name = "q_error";
  while (out.find_state(name)) name += "'";
  int err = out.add_state(name, false);
  for (auto& [_, mode] : out.table)
    for (auto& [__, m] : mode.reads)
      if (!aut.accepting[m.target]) m.target = err;
  for (std::size_t q = 0; q < aut.states.size(); ++q) out.accepting[q] = true;
  out.sink = err;
  return out;
}

Automaton materialize_sink(const Automaton& aut, const std::string& name) {
  Automaton out = aut;
  if (out.sink) return out;
  std::string fresh = name;
  while (out.find_state(fresh)) fresh += "'";
  out.sink = out.add_state(fresh, false);
  return out;
}

}  // namespace shades
