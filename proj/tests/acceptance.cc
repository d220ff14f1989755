// Acceptance suite: one PASS/FAIL line per criterion, details below each.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "oracles.h"
#include "shades/analysis.h"
#include "shades/compile.h"
#include "shades/decompile.h"
#include "shades/equivalence.h"
#include "shades/semantics.h"
#include "shades/surface.h"
#include "shades/transform.h"

using namespace shades;

namespace {

struct Check {
  std::ostringstream log;
  bool ok = true;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      log << "    failed: " << what << "\n";
    }
  }
  void note(const std::string& s) { log << "    " << s << "\n"; }
};

const std::vector<std::string> kSystems = {"loop.st", "loop2.st", "dual_loop.st", "counter.st", "tree.st",
                                           "meta.st", "meta_cf.st", "nest.st",   "iter.st",      "kh.st",
                                           "dump.st", "appd.st", "higher.st", "higher_pd.st"};

std::string show_word(const Word& w) { return spell_word(w, true); }

std::set<std::string> lines_of(const WordSet& ws) {
  std::set<std::string> out;
  for (const auto& w : ws) out.insert(w.empty() ? "<eps>" : spell_word(w, true));
  return out;
}

bool same_traces(Check& c, const std::string& what, const WordSet& a, const WordSet& b) {
  bool eq = a == b;
  if (!eq) {
    std::size_t shown = 0;
    for (const auto& w : a)
      if (!b.count(w) && shown++ < 3) c.note(what + ": only left has " + show_word(w));
    for (const auto& w : b)
      if (!a.count(w) && shown++ < 6) c.note(what + ": only right has " + show_word(w));
  }
  c.expect(eq, what);
  return eq;
}

// ---- 1 ----
void figures(Check& c) {
  // word lists as printed in the three figures, abbreviated spelling
  struct Fig {
    std::string file;
    std::size_t depth;
    std::vector<std::string> words;
  };
  std::vector<Fig> figs = {
      {"loop.st", 3,
       {"<eps>", "!d", "!d end", "!c", "!c !d", "!c !d end", "!c !c", "!c !c !d", "!c !c !d end", "!c !c !c"}},
      {"counter.st", 4,
       {"<eps>", "&inc", "&dump", "&dump end", "&inc &inc", "&inc &dump", "&inc &dump !d", "&inc &dump !d end",
        "&inc &dump !c", "&inc &dump !c end", "&inc &inc &inc", "&inc &inc &dump", "&inc &inc &dump !d",
        "&inc &inc &dump !d end", "&inc &inc &dump !c", "&inc &inc &dump !c !d", "&inc &inc &dump !c !d end"}},
      {"tree.st", 3,
       {"<eps>", "&leaf", "&leaf end", "&node", "&node &leaf", "&node &node", "&node &leaf ?d",
        "&node &leaf ?d end", "&node &leaf ?c", "&node &leaf ?c &leaf", "&node &leaf ?c &node",
        "&node &node &leaf", "&node &node &node", "&node &node &leaf ?d", "&node &node &leaf ?c"}},
  };
  for (const auto& f : figs) {
    auto sys = oracle::load_system(f.file);
    // the CLI path: dump_words in abbreviated mode
    std::set<std::string> printed;
    std::istringstream in(dump_words(unfold_traces(sys, f.depth), true));
    for (std::string line; std::getline(in, line);) printed.insert(line);
    std::set<std::string> listed(f.words.begin(), f.words.end());
    std::set<std::string> deep = lines_of(unfold_traces(sys, 6));
    std::size_t within = 0;
    for (const auto& w : f.words) {
      c.expect(deep.count(w) > 0, f.file + ": figure word '" + w + "' is a trace");
      std::size_t len = w == "<eps>" ? 0 : std::count(w.begin(), w.end(), ' ') + 1;
      if (len <= f.depth) {
        ++within;
        c.expect(printed.count(w) > 0, f.file + ": figure word '" + w + "' printed at depth " + std::to_string(f.depth));
      }
    }
    // loop and tree: the figure lists every word up to the depth
    if (f.file != "counter.st")
      for (const auto& p : printed) c.expect(listed.count(p) > 0, f.file + ": printed '" + p + "' is in the figure");
    c.note(f.file + ": " + std::to_string(printed.size()) + " words printed at depth " + std::to_string(f.depth) + ", " +
           std::to_string(within) + " of the " + std::to_string(f.words.size()) + " figure words fall within it");
  }
}

// ---- 2 ----
void compiler_soundness(Check& c) {
  std::vector<std::pair<std::string, EquationSystem>> cases;
  for (const char* f : {"loop.st", "counter.st", "meta.st", "iter.st", "kh.st"}) {
    auto sys = oracle::load_system(f);
    cases.emplace_back(f, sys);
    if (sys.cls != SystemClass::ContextFree) {
      cases.emplace_back(std::string(f) + " normalized", normalize_equations(sys));
      cases.emplace_back(std::string(f) + " counter-normalized", normalize_counter_params(normalize_equations(sys)));
    }
  }
  cases.emplace_back("loop.st as onecounter", rec_to_onecounter(oracle::load_system("loop.st")));
  cases.emplace_back("counter.st as pushdown", onecounter_to_pushdown(oracle::load_system("counter.st")));
  for (const auto& [name, sys] : cases) {
    Automaton aut = compile(sys);
    WordSet ref = oracle::traces(sys, 8);
    WordSet lib = unfold_traces(sys, 8);
    same_traces(c, name + ": library unfolding vs oracle unfolding", lib, ref);
    for (std::size_t d = 0; d <= 8; ++d) {
      WordSet got = enumerate_accepted(aut, d);
      WordSet want;
      for (const auto& w : ref)
        if (w.size() <= d) want.insert(w);
      if (!same_traces(c, name + ": compiled automaton at depth " + std::to_string(d), got, want)) break;
    }
    c.expect(oracle::accepted(aut, 8) == ref, name + ": independent simulator agrees at depth 8");
  }
  c.note(std::to_string(cases.size()) + " systems, depths 0..8");
}

// ---- 3 ----
void figure_machines(Check& c) {
  for (auto [fig, src] : {std::pair{"loop_fig.aut", "loop.st"}, {"counter_fig.aut", "counter.st"},
                          {"meta_fig.aut", "meta.st"}}) {
    Automaton hand = oracle::load_automaton(fig);
    Automaton ours = compile(oracle::load_system(src));
    same_traces(c, std::string(fig) + " vs compile(" + src + ")", enumerate_accepted(hand, 8), enumerate_accepted(ours, 8));
    same_traces(c, std::string(fig) + " independent simulator", oracle::accepted(hand, 8), oracle::accepted(ours, 8));
    c.note(std::string(fig) + ": " + std::to_string(hand.states.size()) + " states by hand, " +
           std::to_string(ours.states.size()) + " compiled");
  }
}

// ---- 4 ----
void roundtrips(Check& c) {
  for (const auto& f : kSystems) {
    auto sys = oracle::load_system(f);
    if (sys.cls == SystemClass::TwoCounter) {
      c.note(f + ": skipped, two-counter machines are not decompiled");
      continue;
    }
    auto back = decompile(compile(sys));
    same_traces(c, f + ": decompile(compile)", unfold_traces(back, 8), oracle::traces(sys, 8));
  }
  for (const char* f : {"loop_fig.aut", "counter_fig.aut", "counter_sink.aut", "meta_fig.aut", "sigma_star.aut"}) {
    auto aut = oracle::load_automaton(f);
    c.expect(is_obviously_prefix_closed(aut), std::string(f) + " is obviously prefix-closed");
    same_traces(c, std::string(f) + ": compile(decompile)", enumerate_accepted(compile(decompile(aut)), 6),
                oracle::accepted(aut, 6));
  }
  std::vector<std::pair<std::string, Automaton>> machines;
  for (const char* f : {"loop.st", "counter.st", "meta.st", "kh.st", "tree.st"})
    machines.emplace_back(std::string("compile(") + f + ")", compile(oracle::load_system(f)));
  for (const char* f : {"loop_fig.aut", "counter_sink.aut", "meta_fig.aut"}) machines.emplace_back(f, oracle::load_automaton(f));
  for (const auto& [name, aut] : machines) {
    Automaton opc = to_obviously_prefix_closed(aut);
    c.expect(is_obviously_prefix_closed(opc), name + ": single dead sink after to_obviously_prefix_closed");
    same_traces(c, name + ": to_obviously_prefix_closed", enumerate_accepted(opc, 8), oracle::accepted(aut, 8));
  }
}

// ---- 5 ----
std::string show_config(const TypeExpr& call, const std::map<std::string, std::string>& display) {
  std::string out = call.name() + "(";
  const auto& syms = call.args().word.symbols;
  for (std::size_t i = 0; i < syms.size(); ++i) out += (i ? " " : "") + display.at(syms[i]);
  if (syms.empty()) out += "eps";
  return out + ")";
}

void conversions(Check& c) {
  auto tree = oracle::load_system("tree.st");
  auto meta = oracle::load_system("meta.st");
  auto meta_cf = oracle::load_system("meta_cf.st");
  auto nest = oracle::load_system("nest.st");
  auto tree_pd = cf_to_pushdown(tree);
  auto meta_pd = cf_to_pushdown(meta_cf);
  same_traces(c, "cf_to_pushdown(tree)", unfold_traces(tree_pd, 8), oracle::traces(tree, 8));
  same_traces(c, "cf_to_pushdown(meta_cf)", unfold_traces(meta_pd, 8), oracle::traces(meta_cf, 8));
  same_traces(c, "meta_cf vs meta", oracle::traces(meta_cf, 8), oracle::traces(meta, 8));
  same_traces(c, "pushdown_to_nested(meta) vs nest", unfold_traces(pushdown_to_nested(meta), 8), oracle::traces(nest, 8));
  same_traces(c, "nested_to_pushdown(nest) vs meta", unfold_traces(nested_to_pushdown(nest), 8), oracle::traces(meta, 8));
  for (const auto& [name, pd] : {std::pair{"tree", tree_pd}, {"meta_cf", meta_pd}}) {
    c.expect(pd.ctor_names().size() == 1, std::string(name) + ": single ctor");
    std::size_t ends = 0;
    bool only_at_eps = true;
    std::function<void(const TypeExpr&, bool)> count = [&](const TypeExpr& e, bool at_eps) {
      switch (e.kind()) {
        case TypeExpr::Kind::End:
          ++ends;
          only_at_eps = only_at_eps && at_eps;
          break;
        case TypeExpr::Kind::Msg:
          count(e.payload(), at_eps);
          count(e.cont(), at_eps);
          break;
        case TypeExpr::Kind::Choice:
          for (const auto& [_, b] : e.branches()) count(b, at_eps);
          break;
        default: break;
      }
    };
    for (const auto& eq : pd.equations) count(eq.body, !eq.pattern.top.has_value());
    c.expect(ends == 1 && only_at_eps, std::string(name) + ": the only end is the body of X(eps)");
  }

  // worked example: the first five configurations
  auto enc = nested_to_pushdown_encoded(oracle::load_system("appd.st"));
  EquationIndex idx(enc.sys);
  std::vector<std::string> expected = {
      "X_1(X1(X3, X3, X3))",
      "X_1(X2(X2(a3, a2), X2(X3, a1)) (X3, X3, X3))",
      "X_1(a1 (X2(a3, a2), X2(X3, a1), eps) (X3, X3, X3))",
      "X_1((X2(a3, a2), X2(X3, a1), eps) (X3, X3, X3))",
      "X_1(X2(a3, a2) (X3, X3, X3))",
  };
  std::vector<std::string> got;
  TypeExpr at = enc.sys.root;
  try {
    got.push_back(show_config(at, enc.display));
    at = idx.expand(at).branches().at("go");
    got.push_back(show_config(at, enc.display));
    at = idx.expand(at).branches().at("left");
    got.push_back(show_config(at, enc.display));
    at = idx.expand(at);
    got.push_back(show_config(at, enc.display));
    at = idx.expand(at);
    got.push_back(show_config(at, enc.display));
  } catch (const std::exception& e) {
    c.note(std::string("walk stopped: ") + e.what());
  }
  for (std::size_t i = 0; i < expected.size(); ++i) {
    std::string g = i < got.size() ? got[i] : "<missing>";
    c.expect(g == expected[i], "step " + std::to_string(i + 1) + ": want " + expected[i] + ", got " + g);
  }
  same_traces(c, "nested_to_pushdown(appd)", unfold_traces(enc.sys, 8), oracle::traces(oracle::load_system("appd.st"), 8));
}

// ---- 6 ----
std::string arrows(const std::vector<std::string>& w) {
  std::string out;
  for (const auto& s : w) out += (out.empty() ? "" : " -> ") + s;
  return out;
}

void decisions(Check& c) {
  struct Bad {
    std::string file;
    std::string witness;
  };
  for (const auto& b : std::vector<Bad>{{"bad_cycle.st", "X -> Y -> Z -> X"},
                                        {"bad_counter.st", "X(s N) -> Y(s s N) -> X(s N)"},
                                        {"bad_cf_skip.st", "X -> X"},
                                        {"bad_cf_seq.st", "X -> X"}}) {
    auto r = check_contractive(oracle::load_system(b.file));
    c.expect(r.verdict.is_fail(), b.file + " rejected");
    c.expect(arrows(r.verdict.witness) == b.witness, b.file + " witness " + arrows(r.verdict.witness));
  }
  c.expect(check_contractive(oracle::load_system("bad_counter.st")).bad.contains("X", "s"), "bad_counter: (X, s) is bad");
  for (const char* f : {"loop.st", "counter.st", "tree.st", "meta.st", "nest.st", "iter.st", "kh.st"})
    c.expect(check_contractive(oracle::load_system(f)).verdict.is_ok(), std::string(f) + " accepted");
  c.expect(check_formation(oracle::load_system("form_ok.st")).is_ok(), "form_ok: bad identifier unreachable");
  c.expect(check_formation(oracle::load_system("form_bad.st")).is_fail(), "form_bad: bad identifier reachable");

  std::mt19937 rng(6);
  std::vector<std::pair<int, std::size_t>> runs;
  for (int n : {10, 20, 40, 80}) {
    auto sys = parse_system(oracle::trivial_heavy_pushdown(rng, n));
    runs.emplace_back(n, check_contractive(sys).steps);
  }
  // fit on the two small sizes, then extrapolate with slack 2
  double fit = 0;
  for (int i = 0; i < 2; ++i) fit = std::max(fit, double(runs[i].second) / (double(runs[i].first) * runs[i].first));
  std::ostringstream line;
  line << "rewrite steps:";
  for (const auto& [n, steps] : runs) {
    line << " n=" << n << ":" << steps;
    c.expect(double(steps) <= 2 * fit * n * n, "steps under 2c*n^2 at n=" + std::to_string(n));
  }
  line << " (c=" << fit << ")";
  c.note(line.str());
}

// ---- 7 ----
void equivalence(Check& c) {
  std::mt19937 rng(7);
  int same = 0, differ = 0;
  for (int i = 0; i < 20; ++i) {
    auto a = parse_system(oracle::random_recursive(rng, 2 + i % 3));
    // half the pairs are equal by construction: normalized, or root unfolded
    EquationSystem b;
    if (i % 4 == 0) {
      b = normalize_equations(a);
    } else if (i % 2 == 0) {
      b = a;
      b.root = EquationIndex(a).expand(a.root);
    } else {
      b = parse_system(oracle::random_recursive(rng, 2 + i % 3));
    }
    auto r = equiv(a, a.root, b, b.root, 12);
    auto brute = oracle::product_distinguisher(compile(a), compile(b));
    c.expect(r.status != EquivResult::Status::EquivalentUpTo, "pair " + std::to_string(i) + " exact");
    c.expect((r.status == EquivResult::Status::Equivalent) == !brute.has_value(),
             "pair " + std::to_string(i) + " agrees with the product");
    if (r.status == EquivResult::Status::NotEquivalent) {
      ++differ;
      bool in_a = oracle::accepts(compile(a), r.witness);
      bool in_b = oracle::accepts(compile(b), r.witness);
      c.expect(in_a != in_b, "pair " + std::to_string(i) + " witness " + show_word(r.witness) + " replays");
      c.expect(run(compile(a), r.witness) != run(compile(b), r.witness), "pair " + std::to_string(i) + " run disagrees");
      c.expect(brute && brute->size() == r.witness.size(), "pair " + std::to_string(i) + " witness is shortest");
    } else {
      ++same;
    }
  }
  c.note(std::to_string(same) + " equivalent, " + std::to_string(differ) + " not equivalent");

  auto loop = oracle::load_system("loop.st");
  auto dual_loop = oracle::load_system("dual_loop.st");
  c.expect(dual_check(loop, loop.root, dual_loop, dual_loop.root, 12).status == EquivResult::Status::Equivalent,
           "dual_check(loop, Y = ?end.Y)");
  for (const auto& f : kSystems) {
    auto sys = oracle::load_system(f);
    WordSet base = oracle::traces(sys, 8);
    auto d = dualize(sys);
    same_traces(c, f + ": dualize twice", unfold_traces(dualize(d), 8), base);
    same_traces(c, f + ": dualize is the dual image", unfold_traces(d, 8), oracle::dual_spine(base));
  }
}

// ---- 8 ----
void prefix_closure(Check& c) {
  for (const auto& f : kSystems) {
    auto sys = oracle::load_system(f);
    c.expect(check_prefix_closed(unfold_traces(sys, 8)), f + " prefix-closed");
  }
  std::mt19937 rng(8);
  int n = 0;
  for (int i = 0; i < 200; ++i) {
    std::string text = i % 3 == 0   ? oracle::random_recursive(rng, 1 + i % 12)
                       : i % 3 == 1 ? oracle::random_onecounter(rng, 1 + i % 6)
                                    : oracle::random_pushdown(rng, 1 + i % 4);
    auto sys = parse_system(text);
    WordSet ws = unfold_traces(sys, 8);
    bool ok = check_prefix_closed(ws) && oracle::prefix_closed(ws);
    c.expect(ok, "random system " + std::to_string(i) + " prefix-closed");
    n += ok;
  }
  c.note(std::to_string(n) + "/200 random systems prefix-closed at depth 8");
}

// ---- 9 ----
void honest(Check& c) {
  auto meta = oracle::load_system("meta.st");
  auto enc = nested_to_pushdown(oracle::load_system("nest.st"));
  auto r = equiv(meta, meta.root, enc, enc.root, 12);
  c.expect(r.status == EquivResult::Status::EquivalentUpTo, std::string("verdict is ") + to_string(r.status));
  c.expect(r.depth == 12, "bounded at fuel 12");
  c.note("verdict: " + std::string(to_string(r.status)) + " depth " + std::to_string(r.depth) + ", " +
         std::to_string(r.pairs) + " pairs");
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria = {
      {"figure word lists (loop, counter, tree)", figures},
      {"compiler soundness against unfolding", compiler_soundness},
      {"hand-transcribed machines agree with compile", figure_machines},
      {"roundtrips and obviously prefix-closed form", roundtrips},
      {"conversions and the worked nested example", conversions},
      {"contractiveness, formation, rewrite cost", decisions},
      {"equivalence and duality", equivalence},
      {"prefix closure", prefix_closure},
      {"bounded verdict stays bounded", honest},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.ok = false;
      c.log << "    exception: " << e.what() << "\n";
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %zu: %s  %s (%.2fs)\n", i + 1, c.ok ? "PASS" : "FAIL", criteria[i].first.c_str(), secs);
    std::cout << c.log.str();
    failed += !c.ok;
  }
  return failed ? 1 : 0;
}
