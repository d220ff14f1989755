#include <gtest/gtest.h>

#include <random>

#include "oracles.h"
#include "shades/surface.h"

using namespace shades;

namespace {

const char* kSystems[] = {"loop.st",  "loop2.st", "counter.st", "tree.st",    "meta.st",   "meta_cf.st",
                          "nest.st",  "iter.st",  "kh.st",      "dump.st",    "appd.st",   "bad_cycle.st",
                          "form_ok.st", "higher.st", "higher_pd.st", "bad_cf_seq.st", "dual_loop.st"};
const char* kMachines[] = {"loop_fig.aut", "counter_fig.aut", "counter_sink.aut", "meta_fig.aut",
                           "sigma_star.aut", "shape_bad.aut", "two_rejecting.aut"};

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error";
  return ErrorKind::Unsupported;
}

}  // namespace

TEST(Surface, ParsesLoop) {
  auto sys = parse_system("system recursive\ntype loop = X\nX = !end.X\n");
  EXPECT_EQ(sys.cls, SystemClass::Recursive);
  EXPECT_EQ(sys.root_name, "loop");
  ASSERT_EQ(sys.equations.size(), 1u);
  EXPECT_EQ(print_expr(sys.equations[0].body), "!end.X");
  EXPECT_EQ(sys.root, TypeExpr::call("X"));
}

TEST(Surface, ParsesMeta) {
  auto sys = oracle::load_system("meta.st");
  EXPECT_EQ(sys.stack_alphabet, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(sys.equations_of("X").size(), 3u);
  EXPECT_EQ(print_expr(sys.root), "X(eps)");
}

TEST(Surface, SyntaxErrorCarriesSpan) {
  try {
    parse_system("system onecounter\ntype t = X(z)\nX(s N) = Y(");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Syntax);
    ASSERT_TRUE(e.span());
    EXPECT_EQ(e.span()->line, 3);
    EXPECT_GE(e.span()->column, 11);
  }
}

TEST(Surface, PrintsLoopCanonically) {
  EXPECT_EQ(print_system(oracle::load_system("loop.st")), "system recursive\ntype loop = X\nX = !end.X\n");
}

TEST(Surface, PrintsCounterInOrder) {
  EXPECT_EQ(print_system(oracle::load_system("counter.st")),
            "system onecounter\n"
            "type counter = X(z)\n"
            "X(z) = &{dump: Y(z), inc: X(s z)}\n"
            "X(s N) = &{dump: Y(s N), inc: X(s s N)}\n"
            "Y(z) = end\n"
            "Y(s N) = !end.Y(N)\n");
}

TEST(Surface, PrintsNestWithArities) {
  EXPECT_EQ(print_system(oracle::load_system("nest.st")),
            "system nested\n"
            "type nest = Xe\n"
            "Xe = &{addIn: Xin(Xe), addOut: Xout(Xe)}\n"
            "Xin(x) = &{addIn: Xin(Xin(x)), addOut: Xout(Xin(x)), pop: ?end.x}\n"
            "Xout(x) = &{addIn: Xin(Xout(x)), addOut: Xout(Xout(x)), pop: !end.x}\n");
}

TEST(Surface, SystemRoundtrip) {
  for (const char* f : kSystems) {
    auto sys = parse_system_unchecked(oracle::read_file(oracle::corpus_path(f)));
    auto again = parse_system_unchecked(print_system(sys));
    EXPECT_EQ(sys, again) << f;
    EXPECT_EQ(print_system(again), print_system(sys)) << f;
  }
}

TEST(Surface, ContextFreeSyntax) {
  auto sys = oracle::load_system("tree.st");
  EXPECT_EQ(print_expr(sys.equations[0].body), "&{leaf: skip, node: X; ?skip; X}");
  auto nested_seq = parse_system("system contextfree\ntype t = X\nX = (?skip; !skip); X\n");
  EXPECT_EQ(print_expr(nested_seq.equations[0].body), "(?skip; !skip); X");
}

TEST(Surface, ClassConstructsEnforced) {
  EXPECT_EQ(kind_of([] { parse_system("system recursive\ntype t = X\nX = skip\n"); }), ErrorKind::Validation);
  EXPECT_EQ(kind_of([] { parse_system("system recursive\ntype t = X\nX = !end.Y\n"); }), ErrorKind::Validation);
  EXPECT_EQ(kind_of([] { parse_system("system banana\n"); }), ErrorKind::Syntax);
}

TEST(Surface, FigureAutomata) {
  auto loop = oracle::load_automaton("loop_fig.aut");
  EXPECT_EQ(loop.model, Model::FiniteState);
  EXPECT_EQ(loop.states.size(), 3u);
  auto counter = oracle::load_automaton("counter_fig.aut");
  EXPECT_EQ(counter.model, Model::OneCounter);
  EXPECT_EQ(counter.states.size(), 4u);
  auto meta = oracle::load_automaton("meta_fig.aut");
  EXPECT_EQ(meta.stack_alphabet, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(meta.states.size(), 5u);
}

TEST(Surface, AutomatonRoundtrip) {
  for (const char* f : kMachines) {
    auto aut = oracle::load_automaton(f);
    EXPECT_EQ(parse_automaton(print_automaton(aut)), aut) << f;
  }
}

TEST(Surface, NondeterministicTable) {
  const char* text =
      "automaton onecounter\nstates q r\ninitial q 0\naccepting q r\n"
      "q , z , eps -> = , r\nq , z , eps -> + , q\n";
  EXPECT_EQ(kind_of([&] { parse_automaton(text); }), ErrorKind::Nondeterministic);
  const char* mixed =
      "automaton fsa\nstates q r\ninitial q\naccepting q r\nq , - , eps -> = , r\nq , - , !d -> = , q\n";
  EXPECT_EQ(kind_of([&] { parse_automaton(mixed); }), ErrorKind::Nondeterministic);
}

TEST(Surface, AutomatonErrors) {
  EXPECT_EQ(kind_of([] { parse_automaton("automaton fsa\nstates q\ninitial q\naccepting q\nq , - , !x -> = , q\n"); }),
            ErrorKind::MalformedSymbol);
  EXPECT_EQ(kind_of([] { parse_automaton("automaton fsa\nstates q\ninitial p\naccepting q\n"); }), ErrorKind::Syntax);
  EXPECT_EQ(kind_of([] { parse_automaton("automaton onecounter\nstates q\ninitial q 0\naccepting q\nq , z , !d -> - , q\n"); }),
            ErrorKind::Validation);
}

// Arbitrary bytes and mutations of corpus files either parse or raise a
// library error; nothing else escapes.
TEST(Surface, FuzzNeverCrashes) {
  std::mt19937 rng(11);
  std::vector<std::string> seeds;
  for (const char* f : kSystems) seeds.push_back(oracle::read_file(oracle::corpus_path(f)));
  for (const char* f : kMachines) seeds.push_back(oracle::read_file(oracle::corpus_path(f)));
  const std::string alphabet = "()[]{},.:;=!?&+-# \n\tXYSNzsabepqd0123_'";
  for (int i = 0; i < 3000; ++i) {
    std::string text = seeds[rng() % seeds.size()];
    int edits = 1 + rng() % 4;
    for (int e = 0; e < edits && !text.empty(); ++e) {
      std::size_t pos = rng() % text.size();
      switch (rng() % 3) {
        case 0: text.erase(pos, 1 + rng() % 3); break;
        case 1: text.insert(pos, 1, alphabet[rng() % alphabet.size()]); break;
        default: text[pos] = static_cast<char>(rng() % 256); break;
      }
    }
    try {
      if (text.find("automaton") != std::string::npos) parse_automaton(text);
      else parse_system(text);
    } catch (const Error&) {
    }
  }
  SUCCEED();
}
