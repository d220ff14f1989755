#include <gtest/gtest.h>

#include "oracles.h"
#include "shades/analysis.h"
#include "shades/compile.h"
#include "shades/decompile.h"
#include "shades/semantics.h"
#include "shades/surface.h"

using namespace shades;

namespace {

ErrorKind kind_of(const Automaton& aut) {
  try {
    decompile(aut);
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorKind::Syntax;
}

}  // namespace

TEST(Decompile, RoundtripSystems) {
  for (const char* f : {"loop.st", "loop2.st", "dual_loop.st", "counter.st", "meta.st", "kh.st", "dump.st",
                        "form_ok.st", "higher.st", "higher_pd.st"}) {
    auto sys = oracle::load_system(f);
    auto aut = compile(sys);
    auto back = decompile(aut);
    EXPECT_EQ(oracle::traces(back, 8), oracle::traces(sys, 8)) << f;
    if (check_loop_free(aut).loop_free) EXPECT_TRUE(check_contractive(back).verdict.is_ok()) << f;
  }
}

TEST(Decompile, ClassFollowsModel) {
  EXPECT_EQ(decompile(oracle::load_automaton("loop_fig.aut")).cls, SystemClass::Recursive);
  EXPECT_EQ(decompile(oracle::load_automaton("counter_fig.aut")).cls, SystemClass::OneCounter);
  EXPECT_EQ(decompile(oracle::load_automaton("meta_fig.aut")).cls, SystemClass::Pushdown);
}

TEST(Decompile, LoopFigure) {
  auto sys = decompile(oracle::load_automaton("loop_fig.aut"));
  EXPECT_EQ(print_system(sys),
            "system recursive\ntype t = X_q_X\nX_q_X = !X_q_Y.X_q_X\nX_q_Y = end\nX_q_end = end\n");
  EXPECT_EQ(oracle::traces(sys, 6), oracle::traces(oracle::load_system("loop.st"), 6));
}

TEST(Decompile, RoundtripAutomata) {
  for (const char* f : {"loop_fig.aut", "counter_fig.aut", "counter_sink.aut", "meta_fig.aut", "sigma_star.aut"}) {
    auto aut = oracle::load_automaton(f);
    auto again = compile(decompile(aut));
    EXPECT_EQ(enumerate_accepted(again, 6), enumerate_accepted(aut, 6)) << f;
  }
}

TEST(Decompile, SigmaStarOverData) {
  // !d and !c loop on one state: the type X = !X.X
  auto sys = decompile(oracle::load_automaton("sigma_star.aut"));
  auto x = parse_system("system recursive\ntype t = X\nX = !X.X\n");
  EXPECT_EQ(oracle::traces(sys, 6), oracle::traces(x, 6));
}

TEST(Decompile, ShapeViolations) {
  EXPECT_EQ(kind_of(oracle::load_automaton("shape_bad.aut")), ErrorKind::ShapeViolation);
  EXPECT_EQ(kind_of(oracle::load_automaton("shape_end.aut")), ErrorKind::ShapeViolation);
  auto everything = parse_automaton(
      "automaton fsa\nstates q\ninitial q\naccepting q\n"
      "q , - , !d -> = , q\nq , - , !c -> = , q\nq , - , end -> = , q\n");
  EXPECT_EQ(kind_of(everything), ErrorKind::ShapeViolation);
  try {
    decompile(oracle::load_automaton("shape_bad.aut"));
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("after <eps>"), std::string::npos) << e.what();
  }
}

TEST(Decompile, OtherErrors) {
  EXPECT_EQ(kind_of(oracle::load_automaton("two_rejecting.aut")), ErrorKind::NotObviouslyPrefixClosed);
  EXPECT_EQ(kind_of(compile(oracle::load_system("iter.st"))), ErrorKind::Unsupported);
  auto lone = parse_automaton("automaton fsa\nstates q\ninitial q\naccepting\n");
  EXPECT_EQ(kind_of(lone), ErrorKind::NotObviouslyPrefixClosed);
  auto empty = parse_automaton("automaton fsa\nstates q\ninitial q\naccepting\nsink q\n");
  EXPECT_EQ(kind_of(empty), ErrorKind::ShapeViolation);
}

TEST(Decompile, UnreachableModesDefaultToEnd) {
  // the zero-test of q_Y_s is never reached; it still gets an equation
  auto aut = parse_automaton(
      "automaton onecounter\nstates p r\ninitial p 1\naccepting p r\n"
      "p , s , end -> = , r\np , z , !d -> = , r\n");
  auto sys = decompile(aut);
  bool zero_default = false;
  for (const auto& eq : sys.equations)
    if (eq.ctor == "X_p" && eq.pattern.counters.at(0).shape == CounterShape::Zero)
      zero_default = eq.body.is(TypeExpr::Kind::End);
  EXPECT_TRUE(zero_default);
}

TEST(Decompile, RandomRoundtrip) {
  std::mt19937 rng(9);
  for (int i = 0; i < 25; ++i)
    for (const auto& text : {oracle::random_recursive(rng, 3), oracle::random_onecounter(rng, 3),
                             oracle::random_pushdown(rng, 3)}) {
      auto sys = parse_system(text);
      EXPECT_EQ(oracle::traces(decompile(compile(sys)), 6), oracle::traces(sys, 6)) << text;
    }
}
