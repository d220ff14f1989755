#include <gtest/gtest.h>

#include "oracles.h"
#include "shades/core.h"
#include "shades/surface.h"
#include "shades/trace.h"

using namespace shades;

namespace {

EquationSystem unchecked(const std::string& text) { return parse_system_unchecked(text); }

bool has_violation(const ValidationReport& r, ViolationKind k) {
  for (const auto& v : r.violations)
    if (v.kind == k) return true;
  return false;
}

}  // namespace

TEST(Core, DualIsAnInvolution) {
  EXPECT_EQ(dual(Polarity::In), Polarity::Out);
  EXPECT_EQ(dual(dual(Polarity::Out)), Polarity::Out);
  EXPECT_EQ(dual(View::External), View::Internal);
  EXPECT_EQ(dual(dual(View::Internal)), View::Internal);
}

TEST(Core, SubstituteCounter) {
  Binding b;
  b.nats["N"] = NatTerm{1, ""};
  TypeExpr body = TypeExpr::msg(Polarity::Out, TypeExpr::end(), TypeExpr::call("Y", ParamArgs::nat({0, "N"})));
  TypeExpr got = substitute(body, b);
  EXPECT_EQ(print_expr(got), "!end.Y(s z)");
  EXPECT_EQ(substitute(TypeExpr::end(), b), TypeExpr::end());
}

TEST(Core, SubstituteNestedVariable) {
  auto nest = oracle::load_system("nest.st");
  const Equation* out = nest.equations_of("Xout").front();
  Binding b;
  b.types[out->pattern.vars[0]] = TypeExpr::call("Xe");
  TypeExpr got = substitute(out->body, b);
  EXPECT_EQ(print_expr(got.branches().at("pop")), "!end.Xe");
}

TEST(Core, MatchPatterns) {
  auto m = match(Pattern::succ("N"), ParamArgs::nat({2, ""}));
  ASSERT_TRUE(m);
  EXPECT_EQ(m->nats.at("N"), (NatTerm{1, ""}));
  EXPECT_FALSE(match(Pattern::zero(), ParamArgs::nat({1, ""})));
  EXPECT_TRUE(match(Pattern::zero(), ParamArgs::nat({0, ""})));

  auto w = match(Pattern::cons("a", "S"), ParamArgs::stack({{"a", "b"}, ""}));
  ASSERT_TRUE(w);
  EXPECT_EQ(w->words.at("S").symbols, std::vector<std::string>{"b"});
  EXPECT_FALSE(match(Pattern::cons("b", "S"), ParamArgs::stack({{"a"}, ""})));
  EXPECT_TRUE(match(Pattern::empty_stack(), ParamArgs::stack({})));
}

TEST(Core, ValidationAcceptsCounter) { EXPECT_TRUE(validate_system(oracle::load_system("counter.st")).ok()); }

TEST(Core, ParametersInRecursiveClass) {
  auto sys = unchecked("system recursive\ntype t = X\nX = !end.X(s z)\n");
  EXPECT_TRUE(has_violation(validate_system(sys), ViolationKind::WrongClassConstruct));
}

TEST(Core, DuplicatePushdownEquation) {
  auto sys = unchecked("system pushdown\nstack a\ntype t = X(eps)\nX(eps) = end\nX(a S) = end\nX(a T) = !end.X(T)\n");
  EXPECT_TRUE(has_violation(validate_system(sys), ViolationKind::DuplicateEquation));
}

TEST(Core, UndeclaredAndArity) {
  auto sys = unchecked("system recursive\ntype t = X\nX = !end.Y\n");
  EXPECT_TRUE(has_violation(validate_system(sys), ViolationKind::UndeclaredCtor));
  auto nested = unchecked("system nested\ntype t = X(Y)\nX(a) = !end.a\nY = X(Y, Y)\n");
  EXPECT_TRUE(has_violation(validate_system(nested), ViolationKind::ArityMismatch));
  EXPECT_THROW(require_valid(nested), Error);
}

TEST(Core, UnknownStackSymbol) {
  auto sys = unchecked("system pushdown\nstack a\ntype t = X(eps)\nX(eps) = end\nX(a S) = X(a S)\n");
  sys.equations[1].body = TypeExpr::call("X", ParamArgs::stack({{"c"}, "S"}));
  EXPECT_TRUE(has_violation(validate_system(sys), ViolationKind::UnknownStackSymbol));
  // the parser reads an unknown symbol as the stack variable
  EXPECT_THROW(parse_system("system pushdown\nstack a\ntype t = X(eps)\nX(eps) = end\nX(a S) = X(c S)\n"), Error);
}

TEST(Core, CanonicalOrder) {
  auto sys = parse_system("system onecounter\ntype t = X(z)\nX(s N) = !end.X(N)\nX(z) = end\n");
  ASSERT_EQ(sys.equations.size(), 2u);
  EXPECT_EQ(sys.equations[0].pattern, Pattern::zero());
  EXPECT_EQ(sys.equations[1].pattern, Pattern::succ("N"));
}

TEST(Core, FreshNames) {
  std::set<std::string> taken{"X", "X'", "X_1"};
  EXPECT_EQ(fresh_name("X", taken), "X''");
  EXPECT_EQ(fresh_name("Y", taken), "Y");
  EXPECT_EQ(fresh_indexed("X", taken), "X_2");
  EXPECT_TRUE(taken.count("X_2"));
}

TEST(Core, ExpandAndMissingEquation) {
  auto counter = oracle::load_system("counter.st");
  EquationIndex idx(counter);
  EXPECT_EQ(print_expr(idx.expand(TypeExpr::call("Y", ParamArgs::nat({2, ""})))), "!end.Y(s z)");
  auto partial = parse_system_unchecked("system onecounter\ntype t = X(z)\nX(z) = X(s z)\n");
  EquationIndex pidx(partial);
  try {
    pidx.expand(TypeExpr::call("X", ParamArgs::nat({1, ""})));
    FAIL() << "expected MissingEquation";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MissingEquation);
  }
}

TEST(Core, WeightCountsParameters) {
  TypeExpr small = TypeExpr::call("X", ParamArgs::nat({0, ""}));
  TypeExpr big = TypeExpr::call("X", ParamArgs::nat({5, ""}));
  EXPECT_LT(small.weight(), big.weight());
}

TEST(Trace, Spelling) {
  auto sym = TraceSymbol::choice(View::External, {"inc", "dump"}, "inc");
  EXPECT_EQ(sym.spelling(), "&[dump,inc]:inc");
  EXPECT_EQ(sym.abbrev(), "&inc");
  EXPECT_EQ(sym.flipped().spelling(), "+[dump,inc]:inc");
  EXPECT_EQ(TraceSymbol::data(Polarity::In).spelling(), "?d");
  EXPECT_EQ(TraceSymbol::cont(Polarity::Out).flipped().spelling(), "?c");
  EXPECT_EQ(TraceSymbol::end_mark().flipped(), TraceSymbol::end_mark());
}

TEST(Trace, ParseRoundtrip) {
  for (const char* s : {"?d", "!c", "end", "&[a,b]:a", "+[l]:l"}) EXPECT_EQ(parse_symbol(s).spelling(), s);
  Word w = parse_word("&[dump,inc]:inc !c end");
  ASSERT_EQ(w.size(), 3u);
  EXPECT_EQ(spell_word(w), "&[dump,inc]:inc !c end");
  EXPECT_TRUE(parse_word("<eps>").empty());
}

TEST(Trace, MalformedSymbols) {
  for (const char* s : {"?x", "&[b,a]:a", "&[a,b]:c", "&[a,a]:a", "!", "[a]:a", "&[]:a"}) {
    try {
      parse_symbol(s);
      ADD_FAILURE() << s;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::MalformedSymbol) << s;
    }
  }
}

TEST(Trace, DumpWords) {
  WordSet ws{Word{}, parse_word("!d")};
  EXPECT_EQ(dump_words(ws), "<eps>\n!d\n");
}
