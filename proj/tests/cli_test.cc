#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdlib>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"

namespace {

struct Result {
  std::string out;
  int code = -1;
};

// Runs the binary from the corpus directory; stderr is merged when asked.
Result shades(const std::string& args, bool merge_stderr = false) {
  std::string cmd = std::string("cd '") + SHADES_CORPUS + "' && '" + SHADES_BIN + "' " + args +
                    (merge_stderr ? " 2>&1" : " 2>/dev/null");
  Result r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  for (std::size_t n; (n = fread(buf.data(), 1, buf.size(), p)) > 0;) r.out.append(buf.data(), n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

void expect_run(const std::string& args, int code, const std::string& out, bool merge = false) {
  auto r = shades(args, merge);
  EXPECT_EQ(r.code, code) << args;
  EXPECT_EQ(r.out, out) << args;
}

}  // namespace

TEST(Cli, TracesLoop) {
  expect_run("traces loop.st --depth 3 --abbrev", 0,
             "<eps>\n!c\n!c !c\n!c !c !c\n!c !c !d\n!c !d\n!c !d end\n!d\n!d end\n");
}

TEST(Cli, TracesAutomaton) {
  expect_run("traces counter_fig.aut --depth 2", 0,
             "<eps>\n&[dump,inc]:dump\n&[dump,inc]:dump end\n&[dump,inc]:inc\n"
             "&[dump,inc]:inc &[dump,inc]:dump\n&[dump,inc]:inc &[dump,inc]:inc\n");
  expect_run("traces counter_fig.aut --depth 1 --abbrev", 0, "<eps>\n&dump\n&inc\n");
}

TEST(Cli, Check) {
  expect_run("check loop.st", 0, "class: recursive\ncontractive: ok\nformation: ok\n");
  expect_run("check bad_cycle.st", 1,
             "class: recursive\ncontractive: fail: not contractive: X -> Y -> Z -> X\nbad: X Y Z\n"
             "formation: fail: reaches a non-contractive identifier: X\n");
  expect_run("check form_bad.st", 1,
             "class: onecounter\ncontractive: fail: not contractive: X(s N) -> X(s s N)\nbad: X/s\n"
             "formation: fail: reaches a non-contractive identifier: X(s N)\n");
  expect_run("check form_ok.st", 1,
             "class: onecounter\ncontractive: fail: not contractive: X(s N) -> X(s s N)\nbad: X/s\n"
             "formation: ok\n");
  expect_run("check iter.st", 0, "class: twocounter\ncontractive: ok\nformation: ok\n");
}

TEST(Cli, Equiv) {
  expect_run("equiv loop.st loop2.st", 0, "equivalent\n");
  expect_run("equiv counter.st meta.st", 1, "not equivalent\nwitness: &[addIn,addOut]:addIn\n");
  expect_run("equiv meta.st nest.st", 3, "equivalent up to depth 12 (bounded search, not a proof)\n");
  expect_run("equiv meta.st nest.st --fuel 5", 3, "equivalent up to depth 5 (bounded search, not a proof)\n");
  expect_run("dualcheck loop.st dual_loop.st", 0, "equivalent\n");
  expect_run("dualcheck loop.st loop.st", 1, "not equivalent\nwitness: !c\n");
}

TEST(Cli, FuelFromEnvironment) {
  expect_run("equiv meta.st nest.st", 3, "equivalent up to depth 12 (bounded search, not a proof)\n");
  setenv("SHADES_FUEL", "4", 1);
  auto r = shades("equiv meta.st nest.st");
  unsetenv("SHADES_FUEL");
  EXPECT_EQ(r.out, "equivalent up to depth 4 (bounded search, not a proof)\n");
  EXPECT_EQ(r.code, 3);
}

TEST(Cli, CompileDecompile) {
  const std::string loop_aut =
      "automaton fsa\nstates q_X q_X_1 q_end\ninitial q_X\naccepting q_X q_X_1 q_end\n"
      "q_X , - , !c -> = , q_X\nq_X , - , !d -> = , q_X_1\nq_X_1 , - , end -> = , q_end\n";
  expect_run("compile loop.st", 0, loop_aut);
  expect_run("decompile loop_fig.aut", 0,
             "system recursive\ntype t = X_q_X\nX_q_X = !X_q_Y.X_q_X\nX_q_Y = end\nX_q_end = end\n");

  auto tmp = std::filesystem::temp_directory_path() / "shades_cli_loop.aut";
  expect_run("compile loop.st -o '" + tmp.string() + "'", 0, "");
  std::ifstream in(tmp);
  std::string written((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(written, loop_aut);
  expect_run("decompile '" + tmp.string() + "'", 0,
             "system recursive\ntype t = X_q_X\nX_q_X = !X_q_X_1.X_q_X\nX_q_X_1 = end\nX_q_end = end\n");
  std::filesystem::remove(tmp);
}

TEST(Cli, ConvertAndDual) {
  expect_run("convert --to pushdown counter.st", 0,
             "system pushdown\nstack u\ntype counter = X(eps)\n"
             "X(eps) = &{dump: Y(eps), inc: X(u)}\nX(u S) = &{dump: Y(u S), inc: X(u u S)}\n"
             "Y(eps) = end\nY(u S) = !end.Y(S)\n");
  expect_run("convert --to onecounter loop.st", 0,
             "system onecounter\ntype loop = X(z)\nX(z) = !end.X(z)\nX(s N) = !end.X(s N)\n");
  expect_run("dual loop.st", 0, "system recursive\ntype loop = X_bar\nX = !end.X\nX_bar = ?end.X_bar\n");
}

TEST(Cli, Tree) { expect_run("tree loop.st --depth 2", 0, "!\n  d: end\n  c: !\n"); }

TEST(Cli, Errors) {
  expect_run("check nope.st", 65, "error: cannot read nope.st\n", true);
  expect_run("convert --to bogus loop.st", 64, "usage: unknown class 'bogus'\n", true);
  EXPECT_EQ(shades("check").code, 64);
  EXPECT_EQ(shades("frobnicate loop.st").code, 64);
  EXPECT_EQ(shades("traces loop.st").code, 64);
  expect_run("decompile shape_bad.aut", 1, "error: shape violation: state q reads an illegal bundle after <eps>\n",
             true);
  expect_run("decompile two_rejecting.aut", 1,
             "error: not obviously prefix-closed: need exactly one rejecting state and it must be a dead sink\n",
             true);
  expect_run("decompile ../corpus/iter.st", 65, "", false);
}

TEST(Cli, SyntaxErrorLocation) {
  auto tmp = std::filesystem::temp_directory_path() / "shades_cli_bad.st";
  std::ofstream(tmp) << "system recursive\ntype t = X\nX = !end.\n";
  expect_run("check '" + tmp.string() + "'", 65, "error: syntax error at 3:10: expected a type\n", true);
  auto j = nlohmann::json::parse(shades("--json check '" + tmp.string() + "'").out);
  EXPECT_EQ(j["error"]["kind"], "syntax error");
  EXPECT_EQ(j["error"]["span"]["line"], 3);
  EXPECT_EQ(j["error"]["span"]["column"], 10);
  EXPECT_EQ(j["exit"], 65);
  std::filesystem::remove(tmp);
}

TEST(Cli, JsonMatchesText) {
  auto j = nlohmann::json::parse(shades("--json equiv counter.st meta.st").out);
  EXPECT_EQ(j["verdict"], "not equivalent");
  EXPECT_EQ(j["witness"], "&[addIn,addOut]:addIn");
  EXPECT_EQ(j["exit"], 1);

  auto c = nlohmann::json::parse(shades("check --json bad_counter.st").out);
  EXPECT_EQ(c["contractive"]["status"], "fail");
  EXPECT_EQ(c["contractive"]["witness"], (std::vector<std::string>{"X(s N)", "Y(s s N)", "X(s N)"}));
  EXPECT_EQ(c["bad"], std::vector<std::string>{"X/s"});

  auto t = nlohmann::json::parse(shades("--json traces loop.st --depth 2 --abbrev").out);
  EXPECT_EQ(t["words"], (std::vector<std::string>{"<eps>", "!c", "!c !c", "!c !d", "!d", "!d end"}));

  auto b = nlohmann::json::parse(shades("--json equiv meta.st nest.st").out);
  EXPECT_EQ(b["bounded"], true);
  EXPECT_EQ(b["depth"], 12);
  EXPECT_EQ(shades("--json equiv meta.st nest.st").code, 3);
}

TEST(Cli, Deterministic) {
  for (const char* args : {"convert --to nested dump.st", "convert --to pushdown appd.st", "compile meta.st",
                           "traces tree.st --depth 5", "dual higher_pd.st"}) {
    auto a = shades(args), b = shades(args);
    EXPECT_EQ(a.code, 0) << args;
    EXPECT_FALSE(a.out.empty()) << args;
    EXPECT_EQ(a.out, b.out) << args;
  }
}
