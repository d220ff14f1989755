// Command-line front end. Exit codes: 0 ok, 1 negative verdict or failed
// construction, 2 unknown, 3 bounded, 64 usage, 65 parse or validation.

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "shades/analysis.h"
#include "shades/compile.h"
#include "shades/decompile.h"
#include "shades/equivalence.h"
#include "shades/semantics.h"
#include "shades/surface.h"
#include "shades/transform.h"

using json = nlohmann::ordered_json;
using namespace shades;

namespace {

constexpr int kUsage = 64;
constexpr int kData = 65;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string joined(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : sep) + p;
  return out;
}

std::string describe(const Verdict& v) {
  switch (v.status) {
    case Verdict::Status::Ok: return "ok";
    case Verdict::Status::Unknown: return "unknown (fuel " + std::to_string(v.fuel_spent) + " spent)";
    case Verdict::Status::Fail: {
      std::string out = "fail: " + v.reason;
      if (!v.witness.empty()) out += ": " + joined(v.witness, " -> ");
      return out;
    }
  }
  return "?";
}

json verdict_json(const Verdict& v) {
  json j{{"status", to_string(v.status)}};
  if (!v.is_ok()) j["reason"] = v.reason;
  if (v.is_fail()) j["witness"] = v.witness;
  if (v.is_unknown()) j["fuel_spent"] = v.fuel_spent;
  return j;
}

int verdict_code(const Verdict& v) { return v.is_ok() ? 0 : v.is_fail() ? 1 : 2; }

std::size_t default_fuel() {
  if (const char* env = std::getenv("SHADES_FUEL")) {
    try {
      return std::stoul(env);
    } catch (const std::exception&) {
    }
  }
  return 12;
}

int error_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::Syntax:
    case ErrorKind::Validation:
    case ErrorKind::MalformedSymbol:
    case ErrorKind::Nondeterministic:
    case ErrorKind::UnboundVariable: return kData;
    default: return 1;
  }
}

struct Options {
  bool json = false;
  std::string file, file2, out, target;
  std::size_t depth = 3;
  std::size_t fuel = 12;
  bool abbrev = false;
};

struct Output {
  bool as_json;
  json doc;

  void text(const std::string& s) {
    if (!as_json) std::cout << s;
  }
};

int cmd_check(const Options& o, Output& out) {
  EquationSystem sys = parse_system(slurp(o.file));
  ContractiveResult c = check_contractive(sys);
  Verdict f = check_formation(sys);
  out.doc["class"] = to_string(sys.cls);
  out.doc["contractive"] = verdict_json(c.verdict);
  out.doc["formation"] = verdict_json(f);
  out.text(std::string("class: ") + to_string(sys.cls) + "\n");
  out.text("contractive: " + describe(c.verdict) + "\n");
  if (!c.bad.empty()) {
    std::vector<std::string> ids;
    for (const auto& [ctor, shape] : c.bad.ids) ids.push_back(shape.empty() ? ctor : ctor + "/" + shape);
    out.doc["bad"] = ids;
    out.text("bad: " + joined(ids, " ") + "\n");
  }
  out.text("formation: " + describe(f) + "\n");
  if (c.verdict.is_fail() || f.is_fail()) return 1;
  return std::max(verdict_code(c.verdict), verdict_code(f));
}

int cmd_compile(const Options& o, Output& out) {
  Automaton aut = compile(parse_system(slurp(o.file)));
  std::string text = print_automaton(aut);
  if (!o.out.empty()) {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + o.out);
    f << text;
    out.doc["written"] = o.out;
  } else {
    out.doc["automaton"] = text;
    out.text(text);
  }
  out.doc["states"] = aut.states.size();
  return 0;
}

int emit_system(const EquationSystem& sys, Output& out) {
  std::string text = print_system(sys);
  out.doc["class"] = to_string(sys.cls);
  out.doc["system"] = text;
  out.text(text);
  return 0;
}

int cmd_decompile(const Options& o, Output& out) { return emit_system(decompile(parse_automaton(slurp(o.file))), out); }

int cmd_convert(const Options& o, Output& out) {
  auto target = class_from_string(o.target);
  if (!target) throw std::invalid_argument("unknown class '" + o.target + "'");
  return emit_system(convert(parse_system(slurp(o.file)), *target), out);
}

int cmd_dual(const Options& o, Output& out) { return emit_system(dualize(parse_system(slurp(o.file))), out); }

int report_equiv(const EquivResult& r, const Options& o, Output& out) {
  out.doc["verdict"] = to_string(r.status);
  out.doc["fuel"] = o.fuel;
  switch (r.status) {
    case EquivResult::Status::Equivalent:
      out.text("equivalent\n");
      return 0;
    case EquivResult::Status::NotEquivalent: {
      std::string w = r.witness.empty() ? "<eps>" : spell_word(r.witness);
      out.doc["witness"] = w;
      out.text("not equivalent\nwitness: " + w + "\n");
      return 1;
    }
    case EquivResult::Status::EquivalentUpTo:
      out.doc["depth"] = r.depth;
      out.doc["bounded"] = true;
      out.text("equivalent up to depth " + std::to_string(r.depth) + " (bounded search, not a proof)\n");
      return 3;
  }
  return 1;
}

int cmd_equiv(const Options& o, Output& out, bool dual) {
  EquationSystem a = parse_system(slurp(o.file));
  EquationSystem b = parse_system(slurp(o.file2));
  auto r = dual ? dual_check(a, a.root, b, b.root, o.fuel) : equiv(a, a.root, b, b.root, o.fuel);
  return report_equiv(r, o, out);
}

int cmd_traces(const Options& o, Output& out) {
  WordSet ws;
  if (ends_with(o.file, ".aut")) ws = enumerate_accepted(parse_automaton(slurp(o.file)), o.depth);
  else ws = unfold_traces(parse_system(slurp(o.file)), o.depth);
  json words = json::array();
  for (const auto& w : ws) words.push_back(w.empty() ? "<eps>" : spell_word(w, o.abbrev));
  out.doc["depth"] = o.depth;
  out.doc["words"] = words;
  out.text(dump_words(ws, o.abbrev));
  return 0;
}

int cmd_tree(const Options& o, Output& out) {
  EquationSystem sys = parse_system(slurp(o.file));
  TreeView t = tree_view(sys, sys.root, o.depth);
  json nodes = json::array();
  for (const auto& [path, label] : t.nodes) nodes.push_back({{"path", path}, {"label", label}});
  out.doc["depth"] = o.depth;
  out.doc["nodes"] = nodes;
  out.text(t.text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Session-type workbench"};
  app.require_subcommand(1);
  Options o;
  o.fuel = default_fuel();
  app.add_flag("--json", o.json, "machine-readable output");

  auto file_cmd = [&](const char* name, const char* help, const char* what) {
    auto* c = app.add_subcommand(name, help);
    c->add_option("file", o.file, what)->required();
    return c;
  };
  auto* check = file_cmd("check", "validate, contractiveness and formation", "system (.st)");
  auto* comp = file_cmd("compile", "compile to an automaton", "system (.st)");
  comp->add_option("-o,--output", o.out, "write the automaton here");
  auto* decomp = file_cmd("decompile", "automaton back to equations", "automaton (.aut)");
  auto* conv = app.add_subcommand("convert", "convert to another class");
  conv->add_option("--to", o.target, "onecounter, pushdown or nested")->required();
  conv->add_option("file", o.file, "system (.st)")->required();
  auto* dual = file_cmd("dual", "dual system", "system (.st)");
  auto* eq = app.add_subcommand("equiv", "type equivalence");
  auto* dc = app.add_subcommand("dualcheck", "is the second type the dual of the first");
  for (auto* c : {eq, dc}) {
    c->add_option("a", o.file, "first system")->required();
    c->add_option("b", o.file2, "second system")->required();
    c->add_option("--fuel", o.fuel, "word length bound above the regular level");
  }
  auto* traces = file_cmd("traces", "traces up to a length", "system (.st) or automaton (.aut)");
  traces->add_option("--depth", o.depth, "maximum word length")->required();
  traces->add_flag("--abbrev", o.abbrev, "drop label sets from choice symbols");
  auto* tree = file_cmd("tree", "indented tree dump", "system (.st)");
  tree->add_option("--depth", o.depth, "levels to show")->required();
  for (auto* c : app.get_subcommands({})) c->add_flag("--json", o.json, "machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  CLI::App* cmd = app.get_subcommands().front();
  Output out{o.json, json::object()};
  out.doc["command"] = cmd->get_name();
  int code = 0;
  try {
    if (cmd == check) code = cmd_check(o, out);
    else if (cmd == comp) code = cmd_compile(o, out);
    else if (cmd == decomp) code = cmd_decompile(o, out);
    else if (cmd == conv) code = cmd_convert(o, out);
    else if (cmd == dual) code = cmd_dual(o, out);
    else if (cmd == eq) code = cmd_equiv(o, out, false);
    else if (cmd == dc) code = cmd_equiv(o, out, true);
    else if (cmd == traces) code = cmd_traces(o, out);
    else if (cmd == tree) code = cmd_tree(o, out);
  } catch (const Error& e) {
    code = error_code(e.kind());
    out.doc["error"] = {{"kind", to_string(e.kind())}, {"message", e.what()}};
    if (e.span()) out.doc["error"]["span"] = {{"line", e.span()->line}, {"column", e.span()->column}};
    if (!o.json) std::cerr << "error: " << e.what() << "\n";
  } catch (const std::invalid_argument& e) {
    code = kUsage;
    out.doc["error"] = {{"kind", "usage"}, {"message", e.what()}};
    if (!o.json) std::cerr << "usage: " << e.what() << "\n";
  } catch (const std::runtime_error& e) {
    code = kData;
    out.doc["error"] = {{"kind", "io"}, {"message", e.what()}};
    if (!o.json) std::cerr << "error: " << e.what() << "\n";
  }
  out.doc["exit"] = code;
  if (o.json) std::cout << out.doc.dump(2) << "\n";
  return code;
}
