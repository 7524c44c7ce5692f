// Command-line driver: normalize / boundary / admissible / eval for single
// cycle terms, replay for proof scripts, theorem for the full relation.
#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "chow/script.hpp"

namespace {

using namespace chow;

struct Common {
  bool json = false;
  std::string specialize;
  std::string steps;
  unsigned seed = 0;
};

Subst parse_specialize(const std::string& text) {
  Subst out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ParseError("--specialize expects sym=value pairs, got '" + item + "'");
    std::string lhs = item.substr(0, eq);
    if (lhs.size() != 1) throw ParseError("--specialize target must be one symbol");
    out[sym_index(lhs[0])] = parse_ratfunc(item.substr(eq + 1));
  }
  return out;
}

std::optional<std::pair<int, int>> parse_steps(const std::string& text) {
  if (text.empty()) return std::nullopt;
  size_t dash = text.find('-');
  int lo, hi;
  if (dash == std::string::npos) {
    lo = hi = std::stoi(text);
  } else {
    lo = std::stoi(text.substr(0, dash));
    hi = std::stoi(text.substr(dash + 1));
  }
  if (lo < 1 || hi > 10 || lo > hi) throw ParseError("--steps range must lie in 1..10");
  return std::make_pair(lo, hi);
}

CycleTerm read_term(const std::string& text, const Subst& spec) {
  CycleTerm t = parse_cycle(text);
  if (!spec.empty()) t = apply_field_subst(t, spec);
  return t;
}

void emit(const Common& c, const Cert& json_doc, const std::string& human) {
  if (c.json)
    std::cout << json_doc.dump(2) << "\n";
  else
    std::cout << human;
}

int cmd_normalize(const Common& c, const std::string& text) {
  CycleTerm t = read_term(text, parse_specialize(c.specialize));
  std::optional<CycleTerm> n = normalize_term(t);
  std::string canon = n ? format_cycle(*n) : "0";
  Cert doc;
  doc["schema"] = 1;
  doc["input"] = text;
  doc["normalized"] = canon;
  emit(c, doc, canon + "\n");
  return 0;
}

int cmd_boundary(const Common& c, const std::string& text) {
  CycleTerm t = read_term(text, parse_specialize(c.specialize));
  CycleSum b = boundary(t);
  Cert doc;
  doc["schema"] = 1;
  doc["input"] = text;
  Cert arr = Cert::array();
  std::ostringstream human;
  for (const auto& [k, term] : b.terms()) {
    arr.push_back(format_cycle(term));
    human << format_cycle(term) << "\n";
  }
  if (b.is_zero()) human << "0\n";
  doc["boundary"] = arr;
  emit(c, doc, human.str());
  return 0;
}

int cmd_admissible(const Common& c, const std::string& text) {
  CycleTerm t = read_term(text, parse_specialize(c.specialize));
  AdmissibilityReport rep = is_admissible(t);
  Cert doc;
  doc["schema"] = 1;
  doc["input"] = text;
  doc["admissible"] = rep.admissible;
  doc["summary"] = rep.summary();
  emit(c, doc,
       std::string(rep.admissible ? "ADMISSIBLE" : "NOT ADMISSIBLE") + "\n" +
           rep.summary());
  return rep.admissible ? 0 : 1;
}

int cmd_eval(const Common& c, const std::string& text) {
  Subst spec = parse_specialize(c.specialize);
  CycleTerm t = read_term(text, spec);
  auto get = [&](char name) {
    auto it = spec.find(sym_index(name));
    return it == spec.end() ? RatFunc::sym(sym_index(name)) : it->second;
  };
  ReplayContext ctx(get('a'), get('b'), get('c'));
  ReplayContext::StuvResult r = ctx.eval_stuv(t);
  Cert doc;
  doc["schema"] = 1;
  doc["input"] = text;
  Cert val = Cert::object();
  for (const auto& [k, tc] : r.value.terms()) val[k] = std::to_string(tc.second);
  val["eta"] = std::to_string(r.value.eta());
  doc["value"] = val;
  emit(c, doc, r.value.str() + "\n");
  return 0;
}

int run_script_text(const Common& c, const std::string& text) {
  Script script = parse_script(text);
  RunOptions opt;
  opt.specialize = parse_specialize(c.specialize);
  opt.steps = parse_steps(c.steps);
  opt.seed = c.seed;
  RunReport rep = run(script, opt);
  emit(c, rep.to_json(), rep.str());
  return rep.pass ? 0 : 1;
}

int cmd_replay(const Common& c, const std::string& path) {
  std::ifstream in(path);
  std::string text;
  if (in) {
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  } else {
    text = bundled_script(path);
    if (text.empty()) {
      std::cerr << "cannot open script '" << path << "'\n";
      return 2;
    }
  }
  return run_script_text(c, text);
}

int cmd_theorem(const Common& c) {
  std::string script = bundled_script("theorem41.gcs");
  if (!c.steps.empty()) return run_script_text(c, script);
  return run_script_text(c, script);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact verifier for the cubical higher Chow replay"};
  app.require_subcommand(1);
  Common common;
  app.add_flag("--json", common.json, "machine-readable JSON output");
  app.add_option("--specialize", common.specialize,
                 "field values, e.g. a=2,b=3,c=5 (exact rationals)");
  app.add_option("--steps", common.steps, "restrict replay to a step range, e.g. 3-7");
  app.add_option("--seed", common.seed, "seed for randomized checks");

  std::string arg;
  auto* normalize = app.add_subcommand("normalize", "canonical form of a cycle term");
  normalize->add_option("term", arg, "cycle text")->required();
  auto* boundarycmd = app.add_subcommand("boundary", "cubical boundary of a cycle term");
  boundarycmd->add_option("term", arg, "cycle text")->required();
  auto* admissible = app.add_subcommand("admissible", "admissibility report");
  admissible->add_option("term", arg, "cycle text")->required();
  auto* evalcmd = app.add_subcommand("eval", "evaluate a term to constant classes");
  evalcmd->add_option("term", arg, "cycle text")->required();
  auto* replay = app.add_subcommand("replay", "run a proof script (.gcs)");
  replay->add_option("script", arg, "script path or bundled name")->required();
  auto* theorem = app.add_subcommand("theorem", "replay the full relation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (normalize->parsed()) return cmd_normalize(common, arg);
    if (boundarycmd->parsed()) return cmd_boundary(common, arg);
    if (admissible->parsed()) return cmd_admissible(common, arg);
    if (evalcmd->parsed()) return cmd_eval(common, arg);
    if (replay->parsed()) return cmd_replay(common, arg);
    if (theorem->parsed()) return cmd_theorem(common);
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const DegenerateInput& e) {
    std::cerr << "degenerate input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "verification error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
