#include "chow/script.hpp"

#include <chrono>
#include <map>
#include <sstream>

namespace chow {

SyntaxError::SyntaxError(const std::string& what, int line, int column)
    : ParseError(what + " (line " + std::to_string(line) + ", column " +
                 std::to_string(column) + ")"),
      line(line),
      column(column) {}

namespace {

// ---------------------------------------------------------------------------
// Tokenizer over one statement line
// ---------------------------------------------------------------------------

struct Cursor {
  const std::string& s;
  size_t pos = 0;
  int line;

  void skip_ws() {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  }
  bool done() {
    skip_ws();
    return pos >= s.size();
  }
  [[noreturn]] void fail(const std::string& what) {
    throw SyntaxError(what, line, int(pos) + 1);
  }
  // next whitespace-delimited word
  std::string word() {
    skip_ws();
    size_t start = pos;
    while (pos < s.size() && !std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
    if (start == pos) fail("expected a word");
    return s.substr(start, pos - start);
  }
  std::string peek_word() {
    size_t save = pos;
    if (done()) return "";
    std::string w = word();
    pos = save;
    return w;
  }
  void expect_word(const std::string& w) {
    std::string got = word();
    if (got != w) fail("expected '" + w + "', got '" + got + "'");
  }
  std::string rest() {
    skip_ws();
    return s.substr(pos);
  }
};

bool valid_name(const std::string& n) {
  if (n.empty() || !std::isalpha(static_cast<unsigned char>(n[0]))) return false;
  for (char c : n)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '\'')
      return false;
  return true;
}

std::string read_name(Cursor& c) {
  std::string n = c.word();
  if (!valid_name(n)) c.fail("invalid name '" + n + "'");
  return n;
}

// 'subst' '(' sym -> expr, ... ';' sym -> expr, ... ')'
Substitution parse_subst_payload(Cursor& c) {
  std::string body = c.rest();
  auto strip = [](std::string t) {
    size_t b = t.find_first_not_of(" \t");
    size_t e = t.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : t.substr(b, e - b + 1);
  };
  body = strip(body);
  if (body.size() < 2 || body.front() != '(' || body.back() != ')')
    c.fail("expected '(' maps ; maps ')'");
  body = body.substr(1, body.size() - 2);
  size_t semi = body.find(';');
  if (semi == std::string::npos) c.fail("substitution needs ';' before the inverse maps");
  auto parse_maps = [&](const std::string& part) {
    Subst out;
    std::stringstream ss(part);
    std::string item;
    while (std::getline(ss, item, ',')) {
      size_t arrow = item.find("->");
      if (arrow == std::string::npos) c.fail("expected 'sym -> expr' in substitution");
      std::string lhs = strip(item.substr(0, arrow));
      if (lhs.size() != 1) c.fail("substitution target must be a single symbol");
      out[sym_index(lhs[0])] = parse_ratfunc(strip(item.substr(arrow + 2)));
    }
    if (out.empty()) c.fail("empty substitution");
    return out;
  };
  return Substitution(parse_maps(body.substr(0, semi)), parse_maps(body.substr(semi + 1)));
}

// SUM := ('-')? TERM (('+'|'-') TERM)*, TERM := (INT '*')? NAME | '0'
// Stops before 'via' / 'witness'.
std::vector<std::pair<Rat, std::string>> parse_sum(Cursor& c) {
  std::vector<std::pair<Rat, std::string>> out;
  Rat sign = 1;
  bool expect_term = true;
  while (!c.done()) {
    std::string w = c.peek_word();
    if (w == "via" || w == "witness") break;
    w = c.word();
    if (w == "+") { sign = 1; expect_term = true; continue; }
    if (w == "-") { sign = -1; expect_term = true; continue; }
    if (!expect_term) c.fail("expected '+' or '-' between terms");
    Rat coeff = sign;
    size_t star = w.find('*');
    if (star != std::string::npos) {
      coeff = sign * Rat(w.substr(0, star));
      w = w.substr(star + 1);
    }
    if (w == "0") {
      if (!out.empty() || star != std::string::npos) c.fail("'0' must stand alone");
    } else {
      if (!valid_name(w)) c.fail("invalid term name '" + w + "'");
      out.push_back({coeff, w});
    }
    sign = 1;
    expect_term = false;
  }
  if (expect_term && !out.empty()) c.fail("dangling sign at end of sum");
  return out;
}

Statement parse_statement(const std::string& text, int line) {
  Cursor c{text, 0, line};
  Statement st;
  st.line = line;
  st.text = text;
  std::string head = c.word();
  if (head == "let") {
    st.name = read_name(c);
    c.expect_word("=");
    std::string what = c.word();
    if (what == "cycle") {
      st.kind = Statement::Kind::kLetCycle;
      try {
        st.cycle = parse_cycle(c.rest());
      } catch (const ParseError& e) {
        c.fail(e.what());
      }
    } else if (what == "subst") {
      st.kind = Statement::Kind::kLetSubst;
      st.subst = parse_subst_payload(c);
    } else {
      c.fail("expected 'cycle' or 'subst' after '='");
    }
    return st;
  }
  if (head == "assert") {
    std::string what = c.word();
    if (what == "admissible" || what == "negligible") {
      st.kind = what == "admissible" ? Statement::Kind::kAssertAdmissible
                                     : Statement::Kind::kAssertNegligible;
      st.name = read_name(c);
    } else if (what == "equal" || what == "boundary") {
      st.kind = what == "equal" ? Statement::Kind::kAssertEqual
                                : Statement::Kind::kAssertBoundary;
      st.name = read_name(c);
      c.expect_word("=");
      st.sum = parse_sum(c);
      while (!c.done()) {
        std::string w = c.word();
        if (w == "via" && what == "equal") {
          st.via = read_name(c);
        } else if (w == "witness" && what == "equal") {
          while (!c.done()) st.witness.push_back(read_name(c));
          if (st.witness.empty()) c.fail("'witness' needs at least one name");
        } else {
          c.fail("unexpected '" + w + "'");
        }
      }
    } else {
      c.fail("unknown assertion '" + what + "'");
    }
    if (!c.done()) c.fail("trailing input '" + c.rest() + "'");
    return st;
  }
  if (head == "eval") {
    st.kind = Statement::Kind::kEval;
    st.name = read_name(c);
    if (!c.done()) {
      c.expect_word("via");
      st.via = read_name(c);
    }
    if (!c.done()) c.fail("trailing input '" + c.rest() + "'");
    return st;
  }
  if (head == "replay") {
    std::string what = c.word();
    if (what == "step") {
      st.kind = Statement::Kind::kReplayStep;
      std::string n = c.word();
      try {
        st.step = std::stoi(n);
      } catch (...) {
        c.fail("expected a step number, got '" + n + "'");
      }
      if (st.step < 1 || st.step > 10) c.fail("step number out of range 1..10");
    } else if (what == "theorem") {
      st.kind = Statement::Kind::kReplayTheorem;
    } else {
      c.fail("expected 'step' or 'theorem' after 'replay'");
    }
    if (!c.done()) c.fail("trailing input '" + c.rest() + "'");
    return st;
  }
  c.fail("unknown statement '" + head + "'");
}

// ---------------------------------------------------------------------------
// Execution
// ---------------------------------------------------------------------------

Cert sum_json(const CycleSum& s) {
  Cert arr = Cert::array();
  for (const auto& [k, t] : s.terms()) arr.push_back(format_cycle(t));
  return arr;
}

Cert symbols_json(const SymbolSum& s) {
  Cert obj = Cert::object();
  for (const auto& [k, tc] : s.terms())
    obj[k] = std::to_string(tc.second);
  obj["eta"] = std::to_string(s.eta());
  return obj;
}

struct Env {
  std::map<std::string, CycleTerm> cycles;
  std::map<std::string, Substitution> substs;
  ReplayContext ctx;

  const CycleTerm& cycle(const std::string& n) const {
    auto it = cycles.find(n);
    if (it == cycles.end()) throw RewriteError("unbound cycle name '" + n + "'");
    return it->second;
  }
  const Substitution& subst(const std::string& n) const {
    auto it = substs.find(n);
    if (it == substs.end()) throw RewriteError("unbound substitution name '" + n + "'");
    return it->second;
  }
  CycleSum resolve_sum(const std::vector<std::pair<Rat, std::string>>& sum) const {
    CycleSum out;
    for (const auto& [coeff, name] : sum) {
      CycleTerm t = cycle(name);
      t.coeff = t.coeff * coeff;
      out.add(t);
    }
    return out;
  }
};

void execute(const Statement& st, Env& env, const RunOptions& opt,
             StatementResult& res) {
  using K = Statement::Kind;
  switch (st.kind) {
    case K::kLetCycle: {
      if (env.cycles.count(st.name) || env.substs.count(st.name))
        throw RewriteError("name '" + st.name + "' already bound");
      CycleTerm t = st.cycle;
      if (!opt.specialize.empty()) t = apply_field_subst(t, opt.specialize);
      env.cycles.emplace(st.name, t);
      res.certificate["bound"] = format_cycle(t);
      break;
    }
    case K::kLetSubst: {
      if (env.cycles.count(st.name) || env.substs.count(st.name))
        throw RewriteError("name '" + st.name + "' already bound");
      Substitution s = *st.subst;
      if (!opt.specialize.empty()) {
        for (auto& [k, f] : s.fwd) f = substitute(f, opt.specialize);
        for (auto& [k, f] : s.inv) f = substitute(f, opt.specialize);
      }
      env.substs.emplace(st.name, s);
      break;
    }
    case K::kAssertAdmissible: {
      AdmissibilityReport rep = is_admissible(env.cycle(st.name));
      res.certificate["summary"] = rep.summary();
      if (!rep.admissible) {
        res.status = "failed";
        res.message = "cycle is not admissible";
      }
      break;
    }
    case K::kAssertNegligible: {
      NegligibilityReport rep = is_negligible(env.cycle(st.name));
      res.certificate["pattern"] = rep.pattern;
      if (!rep.negligible) {
        res.status = "failed";
        res.message = "cycle is not negligible";
      }
      break;
    }
    case K::kAssertEqual: {
      const CycleTerm& lhs = env.cycle(st.name);
      CycleSum rhs = env.resolve_sum(st.sum);
      if (st.via) {
        VerifiedIdentity id = reparam(lhs, env.subst(*st.via));
        res.certificate["certificate"] = id.certificate;
        if (!(id.rhs == rhs)) {
          res.status = "failed";
          res.message = "substitution image differs from the right-hand side";
          res.certificate["residue"] = sum_json(id.rhs - rhs);
        }
      } else if (!st.witness.empty()) {
        std::vector<CycleTerm> wit;
        for (const std::string& w : st.witness) wit.push_back(env.cycle(w));
        Cert step;
        step["op"] = "script_equality";
        VerifiedIdentity id = certify_by_witness(CycleSum(lhs), rhs, wit, step);
        res.certificate["certificate"] = id.certificate;
      } else {
        CycleSum diff = CycleSum(lhs) - rhs;
        if (!diff.is_zero()) {
          res.status = "failed";
          res.message = "sides differ in the alternating complex";
          res.certificate["residue"] = sum_json(diff);
        }
      }
      break;
    }
    case K::kAssertBoundary: {
      CycleSum b = boundary(env.cycle(st.name));
      CycleSum rhs = env.resolve_sum(st.sum);
      res.certificate["boundary"] = sum_json(b);
      if (!(b == rhs)) {
        res.status = "failed";
        res.message = "boundary differs from the right-hand side";
        res.certificate["residue"] = sum_json(b - rhs);
      }
      break;
    }
    case K::kEval: {
      std::optional<Substitution> pre;
      if (st.via) pre = env.subst(*st.via);
      ReplayContext::StuvResult r = env.ctx.eval_stuv(env.cycle(st.name), pre);
      res.certificate["value"] = symbols_json(r.value);
      break;
    }
    case K::kReplayStep: {
      if (opt.steps && (st.step < opt.steps->first || st.step > opt.steps->second)) {
        res.status = "verified";
        res.message = "skipped by --steps";
        res.certificate["skipped"] = true;
        return;
      }
      ReplayContext::StepResult r = env.ctx.replay_step(st.step);
      res.certificate["details"] = r.details;
      if (!r.verified) {
        res.status = "failed";
        res.message = "step did not verify";
      }
      break;
    }
    case K::kReplayTheorem: {
      TheoremReport rep = verify_theorem(env.ctx);
      res.certificate["details"] = rep.details;
      if (!rep.verified) {
        res.status = "failed";
        res.message = "relation residual is nonzero: " + rep.residual.str();
      }
      break;
    }
  }
}

ReplayContext make_context(const RunOptions& opt) {
  if (opt.specialize.empty()) return ReplayContext::symbolic();
  auto get = [&](char name) {
    auto it = opt.specialize.find(sym_index(name));
    if (it == opt.specialize.end()) return RatFunc::sym(sym_index(name));
    return it->second;
  };
  return ReplayContext(get('a'), get('b'), get('c'));
}

}  // namespace

Script parse_script(const std::string& text) {
  Script out;
  std::stringstream ss(text);
  std::string raw;
  int line = 0;
  while (std::getline(ss, raw)) {
    ++line;
    size_t hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    size_t b = raw.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    size_t e = raw.find_last_not_of(" \t\r");
    out.statements.push_back(parse_statement(raw.substr(b, e - b + 1), line));
  }
  // single-assignment and use-before-bind checks
  std::map<std::string, int> bound;
  for (const Statement& st : out.statements) {
    auto require = [&](const std::string& n) {
      if (!bound.count(n))
        throw SyntaxError("name '" + n + "' referenced before binding", st.line, 1);
    };
    if (st.kind == Statement::Kind::kLetCycle || st.kind == Statement::Kind::kLetSubst) {
      if (bound.count(st.name))
        throw SyntaxError("name '" + st.name + "' bound twice", st.line, 1);
      bound[st.name] = st.line;
      continue;
    }
    if (!st.name.empty() && st.kind != Statement::Kind::kReplayStep &&
        st.kind != Statement::Kind::kReplayTheorem)
      require(st.name);
    for (const auto& [coeff, n] : st.sum) require(n);
    if (st.via) require(*st.via);
    for (const std::string& w : st.witness) require(w);
  }
  return out;
}

RunReport run(const Script& script, const RunOptions& options) {
  RunReport report;
  Env env{{}, {}, make_context(options)};
  int index = 0;
  for (const Statement& st : script.statements) {
    StatementResult res;
    res.index = index++;
    res.line = st.line;
    res.text = st.text;
    res.status = "verified";
    auto t0 = std::chrono::steady_clock::now();
    try {
      execute(st, env, options, res);
    } catch (const std::exception& e) {
      res.status = "error";
      res.message = e.what();
    }
    res.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (res.status != "verified") report.pass = false;
    report.statements.push_back(std::move(res));
  }
  return report;
}

Cert RunReport::to_json() const {
  Cert out;
  out["schema"] = 1;
  out["verdict"] = pass ? "pass" : "fail";
  Cert arr = Cert::array();
  for (const StatementResult& r : statements) {
    Cert row;
    row["index"] = r.index;
    row["line"] = r.line;
    row["statement"] = r.text;
    row["status"] = r.status;
    if (!r.message.empty()) row["message"] = r.message;
    row["certificate"] = r.certificate;
    arr.push_back(std::move(row));
  }
  out["statements"] = std::move(arr);
  return out;
}

std::string RunReport::str() const {
  std::ostringstream os;
  for (const StatementResult& r : statements) {
    os << (r.status == "verified" ? "  ok  " : "FAIL  ") << r.text;
    if (!r.message.empty()) os << "  -- " << r.message;
    char buf[32];
    std::snprintf(buf, sizeof buf, "  (%.3fs)", r.seconds);
    os << buf << "\n";
  }
  os << "verdict: " << (pass ? "pass" : "fail") << "\n";
  return os.str();
}

std::string bundled_script(const std::string& name) {
  if (name == "theorem41.gcs" || name == "theorem41")
    return R"(# Full replay: the ten-step chain, then the final 22-term relation.
replay step 1
replay step 2
replay step 3
replay step 4
replay step 5
replay step 6
replay step 7
replay step 8
replay step 9
replay step 10
replay theorem
)";
  return "";
}

}  // namespace chow
