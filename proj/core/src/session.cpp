#include "bri/session.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "bri/error.hpp"
#include "bri/ordering.hpp"
#include "bri/parser.hpp"
#include "bri/print.hpp"
#include "bri/theory.hpp"

namespace bri {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Open:
      return "open";
    case Verdict::Proved:
      return "proved";
    case Verdict::Refuted:
      return "refuted";
    case Verdict::AwaitingCheck:
      return "awaiting-check";
  }
  return "?";
}

namespace {

[[noreturn]] void fail(const std::string& code, const std::string& detail) { throw Error(code, detail); }

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Whitespace-separated words; a bracket group [ ... ] is one word.
std::vector<std::string> words(const std::string& s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (std::isspace(static_cast<unsigned char>(s[i]))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (s[i] == '[') {
      int depth = 0;
      for (; i < s.size(); ++i) {
        if (s[i] == '[') ++depth;
        if (s[i] == ']' && --depth == 0) {
          ++i;
          break;
        }
      }
      if (depth != 0) fail("syntax", "unbalanced [ in '" + s + "'");
    } else {
      while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])) && s[i] != '[') ++i;
    }
    out.push_back(s.substr(start, i - start));
  }
  return out;
}

std::string unbracket(const std::string& w) {
  if (w.size() >= 2 && w.front() == '[' && w.back() == ']') return w.substr(1, w.size() - 2);
  return w;
}

std::optional<int> as_id(const std::string& w) {
  std::string t = w;
  if (!t.empty() && (t[0] == 'E' || t[0] == 'e') && t.size() > 1 && std::isdigit(static_cast<unsigned char>(t[1])))
    t = t.substr(1);
  if (t.empty() || !std::all_of(t.begin(), t.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    return std::nullopt;
  return std::stoi(t);
}

std::optional<Side> as_side(const std::string& w) {
  if (w == "left" || w == "l" || w == "lhs") return Side::Left;
  if (w == "right" || w == "r" || w == "rhs") return Side::Right;
  return std::nullopt;
}

std::optional<Direction> as_dir(const std::string& w) {
  if (w == "ltr" || w == "->") return Direction::LeftToRight;
  if (w == "rtl" || w == "<-") return Direction::RightToLeft;
  return std::nullopt;
}

std::string strip_parens(const std::string& w) {
  if (w.size() >= 2 && w.front() == '(' && w.back() == ')') return w.substr(1, w.size() - 2);
  return w;
}

// Classified optional arguments of the rewriting-style commands.
struct Parsed {
  std::optional<int> id;
  std::optional<Side> side;
  std::vector<Position> positions;
  std::optional<std::string> name;
  std::optional<Direction> dir;
  std::optional<std::string> subst;
};

Parsed classify(const std::vector<std::string>& ws, std::size_t from, bool allow_id = true) {
  Parsed p;
  for (std::size_t i = from; i < ws.size(); ++i) {
    const std::string& w = ws[i];
    if (allow_id && i == from && as_id(w) && !p.id) {
      p.id = as_id(w);
    } else if (auto s = as_side(w); s && !p.side) {
      p.side = s;
    } else if (auto d = as_dir(w); d && !p.dir) {
      p.dir = d;
    } else if (!w.empty() && w.front() == '[') {
      if (p.subst) fail("syntax", "more than one substitution");
      p.subst = w;
    } else if (auto pos = parse_position(w)) {
      p.positions.push_back(*pos);
    } else {
      if (p.name) fail("syntax", "unexpected '" + w + "'");
      p.name = strip_parens(w);
    }
  }
  return p;
}

Scope scope_of(const VarSet& vs, bool allow_new = false) {
  Scope s;
  s.allow_new = allow_new;
  s.add(vs);
  return s;
}

const char* kHelp =
    "commands (arguments in brackets are optional; omitted ones are searched):\n"
    "  simplify [id] [left|right] [pos] [rule] [[x := t, ...]]\n"
    "  calc [id] [left|right [pos ...]]\n"
    "  case id var | case id [phi1] [phi2] ...\n"
    "  delete [id]        eq-delete [id]        induct [id]\n"
    "  hypothesis [id] [left|right] [pos] [Hk] [ltr|rtl] [subst]\n"
    "  hdelete [id] [Hk] [ltr|rtl] [pos] [subst]\n"
    "  generalize id s == t [phi] | generalize id [phi]\n"
    "  alter id [phi] | alter id subst [x := u, ...]\n"
    "  postulate s == t [phi]\n"
    "  semiconstructor [id]\n"
    "  axiom [id] [left|right] [pos] [name] [ltr|rtl] [subst]\n"
    "  expand id left|right pos\n"
    "  disprove [id] [[f := t, ...]]\n"
    "  auto [max-steps]\n"
    "  :check  :equations [full]  :hypotheses  :ledger  :transcript\n"
    "  :undo  :save file  :load file  :help  :quit\n";

}  // namespace

Session::Session(RewriteSystem sys, SmtSolver& smt, SessionOptions opts)
    : sys_(std::move(sys)), smt_(smt), opts_(std::move(opts)), engine_(sys_, smt_) {
  EngineOptions eo;
  eo.trust_quasi_reductive = opts_.trust_quasi_reductive || sys_.trust_quasi_reductive;
  eo.trust_termination = opts_.trust_termination || sys_.trust_termination;
  eo.trust_ground_confluence = opts_.trust_ground_confluence;
  engine_.set_options(eo);
  history_.push_back({});
}

void Session::start(const std::vector<Equation>& goals) {
  goals_ = goals;
  gc_mode_ = false;
  history_.clear();
  history_.push_back({engine_.initial(goals), true, 0});
  commands_.clear();
}

void Session::start_ground_confluence() {
  std::string cert;
  bool trust = engine_.options().trust_termination;
  ProofState st = ground_confluence_state(sys_, smt_, trust, &peaks_, &cert, termination_options());
  certificate_ = cert;
  assumptions_["termination"] = trust ? "trusted" : "proved (" + cert + ")";
  gc_mode_ = true;
  goals_.clear();
  for (const auto& p : peaks_) goals_.push_back({"", p.left, p.right, p.constraint});
  history_.clear();
  history_.push_back({st, true, 0});
  commands_.clear();
}

TerminationOptions Session::termination_options() {
  TerminationOptions o;
  o.int_normal_forms_are_values = !sys_.has_theory_constructors() && demand("quasi-reductive");
  return o;
}

bool Session::demand(const std::string& name, std::string* why) {
  auto it = assumptions_.find(name);
  if (it == assumptions_.end()) {
    const EngineOptions& eo = engine_.options();
    std::string status;
    if (name == "quasi-reductive") {
      if (eo.trust_quasi_reductive) {
        status = "trusted";
      } else {
        QuasiReductivity q = check_quasi_reductivity(sys_, smt_);
        status = q.status == QuasiReductivity::Status::Proved ? "proved"
                 : q.status == QuasiReductivity::Status::Refuted ? "refuted: " + q.detail
                                                                 : "unknown: " + q.detail;
      }
    } else if (name == "termination") {
      if (eo.trust_termination) {
        status = "trusted";
      } else {
        TerminationResult t = check_termination(sys_.rules(), smt_, termination_options());
        status = t.status == TerminationResult::Status::Proved ? "proved (" + t.certificate + ")" : "unknown";
      }
    } else if (name == "ground-confluence") {
      status = eo.trust_ground_confluence ? "trusted" : "unknown (not established in this session)";
    } else {
      status = "unknown";
    }
    it = assumptions_.emplace(name, status).first;
  }
  if (why) *why = it->second;
  return it->second == "trusted" || it->second.rfind("proved", 0) == 0;
}

Verdict Session::verdict() const {
  const ProofState& st = state();
  if (st.refuted) return Verdict::Refuted;
  if (!st.eqs.empty()) return Verdict::Open;
  bool all = std::all_of(st.ledger.begin(), st.ledger.end(), [](const Requirement& r) {
    return r.status == ReqStatus::DischargedSyntactic || r.status == ReqStatus::Proved ||
           r.status == ReqStatus::Trusted;
  });
  if (!all || checked_ledger_.empty()) return Verdict::AwaitingCheck;
  return Verdict::Proved;
}

void Session::push(const StepResult& r, CommandResult& out) {
  auto violations = engine_.check_bounds(r.state);
  ++bounds_checks_;
  if (!violations.empty()) {
    std::string d;
    for (const auto& v : violations) d += (d.empty() ? "" : "; ") + v;
    fail("bounds-violated", d);
  }
  bool complete = history_.back().complete && r.complete_rule;
  if (!complete) {
    // E is a subset of the equations of an earlier complete state
    for (const auto& snap : history_) {
      if (!snap.complete) continue;
      bool subset = std::all_of(r.state.eqs.begin(), r.state.eqs.end(), [&](const EqContext& e) {
        return std::any_of(snap.state.eqs.begin(), snap.state.eqs.end(),
                           [&](const EqContext& f) { return same_content(e, f); });
      });
      if (subset) {
        complete = true;
        break;
      }
    }
  }
  std::string cmd = r.rule + (r.args.empty() ? "" : " " + r.args);
  commands_.push_back(cmd);
  history_.push_back({r.state, complete, commands_.size()});
  checked_ledger_.clear();
  out.output += "[" + std::to_string(r.state.step) + "] " + cmd + "\n";
  for (const auto& n : r.notes) out.output += "  " + n + "\n";
  ++out.steps;
}

CommandResult Session::execute(const std::string& raw) {
  CommandResult out;
  std::string line = trim(raw);
  if (line.empty() || line[0] == '#') return out;
  std::size_t sp = line.find_first_of(" \t");
  std::string verb = line.substr(0, sp);
  std::string rest = sp == std::string::npos ? "" : trim(line.substr(sp));
  try {
    out = dispatch(verb, rest);
  } catch (const Error& e) {
    out.ok = false;
    out.error_code = e.code();
    out.error = e.detail();
    out.output += "error: " + e.code() + ": " + e.detail() + "\n";
  }
  return out;
}

CommandResult Session::run_script(const std::string& text) {
  CommandResult total;
  std::istringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    CommandResult r = execute(line);
    total.output += r.output;
    total.steps += r.steps;
    if (!r.ok) {
      total.ok = false;
      total.error_code = r.error_code;
      total.error = "line " + std::to_string(n) + ": " + r.error;
      return total;
    }
    if (r.quit) {
      total.quit = true;
      break;
    }
  }
  return total;
}

CommandResult Session::dispatch(const std::string& verb, const std::string& rest) {
  CommandResult out;
  const ProofState& st = state();
  if (st.refuted && verb[0] != ':')
    fail("refuted", "the proof state is ⊥; use :undo to step back");
  auto ws = words(rest);
  auto ctx = [&](int id) -> const EqContext& {
    const EqContext* e = st.find(id);
    if (!e) fail("unknown-equation", "there is no equation E" + std::to_string(id));
    return *e;
  };
  auto need_id = [&](const Parsed& p) {
    if (!p.id) fail("syntax", verb + " needs an equation id");
    return *p.id;
  };

  if (verb == "simplify") {
    Parsed p = classify(ws, 0);
    RewriteArgs a;
    a.id = p.id;
    a.side = p.side;
    if (p.positions.size() > 1) fail("syntax", "simplify takes one position");
    if (!p.positions.empty()) a.pos = p.positions[0];
    a.name = p.name;
    if (p.subst) {
      if (!p.id || !p.name) fail("syntax", "a substitution needs an equation id and a rule");
      VarSet rv;
      if (*p.name == "calc") {
        fail("syntax", "calculation rules take no substitution");
      } else {
        const Rule* rule = nullptr;
        for (const auto& r : sys_.rules())
          if (r.name == *p.name) rule = &r;
        if (!rule) fail("unknown-rule", "there is no rule " + *p.name);
        rv = vars_of(rule->lhs);
        collect_vars(rule->rhs, rv);
        collect_vars(rule->constraint, rv);
      }
      Scope img = scope_of(ctx(*p.id).vars());
      a.subst = parse_subst(*p.subst, sys_, scope_of(rv), img);
    }
    push(engine_.simplify(st, a), out);
  } else if (verb == "calc") {
    Parsed p = classify(ws, 0);
    if (p.name || p.subst || p.dir) fail("syntax", "calc [id] [left|right [pos ...]]");
    push(engine_.calc(st, p.id, p.side, p.positions), out);
  } else if (verb == "case") {
    if (ws.size() < 2) fail("syntax", "case id var | case id [phi1] [phi2] ...");
    auto id = as_id(ws[0]);
    if (!id) fail("syntax", "case needs an equation id");
    const EqContext& e = ctx(*id);
    if (ws[1].front() == '[') {
      std::vector<TermP> splits;
      for (std::size_t i = 1; i < ws.size(); ++i) {
        if (ws[i].front() != '[') fail("syntax", "expected a bracketed constraint, got '" + ws[i] + "'");
        Scope sc = scope_of(e.vars());
        splits.push_back(parse_term(unbracket(ws[i]), sys_, sc, bool_type()));
      }
      push(engine_.case_constraints(st, *id, splits), out);
    } else {
      if (ws.size() != 2) fail("syntax", "case id var");
      std::optional<Variable> x;
      for (const auto& [vid, v] : e.vars())
        if (v.name == ws[1]) x = v;
      if (!x) fail("unknown-variable", ws[1] + " does not occur in E" + std::to_string(*id));
      push(engine_.case_variable(st, *id, *x), out);
    }
  } else if (verb == "delete" || verb == "eq-delete" || verb == "induct" || verb == "semiconstructor") {
    std::optional<int> id;
    if (ws.size() > 1) fail("syntax", verb + " [id]");
    if (ws.size() == 1) {
      id = as_id(ws[0]);
      if (!id) fail("syntax", verb + " [id]");
    }
    if (verb == "delete") push(engine_.del(st, id), out);
    else if (verb == "eq-delete") push(engine_.eq_delete(st, id), out);
    else if (verb == "induct") push(engine_.induct(st, id), out);
    else push(engine_.semiconstructor(st, id), out);
  } else if (verb == "hypothesis" || verb == "hdelete" || verb == "axiom") {
    Parsed p = classify(ws, 0);
    RewriteArgs a;
    a.id = p.id;
    a.side = p.side;
    if (p.positions.size() > 1) fail("syntax", verb + " takes one position");
    if (!p.positions.empty()) a.pos = p.positions[0];
    a.name = p.name;
    a.dir = p.dir;
    if (verb == "hdelete" && p.side) fail("syntax", "hdelete works on both sides; drop '" + to_string(*p.side) + "'");
    if (p.subst) {
      if (!p.id || !p.name) fail("syntax", "a substitution needs an equation id and a " +
                                               std::string(verb == "axiom" ? "axiom" : "hypothesis"));
      VarSet dv;
      if (verb == "axiom") {
        bool found = false;
        for (const auto& ax : sys_.axioms())
          if (ax.eq.name == *p.name) {
            found = true;
            dv = vars_of(ax.eq.lhs);
            collect_vars(ax.eq.rhs, dv);
            collect_vars(ax.eq.constraint, dv);
          }
        if (!found) fail("unknown-axiom", "there is no axiom " + *p.name);
      } else {
        const Hypothesis* h = st.find_hyp(*p.name);
        if (!h) fail("unknown-hypothesis", "there is no hypothesis " + *p.name);
        dv = vars_of(h->lhs);
        collect_vars(h->rhs, dv);
        collect_vars(h->constraint, dv);
      }
      Scope img = scope_of(ctx(*p.id).vars());
      a.subst = parse_subst(*p.subst, sys_, scope_of(dv), img);
    }
    if (verb == "hypothesis") push(engine_.hypothesis(st, a), out);
    else if (verb == "hdelete") push(engine_.hdelete(st, a), out);
    else push(engine_.axiom(st, a), out);
  } else if (verb == "generalize") {
    if (ws.size() < 2) fail("syntax", "generalize id s == t [phi] | generalize id [phi]");
    auto id = as_id(ws[0]);
    if (!id) fail("syntax", "generalize needs an equation id");
    std::string body = trim(rest.substr(rest.find(ws[0]) + ws[0].size()));
    if (ws.size() == 2 && ws[1].front() == '[') {
      Scope sc = scope_of(ctx(*id).vars());
      push(engine_.generalize_constraint(st, *id, parse_term(unbracket(ws[1]), sys_, sc, bool_type())), out);
    } else {
      Scope sc;
      sc.allow_new = true;
      push(engine_.generalize(st, *id, parse_equation(body, sys_, sc)), out);
    }
  } else if (verb == "alter") {
    if (ws.size() < 2) fail("syntax", "alter id [phi] | alter id subst [x := u, ...]");
    auto id = as_id(ws[0]);
    if (!id) fail("syntax", "alter needs an equation id");
    const EqContext& e = ctx(*id);
    if (ws[1] == "subst") {
      if (ws.size() != 3) fail("syntax", "alter id subst [x := u, ...]");
      Scope img = scope_of(e.vars());
      push(engine_.alter_subst(st, *id, parse_subst(ws[2], sys_, scope_of(e.vars()), img)), out);
    } else {
      if (ws.size() != 2 || ws[1].front() != '[') fail("syntax", "alter id [phi]");
      Scope sc = scope_of(e.vars(), true);
      push(engine_.alter_constraint(st, *id, parse_term(unbracket(ws[1]), sys_, sc, bool_type())), out);
    }
  } else if (verb == "postulate") {
    Scope sc;
    sc.allow_new = true;
    push(engine_.postulate(st, parse_equation(rest, sys_, sc)), out);
  } else if (verb == "expand") {
    Parsed p = classify(ws, 0);
    if (!p.side || p.positions.size() != 1) fail("syntax", "expand id left|right pos");
    std::string why;
    if (!demand("quasi-reductive", &why)) fail("not-quasi-reductive", "expand needs quasi-reductivity: " + why);
    push(engine_.expand(st, need_id(p), *p.side, p.positions[0]), out);
  } else if (verb == "disprove") {
    Parsed p = classify(ws, 0);
    Subst inst;
    if (p.subst) {
      if (!p.id) fail("syntax", "an instantiation needs an equation id");
      Scope img = scope_of({});
      inst = parse_subst(*p.subst, sys_, scope_of(ctx(*p.id).vars()), img);
    }
    if (p.name || p.side || !p.positions.empty()) fail("syntax", "disprove [id] [[f := t, ...]]");
    StepResult r = engine_.disprove(st, p.id, inst, complete());
    std::vector<std::string> missing;
    for (const char* a : {"quasi-reductive", "termination", "ground-confluence"}) {
      std::string why;
      if (!demand(a, &why)) missing.push_back(std::string(a) + " (" + why + ")");
    }
    if (!missing.empty()) {
      std::string m;
      for (const auto& s : missing) m += (m.empty() ? "" : ", ") + s;
      r.notes.push_back("the refutation assumes " + m);
    }
    push(r, out);
  } else if (verb == "auto") {
    int limit = opts_.auto_limit;
    if (!ws.empty()) {
      auto n = as_id(ws[0]);
      if (!n) fail("syntax", "auto [max-steps]");
      limit = *n;
    }
    for (int i = 0; i < limit; ++i) {
      auto r = engine_.auto_step(state(), complete());
      if (!r) break;
      push(*r, out);
    }
    if (out.steps == 0) out.output += "auto: nothing applies\n";
  } else if (verb == ":check") {
    out = check();
  } else if (verb == ":equations" || verb == ":eq") {
    out.output = render(!ws.empty() && ws[0] == "full");
  } else if (verb == ":hypotheses") {
    for (const auto& h : st.hyps) out.output += show(h) + "\n";
  } else if (verb == ":ledger") {
    out.output = render_ledger();
  } else if (verb == ":transcript") {
    out.output = transcript();
  } else if (verb == ":undo") {
    if (history_.size() <= 1) fail("nothing-to-undo", "at the initial state");
    history_.pop_back();
    commands_.resize(history_.back().commands);
    checked_ledger_.clear();
    out.output = "undone\n";
  } else if (verb == ":save") {
    if (ws.size() != 1) fail("syntax", ":save file");
    std::ofstream f(ws[0]);
    if (!f) fail("io", "cannot write " + ws[0]);
    f << transcript();
    out.output = "saved " + std::to_string(commands_.size()) + " steps to " + ws[0] + "\n";
  } else if (verb == ":load") {
    if (ws.size() != 1) fail("syntax", ":load file");
    std::ifstream f(ws[0]);
    if (!f) fail("io", "cannot read " + ws[0]);
    std::stringstream buf;
    buf << f.rdbuf();
    out = run_script(buf.str());
    if (!out.ok) fail(out.error_code, out.error);
  } else if (verb == ":help") {
    out.output = kHelp;
  } else if (verb == ":quit" || verb == ":q") {
    out.quit = true;
  } else {
    fail("unknown-command", "'" + verb + "' (try :help)");
  }
  return out;
}

CommandResult Session::check() {
  CommandResult out;
  ProofState st = state();
  std::string why;
  bool qr = demand("quasi-reductive", &why);
  out.output += "quasi-reductivity: " + why + "\n";
  std::vector<Rule> rules = sys_.rules();
  std::vector<std::size_t> open;
  for (std::size_t i = 0; i < st.ledger.size(); ++i) {
    Requirement& r = st.ledger[i];
    if (r.status != ReqStatus::Pending && r.status != ReqStatus::Failed) continue;
    Abstraction a = abstract_to_rule(r);
    if (!a.ok) {
      r.status = ReqStatus::Failed;
      out.output += r.id + ": cannot be turned into a rule (" + a.reason + ")\n";
      continue;
    }
    rules.push_back(a.rule);
    open.push_back(i);
  }
  bool trusted = engine_.options().trust_termination;
  TerminationResult t;
  if (trusted) {
    t.status = TerminationResult::Status::Proved;
    t.certificate = "trusted";
  } else {
    t = check_termination(rules, smt_, termination_options());
  }
  std::string names = "R";
  for (std::size_t i : open) names += (names == "R" ? " ∪ {" : ", ") + st.ledger[i].id;
  if (!open.empty()) names += "}";
  if (t.status == TerminationResult::Status::Proved) {
    for (std::size_t i : open) st.ledger[i].status = trusted ? ReqStatus::Trusted : ReqStatus::Proved;
    certificate_ = t.certificate;
    out.output += "termination of " + names + ": " + (trusted ? "trusted" : "proved by " + t.certificate) + "\n";
    if (open.empty()) assumptions_.emplace("termination", trusted ? "trusted" : "proved (" + t.certificate + ")");
  } else {
    for (std::size_t i : open) st.ledger[i].status = ReqStatus::Failed;
    out.output += "termination of " + names + ": not proved\n";
    for (const auto& l : t.log) out.output += "  " + l + "\n";
    out.error_code = "termination-unproved";
  }
  // Ledger updates are bookkeeping, not deduction steps.
  history_.back().state = st;
  checked_ledger_ = t.status == TerminationResult::Status::Proved && qr ? "ok" : "";
  out.output += render_ledger();
  Verdict v = verdict();
  if (v == Verdict::Proved) {
    out.output += gc_mode_ ? (trusted || engine_.options().trust_quasi_reductive ? "ground confluence: conditional\n"
                                                                                 : "ground confluence: proved\n")
                           : "QED\n";
    if (gc_mode_) assumptions_["ground-confluence"] = "proved";
  }
  return out;
}

std::string Session::render(bool full) const {
  const ProofState& st = state();
  std::string out;
  if (st.refuted) return "⊥: " + st.refutation + "\n";
  if (st.eqs.empty()) out += "no equations left\n";
  for (const auto& e : st.eqs) out += show(e, full) + "\n";
  out += std::string("complete: ") + (complete() ? "yes" : "no") + "\n";
  return out;
}

std::string Session::render_ledger() const {
  std::string out;
  for (const auto& r : state().ledger) out += show(r) + "\n";
  if (state().ledger.empty()) out += "no ordering requirements\n";
  return out;
}

std::string Session::transcript() const {
  std::string out = "# bri transcript\n";
  if (!opts_.system_name.empty()) out += "# system: " + opts_.system_name + "\n";
  if (gc_mode_) out += "# mode: ground confluence (" + std::to_string(peaks_.size()) + " critical peaks)\n";
  for (const auto& [k, v] : assumptions_) out += "# assume " + k + ": " + v + "\n";
  for (const auto& c : commands_) out += c + "\n";
  return out;
}

namespace {

using nlohmann::json;

json term_json(const std::optional<TermP>& t) { return t ? json(show(*t)) : json(nullptr); }

json subterms_json(const TermP& t) {
  json a = json::array();
  for (const auto& p : positions(t)) a.push_back({{"position", to_string(p)}, {"term", show(subterm_at(t, p))}});
  return a;
}

std::string rel_name(BoundRel r) {
  return r == BoundRel::Infinite ? "none" : r == BoundRel::Equal ? "equal" : "strict";
}

}  // namespace

std::string Session::state_json() const {
  const ProofState& st = state();
  json eqs = json::array();
  for (const auto& e : st.eqs) {
    eqs.push_back({{"id", e.id},
                   {"lbound", term_json(e.lbound)},
                   {"lhs", show(e.lhs)},
                   {"rhs", show(e.rhs)},
                   {"rbound", term_json(e.rbound)},
                   {"constraint", show(e.constraint)},
                   {"left_bound", rel_name(e.lrel)},
                   {"right_bound", rel_name(e.rrel)},
                   {"left_marker", e.lrel == BoundRel::Equal},
                   {"right_marker", e.rrel == BoundRel::Equal},
                   {"text", show(e, false)},
                   {"full", show(e, true)},
                   {"left_subterms", subterms_json(e.lhs)},
                   {"right_subterms", subterms_json(e.rhs)}});
  }
  json hyps = json::array();
  for (const auto& h : st.hyps)
    hyps.push_back({{"id", h.id}, {"lhs", show(h.lhs)}, {"rhs", show(h.rhs)}, {"constraint", show(h.constraint)}});
  json ledger = json::array();
  for (const auto& r : st.ledger)
    ledger.push_back({{"id", r.id},
                      {"left", term_json(r.left)},
                      {"right", show(r.right)},
                      {"constraint", show(r.constraint)},
                      {"strict", r.strict},
                      {"status", to_string(r.status)},
                      {"step", r.step},
                      {"note", r.note}});
  json j = {{"step", st.step},
            {"equations", eqs},
            {"hypotheses", hyps},
            {"ledger", ledger},
            {"complete", complete()},
            {"refuted", st.refuted},
            {"verdict", to_string(verdict())},
            {"transcript", commands_}};
  if (st.refuted) j["refutation"] = st.refutation;
  return j.dump();
}

std::string Session::hello_json() const {
  json j = {{"protocol", "bri-session/1"}, {"system", opts_.system_name}, {"state", json::parse(state_json())}};
  return j.dump();
}

std::string Session::handle_json(const std::string& line, bool* quit) {
  json resp;
  json req;
  try {
    req = json::parse(line);
  } catch (const json::parse_error& e) {
    resp = {{"id", nullptr}, {"ok", false}, {"error", {{"code", "malformed-request"}, {"detail", e.what()}}}};
    return resp.dump();
  }
  resp["id"] = req.contains("id") ? req["id"] : json(nullptr);
  if (!req.is_object() || !req.contains("command") || !req["command"].is_string()) {
    resp["ok"] = false;
    resp["error"] = {{"code", "malformed-request"}, {"detail", "expected {\"id\": ..., \"command\": \"...\"}"}};
    return resp.dump();
  }
  CommandResult r = execute(req["command"].get<std::string>());
  resp["ok"] = r.ok;
  resp["output"] = r.output;
  if (!r.ok) resp["error"] = {{"code", r.error_code}, {"detail", r.error}};
  resp["state"] = json::parse(state_json());
  if (req.value("applicability", false)) {
    json app = json::array();
    const ProofState& st = state();
    for (const auto& e : st.eqs) {
      for (Side side : {Side::Left, Side::Right}) {
        const TermP& t = e.side(side);
        for (const auto& p : positions(t)) {
          TermP u = subterm_at(t, p);
          if (u->var_head()) continue;
          std::vector<const Rule*> cands;
          for (std::size_t i : sys_.rule_indices(u->symbol()))
            if (sys_.rules()[i].lhs->nargs() == u->nargs()) cands.push_back(&sys_.rules()[i]);
          for (const Rule* rule : cands) {
            if (!constrained_instance(*rule, u, e.constraint, smt_)) continue;
            app.push_back({{"equation", e.id},
                           {"side", to_string(side)},
                           {"position", to_string(p)},
                           {"rule", rule->name},
                           {"command", "simplify " + std::to_string(e.id) + " " + to_string(side) + " " +
                                           to_string(p) + " " + rule->name}});
          }
        }
      }
    }
    resp["applicable"] = app;
  }
  if (quit) *quit = r.quit;
  return resp.dump();
}

}  // namespace bri
