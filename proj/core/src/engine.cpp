#include "bri/engine.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

#include "bri/error.hpp"
#include "bri/print.hpp"
#include "bri/theory.hpp"

namespace bri {

VarSet EqContext::vars() const {
  VarSet out;
  if (lbound) collect_vars(*lbound, out);
  collect_vars(lhs, out);
  collect_vars(rhs, out);
  if (rbound) collect_vars(*rbound, out);
  collect_vars(constraint, out);
  return out;
}

const EqContext* ProofState::find(int id) const {
  for (const auto& e : eqs)
    if (e.id == id) return &e;
  return nullptr;
}

const Hypothesis* ProofState::find_hyp(const std::string& id) const {
  for (const auto& h : hyps)
    if (h.id == id) return &h;
  return nullptr;
}

int ProofState::pending_requirements() const {
  int n = 0;
  for (const auto& r : ledger)
    if (r.status == ReqStatus::Pending || r.status == ReqStatus::Failed) ++n;
  return n;
}

std::string to_string(Side s) { return s == Side::Left ? "left" : "right"; }

namespace {

std::string marker(BoundRel r) {
  switch (r) {
    case BoundRel::Infinite:
      return "•";
    case BoundRel::Equal:
      return "⊙";
    case BoundRel::Strict:
      return "▷";
  }
  return "?";
}

}  // namespace

std::string show(const EqContext& e, bool full) {
  std::string s = "E" + std::to_string(e.id) + ": ";
  if (full)
    s += "⟨" + show_bound(e.lbound) + "⟩ " + show(e.lhs) + " ≈ " + show(e.rhs) + " ⟨" + show_bound(e.rbound) + "⟩";
  else
    s += marker(e.lrel) + " " + show(e.lhs) + " ≈ " + show(e.rhs) + " " + marker(e.rrel);
  return s + " [" + show(e.constraint) + "]";
}

std::string show(const Hypothesis& h) {
  return h.id + ": " + show(h.lhs) + " ≈ " + show(h.rhs) + " [" + show(h.constraint) + "]";
}

bool same_content(const EqContext& a, const EqContext& b) {
  auto same_opt = [](const std::optional<TermP>& x, const std::optional<TermP>& y) {
    return x.has_value() == y.has_value() && (!x || term_equal(*x, *y));
  };
  return same_opt(a.lbound, b.lbound) && same_opt(a.rbound, b.rbound) && term_equal(a.lhs, b.lhs) &&
         term_equal(a.rhs, b.rhs) && term_equal(a.constraint, b.constraint);
}

namespace {

[[noreturn]] void fail(const std::string& code, const std::string& detail) { throw Error(code, detail); }

const EqContext& get(const ProofState& st, int id) {
  const EqContext* e = st.find(id);
  if (!e) fail("unknown-equation", "there is no equation E" + std::to_string(id));
  return *e;
}

std::vector<int> ids_for(const ProofState& st, std::optional<int> id) {
  if (id) {
    get(st, *id);
    return {*id};
  }
  std::vector<int> out;
  for (const auto& e : st.eqs) out.push_back(e.id);
  return out;
}

std::vector<Side> sides_for(std::optional<Side> s) {
  if (s) return {*s};
  return {Side::Left, Side::Right};
}

// Replaces context id by the given contexts (which carry their final ids).
void replace(ProofState& st, int id, std::vector<EqContext> with) {
  st.eqs.erase(std::remove_if(st.eqs.begin(), st.eqs.end(), [&](const EqContext& e) { return e.id == id; }),
               st.eqs.end());
  for (auto& e : with) st.eqs.push_back(std::move(e));
  std::sort(st.eqs.begin(), st.eqs.end(), [](const EqContext& a, const EqContext& b) { return a.id < b.id; });
}

TermP& side_ref(EqContext& e, Side s) { return s == Side::Left ? e.lhs : e.rhs; }

// Side s now holds t, which is strictly below the old side; just explains why.
void set_side(EqContext& e, Side s, const TermP& t, const std::string& just) {
  side_ref(e, s) = t;
  const auto& b = e.bound(s);
  BoundRel& rel = s == Side::Left ? e.lrel : e.rrel;
  std::string& j = s == Side::Left ? e.ljust : e.rjust;
  if (!b) {
    rel = BoundRel::Infinite;
    j.clear();
  } else if (term_equal(*b, t)) {
    rel = BoundRel::Equal;
    j.clear();
  } else {
    rel = BoundRel::Strict;
    j = just;
  }
}

EqContext fresh_context(int id, const TermP& s, const TermP& t, const TermP& psi, bool bounded) {
  EqContext e;
  e.id = id;
  e.lhs = s;
  e.rhs = t;
  e.constraint = psi;
  if (bounded) {
    e.lbound = s;
    e.rbound = t;
    e.lrel = e.rrel = BoundRel::Equal;
  } else {
    e.lrel = e.rrel = BoundRel::Infinite;
  }
  return e;
}

StepResult start(const ProofState& st, const std::string& rule) {
  StepResult r;
  r.state = st;
  r.state.step = st.step + 1;
  r.rule = rule;
  return r;
}

bool error_rank_better(const std::string& code, const std::optional<Error>& best) {
  auto rank = [](const std::string& c) { return c == "no-match" ? 1 : c == "unknown-rule" ? 0 : 2; };
  return !best || rank(code) > rank(best->code());
}

std::string pos_arg(const Position& p) { return to_string(p); }

std::string subst_arg(const Subst& s) { return s.empty() ? "" : " " + show(s); }

// Rules that can rewrite u at its root: the user rules of its head, then the
// calculation rule of a theory head.
std::vector<const Rule*> candidate_rules(const TermP& u, const RewriteSystem& sys) {
  std::vector<const Rule*> out;
  if (u->var_head()) return out;
  for (std::size_t i : sys.rule_indices(u->symbol())) {
    const Rule& r = sys.rules()[i];
    if (r.lhs->nargs() == u->nargs()) out.push_back(&r);
  }
  if (u->symbol()->kind == SymKind::Theory && static_cast<int>(u->nargs()) == theory::calc_arity(u->symbol()))
    out.push_back(&calc_rule_for(u->symbol()));
  return out;
}

const Rule* rule_by_name(const std::string& name, const TermP& u, const RewriteSystem& sys) {
  if (name == "calc") {
    if (u->var_head() || u->symbol()->kind != SymKind::Theory) return nullptr;
    return &calc_rule_for(u->symbol());
  }
  for (const auto& r : sys.rules())
    if (r.name == name) return &r;
  fail("unknown-rule", "there is no rule " + name);
}

std::string rule_name(const Rule& r) { return r.origin == RuleOrigin::Calc ? "calc" : r.name; }

// Terms s, t agree everywhere except at p, where both have a subterm.
bool agree_outside(const TermP& s, const TermP& t, const Position& p) {
  if (!is_position_of(s, p) || !is_position_of(t, p)) return false;
  TermP a = subterm_at(s, p), b = subterm_at(t, p);
  if (!same_type(a->type(), b->type())) return false;
  TermP hole = mk_var(fresh_variable("_", a->type()));
  return term_equal(replace_at(s, p, hole), replace_at(t, p, hole));
}

// Renames the variables of a rule-like triple apart, choosing names that do
// not clash with taken.
Subst rename_apart(const std::vector<TermP>& parts, std::set<std::string>& taken) {
  VarSet vs;
  for (const auto& p : parts) collect_vars(p, vs);
  Subst ren;
  for (const auto& [id, v] : vs) {
    std::string name = fresh_name(v.name, taken);
    taken.insert(name);
    ren.bind(v, mk_var(fresh_variable(name, v.type)));
  }
  return ren;
}

}  // namespace

Engine::Engine(const RewriteSystem& sys, SmtSolver& smt, EngineOptions opts) : sys_(sys), smt_(smt), opts_(opts) {}

ProofState Engine::initial(const std::vector<Equation>& goals) const {
  ProofState st;
  for (const auto& g : goals) {
    if (!is_constraint(g.constraint)) fail("ill-formed-constraint", show(g.constraint) + " is not a constraint");
    if (!same_type(g.lhs->type(), g.rhs->type()))
      fail("type-mismatch", "the sides of " + show(g) + " have different types");
    st.eqs.push_back(fresh_context(st.next_eq++, g.lhs, g.rhs, g.constraint, false));
  }
  return st;
}

std::set<std::string> Engine::taken_names(const EqContext& e) const {
  std::set<std::string> taken = var_names(e.vars());
  for (const auto& f : sys_.symbols()) taken.insert(f->name);
  return taken;
}

Variable Engine::fresh_var_for(const EqContext&, const std::string& base, const TypeP& type,
                               std::set<std::string>& taken) const {
  std::string name = fresh_name(base, taken);
  taken.insert(name);
  return fresh_variable(name, type);
}

void Engine::add_requirement(ProofState& st, const std::optional<TermP>& left, const TermP& right,
                             const TermP& psi, bool strict, const std::string& note,
                             std::vector<std::string>& notes) const {
  for (const auto& r : st.ledger) {
    if (r.status != ReqStatus::Pending || r.strict != strict || !r.left || !left) continue;
    Subst g;
    if (!match_into(*r.left, *left, g) || !match_into(r.right, right, g)) continue;
    if (entails_under(smt_, psi, g, r.constraint).ok) {
      notes.push_back("requirement " + show_bound(left) + (strict ? " ≻ " : " ⪰ ") + show(right) +
                      " is an instance of " + r.id);
      return;
    }
  }
  Requirement r;
  r.id = "REQ" + std::to_string(st.next_req++);
  r.left = left;
  r.right = right;
  r.constraint = psi;
  r.strict = strict;
  r.status = ReqStatus::Pending;
  r.step = st.step;
  r.note = note;
  notes.push_back("new requirement " + show(r));
  st.ledger.push_back(std::move(r));
}

bool Engine::require(ProofState& st, const std::optional<TermP>& left, const TermP& right, const TermP& psi,
                     const std::string& what, std::vector<std::string>& notes, std::string& refutation) const {
  DischargeResult d = try_discharge(left, right, psi, true, sys_, smt_);
  if (d.verdict == Discharge::Refuted) {
    refutation = d.note;
    return false;
  }
  if (d.verdict == Discharge::Discharged) {
    if (left) {
      Requirement r;
      r.id = "s" + std::to_string(st.next_disc++);
      r.left = left;
      r.right = right;
      r.constraint = psi;
      r.status = ReqStatus::DischargedSyntactic;
      r.step = st.step;
      r.note = what + "; " + d.note;
      st.ledger.push_back(std::move(r));
    }
    return true;
  }
  add_requirement(st, left, right, psi, true, what, notes);
  return true;
}

StepResult Engine::simplify(const ProofState& st, const RewriteArgs& a) const {
  std::optional<Error> best;
  for (int id : ids_for(st, a.id)) {
    const EqContext& e = get(st, id);
    for (Side side : sides_for(a.side)) {
      const TermP& term = e.side(side);
      std::vector<Position> ps;
      if (a.pos) {
        if (!is_position_of(term, *a.pos))
          fail("invalid-position", to_string(*a.pos) + " is not a position of " + show(term));
        ps = {*a.pos};
      } else {
        ps = innermost_positions(term);
      }
      for (const auto& p : ps) {
        TermP u = subterm_at(term, p);
        std::vector<const Rule*> rules;
        if (a.name) {
          const Rule* r = rule_by_name(*a.name, u, sys_);
          if (!r) {
            if (error_rank_better("no-match", best))
              best = Error("no-match", *a.name + " does not apply to " + show(u));
            continue;
          }
          rules = {r};
        } else {
          rules = candidate_rules(u, sys_);
        }
        for (const Rule* rule : rules) {
          Entailment why;
          auto delta = constrained_instance(*rule, u, e.constraint, smt_, a.subst, &why);
          if (!delta) {
            if (error_rank_better(why.code, best)) best = Error(why.code, why.detail);
            continue;
          }
          StepResult r = start(st, "simplify");
          EqContext ne = e;
          set_side(ne, side, replace_at(term, p, substitute(rule->rhs, *delta)), rule_name(*rule) + " step");
          replace(r.state, id, {ne});
          Subst shown = restrict(*delta, vars_of(rule->lhs));
          for (const auto& [vid, entry] : delta->map())
            if (!shown.contains(vid)) shown.bind(entry.first, entry.second);
          r.args = std::to_string(id) + " " + to_string(side) + " " + pos_arg(p) + " " + rule_name(*rule);
          if (!a.subst.empty()) r.args += subst_arg(a.subst);
          return r;
        }
      }
    }
  }
  if (best) throw *best;
  fail("no-match", "no rule applies");
}

StepResult Engine::calc(const ProofState& st, std::optional<int> id, std::optional<Side> side,
                        const std::vector<Position>& positions) const {
  for (int cid : ids_for(st, id)) {
    const EqContext& e = get(st, cid);
    EqContext ne = e;
    std::set<std::string> taken = taken_names(e);
    std::vector<TermP> defs;
    TermP psi = e.constraint;
    bool changed = false;
    std::vector<std::string> notes;
    auto abstract_at = [&](Side s, const Position& p) {
      TermP term = side_ref(ne, s);
      TermP u = subterm_at(term, p);
      if (!is_theory_term(u))
        fail("not-theory-subterm", show(u) + " is not a first-order theory term");
      if (u->is_var()) fail("not-theory-subterm", show(u) + " is already a variable");
      if (is_value(u) && ne.rel(s) == BoundRel::Equal)
        fail("calc-breaks-bound", "replacing the value " + show(u) + " would leave the " + to_string(s) +
                                      " side without a strict bound");
      TermP rep;
      if (is_value(u)) {
        rep = mk_var(fresh_var_for(e, "x", u->type(), taken));
        defs.push_back(mk_eq(rep, u));
        psi = mk_and(psi, defs.back());
        notes.push_back("warning: " + show(u) + " is already a value; abstracting it only renames it");
      } else if (is_ground(u)) {
        rep = evaluate(u);
      } else if (auto x = defined_as(psi, u)) {
        rep = mk_var(*x);
      } else {
        auto vs = vars_in_order(u);
        rep = mk_var(fresh_var_for(e, vs.empty() ? "x" : vs.front().name, u->type(), taken));
        defs.push_back(mk_eq(rep, u));
        psi = mk_and(psi, defs.back());
      }
      set_side(ne, s, replace_at(term, p, rep), "calc");
      changed = true;
    };
    if (!positions.empty()) {
      if (!side) fail("missing-side", "calc at a position needs a side");
      for (const auto& p : positions) {
        if (!is_position_of(side_ref(ne, *side), p))
          fail("invalid-position", to_string(p) + " is not a position of " + show(side_ref(ne, *side)));
        abstract_at(*side, p);
      }
    } else {
      for (Side s : sides_for(side)) {
        // maximal non-trivial theory subterms, outermost first
        std::vector<Position> todo;
        std::function<void(const TermP&, Position)> walk = [&](const TermP& t, Position here) {
          if (is_theory_term(t) && !t->is_var() && !is_value(t)) {
            todo.push_back(here);
            return;
          }
          for (std::size_t i = 0; i < t->nargs(); ++i) {
            Position q = here;
            q.path.push_back(static_cast<int>(i + 1));
            walk(t->args()[i], q);
          }
        };
        walk(side_ref(ne, s), root_position());
        for (const auto& p : todo) abstract_at(s, p);
      }
    }
    if (!changed) {
      if (id) fail("not-theory-subterm", "E" + std::to_string(cid) + " has no theory subterm to calculate");
      continue;
    }
    ne.constraint = psi;
    StepResult r = start(st, "calc");
    replace(r.state, cid, {ne});
    r.args = std::to_string(cid);
    if (side) r.args += " " + to_string(*side);
    for (const auto& p : positions) r.args += " " + to_string(p);
    r.notes = std::move(notes);
    return r;
  }
  fail("not-theory-subterm", "no equation has a theory subterm to calculate");
}

StepResult Engine::case_constraints(const ProofState& st, int id, const std::vector<TermP>& splits) const {
  const EqContext& e = get(st, id);
  if (splits.empty()) fail("empty-case", "case needs at least one constraint");
  VarSet allowed = vars_of(e.constraint);
  collect_vars(e.lhs, allowed);
  collect_vars(e.rhs, allowed);
  for (const auto& phi : splits) {
    if (!is_constraint(phi)) fail("ill-formed-constraint", show(phi) + " is not a constraint");
    for (const auto& [vid, v] : vars_of(phi))
      if (!allowed.count(vid)) fail("case-variable-scope", v.name + " does not occur in E" + std::to_string(id));
  }
  ValidityResult vr = smt_.implies(e.constraint, mk_or(splits));
  if (vr.validity != Validity::Valid) {
    std::string d = "the cases do not cover [" + show(e.constraint) + "]";
    if (vr.validity == Validity::Invalid) d += "; uncovered: " + show(vr.countermodel);
    else d += " (" + vr.reason + ")";
    fail("coverset-not-verified", d);
  }
  StepResult r = start(st, "case");
  std::vector<EqContext> kids;
  for (const auto& phi : splits) {
    EqContext k = e;
    k.id = r.state.next_eq++;
    k.constraint = mk_and(e.constraint, phi);
    kids.push_back(std::move(k));
  }
  replace(r.state, id, std::move(kids));
  r.args = std::to_string(id);
  for (const auto& phi : splits) r.args += " [" + show(phi) + "]";
  return r;
}

StepResult Engine::case_variable(const ProofState& st, int id, const Variable& x) const {
  const EqContext& e = get(st, id);
  VarSet sides = vars_of(e.lhs);
  collect_vars(e.rhs, sides);
  if (!sides.count(x.id)) fail("unknown-variable", x.name + " does not occur in the sides of E" + std::to_string(id));
  if (is_theory_base(x.type))
    fail("case-needs-constraints", x.name + " has a theory sort; split on constraints instead, e.g. case " +
                                       std::to_string(id) + " [" + x.name + " <= 0] [" + x.name + " > 0]");
  std::vector<SymbolP> heads = sys_.symbols();
  for (const auto& f : theory::calc_symbols()) heads.push_back(f);
  StepResult r = start(st, "case");
  std::vector<EqContext> kids;
  for (const auto& f : heads) {
    int n = arrow_count(f->type);
    auto ar = sys_.arity(f);
    for (int j = 0; j <= n; ++j) {
      if (ar && j >= *ar) break;
      TypeP rt = result_after(f->type, j);
      if (!same_type(rt, x.type)) continue;
      std::set<std::string> taken = taken_names(e);
      taken.erase(x.name);
      std::vector<TermP> args;
      auto ats = arg_types(f->type);
      for (int i = 0; i < j; ++i) {
        const TypeP& at = ats[i];
        std::string base;
        if (same_type(at, x.type)) base = x.name;
        else if (at->is_arrow()) base = "g";
        else if (at->sort == "int") base = "n";
        else if (at->sort == "bool") base = "b";
        else base = std::string(1, static_cast<char>(std::tolower(static_cast<unsigned char>(at->sort[0]))));
        args.push_back(mk_var(fresh_var_for(e, base, at, taken)));
      }
      Subst d;
      d.bind(x, mk_app(f, args));
      EqContext k;
      k.id = r.state.next_eq++;
      k.lhs = substitute(e.lhs, d);
      k.rhs = substitute(e.rhs, d);
      k.constraint = e.constraint;
      if (e.lbound) k.lbound = substitute(*e.lbound, d);
      if (e.rbound) k.rbound = substitute(*e.rbound, d);
      k.lrel = e.lrel;
      k.rrel = e.rrel;
      k.ljust = e.ljust;
      k.rjust = e.rjust;
      kids.push_back(std::move(k));
    }
  }
  if (kids.empty()) fail("no-constructors", "no ground semi-constructor has the type of " + x.name);
  replace(r.state, id, std::move(kids));
  r.args = std::to_string(id) + " " + x.name;
  return r;
}

StepResult Engine::del(const ProofState& st, std::optional<int> id) const {
  for (int cid : ids_for(st, id)) {
    const EqContext& e = get(st, cid);
    bool ok = term_equal(e.lhs, e.rhs);
    if (!ok && smt_.check_sat(e.constraint).verdict == SmtVerdict::Unsat) ok = true;
    if (!ok) continue;
    StepResult r = start(st, "delete");
    replace(r.state, cid, {});
    r.args = std::to_string(cid);
    return r;
  }
  if (id) fail("not-deletable", "the sides of E" + std::to_string(*id) + " differ and its constraint is satisfiable");
  fail("not-deletable", "no equation can be deleted");
}

StepResult Engine::eq_delete(const ProofState& st, std::optional<int> id) const {
  std::string why = "no equation can be closed by equating constraint variables";
  for (int cid : ids_for(st, id)) {
    const EqContext& e = get(st, cid);
    auto sigma = unify(e.lhs, e.rhs);
    if (!sigma) {
      why = "the sides of E" + std::to_string(cid) + " do not unify";
      continue;
    }
    std::vector<TermP> eqs;
    bool ok = true;
    for (const auto& [vid, entry] : sigma->map()) {
      const TermP& u = entry.second;
      if (!is_theory_base(entry.first.type) || !(u->is_var() || is_value(u))) {
        ok = false;
        why = "E" + std::to_string(cid) + " needs " + entry.first.name + " := " + show(u) +
              ", which is not an equation between constraint terms";
        break;
      }
      eqs.push_back(mk_eq(mk_var(entry.first), u));
    }
    if (!ok) continue;
    Entailment en = entails_under(smt_, e.constraint, {}, mk_and(eqs));
    if (!en.ok) {
      why = en.detail;
      continue;
    }
    StepResult r = start(st, "eq-delete");
    replace(r.state, cid, {});
    r.args = std::to_string(cid);
    if (!sigma->empty()) r.notes.push_back("equated " + show(*sigma));
    return r;
  }
  fail("not-applicable", why);
}

StepResult Engine::induct(const ProofState& st, std::optional<int> id) const {
  if (st.eqs.empty()) fail("no-equation", "there are no equations left");
  int cid = id ? *id : st.eqs.front().id;
  const EqContext& e = get(st, cid);
  StepResult r = start(st, "induct");
  std::set<std::string> none;
  VarSet vs = vars_of(e.lhs);
  collect_vars(e.rhs, vs);
  collect_vars(e.constraint, vs);
  Subst ren;
  for (const auto& [vid, v] : vs) ren.bind(v, mk_var(fresh_variable(v.name, v.type)));
  Hypothesis h{"H" + std::to_string(r.state.next_hyp++), substitute(e.lhs, ren), substitute(e.rhs, ren),
               substitute(e.constraint, ren)};
  r.notes.push_back("new hypothesis " + show(h));
  r.state.hyps.push_back(std::move(h));
  replace(r.state, cid, {fresh_context(cid, e.lhs, e.rhs, e.constraint, true)});
  r.args = std::to_string(cid);
  return r;
}

namespace {

struct RuleLike {
  TermP l, r, phi;
};

RuleLike oriented(const Hypothesis& h, Direction d) {
  return d == Direction::LeftToRight ? RuleLike{h.lhs, h.rhs, h.constraint} : RuleLike{h.rhs, h.lhs, h.constraint};
}

std::string dir_arg(Direction d) { return d == Direction::LeftToRight ? "ltr" : "rtl"; }

std::vector<Direction> dirs_for(std::optional<Direction> d) {
  if (d) return {*d};
  return {Direction::LeftToRight, Direction::RightToLeft};
}

}  // namespace

StepResult Engine::hypothesis(const ProofState& st, const RewriteArgs& a) const {
  std::optional<Error> best;
  std::vector<const Hypothesis*> hs;
  if (a.name) {
    const Hypothesis* h = st.find_hyp(*a.name);
    if (!h) fail("unknown-hypothesis", "there is no hypothesis " + *a.name);
    hs = {h};
  } else {
    for (const auto& h : st.hyps) hs.push_back(&h);
  }
  for (int id : ids_for(st, a.id)) {
    const EqContext& e = get(st, id);
    for (Side side : sides_for(a.side)) {
      const TermP& term = e.side(side);
      std::vector<Position> ps;
      if (a.pos) {
        if (!is_position_of(term, *a.pos))
          fail("invalid-position", to_string(*a.pos) + " is not a position of " + show(term));
        ps = {*a.pos};
      } else {
        ps = positions(term);
      }
      for (const auto& p : ps) {
        TermP u = subterm_at(term, p);
        for (const Hypothesis* h : hs) {
          for (Direction d : dirs_for(a.dir)) {
            RuleLike rl = oriented(*h, d);
            Rule rule{h->id, rl.l, rl.r, rl.phi, RuleOrigin::User};
            Entailment why;
            auto delta = constrained_instance(rule, u, e.constraint, smt_, a.subst, &why);
            if (!delta) {
              if (error_rank_better(why.code, best)) best = Error(why.code, why.detail);
              continue;
            }
            TermP ldelta = substitute(rl.l, *delta);
            TermP rdelta = substitute(rl.r, *delta);
            TermP next = replace_at(term, p, rdelta);
            const auto& bound = e.bound(side);
            StepResult r = start(st, "hypothesis");
            std::string what = "hypothesis " + h->id + " at E" + std::to_string(id) + " " + to_string(side) + " " +
                               to_string(p);
            std::string refutation;
            bool ok = true;
            if (bound && p.is_root() && e.rel(side) != BoundRel::Strict) {
              ok = false;
              refutation = "the bound " + show(*bound) + " is not strictly above the redex " + show(ldelta);
            }
            if (ok && bound && !term_equal(*bound, next))
              ok = require(r.state, bound, next, e.constraint, what, r.notes, refutation);
            if (ok && bound && term_equal(*bound, next) && p.is_root()) {
              ok = false;
              refutation = "the result " + show(next) + " equals the bound, but the rewritten term " +
                           show(rdelta) + " must be strictly below it";
            }
            if (!ok) {
              if (error_rank_better("ordering-refuted", best)) best = Error("ordering-refuted", refutation);
              continue;
            }
            if (!a.allow_pending && r.state.pending_requirements() > st.pending_requirements()) continue;
            EqContext ne = e;
            set_side(ne, side, next, what);
            replace(r.state, id, {ne});
            r.args = std::to_string(id) + " " + to_string(side) + " " + to_string(p) + " " + h->id + " " +
                     dir_arg(d) + subst_arg(a.subst);
            return r;
          }
        }
      }
    }
  }
  if (best) throw *best;
  fail("no-match", "no induction hypothesis applies");
}

StepResult Engine::hdelete(const ProofState& st, const RewriteArgs& a) const {
  std::optional<Error> best;
  std::vector<const Hypothesis*> hs;
  if (a.name) {
    const Hypothesis* h = st.find_hyp(*a.name);
    if (!h) fail("unknown-hypothesis", "there is no hypothesis " + *a.name);
    hs = {h};
  } else {
    for (const auto& h : st.hyps) hs.push_back(&h);
  }
  for (int id : ids_for(st, a.id)) {
    const EqContext& e = get(st, id);
    std::vector<Position> ps;
    if (a.pos) ps = {*a.pos};
    else ps = positions(e.lhs);
    for (const auto& p : ps) {
      if (!agree_outside(e.lhs, e.rhs, p)) {
        if (a.pos && error_rank_better("no-match", best))
          best = Error("no-match", "the sides of E" + std::to_string(id) + " differ outside " + to_string(p));
        continue;
      }
      TermP su = subterm_at(e.lhs, p), tu = subterm_at(e.rhs, p);
      for (const Hypothesis* h : hs) {
        for (Direction d : dirs_for(a.dir)) {
          RuleLike rl = oriented(*h, d);
          Subst g = a.subst;
          if (!match_into(rl.l, su, g) || !match_into(rl.r, tu, g)) {
            if (error_rank_better("no-match", best))
              best = Error("no-match", h->id + " " + dir_arg(d) + " does not match " + show(su) + " ≈ " + show(tu));
            continue;
          }
          Entailment why;
          auto delta = constrained_instance(Rule{h->id, rl.l, rl.l, rl.phi, RuleOrigin::User}, su, e.constraint,
                                            smt_, g, &why);
          if (!delta) {
            if (error_rank_better(why.code, best)) best = Error(why.code, why.detail);
            continue;
          }
          TermP ld = substitute(rl.l, *delta), rd = substitute(rl.r, *delta);
          auto side_ok = [&](Side s) {
            return !e.bound(s) || !p.is_root() || e.rel(s) == BoundRel::Strict;
          };
          StepResult r = start(st, "hdelete");
          std::string what = "hdelete " + h->id + " on E" + std::to_string(id) + " at " + to_string(p);
          bool ok = side_ok(Side::Left) || side_ok(Side::Right);
          if (!ok) {
            DischargeResult dl = try_discharge(e.lbound, ld, e.constraint, true, sys_, smt_);
            DischargeResult dr = try_discharge(e.rbound, rd, e.constraint, true, sys_, smt_);
            if (dl.verdict == Discharge::Discharged || dr.verdict == Discharge::Discharged) {
              ok = true;
            } else if (dl.verdict == Discharge::Refuted && dr.verdict == Discharge::Refuted) {
              if (error_rank_better("ordering-refuted", best))
                best = Error("ordering-refuted", "neither bound is strictly above the hypothesis instance: " +
                                                     dl.note + "; " + dr.note);
              continue;
            } else if (a.allow_pending) {
              bool use_left = dl.verdict == Discharge::Pending;
              if (use_left) add_requirement(r.state, e.lbound, ld, e.constraint, true, what, r.notes);
              else add_requirement(r.state, e.rbound, rd, e.constraint, true, what, r.notes);
              ok = true;
            } else {
              continue;
            }
          }
          replace(r.state, id, {});
          r.args = std::to_string(id) + " " + h->id + " " + dir_arg(d) + " " + to_string(p) + subst_arg(a.subst);
          return r;
        }
      }
    }
  }
  if (best) throw *best;
  fail("no-match", "no induction hypothesis closes an equation");
}

StepResult Engine::generalize(const ProofState& st, int id, const Equation& g) const {
  const EqContext& e = get(st, id);
  if (!is_constraint(g.constraint)) fail("ill-formed-constraint", show(g.constraint) + " is not a constraint");
  Subst sigma;
  if (!match_into(g.lhs, e.lhs, sigma) || !match_into(g.rhs, e.rhs, sigma))
    fail("verification-failed", show(g) + " does not have E" + std::to_string(id) + " as an instance");
  Entailment en = entails_under(smt_, e.constraint, sigma, g.constraint);
  if (!en.ok) fail(en.code, en.detail);
  StepResult r = start(st, "generalize");
  r.complete_rule = false;
  replace(r.state, id, {fresh_context(id, g.lhs, g.rhs, g.constraint, true)});
  r.args = std::to_string(id) + " " + show(g.lhs) + " == " + show(g.rhs) + " [" + show(g.constraint) + "]";
  return r;
}

StepResult Engine::generalize_constraint(const ProofState& st, int id, const TermP& psi) const {
  const EqContext& e = get(st, id);
  if (!is_constraint(psi)) fail("ill-formed-constraint", show(psi) + " is not a constraint");
  Entailment en = entails_under(smt_, e.constraint, {}, psi);
  if (!en.ok) fail(en.code, en.detail);
  StepResult r = start(st, "generalize");
  r.complete_rule = false;
  replace(r.state, id, {fresh_context(id, e.lhs, e.rhs, psi, true)});
  r.args = std::to_string(id) + " [" + show(psi) + "]";
  return r;
}

StepResult Engine::alter_constraint(const ProofState& st, int id, const TermP& psi2) const {
  const EqContext& e = get(st, id);
  if (!is_constraint(psi2)) fail("ill-formed-constraint", show(psi2) + " is not a constraint");
  VarSet outside;
  if (e.lbound) collect_vars(*e.lbound, outside);
  collect_vars(e.lhs, outside);
  collect_vars(e.rhs, outside);
  if (e.rbound) collect_vars(*e.rbound, outside);
  // Fast path: psi2 extends psi with definitions of fresh variables.
  bool fast = true;
  {
    auto old = conjuncts(e.constraint);
    auto now = conjuncts(psi2);
    VarSet seen = vars_of(e.constraint);
    for (const auto& [k, v] : outside) seen.emplace(k, v);
    std::vector<bool> used(old.size(), false);
    for (const auto& c : now) {
      bool found = false;
      for (std::size_t i = 0; i < old.size() && !found; ++i)
        if (!used[i] && term_equal(old[i], c)) used[i] = found = true;
      if (found) continue;
      if (c->var_head() || c->nargs() != 2 || c->symbol()->name != "=" || !c->args()[0]->is_var()) {
        fast = false;
        break;
      }
      const Variable& x = c->args()[0]->variable();
      if (seen.count(x.id) || contains_var(c->args()[1], x.id)) {
        fast = false;
        break;
      }
      for (const auto& [k, v] : vars_of(c->args()[1]))
        if (!seen.count(k)) fast = false;
      seen.emplace(x.id, x);
    }
    if (std::find(used.begin(), used.end(), false) != used.end()) fast = false;
  }
  if (!fast) {
    auto binder = [&](const TermP& phi, std::string body) {
      std::string b;
      for (const auto& [k, v] : vars_of(phi))
        if (!outside.count(k)) b += "(" + smt_name(v) + " " + (v.type->sort == "int" ? "Int" : "Bool") + ")";
      return b.empty() ? body : "(exists (" + b + ") " + body + ")";
    };
    VarSet free;
    for (const auto& phi : {e.constraint, psi2})
      for (const auto& [k, v] : vars_of(phi))
        if (outside.count(k)) free.emplace(k, v);
    std::string q = "(not (= " + binder(e.constraint, to_smtlib(e.constraint)) + " " +
                    binder(psi2, to_smtlib(psi2)) + "))";
    SmtResult res = smt_.check_sat_raw(free, q);
    if (res.verdict == SmtVerdict::Sat)
      fail("verification-failed", "[" + show(psi2) + "] is not equivalent to [" + show(e.constraint) +
                                 "] on the variables of the equation; e.g. " + show(res.model));
    if (res.verdict == SmtVerdict::Unknown)
      fail("solver-unknown", "could not compare the constraints (" + res.reason + ")");
  }
  StepResult r = start(st, "alter");
  EqContext ne = e;
  ne.constraint = psi2;
  replace(r.state, id, {ne});
  r.args = std::to_string(id) + " [" + show(psi2) + "]";
  return r;
}

StepResult Engine::alter_subst(const ProofState& st, int id, const Subst& gamma) const {
  const EqContext& e = get(st, id);
  std::vector<TermP> eqs;
  for (const auto& [k, entry] : gamma.map()) {
    const TermP& u = entry.second;
    if (!is_theory_base(entry.first.type) || !(u->is_var() || is_value(u)))
      fail("bad-substitution", entry.first.name + " := " + show(u) +
                                   " must map a constraint variable to a variable or value");
    eqs.push_back(mk_eq(mk_var(entry.first), u));
  }
  Entailment en = entails_under(smt_, e.constraint, {}, mk_and(eqs));
  if (!en.ok) fail(en.code, en.detail);
  StepResult r = start(st, "alter");
  EqContext ne = e;
  ne.lhs = substitute(e.lhs, gamma);
  ne.rhs = substitute(e.rhs, gamma);
  if (e.lbound) ne.lbound = substitute(*e.lbound, gamma);
  if (e.rbound) ne.rbound = substitute(*e.rbound, gamma);
  replace(r.state, id, {ne});
  r.args = std::to_string(id) + " subst " + show(gamma);
  return r;
}

StepResult Engine::postulate(const ProofState& st, const Equation& g) const {
  if (!is_constraint(g.constraint)) fail("ill-formed-constraint", show(g.constraint) + " is not a constraint");
  StepResult r = start(st, "postulate");
  r.complete_rule = false;
  int id = r.state.next_eq++;
  replace(r.state, -1, {fresh_context(id, g.lhs, g.rhs, g.constraint, false)});
  r.args = show(g.lhs) + " == " + show(g.rhs) + " [" + show(g.constraint) + "]";
  r.notes.push_back("new equation E" + std::to_string(id));
  return r;
}

StepResult Engine::semiconstructor(const ProofState& st, std::optional<int> id) const {
  std::string code = "head-mismatch", why = "no equation has matching semi-constructor heads";
  for (int cid : ids_for(st, id)) {
    const EqContext& e = get(st, cid);
    const TermP &s = e.lhs, &t = e.rhs;
    std::size_t n = s->nargs();
    if (n == 0 || t->nargs() != n || s->var_head() != t->var_head()) continue;
    if (s->var_head() ? s->variable().id != t->variable().id : !same_symbol(s->symbol(), t->symbol())) continue;
    bool var = s->var_head();
    if (!var) {
      auto ar = sys_.arity(s->symbol());
      if (ar && static_cast<int>(n) >= *ar) {
        code = "arity-too-high";
        why = s->symbol()->name + " is applied to " + std::to_string(n) + " arguments, its arity is " +
              std::to_string(*ar);
        continue;
      }
    }
    bool fits = true;
    for (std::size_t i = 0; i < n; ++i)
      if (!same_type(s->args()[i]->type(), t->args()[i]->type())) fits = false;
    if (!fits) continue;
    StepResult r = start(st, "semiconstructor");
    r.complete_rule = !var;
    std::vector<EqContext> kids;
    for (std::size_t i = 0; i < n; ++i) {
      EqContext k = e;
      k.id = r.state.next_eq++;
      set_side(k, Side::Left, s->args()[i], "argument " + std::to_string(i + 1) + " of " + show(s));
      set_side(k, Side::Right, t->args()[i], "argument " + std::to_string(i + 1) + " of " + show(t));
      kids.push_back(std::move(k));
    }
    replace(r.state, cid, std::move(kids));
    r.args = std::to_string(cid);
    return r;
  }
  fail(code, why);
}

StepResult Engine::axiom(const ProofState& st, const RewriteArgs& a) const {
  std::vector<const Axiom*> axs;
  for (const auto& ax : sys_.axioms())
    if (!a.name || ax.eq.name == *a.name) axs.push_back(&ax);
  if (a.name && axs.empty()) fail("unknown-axiom", "there is no axiom " + *a.name);
  std::optional<Error> best;
  for (int id : ids_for(st, a.id)) {
    const EqContext& e = get(st, id);
    for (Side side : sides_for(a.side)) {
      const TermP& term = e.side(side);
      std::vector<Position> ps;
      if (a.pos) {
        if (!is_position_of(term, *a.pos))
          fail("invalid-position", to_string(*a.pos) + " is not a position of " + show(term));
        ps = {*a.pos};
      } else {
        ps = positions(term);
      }
      for (const auto& p : ps) {
        TermP u = subterm_at(term, p);
        for (const Axiom* ax : axs) {
          for (Direction d : dirs_for(a.dir)) {
            Hypothesis h{ax->eq.name, ax->eq.lhs, ax->eq.rhs, ax->eq.constraint};
            RuleLike rl = oriented(h, d);
            Entailment why;
            auto delta = constrained_instance(Rule{ax->eq.name, rl.l, rl.r, rl.phi, RuleOrigin::User}, u,
                                              e.constraint, smt_, a.subst, &why);
            if (!delta) {
              if (error_rank_better(why.code, best)) best = Error(why.code, why.detail);
              continue;
            }
            TermP next = replace_at(term, p, substitute(rl.r, *delta));
            const auto& bound = e.bound(side);
            StepResult r = start(st, "axiom");
            r.complete_rule = false;
            std::string what = "axiom " + ax->eq.name + " at E" + std::to_string(id) + " " + to_string(side) +
                               " " + to_string(p);
            std::string refutation;
            if (bound && !term_equal(*bound, next) &&
                !require(r.state, bound, next, e.constraint, what, r.notes, refutation)) {
              if (error_rank_better("ordering-refuted", best)) best = Error("ordering-refuted", refutation);
              continue;
            }
            if (ax->mode == AxiomMode::BoundedConvertible) r.notes.push_back(ax->eq.name + " is bounded-convertible");
            EqContext ne = e;
            set_side(ne, side, next, what);
            replace(r.state, id, {ne});
            r.args = std::to_string(id) + " " + to_string(side) + " " + to_string(p) + " " + ax->eq.name + " " +
                     dir_arg(d) + subst_arg(a.subst);
            return r;
          }
        }
      }
    }
  }
  if (best) throw *best;
  fail("no-match", "no axiom applies");
}

StepResult Engine::expand(const ProofState& st, int id, Side side, const Position& pos) const {
  const EqContext& e = get(st, id);
  const TermP& term = e.side(side);
  if (!is_position_of(term, pos)) fail("invalid-position", to_string(pos) + " is not a position of " + show(term));
  TermP u = subterm_at(term, pos);
  if (u->var_head() || u->symbol()->kind != SymKind::Term || sys_.rule_indices(u->symbol()).empty())
    fail("not-expandable", show(u) + " is not headed by a defined symbol");
  auto ar = sys_.arity(u->symbol());
  if (!ar || static_cast<int>(u->nargs()) != *ar)
    fail("not-expandable", show(u) + " does not apply " + u->symbol()->name + " to exactly its arity");
  StepResult r = start(st, "expand");
  // induct
  VarSet vs = vars_of(e.lhs);
  collect_vars(e.rhs, vs);
  collect_vars(e.constraint, vs);
  Subst ren;
  for (const auto& [vid, v] : vs) ren.bind(v, mk_var(fresh_variable(v.name, v.type)));
  Hypothesis h{"H" + std::to_string(r.state.next_hyp++), substitute(e.lhs, ren), substitute(e.rhs, ren),
               substitute(e.constraint, ren)};
  r.notes.push_back("new hypothesis " + show(h));
  r.state.hyps.push_back(std::move(h));
  VarSet psi_vars = vars_of(e.constraint);
  std::vector<EqContext> kids;
  for (std::size_t ri : sys_.rule_indices(u->symbol())) {
    const Rule& rule = sys_.rules()[ri];
    std::set<std::string> taken = taken_names(e);
    Subst rn = rename_apart({rule.lhs, rule.rhs, rule.constraint}, taken);
    TermP l = substitute(rule.lhs, rn), rr = substitute(rule.rhs, rn), phi = substitute(rule.constraint, rn);
    auto delta = unify(u, l);
    if (!delta) continue;
    // keep the equation's own variable names where the mgu only renames
    Subst back;
    for (const auto& [k, b] : delta->map()) {
      if (!vs.count(k) || !b.second->is_var()) continue;
      const Variable& y = b.second->variable();
      if (!vs.count(y.id) && !back.contains(y.id)) back.bind(y, mk_var(b.first));
    }
    if (!back.empty()) delta = compose(*delta, back);
    VarSet cv = vars_of(phi);
    for (const auto& [k, v] : psi_vars) cv.emplace(k, v);
    bool ok = true;
    for (const auto& [k, v] : cv) {
      TermP img = substitute(mk_var(v), *delta);
      if (!img->is_var() && !is_value(img)) ok = false;
    }
    if (!ok) {
      r.notes.push_back("skipped " + rule.name + ": it instantiates a constraint variable with a non-value");
      continue;
    }
    TermP sd = substitute(e.side(side), *delta);
    if (!is_position_of(sd, pos) || !term_equal(subterm_at(sd, pos), substitute(l, *delta)))
      fail("expand-position-shift", "instantiating " + show(e.side(side)) + " moves position " + to_string(pos));
    EqContext k = fresh_context(r.state.next_eq++, substitute(e.lhs, *delta), substitute(e.rhs, *delta),
                                mk_and(substitute(e.constraint, *delta), substitute(phi, *delta)), true);
    set_side(k, side, replace_at(sd, pos, substitute(rr, *delta)), rule.name + " step");
    kids.push_back(std::move(k));
  }
  replace(r.state, id, std::move(kids));
  r.args = std::to_string(id) + " " + to_string(side) + " " + to_string(pos);
  return r;
}

StepResult Engine::disprove(const ProofState& st, std::optional<int> id, const Subst& inst,
                            bool state_complete) const {
  if (!state_complete)
    fail("state-not-complete", "a step since the last complete state (postulate, generalize, axiom or a "
                               "semi-constructor step on a variable head) may have lost information");
  std::string why = "no equation is contradictory";
  for (int cid : ids_for(st, id)) {
    const EqContext& e = get(st, cid);
    TermP s = substitute(e.lhs, inst), t = substitute(e.rhs, inst);
    std::string witness;
    if (!s->var_head() && !t->var_head() && !same_symbol(s->symbol(), t->symbol())) {
      auto as = sys_.arity(s->symbol()), at = sys_.arity(t->symbol());
      bool semis = (!as || static_cast<int>(s->nargs()) < *as) && (!at || static_cast<int>(t->nargs()) < *at);
      if (semis) {
        SmtResult m = smt_.check_sat(e.constraint);
        if (m.verdict == SmtVerdict::Sat) {
          witness = "E" + std::to_string(cid) + " relates distinct heads " + s->symbol()->name + " and " +
                    t->symbol()->name + " under " + show(m.model);
        } else {
          why = "the constraint of E" + std::to_string(cid) + " is not satisfiable";
          continue;
        }
      }
    }
    if (witness.empty() && is_theory_term_ho(s) && is_theory_term_ho(t) && is_theory_base(s->type())) {
      if (!is_theory_term(s) || !is_theory_term(t)) {
        std::string vars;
        for (const auto& [k, v] : vars_of(mk_eq(s, t)))
          if (!is_theory_base(v.type)) vars += (vars.empty() ? "" : ", ") + v.name;
        why = "E" + std::to_string(cid) + " still has higher-order variables (" + vars +
              "); give an instantiation, e.g. disprove " + std::to_string(cid) + " [" +
              vars.substr(0, vars.find(',')) + " := (+) 1]";
        if (id) fail("higher-order-variables", why);
        continue;
      }
      SmtResult m = smt_.check_sat(mk_and(e.constraint, mk_not(mk_eq(s, t))));
      if (m.verdict == SmtVerdict::Sat) {
        Subst full = m.model;
        for (const auto& [k, entry] : inst.map()) full.bind(entry.first, entry.second);
        std::string lv = show(s), rv = show(t);
        if (auto x = try_evaluate(substitute(s, m.model))) lv = show(*x);
        if (auto x = try_evaluate(substitute(t, m.model))) rv = show(*x);
        witness = "E" + std::to_string(cid) + " fails for " + show(full) + ": " + lv + " ≠ " + rv;
      } else {
        why = m.verdict == SmtVerdict::Unsat ? "the sides of E" + std::to_string(cid) + " agree under its constraint"
                                             : "solver could not decide E" + std::to_string(cid);
        continue;
      }
    }
    if (witness.empty()) {
      if (id) why = "E" + std::to_string(cid) + " is neither a clash of semi-constructor heads nor a theory equation";
      continue;
    }
    StepResult r = start(st, "disprove");
    r.state.refuted = true;
    r.state.refutation = witness;
    r.args = std::to_string(cid) + subst_arg(inst);
    r.notes.push_back("⊥: " + witness);
    return r;
  }
  fail("not-contradictory", why);
}

std::vector<std::string> Engine::check_bounds(const ProofState& st) const {
  std::vector<std::string> out;
  for (const auto& e : st.eqs) {
    for (Side s : {Side::Left, Side::Right}) {
      std::string where = "E" + std::to_string(e.id) + " " + to_string(s) + ": ";
      const auto& b = e.bound(s);
      switch (e.rel(s)) {
        case BoundRel::Infinite:
          if (b) out.push_back(where + "bound present but marked infinite");
          break;
        case BoundRel::Equal:
          if (!b || !term_equal(*b, e.side(s))) out.push_back(where + "bound differs from the side");
          break;
        case BoundRel::Strict:
          if (!b) out.push_back(where + "strict without a bound");
          else if ((s == Side::Left ? e.ljust : e.rjust).empty()) out.push_back(where + "strict without justification");
          break;
      }
    }
    if (!is_constraint(e.constraint)) out.push_back("E" + std::to_string(e.id) + ": constraint is ill-formed");
  }
  return out;
}

}  // namespace bri
