#include "bri/rewriting.hpp"

#include "bri/error.hpp"
#include "bri/print.hpp"
#include "bri/theory.hpp"

namespace bri {

std::string show(const Rule& r) {
  std::string s = show(r.lhs) + " -> " + show(r.rhs);
  if (!is_true(r.constraint)) s += " [" + show(r.constraint) + "]";
  return s;
}

std::string show(const Equation& e) {
  return show(e.lhs) + " == " + show(e.rhs) + " [" + show(e.constraint) + "]";
}

const Rule& calc_rule_for(const SymbolP& f) {
  static std::map<std::string, Rule> cache;
  std::string key = f->name + " : " + to_string(f->type);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  int n = theory::calc_arity(f);
  if (n < 0) throw Error("not-calculable", f->name);
  std::vector<TermP> xs;
  auto types = arg_types(f->type);
  for (int i = 0; i < n; ++i) xs.push_back(mk_var(fresh_variable("x" + std::to_string(i + 1), types[i])));
  TermP lhs = mk_app(f, xs);
  TermP y = mk_var(fresh_variable("y", lhs->type()));
  Rule r{"calc", lhs, y, mk_eq(y, lhs), RuleOrigin::Calc};
  return cache.emplace(key, r).first->second;
}

void RewriteSystem::add_sort(const std::string& name) {
  if (has_sort(name)) throw Error("duplicate-sort", name);
  if (is_theory_sort(name)) throw Error("duplicate-sort", name + " is a theory sort");
  sorts_.push_back(name);
}

bool RewriteSystem::has_sort(const std::string& name) const {
  if (is_theory_sort(name)) return true;
  for (const auto& s : sorts_)
    if (s == name) return true;
  return false;
}

void RewriteSystem::add_symbol(const SymbolP& f) {
  if (by_name_.count(f->name)) throw Error("duplicate-symbol", f->name);
  by_name_[f->name] = f;
  symbols_.push_back(f);
}

bool RewriteSystem::has_theory_constructors() const {
  for (const auto& f : symbols_)
    if (f->kind == SymKind::Term && is_theory_sort(base_result(f->type)->sort) && !arity_.count(f->name)) return true;
  return false;
}

std::vector<std::string> RewriteSystem::warnings() const {
  std::vector<std::string> out = warnings_;
  for (const auto& f : symbols_) {
    TypeP res = base_result(f->type);
    if (f->kind == SymKind::Term && is_theory_sort(res->sort) && !arity_.count(f->name))
      out.push_back("constructor " + f->name + " extends the theory sort " + res->sort +
                    "; ground semi-constructor terms of that sort need not be values");
  }
  return out;
}

SymbolP RewriteSystem::find_symbol(const std::string& name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? nullptr : it->second;
}

void RewriteSystem::add_rule(Rule r) {
  if (r.name.empty()) r.name = "R" + std::to_string(rules_.size() + 1);
  if (!r.constraint) r.constraint = mk_true();
  if (r.lhs->var_head()) throw Error("invalid-rule", r.name + ": left-hand side has a variable head");
  if (!same_type(r.lhs->type(), r.rhs->type()))
    throw Error("type-mismatch", r.name + ": sides have types " + to_string(r.lhs->type()) + " and " +
                                     to_string(r.rhs->type()));
  if (!is_constraint(r.constraint)) throw Error("invalid-constraint", r.name + ": " + show(r.constraint));
  VarSet allowed = vars_of(r.lhs);
  collect_vars(r.constraint, allowed);
  for (const auto& [id, v] : vars_of(r.rhs))
    if (!allowed.count(id))
      throw Error("unbound-rhs-variable", r.name + ": " + v.name + " occurs only on the right");
  const SymbolP& f = r.lhs->symbol();
  int k = static_cast<int>(r.lhs->nargs());
  if (f->is_value()) throw Error("invalid-rule", r.name + ": left-hand side is a value");
  if (f->kind == SymKind::Theory && k != theory::calc_arity(f))
    throw Error("arity-inconsistency", r.name + ": " + f->name + " has calculation arity " +
                                           std::to_string(theory::calc_arity(f)));
  auto it = arity_.find(f->name);
  if (it != arity_.end() && it->second != k)
    throw Error("arity-inconsistency", r.name + ": " + f->name + " is applied to " + std::to_string(k) +
                                           " arguments here but " + std::to_string(it->second) +
                                           " in an earlier rule");
  arity_[f->name] = k;
  by_head_[f->name].push_back(rules_.size());
  rules_.push_back(std::move(r));
}

void RewriteSystem::add_axiom(Axiom a) { axioms_.push_back(std::move(a)); }
void RewriteSystem::add_goal(Equation e) { goals_.push_back(std::move(e)); }

std::optional<int> RewriteSystem::arity(const SymbolP& f) const {
  auto it = arity_.find(f->name);
  if (it != arity_.end()) return it->second;
  if (f->kind == SymKind::Theory) return theory::calc_arity(f);
  return std::nullopt;
}

bool RewriteSystem::is_defined(const SymbolP& f) const {
  return arity_.count(f->name) != 0 || f->kind == SymKind::Theory;
}

const std::vector<std::size_t>& RewriteSystem::rule_indices(const SymbolP& f) const {
  static const std::vector<std::size_t> none;
  auto it = by_head_.find(f->name);
  return it == by_head_.end() ? none : it->second;
}

std::vector<SymbolP> RewriteSystem::symbols_with_result(const TypeP& type) const {
  std::vector<SymbolP> out;
  for (const auto& f : symbols_)
    if (same_type(base_result(f->type), type)) out.push_back(f);
  return out;
}

std::optional<Subst> rule_instance(const Rule& rule, const TermP& u) {
  Subst g;
  if (!match_into(rule.lhs, u, g)) return std::nullopt;
  VarSet need = vars_of(rule.constraint);
  collect_vars(rule.rhs, need);
  bool progress = true;
  auto cs = conjuncts(rule.constraint);
  while (progress) {
    progress = false;
    for (const auto& c : cs) {
      if (c->var_head() || c->nargs() != 2 || c->symbol()->name != "=") continue;
      for (int side = 0; side < 2; ++side) {
        const TermP& y = c->args()[side];
        const TermP& e = c->args()[1 - side];
        if (!y->is_var() || g.contains(y->variable().id)) continue;
        auto v = try_evaluate(substitute(e, g));
        if (!v) continue;
        g.bind(y->variable(), *v);
        progress = true;
      }
    }
  }
  for (const auto& [id, v] : need)
    if (!g.contains(id)) return std::nullopt;
  if (!respects(g, rule.constraint)) return std::nullopt;
  return g;
}

std::optional<TermP> calc_step(const TermP& u) {
  if (u->var_head() || u->symbol()->kind != SymKind::Theory) return std::nullopt;
  if (static_cast<int>(u->nargs()) != theory::calc_arity(u->symbol())) return std::nullopt;
  for (const auto& a : u->args())
    if (!is_value(a)) return std::nullopt;
  return evaluate(u);
}

std::vector<Reduct> reduce_once(const TermP& t, const RewriteSystem& sys) {
  std::vector<Reduct> out;
  for (const auto& p : positions(t)) {
    TermP u = subterm_at(t, p);
    if (u->var_head()) continue;
    for (std::size_t idx : sys.rule_indices(u->symbol())) {
      const Rule& r = sys.rules()[idx];
      if (r.lhs->nargs() != u->nargs()) continue;
      if (auto g = rule_instance(r, u)) out.push_back({p, r.name, *g, replace_at(t, p, substitute(r.rhs, *g))});
    }
    if (auto v = calc_step(u)) out.push_back({p, "calc", Subst{}, replace_at(t, p, *v)});
  }
  return out;
}

namespace {

struct Normalizer {
  const RewriteSystem& sys;
  long budget;
  long steps = 0;
  int depth = 0;

  std::optional<TermP> head_step(const TermP& t) {
    if (t->var_head()) return std::nullopt;
    auto ar = sys.arity(t->symbol());
    if (!ar || *ar > static_cast<int>(t->nargs())) return std::nullopt;
    TermP pre = prefix(t, static_cast<std::size_t>(*ar));
    std::vector<TermP> rest(t->args().begin() + *ar, t->args().end());
    for (std::size_t idx : sys.rule_indices(t->symbol())) {
      const Rule& r = sys.rules()[idx];
      if (auto g = rule_instance(r, pre)) return mk_app(substitute(r.rhs, *g), rest);
    }
    if (auto v = calc_step(pre)) return mk_app(*v, rest);
    return std::nullopt;
  }

  // innermost strategy: nesting grows with pending calls, so it is bounded too
  static constexpr int kMaxDepth = 8000;

  TermP norm(TermP t) {
    if (++depth > kMaxDepth)
      throw Error("budget-exceeded", "normalisation nested deeper than " + std::to_string(kMaxDepth) + " terms");
    struct Leave {
      int& d;
      ~Leave() { --d; }
    } leave{depth};
    while (true) {
      if (t->nargs() > 0) {
        std::vector<TermP> args;
        args.reserve(t->nargs());
        bool changed = false;
        for (const auto& a : t->args()) {
          TermP b = norm(a);
          changed = changed || b != a;
          args.push_back(std::move(b));
        }
        if (changed) t = with_args(t, std::move(args));
      }
      auto next = head_step(t);
      if (!next) return t;
      if (++steps > budget) throw Error("budget-exceeded", "normalisation exceeded " + std::to_string(budget) + " steps");
      t = *next;
    }
  }
};

}  // namespace

TermP normalize(const TermP& t, const RewriteSystem& sys, long budget, long* steps) {
  Normalizer n{sys, budget};
  TermP r = n.norm(t);
  if (steps) *steps = n.steps;
  return r;
}

bool is_semi_constructor(const TermP& t, const RewriteSystem& sys) {
  if (t->is_var()) return true;
  if (t->var_head()) return false;
  auto ar = sys.arity(t->symbol());
  if (ar && static_cast<int>(t->nargs()) >= *ar) return false;
  for (const auto& a : t->args())
    if (!is_semi_constructor(a, sys)) return false;
  return true;
}

}  // namespace bri

#include "bri/smt.hpp"

namespace bri {

std::optional<Variable> defined_as(const TermP& psi, const TermP& e) {
  for (const auto& c : conjuncts(psi)) {
    if (c->var_head() || c->nargs() != 2 || c->symbol()->name != "=") continue;
    for (int side = 0; side < 2; ++side)
      if (c->args()[side]->is_var() && term_equal(c->args()[1 - side], e)) return c->args()[side]->variable();
  }
  return std::nullopt;
}

std::optional<Subst> constrained_instance(const Rule& rule, const TermP& u, const TermP& psi, SmtSolver& smt,
                                          const Subst& given, Entailment* why) {
  Subst g = given;
  auto fail = [&](const std::string& code, const std::string& detail) -> std::optional<Subst> {
    if (why) {
      why->ok = false;
      why->code = code;
      why->detail = detail;
    }
    return std::nullopt;
  };
  if (!match_into(rule.lhs, u, g)) return fail("no-match", show(rule.lhs) + " does not match " + show(u));
  VarSet need = vars_of(rule.constraint);
  collect_vars(rule.rhs, need);
  auto cs = conjuncts(rule.constraint);
  bool progress = true;
  while (progress) {
    progress = false;
    for (const auto& c : cs) {
      if (c->var_head() || c->nargs() != 2 || c->symbol()->name != "=") continue;
      for (int side = 0; side < 2; ++side) {
        const TermP& y = c->args()[side];
        if (!y->is_var() || g.contains(y->variable().id)) continue;
        TermP e = substitute(c->args()[1 - side], g);
        bool bound = true;
        for (const auto& [id, v] : vars_of(c->args()[1 - side]))
          if (!g.contains(id)) bound = false;
        if (!bound) continue;
        if (auto v = try_evaluate(e)) {
          g.bind(y->variable(), *v);
          progress = true;
        } else if (auto x = defined_as(psi, e)) {
          g.bind(y->variable(), mk_var(*x));
          progress = true;
        }
      }
    }
  }
  for (const auto& [id, v] : need)
    if (!g.contains(id))
      return fail("unbound-constraint-variable",
                  "cannot instantiate " + v.name + "; supply it with a substitution or add a definition by alter");
  Entailment e = entails_under(smt, psi, g, rule.constraint);
  if (!e.ok) {
    if (why) *why = e;
    return std::nullopt;
  }
  if (why) why->ok = true;
  return g;
}

}  // namespace bri
