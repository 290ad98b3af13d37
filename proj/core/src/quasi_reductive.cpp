#include <deque>
#include <functional>

#include "bri/error.hpp"
#include "bri/print.hpp"
#include "bri/rewriting.hpp"
#include "bri/smt.hpp"
#include "bri/theory.hpp"

namespace bri {

namespace {

// Matches lhs against a pattern; where lhs has a value and the pattern has a
// theory variable the match succeeds with an equation recorded in eqs.
bool match_cover(const TermP& l, const TermP& p, Subst& s, std::vector<TermP>& eqs) {
  if (l->is_var()) {
    if (const TermP* img = s.find(l->variable().id)) {
      if (term_equal(*img, p)) return true;
      if (is_theory_base(p->type()) && is_theory_term(*img) && is_theory_term(p)) {
        eqs.push_back(mk_eq(*img, p));
        return true;
      }
      return false;
    }
    s.bind(l->variable(), p);
    return true;
  }
  if (is_value(l) && p->is_var() && is_theory_base(p->type())) {
    eqs.push_back(mk_eq(p, l));
    return true;
  }
  if (l->nargs() != p->nargs() || p->var_head() || !same_symbol(l->symbol(), p->symbol())) return false;
  for (std::size_t i = 0; i < l->nargs(); ++i)
    if (!match_cover(l->args()[i], p->args()[i], s, eqs)) return false;
  return true;
}

struct Pattern {
  TermP term;
  int depth = 0;
};

}  // namespace

QuasiReductivity check_quasi_reductivity(const RewriteSystem& sys, SmtSolver& smt, int depth) {
  QuasiReductivity out;
  bool unknown = false;
  std::string unknown_detail;
  for (const auto& f : sys.symbols()) {
    if (sys.rule_indices(f).empty()) continue;
    int k = *sys.arity(f);
    auto types = arg_types(f->type);
    std::vector<TermP> xs;
    for (int i = 0; i < k; ++i) xs.push_back(mk_var(fresh_variable("x" + std::to_string(i + 1), types[i])));
    std::deque<Pattern> work{{mk_app(f, xs), 0}};
    while (!work.empty()) {
      Pattern pat = work.front();
      work.pop_front();
      std::vector<TermP> covers;
      std::vector<std::string> raw_covers;
      bool needs_raw = false;
      std::optional<Variable> split;
      for (std::size_t idx : sys.rule_indices(f)) {
        const Rule& r = sys.rules()[idx];
        Subst s;
        std::vector<TermP> eqs;
        if (match_cover(r.lhs, pat.term, s, eqs)) {
          VarSet extra = vars_of(r.constraint);
          for (const auto& [id, v] : vars_of(r.lhs)) extra.erase(id);
          Subst ren = renaming(extra);
          TermP phi = mk_and(substitute(substitute(r.constraint, ren), s), mk_and(eqs));
          if (!is_constraint(phi)) {
            unknown = true;
            unknown_detail = "constraint of " + r.name + " is not a theory constraint on " + show(pat.term);
            continue;
          }
          covers.push_back(phi);
          if (extra.empty()) {
            raw_covers.push_back(to_smtlib(phi));
          } else {
            needs_raw = true;
            std::string binders;
            for (const auto& [id, e] : ren.map())
              binders += "(" + smt_name(e.second->variable()) + (e.first.type->sort == "bool" ? " Bool)" : " Int)");
            raw_covers.push_back("(exists (" + binders + ") " + to_smtlib(phi) + ")");
          }
          continue;
        }
        Subst lr = renaming(vars_of(r.lhs));
        if (auto mgu = unify(substitute(r.lhs, lr), pat.term); mgu && !split) {
          for (const auto& v : vars_in_order(pat.term)) {
            const TermP* img = mgu->find(v.id);
            if (img && !(*img)->is_var() && !v.type->is_arrow() && !is_theory_sort(v.type->sort)) {
              split = v;
              break;
            }
          }
        }
      }
      TermP phi = mk_or(covers);
      VarSet free = vars_of(pat.term);
      for (auto it = free.begin(); it != free.end();)
        it = is_theory_base(it->second.type) ? std::next(it) : free.erase(it);
      SmtResult r;
      if (needs_raw) {
        std::string disj = "(or false";
        for (const auto& c : raw_covers) disj += " " + c;
        r = smt.check_sat_raw(free, "(not " + disj + "))");
      } else {
        r = smt.check_sat(mk_not(phi));
      }
      if (r.verdict == SmtVerdict::Unsat) continue;
      if (split && pat.depth < depth) {
        auto ctors = sys.symbols_with_result(split->type);
        for (const auto& c : ctors) {
          if (!sys.rule_indices(c).empty()) continue;
          auto ctys = arg_types(c->type);
          std::vector<TermP> cargs;
          for (const auto& ty : ctys) cargs.push_back(mk_var(fresh_variable(split->name, ty)));
          Subst sub;
          sub.bind(*split, mk_app(c, cargs));
          work.push_back({substitute(pat.term, sub), pat.depth + 1});
        }
        continue;
      }
      if (split || r.verdict == SmtVerdict::Unknown) {
        unknown = true;
        unknown_detail = "could not decide coverage of " + show(pat.term);
        continue;
      }
      out.status = QuasiReductivity::Status::Refuted;
      out.detail = show(pat.term) + " is irreducible when " + show(mk_not(phi)) + ", e.g. " + show(r.model);
      return out;
    }
  }
  out.status = unknown ? QuasiReductivity::Status::Unknown : QuasiReductivity::Status::Proved;
  out.detail = unknown_detail;
  return out;
}

}  // namespace bri
