#include "bri/ordering.hpp"

#include <deque>
#include <unordered_set>

#include "bri/error.hpp"
#include "bri/print.hpp"
#include "bri/theory.hpp"

namespace bri {

std::string to_string(ReqStatus s) {
  switch (s) {
    case ReqStatus::DischargedSyntactic: return "discharged";
    case ReqStatus::Pending: return "pending";
    case ReqStatus::Proved: return "proved";
    case ReqStatus::Trusted: return "trusted";
    case ReqStatus::Failed: return "failed";
  }
  return "?";
}

std::string show_bound(const std::optional<TermP>& b) { return b ? show(*b) : "•"; }

std::string show(const Requirement& r) {
  std::string s = r.id + ": " + show_bound(r.left) + (r.strict ? " ≻ " : " ⪰ ") + show(r.right);
  if (!is_true(r.constraint)) s += " [" + show(r.constraint) + "]";
  return s + " (" + to_string(r.status) + ", step " + std::to_string(r.step) + ")";
}

namespace {

struct Succ {
  TermP term;
  std::string how;
};

std::vector<Succ> successors(const TermP& u, const TermP& psi, const RewriteSystem& sys, SmtSolver& smt) {
  std::vector<Succ> out;
  for (std::size_t i = 0; i < u->nargs(); ++i) out.push_back({u->args()[i], "subterm " + std::to_string(i + 1)});
  if (u->nargs() > 0) out.push_back({prefix(u, u->nargs() - 1), "subterm ⋆1"});
  for (const auto& p : positions(u)) {
    TermP v = subterm_at(u, p);
    if (v->var_head()) continue;
    for (std::size_t idx : sys.rule_indices(v->symbol())) {
      const Rule& r = sys.rules()[idx];
      if (r.lhs->nargs() != v->nargs()) continue;
      if (auto g = constrained_instance(r, v, psi, smt))
        out.push_back({replace_at(u, p, substitute(r.rhs, *g)), r.name + " at " + to_string(p)});
    }
    if (auto val = calc_step(v)) {
      out.push_back({replace_at(u, p, *val), "calc at " + to_string(p)});
    } else if (is_theory_term(v) && !v->is_var() && !is_value(v)) {
      if (auto x = defined_as(psi, v)) out.push_back({replace_at(u, p, mk_var(*x)), "calc at " + to_string(p)});
    }
  }
  return out;
}

}  // namespace

std::optional<std::vector<std::string>> baseline_reach(const TermP& left, const TermP& right, const TermP& psi,
                                                       bool strict, const RewriteSystem& sys, SmtSolver& smt,
                                                       int budget) {
  if (!strict && term_equal(left, right)) return std::vector<std::string>{};
  struct Node {
    TermP term;
    int parent;
    std::string how;
  };
  std::vector<Node> nodes{{left, -1, ""}};
  std::unordered_set<TermP, TermHash, TermEq> seen{left};
  std::size_t limit = 2 * (term_size(left) + term_size(right)) + 10;
  std::deque<int> queue{0};
  while (!queue.empty() && static_cast<int>(nodes.size()) < budget) {
    int cur = queue.front();
    queue.pop_front();
    TermP u = nodes[cur].term;
    for (auto& s : successors(u, psi, sys, smt)) {
      if (term_equal(s.term, right)) {
        std::vector<std::string> path{s.how};
        for (int n = cur; n > 0; n = nodes[n].parent) path.push_back(nodes[n].how);
        return std::vector<std::string>(path.rbegin(), path.rend());
      }
      if (term_size(s.term) > limit || !seen.insert(s.term).second) continue;
      nodes.push_back({s.term, cur, s.how});
      queue.push_back(static_cast<int>(nodes.size()) - 1);
    }
  }
  return std::nullopt;
}

DischargeResult try_discharge(const std::optional<TermP>& left, const TermP& right, const TermP& psi, bool strict,
                              const RewriteSystem& sys, SmtSolver& smt) {
  if (!left) return {Discharge::Discharged, "infinite bound"};
  if (!strict && term_equal(*left, right)) return {Discharge::Discharged, "identical terms"};
  SmtResult sat = smt.check_sat(psi);
  if (sat.verdict == SmtVerdict::Unsat) return {Discharge::Discharged, "constraint unsatisfiable"};
  if (auto path = baseline_reach(*left, right, psi, strict, sys, smt)) {
    std::string how;
    for (const auto& s : *path) how += (how.empty() ? "" : ", ") + s;
    return {Discharge::Discharged, "by " + how};
  }
  if (sat.verdict == SmtVerdict::Sat) {
    if (strict && term_equal(*left, right))
      return {Discharge::Refuted, show(right) + " cannot be strictly below itself"};
    if (baseline_reach(right, *left, psi, !strict, sys, smt))
      return {Discharge::Refuted, show(right) + " reaches " + show(*left) + ", so the bound would be cyclic"};
  }
  return {Discharge::Pending, ""};
}

bool mul_geq(const TermP& a1, const TermP& a2, const TermP& b1, const TermP& b2, const OrderFn& gt, const OrderFn& geq) {
  if ((gt(a1, b1) && gt(a1, b2)) || (gt(a2, b1) && gt(a2, b2))) return true;
  return (geq(a1, b1) && geq(a2, b2)) || (geq(a1, b2) && geq(a2, b1));
}

bool mul_gt(const TermP& a1, const TermP& a2, const TermP& b1, const TermP& b2, const OrderFn& gt, const OrderFn& geq) {
  if ((gt(a1, b1) && gt(a1, b2)) || (gt(a2, b1) && gt(a2, b2))) return true;
  const TermP* as[2] = {&a1, &a2};
  const TermP* bs[2] = {&b1, &b2};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (gt(*as[i], *bs[j]) && geq(*as[1 - i], *bs[1 - j])) return true;
  return false;
}

namespace {

TermP abstract_applied_vars(const TermP& t) {
  if (t->var_head() && t->nargs() > 0) return mk_var(fresh_variable("z", t->type()));
  std::vector<TermP> args;
  bool changed = false;
  for (const auto& a : t->args()) {
    args.push_back(abstract_applied_vars(a));
    changed = changed || args.back() != a;
  }
  return changed ? with_args(t, std::move(args)) : t;
}

std::string sort_word(const TypeP& t) {
  std::string s = to_string(t), out;
  for (char c : s)
    if (std::isalnum(static_cast<unsigned char>(c))) out += c;
  return out;
}

}  // namespace

Abstraction abstract_to_rule(const Requirement& r) {
  Abstraction a;
  if (!r.left) {
    a.reason = "infinite bound";
    return a;
  }
  TermP l = *r.left;
  if (l->var_head()) {
    a.reason = "left-hand side " + show(l) + " has a variable head";
    return a;
  }
  if (is_theory_term(l)) {
    a.reason = "left-hand side " + show(l) + " is a theory term";
    return a;
  }
  TermP l2 = abstract_applied_vars(l);
  VarSet kept = vars_of(l2);
  VarSet removed = vars_of(l);
  for (const auto& [id, v] : kept) removed.erase(id);
  std::vector<TermP> cs;
  for (const auto& c : conjuncts(r.constraint)) {
    bool mentions = false;
    for (const auto& [id, v] : vars_of(c))
      if (removed.count(id)) mentions = true;
    if (!mentions) cs.push_back(c);
  }
  TermP phi = mk_and(cs);
  VarSet allowed = kept;
  collect_vars(phi, allowed);
  TermP rhs = r.right;
  for (const auto& [id, v] : vars_of(rhs))
    if (!allowed.count(id)) {
      a.reason = "right-hand side uses " + v.name + ", which the abstraction removes";
      return a;
    }
  if (!same_type(l2->type(), rhs->type())) {
    std::string name = sort_word(rhs->type()) + "to" + sort_word(l2->type());
    a.bridge = make_symbol(name, arrow(rhs->type(), l2->type()));
    rhs = mk_app(a.bridge, {rhs});
  }
  a.ok = true;
  a.rule = Rule{"Q:" + r.id, l2, rhs, phi, RuleOrigin::Abstracted};
  return a;
}

}  // namespace bri
