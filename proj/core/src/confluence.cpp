#include "bri/confluence.hpp"

#include <algorithm>
#include <unordered_set>

#include "bri/error.hpp"
#include "bri/ordering.hpp"
#include "bri/print.hpp"
#include "bri/theory.hpp"

namespace bri {

std::string show(const CriticalPeak& p) {
  return "⟨" + show(p.source) + ", " + show(p.left) + ", " + show(p.right) + "⟩ [" + show(p.constraint) + "]";
}

std::string export_equation(const CriticalPeak& p) {
  return show(p.left) + " == " + show(p.right) + " [" + show(p.constraint) + "]";
}

namespace {

std::vector<TermP> sorted_conjuncts(const TermP& phi) {
  auto cs = conjuncts(phi);
  std::sort(cs.begin(), cs.end(), TermLess{});
  return cs;
}

bool same_conjuncts(const TermP& a, const TermP& b) {
  auto ca = sorted_conjuncts(a), cb = sorted_conjuncts(b);
  if (ca.size() != cb.size()) return false;
  for (std::size_t i = 0; i < ca.size(); ++i)
    if (!term_equal(ca[i], cb[i])) return false;
  return true;
}

bool peak_matches(const CriticalPeak& a, const CriticalPeak& b, bool swapped) {
  Subst g;
  if (!match_into(a.source, b.source, g)) return false;
  if (!match_into(a.left, swapped ? b.right : b.left, g)) return false;
  if (!match_into(a.right, swapped ? b.left : b.right, g)) return false;
  if (!is_renaming(g)) return false;
  VarSet va = vars_of(a.source), vb = vars_of(b.source);
  for (const auto& t : {a.left, a.right, a.constraint}) collect_vars(t, va);
  for (const auto& t : {b.left, b.right, b.constraint}) collect_vars(t, vb);
  if (va.size() != vb.size()) return false;
  for (const auto& [id, v] : vars_of(a.constraint))
    if (!g.contains(id)) return false;
  return same_conjuncts(substitute(a.constraint, g), b.constraint);
}

// Renames the peak's variables to the shortest free variant of their names.
CriticalPeak tidy(const CriticalPeak& p, const RewriteSystem& sys) {
  std::vector<Variable> order = vars_in_order(p.source);
  for (const auto& t : {p.left, p.right, p.constraint})
    for (const auto& v : vars_in_order(t))
      if (std::none_of(order.begin(), order.end(), [&](const Variable& w) { return w.id == v.id; }))
        order.push_back(v);
  std::set<std::string> taken;
  for (const auto& f : sys.symbols()) taken.insert(f->name);
  Subst ren;
  for (const auto& v : order) {
    std::string base = v.name;
    while (!base.empty() && base.back() == '\'') base.pop_back();
    if (base.empty()) base = "x";
    std::string name = fresh_name(base, taken);
    taken.insert(name);
    ren.bind(v, mk_var(fresh_variable(name, v.type)));
  }
  CriticalPeak q = p;
  q.source = substitute(p.source, ren);
  q.left = substitute(p.left, ren);
  q.right = substitute(p.right, ren);
  q.constraint = substitute(p.constraint, ren);
  return q;
}

Subst rename_rule(const Rule& r, std::set<std::string>& taken) {
  VarSet vs = vars_of(r.lhs);
  collect_vars(r.rhs, vs);
  collect_vars(r.constraint, vs);
  Subst ren;
  for (const auto& [id, v] : vs) {
    std::string name = fresh_name(v.name, taken);
    taken.insert(name);
    ren.bind(v, mk_var(fresh_variable(name, v.type)));
  }
  return ren;
}

}  // namespace

bool same_peak(const CriticalPeak& a, const CriticalPeak& b) {
  return peak_matches(a, b, false) || peak_matches(a, b, true);
}

std::vector<CriticalPeak> critical_peaks(const RewriteSystem& sys, SmtSolver& smt) {
  std::vector<const Rule*> rules;
  for (const auto& r : sys.rules()) rules.push_back(&r);
  for (const auto& f : theory::calc_symbols()) rules.push_back(&calc_rule_for(f));
  std::vector<CriticalPeak> out;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    for (std::size_t j = 0; j < rules.size(); ++j) {
      std::set<std::string> taken;
      Subst ren2 = rename_rule(*rules[j], taken);
      Subst ren1 = rename_rule(*rules[i], taken);
      TermP l1 = substitute(rules[i]->lhs, ren1), r1 = substitute(rules[i]->rhs, ren1),
            phi1 = substitute(rules[i]->constraint, ren1);
      TermP l2 = substitute(rules[j]->lhs, ren2), r2 = substitute(rules[j]->rhs, ren2),
            phi2 = substitute(rules[j]->constraint, ren2);
      for (const auto& p : positions(l2)) {
        TermP u = subterm_at(l2, p);
        if (u->is_var()) continue;
        if (p.is_root() && i == j) {
          VarSet extra = vars_of(r1);
          bool has_extra = false;
          for (const auto& [id, v] : extra)
            if (!contains_var(l1, id)) has_extra = true;
          if (!has_extra) continue;
        }
        auto sigma = unify(l1, u);
        if (!sigma) continue;
        VarSet cv = vars_of(phi1);
        collect_vars(phi2, cv);
        bool ok = true;
        for (const auto& [id, v] : cv) {
          TermP img = substitute(mk_var(v), *sigma);
          if (!img->is_var() && !is_value(img)) ok = false;
        }
        if (!ok) continue;
        TermP phi = mk_and(substitute(phi1, *sigma), substitute(phi2, *sigma));
        if (smt.check_sat(phi).verdict != SmtVerdict::Sat) continue;
        CriticalPeak pk;
        pk.source = substitute(l2, *sigma);
        pk.left = substitute(replace_at(l2, p, r1), *sigma);
        pk.right = substitute(r2, *sigma);
        pk.constraint = phi;
        pk.rule1 = rules[i]->origin == RuleOrigin::Calc ? "calc" : rules[i]->name;
        pk.rule2 = rules[j]->origin == RuleOrigin::Calc ? "calc" : rules[j]->name;
        pk.pos = p;
        if (term_equal(pk.left, pk.right)) continue;
        if (is_theory_term(pk.left) && is_theory_term(pk.right) &&
            smt.implies(phi, mk_eq(pk.left, pk.right)).validity == Validity::Valid)
          continue;
        pk = tidy(pk, sys);
        if (std::any_of(out.begin(), out.end(), [&](const CriticalPeak& q) { return same_peak(q, pk); })) continue;
        out.push_back(std::move(pk));
      }
    }
  }
  return out;
}

std::vector<EqContext> ground_confluence_goals(const std::vector<CriticalPeak>& peaks, int first_id) {
  std::vector<EqContext> out;
  for (const auto& p : peaks) {
    EqContext e;
    e.id = first_id++;
    e.lbound = p.source;
    e.rbound = p.source;
    e.lhs = p.left;
    e.rhs = p.right;
    e.constraint = p.constraint;
    e.lrel = term_equal(p.left, p.source) ? BoundRel::Equal : BoundRel::Strict;
    e.rrel = term_equal(p.right, p.source) ? BoundRel::Equal : BoundRel::Strict;
    if (e.lrel == BoundRel::Strict) e.ljust = p.rule1 + " step from the peak source";
    if (e.rrel == BoundRel::Strict) e.rjust = p.rule2 + " step from the peak source";
    out.push_back(std::move(e));
  }
  return out;
}

ProofState ground_confluence_state(const RewriteSystem& sys, SmtSolver& smt, bool trust_termination,
                                   std::vector<CriticalPeak>* peaks_out, std::string* certificate,
                                   const TerminationOptions& topts) {
  if (!trust_termination) {
    TerminationResult t = check_termination(sys.rules(), smt, topts);
    if (t.status != TerminationResult::Status::Proved) {
      std::string log;
      for (const auto& l : t.log) log += "\n  " + l;
      throw Error("termination-unproved", "could not prove termination of the rules" + log);
    }
    if (certificate) *certificate = t.certificate;
  } else if (certificate) {
    *certificate = "trusted";
  }
  auto peaks = critical_peaks(sys, smt);
  ProofState st;
  st.eqs = ground_confluence_goals(peaks, 1);
  st.next_eq = static_cast<int>(peaks.size()) + 1;
  if (peaks_out) *peaks_out = std::move(peaks);
  return st;
}

TermSampler::TermSampler(const RewriteSystem& sys, std::uint64_t seed, int range)
    : sys_(sys), rng_(seed), range_(range) {}

TermP TermSampler::sample(const TypeP& type, int depth) {
  if (depth < -8) throw Error("sampling-failed", "no small ground term of type " + to_string(type));
  bool leaf = depth <= 0 || std::uniform_int_distribution<int>(0, 1)(rng_) == 0;
  if (!type->is_arrow() && type->sort == "int" && (leaf || std::uniform_int_distribution<int>(0, 2)(rng_) > 0))
    return theory::int_term(std::uniform_int_distribution<int>(-range_, range_)(rng_));
  if (!type->is_arrow() && type->sort == "bool" && (leaf || std::uniform_int_distribution<int>(0, 2)(rng_) > 0))
    return theory::bool_term(std::uniform_int_distribution<int>(0, 1)(rng_) == 1);
  struct Choice {
    SymbolP f;
    int k;
  };
  std::vector<Choice> all, small;
  std::vector<SymbolP> heads = sys_.symbols();
  for (const auto& f : theory::calc_symbols()) heads.push_back(f);
  for (const auto& f : heads) {
    auto ar = sys_.arity(f);
    int n = arrow_count(f->type);
    for (int k = 0; k <= n; ++k) {
      if (ar && k > *ar) break;
      if (!same_type(result_after(f->type, k), type)) continue;
      all.push_back({f, k});
      bool base_args = true;
      for (int a = 0; a < k; ++a)
        if (arg_types(f->type)[a]->is_arrow() || !is_theory_base(arg_types(f->type)[a])) base_args = false;
      if (k == 0 || base_args) small.push_back({f, k});
    }
  }
  const auto& pool = leaf && !small.empty() ? small : all;
  if (pool.empty()) throw Error("sampling-failed", "no symbol produces type " + to_string(type));
  const Choice& c = pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng_)];
  std::vector<TermP> args;
  auto ats = arg_types(c.f->type);
  for (int a = 0; a < c.k; ++a) args.push_back(sample(ats[a], depth - 1));
  return mk_app(c.f, args);
}

Subst TermSampler::ground_instance(const VarSet& vars, int depth) {
  Subst g;
  for (const auto& [id, v] : vars) g.bind(v, sample(v.type, depth));
  return g;
}

namespace {

// Whether a and b have a common reduct within depth steps each, searched
// level by level from both sides; gives up once either side holds cap terms.
bool joinable_within(const TermP& a, const TermP& b, const RewriteSystem& sys, int depth) {
  constexpr long kQuickBudget = 1000;
  try {
    if (term_equal(normalize(a, sys, kQuickBudget), normalize(b, sys, kQuickBudget))) return true;
  } catch (const Error& e) {
    if (e.code() != "budget-exceeded") throw;
  }
  constexpr std::size_t kCap = 5000;
  struct Side {
    std::unordered_set<std::string> seen;
    std::vector<TermP> frontier;
  };
  Side sa{{show(a)}, {a}}, sb{{show(b)}, {b}};
  if (sb.seen.count(show(a))) return true;
  auto step = [&](Side& me, const Side& other) {
    std::vector<TermP> next;
    for (const auto& u : me.frontier) {
      for (auto& r : reduce_once(u, sys)) {
        std::string key = show(r.result);
        if (other.seen.count(key)) return true;
        if (me.seen.size() < kCap && me.seen.insert(std::move(key)).second) next.push_back(std::move(r.result));
      }
    }
    me.frontier = std::move(next);
    return false;
  };
  for (int d = 0; d < depth; ++d) {
    if (step(sa, sb) || step(sb, sa)) return true;
    if (sa.frontier.empty() && sb.frontier.empty()) return false;
  }
  return false;
}

}  // namespace

JoinabilityReport sample_joinability(const RewriteSystem& sys, SmtSolver& smt, int trials, int depth,
                                     std::uint64_t seed, int join_depth) {
  JoinabilityReport rep;
  auto peaks = critical_peaks(sys, smt);
  TermSampler sampler(sys, seed);
  std::vector<TypeP> types;
  for (const auto& r : sys.rules())
    if (std::none_of(types.begin(), types.end(), [&](const TypeP& t) { return same_type(t, r.lhs->type()); }))
      types.push_back(r.lhs->type());
  if (types.empty()) types.push_back(int_type());
  auto instance_of_peak = [&](const TermP& u) {
    for (const auto& pk : peaks) {
      auto g = match(pk.source, u);
      if (g && respects(*g, pk.constraint)) return true;
    }
    return false;
  };
  for (int t = 0; t < trials; ++t) {
    ++rep.trials;
    // a rule's lhs shape with random ground arguments makes redexes likely
    TermP term;
    if (!sys.rules().empty() && std::uniform_int_distribution<int>(0, 3)(sampler.rng()) > 0) {
      const Rule& r = sys.rules()[std::uniform_int_distribution<std::size_t>(0, sys.rules().size() - 1)(sampler.rng())];
      term = substitute(r.lhs, sampler.ground_instance(vars_of(r.lhs), depth));
    } else {
      term = sampler.sample(types[t % types.size()], depth);
    }
    auto reducts = reduce_once(term, sys);
    for (std::size_t a = 0; a < reducts.size(); ++a) {
      for (std::size_t b = a + 1; b < reducts.size(); ++b) {
        if (term_equal(reducts[a].result, reducts[b].result)) continue;
        ++rep.local_peaks;
        if (instance_of_peak(subterm_at(term, reducts[a].pos)) || instance_of_peak(subterm_at(term, reducts[b].pos))) {
          ++rep.peak_instances;
          continue;
        }
        if (joinable_within(reducts[a].result, reducts[b].result, sys, join_depth)) {
          ++rep.joined;
          continue;
        }
        ++rep.unexplained;
        if (rep.examples.size() < 5)
          rep.examples.push_back(show(term) + " -> " + show(reducts[a].result) + " / " + show(reducts[b].result));
      }
    }
  }
  return rep;
}

}  // namespace bri
