#include <algorithm>
#include <functional>
#include <set>

#include "bri/error.hpp"
#include "bri/ordering.hpp"
#include "bri/print.hpp"
#include "bri/theory.hpp"

namespace bri {

namespace {

// ---- lexicographic path order ----------------------------------------------

bool has_applied_var(const TermP& t) {
  if (t->var_head() && t->nargs() > 0) return true;
  for (const auto& a : t->args())
    if (has_applied_var(a)) return true;
  return false;
}

struct Lpo {
  std::map<std::string, int> rank;

  int prec(const SymbolP& f) const {
    if (f->is_value()) return -1;
    auto it = rank.find(f->name);
    return it == rank.end() ? -1 : it->second;
  }
  bool geq(const TermP& s, const TermP& t) const { return term_equal(s, t) || gt(s, t); }
  bool gt(const TermP& s, const TermP& t) const {
    if (s->var_head()) return false;
    if (t->is_var()) return contains_var(s, t->variable().id);
    for (const auto& a : s->args())
      if (geq(a, t)) return true;
    const SymbolP& f = s->symbol();
    const SymbolP& g = t->symbol();
    auto all_below = [&] {
      for (const auto& b : t->args())
        if (!gt(s, b)) return false;
      return true;
    };
    if (same_symbol(f, g)) {
      std::size_t n = std::min(s->nargs(), t->nargs());
      for (std::size_t i = 0; i < n; ++i) {
        if (term_equal(s->args()[i], t->args()[i])) continue;
        return gt(s->args()[i], t->args()[i]) && all_below();
      }
      return s->nargs() > t->nargs() && all_below();
    }
    int pf = prec(f), pg = prec(g);
    if (f->is_value() || pf <= pg) return false;
    return all_below();
  }
};

void collect_symbols(const TermP& t, std::set<std::string>& out) {
  if (!t->var_head() && !t->symbol()->is_value()) out.insert(t->symbol()->name);
  for (const auto& a : t->args()) collect_symbols(a, out);
}

std::optional<std::string> try_lpo(const std::vector<Rule>& rules) {
  std::set<std::string> syms;
  for (const auto& r : rules) {
    if (has_applied_var(r.lhs) || has_applied_var(r.rhs)) return std::nullopt;
    collect_symbols(r.lhs, syms);
    collect_symbols(r.rhs, syms);
  }
  std::vector<std::string> order(syms.begin(), syms.end());
  if (order.size() > 8) return std::nullopt;
  auto works = [&](const std::vector<std::string>& ord) {
    Lpo lpo;
    for (std::size_t i = 0; i < ord.size(); ++i) lpo.rank[ord[i]] = static_cast<int>(ord.size() - i);
    for (const auto& r : rules)
      if (!lpo.gt(r.lhs, r.rhs)) return false;
    return true;
  };
  do {
    if (works(order)) {
      std::string s;
      for (const auto& f : order) s += (s.empty() ? "" : " > ") + f;
      return "LPO with precedence " + s;
    }
  } while (std::next_permutation(order.begin(), order.end()));
  return std::nullopt;
}

// ---- dependency pairs -------------------------------------------------------

struct DP {
  TermP lhs;
  TermP rhs;
  TermP phi;
  std::string rule;
};

bool is_subterm(const TermP& small, const TermP& big) {
  for (const auto& p : positions(big))
    if (term_equal(subterm_at(big, p), small)) return true;
  return false;
}

bool is_proper_subterm(const TermP& small, const TermP& big) {
  return !term_equal(small, big) && is_subterm(small, big);
}

TermP cap(const TermP& t, const std::map<std::string, int>& defined) {
  if (t->var_head() && t->nargs() > 0) return mk_var(fresh_variable("c", t->type()));
  if (!t->var_head() && defined.count(t->symbol()->name)) return mk_var(fresh_variable("c", t->type()));
  if (!t->var_head() && t->symbol()->kind == SymKind::Theory) return mk_var(fresh_variable("c", t->type()));
  std::vector<TermP> args;
  for (const auto& a : t->args()) args.push_back(cap(a, defined));
  return t->nargs() ? with_args(t, std::move(args)) : t;
}

std::vector<std::vector<int>> tarjan(int n, const std::vector<std::vector<int>>& adj, const std::vector<bool>& alive) {
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<bool> on(n, false);
  std::vector<int> stack;
  std::vector<std::vector<int>> out;
  int counter = 0;
  std::function<void(int)> go = [&](int v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on[v] = true;
    for (int w : adj[v]) {
      if (!alive[w]) continue;
      if (index[w] < 0) {
        go(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<int> comp;
      int w;
      do {
        w = stack.back();
        stack.pop_back();
        on[w] = false;
        comp.push_back(w);
      } while (w != v);
      std::sort(comp.begin(), comp.end());
      out.push_back(comp);
    }
  };
  for (int v = 0; v < n; ++v)
    if (alive[v] && index[v] < 0) go(v);
  return out;
}

class DpProver {
 public:
  DpProver(const std::vector<Rule>& rules, SmtSolver& smt, const TerminationOptions& opts)
      : rules_(rules), smt_(smt), opts_(opts) {}

  TerminationResult run() {
    TerminationResult res;
    for (const auto& r : rules_) defined_[r.lhs->symbol()->name] = static_cast<int>(r.lhs->nargs());
    for (const auto& r : rules_)
      if (!collect_calls(r, r.rhs, res)) return res;
    int n = static_cast<int>(dps_.size());
    adj_.assign(n, {});
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (connected(dps_[i], dps_[j])) adj_[i].push_back(j);
    std::vector<bool> all(n, true);
    std::set<std::pair<std::string, std::string>> prec;
    auto comps = tarjan(n, adj_, all);
    std::vector<int> comp_of(n, -1);
    for (std::size_t c = 0; c < comps.size(); ++c)
      for (int v : comps[c]) comp_of[v] = static_cast<int>(c);
    for (int i = 0; i < n; ++i)
      for (int j : adj_[i])
        if (comp_of[i] != comp_of[j]) {
          std::string f = dps_[i].lhs->symbol()->name, g = dps_[j].lhs->symbol()->name;
          if (f != g) prec.insert({f, g});
        }
    for (int i = 0; i < n; ++i) {
      std::string f = dps_[i].lhs->symbol()->name, g = dps_[i].rhs->symbol()->name;
      bool cyclic = false;
      for (int j : adj_[i])
        if (comp_of[j] == comp_of[i]) cyclic = true;
      if (f != g && !cyclic) prec.insert({f, g});
    }
    std::vector<std::string> methods;
    // callers before callees, so the certificate follows the precedence
    for (auto it = comps.rbegin(); it != comps.rend(); ++it) {
      const auto& comp = *it;
      if (!solve(comp, methods, res.log)) {
        res.status = TerminationResult::Status::Failed;
        std::string syms;
        for (int v : comp) syms += " " + dps_[v].rule;
        res.certificate = "no order found for the dependency pairs of" + syms;
        return res;
      }
    }
    res.status = TerminationResult::Status::Proved;
    std::string cert = "dependency pairs";
    if (!prec.empty()) {
      std::string p;
      for (const auto& [f, g] : prec) p += (p.empty() ? "" : ", ") + f + " > " + g;
      cert += "; precedence " + p;
    }
    for (const auto& m : methods) cert += "; " + m;
    res.certificate = cert;
    return res;
  }

 private:
  bool collect_calls(const Rule& r, const TermP& u, TerminationResult& res) {
    if (u->var_head() && u->nargs() > 0) {
      bool direct = false;
      for (const auto& a : r.lhs->args())
        if (a->is_var() && a->variable().id == u->variable().id) direct = true;
      if (!direct) {
        res.status = TerminationResult::Status::Failed;
        res.certificate = r.name + ": call through variable " + u->variable().name + ", which is not an argument of the left-hand side";
        return false;
      }
      res.log.push_back(r.name + ": call " + show(u) + " through argument " + u->variable().name + " skipped");
    } else if (!u->var_head()) {
      auto it = defined_.find(u->symbol()->name);
      if (it != defined_.end()) {
        int k = it->second;
        TermP call = u;
        if (static_cast<int>(u->nargs()) >= k) {
          call = prefix(u, static_cast<std::size_t>(k));
        } else {
          auto tys = arg_types(u->type());
          std::vector<TermP> extra;
          for (int i = static_cast<int>(u->nargs()); i < k; ++i)
            extra.push_back(mk_var(fresh_variable("w", tys[i - u->nargs()])));
          call = mk_app(u, extra);
        }
        dps_.push_back({r.lhs, call, r.constraint, r.name});
      }
    }
    for (const auto& a : u->args())
      if (!collect_calls(r, a, res)) return false;
    return true;
  }

  bool connected(const DP& a, const DP& b) {
    if (!same_symbol(a.rhs->symbol(), b.lhs->symbol())) return false;
    std::vector<TermP> args;
    for (const auto& x : a.rhs->args()) args.push_back(cap(x, defined_));
    TermP capped = a.rhs->nargs() ? with_args(a.rhs, args) : a.rhs;
    TermP l = substitute(b.lhs, renaming(vars_of(b.lhs)));
    return unify(capped, l).has_value();
  }

  bool has_cycle(const std::vector<int>& comp) {
    if (comp.size() > 1) return true;
    for (int w : adj_[comp[0]])
      if (w == comp[0]) return true;
    return false;
  }

  bool solve(const std::vector<int>& comp, std::vector<std::string>& methods, std::vector<std::string>& log) {
    if (comp.empty() || !has_cycle(comp)) return true;
    std::vector<int> removed;
    std::string how;
    if (!subterm_criterion(comp, removed, how) && !measure(comp, removed, how)) return false;
    methods.push_back(how);
    std::vector<bool> alive(dps_.size(), false);
    for (int v : comp) alive[v] = true;
    for (int v : removed) alive[v] = false;
    for (const auto& sub : tarjan(static_cast<int>(dps_.size()), adj_, alive))
      if (!solve(sub, methods, log)) return false;
    return true;
  }

  std::vector<std::string> symbols_of(const std::vector<int>& comp) {
    std::set<std::string> s;
    for (int v : comp) s.insert(dps_[v].lhs->symbol()->name);
    return {s.begin(), s.end()};
  }

  bool subterm_criterion(const std::vector<int>& comp, std::vector<int>& removed, std::string& how) {
    auto syms = symbols_of(comp);
    std::vector<int> proj(syms.size(), 0);
    std::vector<int> limit;
    for (const auto& f : syms) limit.push_back(defined_[f]);
    for (int l : limit)
      if (l == 0) return false;
    long combos = 1;
    for (int l : limit) combos *= l;
    if (combos > 4096) return false;
    for (long c = 0; c < combos; ++c) {
      long x = c;
      for (std::size_t i = 0; i < syms.size(); ++i) {
        proj[i] = static_cast<int>(x % limit[i]);
        x /= limit[i];
      }
      auto pi = [&](const std::string& f) {
        return proj[std::find(syms.begin(), syms.end(), f) - syms.begin()];
      };
      std::vector<int> strict;
      bool ok = true;
      for (int v : comp) {
        const DP& d = dps_[v];
        TermP l = d.lhs->args()[pi(d.lhs->symbol()->name)];
        TermP r = d.rhs->args()[pi(d.rhs->symbol()->name)];
        if (is_proper_subterm(r, l)) {
          strict.push_back(v);
        } else if (!term_equal(r, l)) {
          ok = false;
          break;
        }
      }
      if (ok && !strict.empty()) {
        removed = strict;
        how.clear();
        for (std::size_t i = 0; i < syms.size(); ++i)
          how += (i ? ", " : "") + syms[i] + ": subterm criterion on argument " + std::to_string(proj[i] + 1);
        return true;
      }
    }
    return false;
  }

  static bool is_constrained_value(const TermP& t, const VarSet& phi_vars) {
    if (!same_type(t->type(), int_type()) || !is_theory_term(t)) return false;
    for (const auto& [id, v] : vars_of(t))
      if (!phi_vars.count(id)) return false;
    return true;
  }

  // Int argument positions of f usable by a measure within comp.
  std::vector<int> usable_positions(const std::string& f, const std::vector<int>& comp) {
    std::vector<int> out;
    for (int i = 0; i < defined_[f]; ++i) {
      bool ok = true;
      bool seen = false;
      for (int v : comp) {
        const DP& d = dps_[v];
        if (d.lhs->symbol()->name != f) continue;
        seen = true;
        const TermP& a = d.lhs->args()[i];
        if (!same_type(a->type(), int_type())) {
          ok = false;
          break;
        }
        if (is_value(a)) continue;
        if (opts_.int_normal_forms_are_values && a->is_var()) continue;
        if (!a->is_var() || !vars_of(d.phi).count(a->variable().id)) ok = false;
      }
      if (ok && seen) out.push_back(i);
    }
    return out;
  }

  // Value of an argument inside the measure. An unconstrained variable keeps
  // its name (it denotes the same bound on both sides); other terms become
  // fresh variables.
  TermP arg_value(const TermP& t, const VarSet& phi_vars) {
    if (is_constrained_value(t, phi_vars)) return t;
    if (opts_.int_normal_forms_are_values && t->is_var() && same_type(t->type(), int_type())) return t;
    return mk_var(fresh_variable("u", int_type()));
  }

  static TermP scaled(int c, const TermP& x) {
    if (c == 1) return x;
    return mk_binop(theory::times(), theory::int_term(c), x);
  }

  // sum c_i x_i + d_i max(x_i, 0); side collects the definitions of the maxima.
  TermP measure_of(const std::vector<int>& coef, const std::vector<TermP>& xs, std::vector<TermP>& side) {
    std::size_t k = xs.size();
    TermP sum;
    auto add = [&](const TermP& t) { sum = sum ? mk_binop(theory::plus(), sum, t) : t; };
    for (std::size_t i = 0; i < k; ++i)
      if (coef[i] != 0) add(scaled(coef[i], xs[i]));
    for (std::size_t i = 0; i < k; ++i) {
      if (coef[k + i] == 0) continue;
      TermP p = mk_var(fresh_variable("p", int_type()));
      TermP zero = theory::int_term(0);
      side.push_back(mk_binop(theory::ge(), p, zero));
      side.push_back(mk_binop(theory::ge(), p, xs[i]));
      side.push_back(mk_or({mk_eq(p, zero), mk_eq(p, xs[i])}));
      add(scaled(coef[k + i], p));
    }
    return sum ? sum : theory::int_term(0);
  }

  static std::string describe(const std::vector<int>& coef, const std::vector<std::string>& names) {
    std::size_t k = names.size();
    std::vector<std::pair<int, std::string>> terms;
    for (std::size_t i = 0; i < k; ++i)
      if (coef[i]) terms.push_back({coef[i], names[i]});
    for (std::size_t i = 0; i < k; ++i)
      if (coef[k + i]) terms.push_back({coef[k + i], "max(" + names[i] + ", 0)"});
    std::stable_partition(terms.begin(), terms.end(), [](const auto& t) { return t.first > 0; });
    std::string s;
    for (const auto& [c, n] : terms) {
      int a = std::abs(c);
      std::string body = (a == 1 ? "" : std::to_string(a) + "*") + n;
      if (s.empty())
        s = (c < 0 ? "-" : "") + body;
      else
        s += (c < 0 ? " - " : " + ") + body;
    }
    return s;
  }

  bool measure(const std::vector<int>& comp, std::vector<int>& removed, std::string& how) {
    auto syms = symbols_of(comp);
    std::map<std::string, std::vector<int>> pos;
    std::size_t k = 0;
    for (const auto& f : syms) {
      pos[f] = usable_positions(f, comp);
      if (f == syms[0]) k = pos[f].size();
      if (pos[f].size() != k) return false;
    }
    if (k == 0 || k > 3) return false;
    // A measure argument that may reach the next pair unevaluated only admits
    // non-negative coefficients.
    std::vector<bool> monotone(k, false);
    for (int v : comp) {
      const DP& d = dps_[v];
      VarSet phi_vars = vars_of(d.phi);
      const auto& ps = pos[d.rhs->symbol()->name];
      for (std::size_t j = 0; j < ps.size(); ++j)
        if (!is_constrained_value(d.rhs->args()[ps[j]], phi_vars)) monotone[j] = true;
    }
    std::vector<std::vector<int>> candidates;
    std::vector<int> c(2 * k, 0);
    std::function<void(std::size_t)> gen = [&](std::size_t i) {
      if (i == c.size()) {
        int norm = 0;
        for (int x : c) norm += std::abs(x);
        if (norm > 0 && norm <= 4) candidates.push_back(c);
        return;
      }
      for (int v = -2; v <= 2; ++v) {
        if ((i >= k || monotone[i]) && v < 0) continue;
        c[i] = v;
        gen(i + 1);
      }
      c[i] = 0;
    };
    gen(0);
    auto key = [k](const std::vector<int>& v) {
      int norm = 0, uses_max = 0;
      for (std::size_t i = 0; i < v.size(); ++i) {
        norm += std::abs(v[i]);
        if (i >= k && v[i]) uses_max = 1;
      }
      return std::make_pair(uses_max, norm);
    };
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](const auto& a, const auto& b) { return key(a) < key(b); });
    for (const auto& coef : candidates) {
      std::vector<int> strict;
      bool ok = true;
      for (int v : comp) {
        const DP& d = dps_[v];
        VarSet phi_vars = vars_of(d.phi);
        std::vector<TermP> lx, rx;
        for (int i : pos[d.lhs->symbol()->name]) lx.push_back(arg_value(d.lhs->args()[i], phi_vars));
        for (int i : pos[d.rhs->symbol()->name]) rx.push_back(arg_value(d.rhs->args()[i], phi_vars));
        std::vector<TermP> side{d.phi};
        TermP ml = measure_of(coef, lx, side), mr = measure_of(coef, rx, side);
        TermP hyp = mk_and(side);
        ValidityResult weak = smt_.implies(hyp, mk_binop(theory::ge(), ml, mr));
        if (weak.validity != Validity::Valid) {
          ok = false;
          break;
        }
        TermP strict_goal = mk_and(mk_binop(theory::gt(), ml, mr), mk_binop(theory::ge(), ml, theory::int_term(0)));
        if (smt_.implies(hyp, strict_goal).validity == Validity::Valid) strict.push_back(v);
      }
      if (ok && !strict.empty()) {
        removed = strict;
        how.clear();
        for (std::size_t s = 0; s < syms.size(); ++s) {
          std::vector<std::string> names;
          TermP rep;
          for (int v : comp)
            if (dps_[v].lhs->symbol()->name == syms[s]) {
              rep = dps_[v].lhs;
              break;
            }
          for (int i : pos[syms[s]]) names.push_back(rep->args()[i]->is_var() ? rep->args()[i]->variable().name : "arg" + std::to_string(i + 1));
          how += (s ? ", " : "") + syms[s] + ": measure " + describe(coef, names);
        }
        return true;
      }
    }
    return false;
  }

  const std::vector<Rule>& rules_;
  SmtSolver& smt_;
  TerminationOptions opts_;
  std::map<std::string, int> defined_;
  std::vector<DP> dps_;
  std::vector<std::vector<int>> adj_;
};

}  // namespace

TerminationResult check_termination(const std::vector<Rule>& rules, SmtSolver& smt, const TerminationOptions& opts) {
  if (auto lpo = try_lpo(rules)) {
    TerminationResult r;
    r.status = TerminationResult::Status::Proved;
    r.certificate = *lpo;
    return r;
  }
  DpProver p(rules, smt, opts);
  return p.run();
}

}  // namespace bri
