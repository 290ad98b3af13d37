#include "bri/subst.hpp"

#include <set>
#include <vector>

#include "bri/error.hpp"

namespace bri {

void Subst::bind(const Variable& x, TermP t) {
  if (!same_type(x.type, t->type()))
    throw Error("type-mismatch", "cannot bind " + x.name + " : " + to_string(x.type) +
                                     " to a term of type " + to_string(t->type()));
  map_[x.id] = {x, std::move(t)};
}

const TermP* Subst::find(long id) const {
  auto it = map_.find(id);
  return it == map_.end() ? nullptr : &it->second.second;
}

TermP substitute(const TermP& t, const Subst& s) {
  if (s.empty()) return t;
  std::vector<TermP> args;
  bool changed = false;
  args.reserve(t->nargs());
  for (const auto& a : t->args()) {
    TermP b = substitute(a, s);
    changed = changed || b != a;
    args.push_back(std::move(b));
  }
  if (t->var_head()) {
    if (const TermP* img = s.find(t->variable().id)) return mk_app(*img, args);
  }
  if (!changed) return t;
  return with_args(t, std::move(args));
}

Subst compose(const Subst& a, const Subst& b) {
  Subst out;
  for (const auto& [id, entry] : a.map()) out.bind(entry.first, substitute(entry.second, b));
  for (const auto& [id, entry] : b.map())
    if (!a.contains(id)) out.bind(entry.first, entry.second);
  return out;
}

Subst restrict(const Subst& s, const VarSet& vars) {
  Subst out;
  for (const auto& [id, entry] : s.map())
    if (vars.count(id)) out.bind(entry.first, entry.second);
  return out;
}

namespace {

TermP init_of(const TermP& t) { return prefix(t, t->nargs() - 1); }

}  // namespace

bool match_into(const TermP& p, const TermP& t, Subst& s) {
  if (p->is_var()) {
    if (const TermP* img = s.find(p->variable().id)) return term_equal(*img, t);
    if (!same_type(p->type(), t->type())) return false;
    s.bind(p->variable(), t);
    return true;
  }
  if (p->nargs() > 0) {
    if (t->nargs() == 0) return false;
    return match_into(init_of(p), init_of(t), s) && match_into(p->args().back(), t->args().back(), s);
  }
  return t->nargs() == 0 && !t->var_head() && same_symbol(p->symbol(), t->symbol());
}

std::optional<Subst> match(const TermP& pattern, const TermP& t) {
  Subst s;
  if (!match_into(pattern, t, s)) return std::nullopt;
  return s;
}

namespace {

// Binds x := t in an idempotent substitution.
void bind_idempotent(Subst& s, const Variable& x, const TermP& t) {
  Subst single;
  single.bind(x, t);
  Subst out;
  for (const auto& [id, entry] : s.map()) out.bind(entry.first, substitute(entry.second, single));
  out.bind(x, t);
  s = std::move(out);
}

}  // namespace

bool unify_into(const TermP& a0, const TermP& b0, Subst& s) {
  std::vector<std::pair<TermP, TermP>> work{{a0, b0}};
  while (!work.empty()) {
    auto [a, b] = work.back();
    work.pop_back();
    a = substitute(a, s);
    b = substitute(b, s);
    if (term_equal(a, b)) continue;
    if (a->is_var() || b->is_var()) {
      if (!a->is_var()) std::swap(a, b);
      if (!same_type(a->type(), b->type())) return false;
      if (contains_var(b, a->variable().id)) return false;
      bind_idempotent(s, a->variable(), b);
      continue;
    }
    if (a->nargs() > 0 && b->nargs() > 0) {
      work.emplace_back(a->args().back(), b->args().back());
      work.emplace_back(init_of(a), init_of(b));
      continue;
    }
    return false;
  }
  return true;
}

std::optional<Subst> unify(const TermP& a, const TermP& b) {
  Subst s;
  if (!unify_into(a, b, s)) return std::nullopt;
  return s;
}

Subst renaming(const VarSet& vars) {
  Subst s;
  for (const auto& [id, v] : vars) s.bind(v, mk_var(fresh_variable(v.name, v.type)));
  return s;
}

bool is_renaming(const Subst& s) {
  std::set<long> images;
  for (const auto& [id, entry] : s.map()) {
    if (!entry.second->is_var()) return false;
    if (!images.insert(entry.second->variable().id).second) return false;
  }
  return true;
}

}  // namespace bri
