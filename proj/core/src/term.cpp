#include "bri/term.hpp"

#include <atomic>
#include <functional>

#include "bri/error.hpp"

namespace bri {

namespace {

std::atomic<long> next_var_id{1};

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

}  // namespace

SymbolP make_symbol(const std::string& name, TypeP type, SymKind kind) {
  auto s = std::make_shared<Symbol>();
  s->name = name;
  s->type = std::move(type);
  s->kind = kind;
  return s;
}

bool same_symbol(const SymbolP& a, const SymbolP& b) {
  if (a == b) return true;
  return a->name == b->name && a->kind == b->kind && same_type(a->type, b->type);
}

Variable fresh_variable(const std::string& name, TypeP type) {
  return Variable{next_var_id.fetch_add(1), name, std::move(type)};
}

TermP mk_sym(const SymbolP& f) {
  auto t = std::make_shared<Term>();
  t->sym_ = f;
  t->type_ = f->type;
  t->hash_ = std::hash<std::string>{}(f->name);
  return t;
}

TermP mk_var(const Variable& x) {
  auto t = std::make_shared<Term>();
  t->var_head_ = true;
  t->var_ = x;
  t->type_ = x.type;
  t->hash_ = mix(0x51ed27, static_cast<std::size_t>(x.id));
  return t;
}

TermP with_args(const TermP& base, std::vector<TermP> args) {
  auto t = std::make_shared<Term>();
  t->var_head_ = base->var_head_;
  t->sym_ = base->sym_;
  t->var_ = base->var_;
  TypeP ty = base->var_head_ ? base->var_.type : base->sym_->type;
  std::size_t h = base->var_head_ ? mix(0x51ed27, static_cast<std::size_t>(base->var_.id))
                                  : std::hash<std::string>{}(base->sym_->name);
  for (const auto& a : args) {
    if (!ty->is_arrow() || !same_type(ty->from, a->type()))
      throw Error("type-mismatch", "cannot apply " + base->head_name() + " of type " +
                                       to_string(ty) + " to argument of type " +
                                       to_string(a->type()));
    ty = ty->to;
    h = mix(h, a->hash());
  }
  t->args_ = std::move(args);
  t->type_ = ty;
  t->hash_ = h;
  return t;
}

TermP mk_app(const TermP& t, const std::vector<TermP>& extra) {
  if (extra.empty()) return t;
  std::vector<TermP> args = t->args();
  args.insert(args.end(), extra.begin(), extra.end());
  return with_args(t, std::move(args));
}

TermP mk_app(const SymbolP& f, const std::vector<TermP>& args) { return mk_app(mk_sym(f), args); }

TermP head_of(const TermP& t) {
  if (t->args().empty()) return t;
  return with_args(t, {});
}

TermP prefix(const TermP& t, std::size_t k) {
  if (k == t->nargs()) return t;
  return with_args(t, std::vector<TermP>(t->args().begin(), t->args().begin() + k));
}

bool term_equal(const TermP& a, const TermP& b) {
  if (a == b) return true;
  if (a->hash() != b->hash()) return false;
  if (a->var_head() != b->var_head()) return false;
  if (a->nargs() != b->nargs()) return false;
  if (a->var_head()) {
    if (a->variable().id != b->variable().id) return false;
  } else if (!same_symbol(a->symbol(), b->symbol())) {
    return false;
  }
  for (std::size_t i = 0; i < a->nargs(); ++i)
    if (!term_equal(a->args()[i], b->args()[i])) return false;
  return true;
}

int term_compare(const TermP& a, const TermP& b) {
  if (a == b) return 0;
  if (a->var_head() != b->var_head()) return a->var_head() ? -1 : 1;
  if (a->var_head()) {
    if (a->variable().id != b->variable().id) return a->variable().id < b->variable().id ? -1 : 1;
  } else {
    int c = a->symbol()->name.compare(b->symbol()->name);
    if (c != 0) return c < 0 ? -1 : 1;
    std::string ta = to_string(a->symbol()->type), tb = to_string(b->symbol()->type);
    if (ta != tb) return ta < tb ? -1 : 1;
  }
  if (a->nargs() != b->nargs()) return a->nargs() < b->nargs() ? -1 : 1;
  for (std::size_t i = 0; i < a->nargs(); ++i) {
    int c = term_compare(a->args()[i], b->args()[i]);
    if (c != 0) return c;
  }
  return 0;
}

void collect_vars(const TermP& t, VarSet& out) {
  if (t->var_head()) out.emplace(t->variable().id, t->variable());
  for (const auto& a : t->args()) collect_vars(a, out);
}

VarSet vars_of(const TermP& t) {
  VarSet s;
  collect_vars(t, s);
  return s;
}

std::vector<Variable> vars_in_order(const TermP& t) {
  std::vector<Variable> out;
  VarSet seen;
  std::function<void(const TermP&)> go = [&](const TermP& u) {
    if (u->var_head() && seen.emplace(u->variable().id, u->variable()).second)
      out.push_back(u->variable());
    for (const auto& a : u->args()) go(a);
  };
  go(t);
  return out;
}

bool contains_var(const TermP& t, long id) {
  if (t->var_head() && t->variable().id == id) return true;
  for (const auto& a : t->args())
    if (contains_var(a, id)) return true;
  return false;
}

bool is_ground(const TermP& t) {
  if (t->var_head()) return false;
  for (const auto& a : t->args())
    if (!is_ground(a)) return false;
  return true;
}

std::size_t term_size(const TermP& t) {
  std::size_t n = 1;
  for (const auto& a : t->args()) n += term_size(a);
  return n;
}

bool well_typed(const TermP& t) {
  TypeP ty = t->var_head() ? t->variable().type : t->symbol()->type;
  for (const auto& a : t->args()) {
    if (!well_typed(a)) return false;
    if (!ty->is_arrow() || !same_type(ty->from, a->type())) return false;
    ty = ty->to;
  }
  return same_type(ty, t->type());
}

}  // namespace bri

namespace bri {

std::string fresh_name(const std::string& base, const std::set<std::string>& taken) {
  std::string name = base;
  while (taken.count(name)) name += "'";
  return name;
}

std::set<std::string> var_names(const VarSet& vars) {
  std::set<std::string> out;
  for (const auto& [id, v] : vars) out.insert(v.name);
  return out;
}

}  // namespace bri
