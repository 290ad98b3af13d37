#include "bri/theory.hpp"

#include <map>
#include <mutex>

#include "bri/error.hpp"

namespace bri::theory {

namespace {

TypeP ii_i() { return arrows({int_type(), int_type()}, int_type()); }
TypeP ii_b() { return arrows({int_type(), int_type()}, bool_type()); }
TypeP bb_b() { return arrows({bool_type(), bool_type()}, bool_type()); }

SymbolP theory_sym(const std::string& name, TypeP t) {
  return make_symbol(name, std::move(t), SymKind::Theory);
}

}  // namespace

SymbolP plus() { static const SymbolP s = theory_sym("+", ii_i()); return s; }
SymbolP minus() { static const SymbolP s = theory_sym("-", ii_i()); return s; }
SymbolP times() { static const SymbolP s = theory_sym("*", ii_i()); return s; }
SymbolP lt() { static const SymbolP s = theory_sym("<", ii_b()); return s; }
SymbolP le() { static const SymbolP s = theory_sym("<=", ii_b()); return s; }
SymbolP gt() { static const SymbolP s = theory_sym(">", ii_b()); return s; }
SymbolP ge() { static const SymbolP s = theory_sym(">=", ii_b()); return s; }
SymbolP eq_int() { static const SymbolP s = theory_sym("=", ii_b()); return s; }
SymbolP eq_bool() { static const SymbolP s = theory_sym("=", bb_b()); return s; }
SymbolP conj() { static const SymbolP s = theory_sym("/\\", bb_b()); return s; }
SymbolP disj() { static const SymbolP s = theory_sym("\\/", bb_b()); return s; }
SymbolP neg() {
  static const SymbolP s = theory_sym("not", arrow(bool_type(), bool_type()));
  return s;
}

SymbolP bool_value(bool v) {
  static const SymbolP t = [] {
    auto s = std::make_shared<Symbol>();
    s->name = "true";
    s->type = bool_type();
    s->kind = SymKind::Value;
    s->bool_value = true;
    return SymbolP(s);
  }();
  static const SymbolP f = [] {
    auto s = std::make_shared<Symbol>();
    s->name = "false";
    s->type = bool_type();
    s->kind = SymKind::Value;
    s->bool_value = false;
    return SymbolP(s);
  }();
  return v ? t : f;
}

SymbolP true_sym() { return bool_value(true); }
SymbolP false_sym() { return bool_value(false); }

SymbolP int_value(const mpz_class& v) {
  auto s = std::make_shared<Symbol>();
  s->name = v.get_str();
  s->type = int_type();
  s->kind = SymKind::Value;
  s->int_value = v;
  return s;
}

TermP int_term(const mpz_class& v) { return mk_sym(int_value(v)); }
TermP bool_term(bool v) {
  static const TermP t = mk_sym(bool_value(true));
  static const TermP f = mk_sym(bool_value(false));
  return v ? t : f;
}

const std::vector<SymbolP>& calc_symbols() {
  static const std::vector<SymbolP> all{plus(), minus(), times(), lt(),    le(),   gt(),
                                        ge(),   eq_int(), eq_bool(), conj(), disj(), neg()};
  return all;
}

int calc_arity(const SymbolP& f) {
  if (f->kind != SymKind::Theory) return -1;
  return f->name == "not" ? 1 : 2;
}

bool is_infix(const std::string& name) { return infix_precedence(name) > 0; }

int infix_precedence(const std::string& name) {
  static const std::map<std::string, int> prec{
      {"\\/", 1}, {"/\\", 2}, {"<", 4}, {"<=", 4}, {">", 4}, {">=", 4},
      {"=", 4},   {"+", 5},   {"-", 5}, {"*", 6}};
  auto it = prec.find(name);
  return it == prec.end() ? 0 : it->second;
}

}  // namespace bri::theory

namespace bri {

bool is_value(const TermP& t) { return !t->var_head() && t->nargs() == 0 && t->symbol()->is_value(); }

bool is_theory_term(const TermP& t) {
  if (t->var_head()) return t->nargs() == 0 && is_theory_base(t->type());
  if (!t->symbol()->is_theory()) return false;
  for (const auto& a : t->args())
    if (!is_theory_term(a)) return false;
  return true;
}

bool is_theory_term_ho(const TermP& t) {
  if (!t->var_head() && !t->symbol()->is_theory()) return false;
  for (const auto& a : t->args())
    if (!is_theory_term_ho(a)) return false;
  return true;
}

bool is_constraint(const TermP& t) {
  return !t->type()->is_arrow() && t->type()->sort == "bool" && is_theory_term(t);
}

std::optional<TermP> try_evaluate(const TermP& t) {
  if (t->var_head()) return std::nullopt;
  const SymbolP& f = t->symbol();
  if (f->is_value()) {
    if (t->nargs() != 0) return std::nullopt;
    return t;
  }
  if (f->kind != SymKind::Theory) return std::nullopt;
  if (static_cast<int>(t->nargs()) != theory::calc_arity(f)) return std::nullopt;
  std::vector<TermP> vals;
  for (const auto& a : t->args()) {
    auto v = try_evaluate(a);
    if (!v) return std::nullopt;
    vals.push_back(*v);
  }
  const std::string& n = f->name;
  auto iv = [&](int i) -> const mpz_class& { return vals[i]->symbol()->int_value; };
  auto bv = [&](int i) { return vals[i]->symbol()->bool_value; };
  if (n == "not") return theory::bool_term(!bv(0));
  if (n == "+") return theory::int_term(iv(0) + iv(1));
  if (n == "-") return theory::int_term(iv(0) - iv(1));
  if (n == "*") return theory::int_term(iv(0) * iv(1));
  if (n == "<") return theory::bool_term(iv(0) < iv(1));
  if (n == "<=") return theory::bool_term(iv(0) <= iv(1));
  if (n == ">") return theory::bool_term(iv(0) > iv(1));
  if (n == ">=") return theory::bool_term(iv(0) >= iv(1));
  if (n == "/\\") return theory::bool_term(bv(0) && bv(1));
  if (n == "\\/") return theory::bool_term(bv(0) || bv(1));
  if (n == "=") {
    if (vals[0]->type()->sort == "int") return theory::bool_term(iv(0) == iv(1));
    return theory::bool_term(bv(0) == bv(1));
  }
  return std::nullopt;
}

TermP evaluate(const TermP& t) {
  auto v = try_evaluate(t);
  if (!v) throw Error("not-evaluable", "not a ground, fully applied theory term");
  return *v;
}

bool holds(const TermP& phi) { return evaluate(phi)->symbol()->bool_value; }

TermP mk_true() { return theory::bool_term(true); }
TermP mk_false() { return theory::bool_term(false); }

bool is_true(const TermP& phi) {
  return !phi->var_head() && phi->nargs() == 0 && phi->symbol()->is_value() &&
         phi->type()->sort == "bool" && phi->symbol()->bool_value;
}

TermP mk_binop(const SymbolP& op, const TermP& a, const TermP& b) { return mk_app(op, {a, b}); }

TermP mk_and(const TermP& a, const TermP& b) {
  if (is_true(a)) return b;
  if (is_true(b)) return a;
  TermP out = a;
  for (const auto& c : conjuncts(b)) out = mk_binop(theory::conj(), out, c);
  return out;
}

TermP mk_and(const std::vector<TermP>& parts) {
  TermP out;
  for (const auto& p : parts) {
    if (is_true(p)) continue;
    out = out ? mk_binop(theory::conj(), out, p) : p;
  }
  return out ? out : mk_true();
}

TermP mk_or(const std::vector<TermP>& parts) {
  TermP out;
  for (const auto& p : parts) out = out ? mk_binop(theory::disj(), out, p) : p;
  return out ? out : mk_false();
}

TermP mk_not(const TermP& a) { return mk_app(theory::neg(), {a}); }

TermP mk_eq(const TermP& a, const TermP& b) {
  return mk_binop(a->type()->sort == "bool" ? theory::eq_bool() : theory::eq_int(), a, b);
}

TermP mk_implies(const TermP& a, const TermP& b) {
  if (is_true(a)) return b;
  return mk_binop(theory::disj(), mk_not(a), b);
}

std::vector<TermP> conjuncts(const TermP& phi) {
  std::vector<TermP> out;
  std::vector<TermP> stack{phi};
  while (!stack.empty()) {
    TermP t = stack.back();
    stack.pop_back();
    if (!t->var_head() && t->nargs() == 2 && t->symbol()->name == "/\\" &&
        t->symbol()->kind == SymKind::Theory) {
      stack.push_back(t->args()[1]);
      stack.push_back(t->args()[0]);
    } else if (!is_true(t)) {
      out.push_back(t);
    }
  }
  return out;
}

bool respects(const Subst& gamma, const TermP& phi) {
  for (const auto& [id, v] : vars_of(phi)) {
    const TermP* img = gamma.find(id);
    if (!img || !is_value(*img)) return false;
  }
  auto r = try_evaluate(substitute(phi, gamma));
  return r && (*r)->symbol()->bool_value;
}

}  // namespace bri
