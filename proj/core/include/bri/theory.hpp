#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "bri/subst.hpp"
#include "bri/term.hpp"

namespace bri::theory {

SymbolP plus();
SymbolP minus();
SymbolP times();
SymbolP lt();
SymbolP le();
SymbolP gt();
SymbolP ge();
SymbolP eq_int();
SymbolP eq_bool();
SymbolP conj();
SymbolP disj();
SymbolP neg();
SymbolP true_sym();
SymbolP false_sym();

SymbolP int_value(const mpz_class& v);
SymbolP bool_value(bool v);
TermP int_term(const mpz_class& v);
TermP bool_term(bool v);

// Theory symbols that carry calculation rules.
const std::vector<SymbolP>& calc_symbols();
// Number of arguments a calculation symbol needs (2 for binary operators).
int calc_arity(const SymbolP& f);
// Binary infix operator name, or nullptr.
bool is_infix(const std::string& name);
int infix_precedence(const std::string& name);

}  // namespace bri::theory

namespace bri {

bool is_value(const TermP& t);
// Built from theory symbols and base-type variables only.
bool is_theory_term(const TermP& t);
// Built from theory symbols and variables of any type.
bool is_theory_term_ho(const TermP& t);
// A bool theory term whose variables all have theory sorts.
bool is_constraint(const TermP& t);

// Value of a ground theory term whose applications are all complete.
TermP evaluate(const TermP& t);
std::optional<TermP> try_evaluate(const TermP& t);
bool holds(const TermP& ground_constraint);

TermP mk_true();
TermP mk_false();
TermP mk_and(const TermP& a, const TermP& b);
TermP mk_and(const std::vector<TermP>& parts);
TermP mk_or(const std::vector<TermP>& parts);
TermP mk_not(const TermP& a);
TermP mk_eq(const TermP& a, const TermP& b);
TermP mk_implies(const TermP& a, const TermP& b);
TermP mk_binop(const SymbolP& op, const TermP& a, const TermP& b);
// Flattened conjuncts; "true" contributes nothing.
std::vector<TermP> conjuncts(const TermP& phi);
bool is_true(const TermP& phi);

// gamma(x) is a value for every x in Var(phi) and phi.gamma evaluates to true.
bool respects(const Subst& gamma, const TermP& phi);

}  // namespace bri
