#include "doctest.h"
#include "support.hpp"

using namespace bri;
using bri::test::constraint;
using bri::test::term;

namespace {

RewriteSystem empty_system() { return parse_system(""); }

bool holds_text(const std::string& phi) {
  RewriteSystem sys = empty_system();
  return holds(term(sys, phi));
}

}  // namespace

TEST_CASE("ground evaluation") {
  RewriteSystem sys = empty_system();
  CHECK(show(evaluate(term(sys, "7 * 0"))) == "0");
  CHECK(show(evaluate(term(sys, "1 - 1"))) == "0");
  CHECK(show(evaluate(term(sys, "true"))) == "true");
  CHECK(show(evaluate(term(sys, "2 + 3 * 4"))) == "14");
  CHECK(show(evaluate(term(sys, "not (1 < 2) \\/ 3 >= 3"))) == "true");
  // arbitrary precision
  CHECK(show(evaluate(term(sys, "123456789123456789 * 1000000000000"))) == "123456789123456789000000000000");
  CHECK_FALSE(try_evaluate(term(sys, "(+) 1")).has_value());
  Scope sc;
  CHECK_FALSE(try_evaluate(term(sys, "x + 1", sc)).has_value());
}

TEST_CASE("solver validity and satisfiability") {
  RewriteSystem sys = empty_system();
  SmtSolver& smt = default_solver();
  Scope sc;
  auto v = smt.implies(constraint(sys, "i' = i - 1 /\\ n' = n + 1 /\\ i = n", sc), constraint(sys, "n > i'", sc));
  CHECK(v.validity == Validity::Valid);

  Scope s2;
  CHECK(smt.valid(constraint(sys, "x + 0 = x", s2)).validity == Validity::Valid);

  Scope s3;
  TermP gt0 = constraint(sys, "x > 0", s3);
  auto inv = smt.valid(gt0);
  REQUIRE(inv.validity == Validity::Invalid);
  // the countermodel must falsify the formula
  CHECK_FALSE(holds(substitute(gt0, inv.countermodel)));

  Scope s4;
  TermP e1 = constraint(sys, "n' <= 0 /\\ n' = n - 1 /\\ k < 0 /\\ n > 0 /\\ k = n + m", s4);
  auto sat = smt.check_sat(e1);
  REQUIRE(sat.verdict == SmtVerdict::Sat);
  CHECK(respects(sat.model, e1));

  CHECK(smt.check_sat(mk_false()).verdict == SmtVerdict::Unsat);
  Scope s5;
  CHECK(smt.satisfiable(constraint(sys, "n > 0 /\\ m > 0", s5)));
}

TEST_CASE("entailment under a substitution") {
  RewriteSystem sys = empty_system();
  SmtSolver& smt = default_solver();
  Scope sc;
  TermP psi = constraint(sys, "i' = i + 1", sc);
  Scope rule;
  TermP phi = constraint(sys, "i < n", rule);
  Subst delta;
  delta.bind(rule.vars.at("i"), mk_var(sc.vars.at("i")));
  delta.bind(rule.vars.at("n"), mk_var(sc.vars.at("i'")));
  CHECK(entails_under(smt, psi, delta, phi).ok);

  CHECK(entails_under(smt, psi, {}, mk_true()).ok);

  Scope s2;
  TermP ge = constraint(sys, "i >= n", s2);
  TermP lt = constraint(sys, "i < n", s2);
  Entailment e = entails_under(smt, ge, {}, lt);
  CHECK_FALSE(e.ok);
  CHECK(e.code == "entailment-failed");
  CHECK(holds(substitute(ge, e.countermodel)));
  CHECK_FALSE(holds(substitute(lt, e.countermodel)));

  // delta must map constraint variables to values or variables of psi
  Scope s3;
  TermP psi3 = constraint(sys, "x > 0", s3);
  Scope r3;
  TermP phi3 = constraint(sys, "y > 0", r3);
  Subst bad;
  bad.bind(r3.vars.at("y"), term(sys, "z + 1", s3));
  Entailment e3 = entails_under(smt, psi3, bad, phi3);
  CHECK_FALSE(e3.ok);
  CHECK(e3.code == "var-condition");
}

TEST_CASE("respecting substitutions") {
  RewriteSystem sys = empty_system();
  Scope sc;
  TermP phi = constraint(sys, "i >= n", sc);
  Subst g;
  g.bind(sc.vars.at("n"), theory::int_term(0));
  g.bind(sc.vars.at("i"), theory::int_term(1));
  CHECK(respects(g, phi));
  CHECK(respects(g, mk_true()));
  Subst h;
  h.bind(sc.vars.at("i"), theory::int_term(0));
  h.bind(sc.vars.at("n"), theory::int_term(1));
  CHECK_FALSE(respects(h, phi));
  CHECK(holds_text("0 >= 0"));
}

TEST_CASE("calculation rules") {
  const Rule& minus = calc_rule_for(theory::minus());
  CHECK(minus.lhs->nargs() == 2);
  CHECK(minus.rhs->is_var());
  CHECK(show(minus.constraint) == show(mk_eq(minus.rhs, minus.lhs)));
  const Rule& neg = calc_rule_for(theory::neg());
  CHECK(neg.lhs->nargs() == 1);
  const Rule& conj = calc_rule_for(theory::conj());
  CHECK(conj.lhs->nargs() == 2);
  CHECK(same_type(conj.rhs->type(), bool_type()));

  RewriteSystem sys = empty_system();
  auto r = calc_step(term(sys, "4 - 1"));
  REQUIRE(r.has_value());
  CHECK(show(*r) == "3");
  CHECK_FALSE(calc_step(term(sys, "4")).has_value());
}
