#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bri/position.hpp"
#include "bri/subst.hpp"
#include "bri/term.hpp"

namespace bri {

class SmtSolver;
struct Entailment;

enum class RuleOrigin { User, Calc, Abstracted };

struct Rule {
  std::string name;
  TermP lhs;
  TermP rhs;
  TermP constraint;
  RuleOrigin origin = RuleOrigin::User;
};

struct Equation {
  std::string name;
  TermP lhs;
  TermP rhs;
  TermP constraint;
};

enum class AxiomMode { GroundConfluent, BoundedConvertible };

struct Axiom {
  Equation eq;
  AxiomMode mode = AxiomMode::GroundConfluent;
};

std::string show(const Rule& r);
std::string show(const Equation& e);

// Calculation rule f x1 .. xm -> y [y = f x1 .. xm] for a theory symbol.
const Rule& calc_rule_for(const SymbolP& f);

class RewriteSystem {
 public:
  void add_sort(const std::string& name);
  void add_symbol(const SymbolP& f);
  // Validates and appends; names it R<k> when name is empty.
  void add_rule(Rule r);
  void add_axiom(Axiom a);
  void add_goal(Equation e);

  SymbolP find_symbol(const std::string& name) const;
  bool has_sort(const std::string& name) const;

  // Number of arguments in the left-hand sides of f's rules; nullopt means
  // infinite (constructors and values).
  std::optional<int> arity(const SymbolP& f) const;
  bool is_defined(const SymbolP& f) const;
  const std::vector<std::size_t>& rule_indices(const SymbolP& f) const;
  // Term symbols (declared order) whose type ends in the given sort.
  std::vector<SymbolP> symbols_with_result(const TypeP& type) const;

  const std::vector<std::string>& sorts() const { return sorts_; }
  const std::vector<SymbolP>& symbols() const { return symbols_; }
  const std::vector<Rule>& rules() const { return rules_; }
  const std::vector<Axiom>& axioms() const { return axioms_; }
  const std::vector<Equation>& goals() const { return goals_; }
  void clear_goals() { goals_.clear(); }
  // Includes constructors whose result is a theory sort (those make the
  // theory sorts extensible).
  std::vector<std::string> warnings() const;
  // Some rule-less symbol produces a theory sort.
  bool has_theory_constructors() const;

  bool trust_quasi_reductive = false;
  bool trust_termination = false;

 private:
  std::vector<std::string> sorts_;
  std::vector<SymbolP> symbols_;
  std::map<std::string, SymbolP> by_name_;
  std::vector<Rule> rules_;
  std::vector<Axiom> axioms_;
  std::vector<Equation> goals_;
  std::map<std::string, int> arity_;
  std::map<std::string, std::vector<std::size_t>> by_head_;
  std::vector<std::string> warnings_;
};

// Instantiates rule so that lhs.gamma = u and gamma respects the constraint.
// Constraint variables outside the lhs are solved from "y = e" conjuncts.
std::optional<Subst> rule_instance(const Rule& rule, const TermP& u);
// One calculation step at the root of u, if any.
std::optional<TermP> calc_step(const TermP& u);

// Rule instance at u under the constraint psi: lhs.delta = u, constraint
// variables outside the lhs are resolved from "y = e" conjuncts (via psi's
// own definitions when e is not ground), and psi |=^delta phi. On failure
// why (if given) receives the reason.
std::optional<Subst> constrained_instance(const Rule& rule, const TermP& u, const TermP& psi, SmtSolver& smt,
                                          const Subst& given = {}, Entailment* why = nullptr);
// Variable x with a conjunct x = e (or e = x) of psi, if any.
std::optional<Variable> defined_as(const TermP& psi, const TermP& e);

struct Reduct {
  Position pos;
  std::string rule;  // rule name, or "calc"
  Subst subst;
  TermP result;
};

std::vector<Reduct> reduce_once(const TermP& t, const RewriteSystem& sys);
// Innermost-leftmost normal form; throws "budget-exceeded" after budget steps
// or when pending calls nest too deeply.
TermP normalize(const TermP& t, const RewriteSystem& sys, long budget = 1000000, long* steps = nullptr);
bool is_semi_constructor(const TermP& t, const RewriteSystem& sys);

struct QuasiReductivity {
  enum class Status { Proved, Refuted, Unknown } status = Status::Unknown;
  std::string detail;  // uncovered class on refutation
};

QuasiReductivity check_quasi_reductivity(const RewriteSystem& sys, SmtSolver& smt, int depth = 3);

}  // namespace bri
