#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bri/ordering.hpp"
#include "bri/position.hpp"
#include "bri/rewriting.hpp"
#include "bri/smt.hpp"
#include "bri/term.hpp"

namespace bri {

// How a side relates to its bound: no bound (•), equal to it, or
// certified strictly below it.
enum class BoundRel { Infinite, Equal, Strict };

enum class Side { Left, Right };

// <lbound> lhs ≈ rhs <rbound> [constraint]
struct EqContext {
  int id = 0;
  std::optional<TermP> lbound;
  TermP lhs;
  TermP rhs;
  std::optional<TermP> rbound;
  TermP constraint;
  BoundRel lrel = BoundRel::Equal;
  BoundRel rrel = BoundRel::Equal;
  std::string ljust;
  std::string rjust;

  const TermP& side(Side s) const { return s == Side::Left ? lhs : rhs; }
  const std::optional<TermP>& bound(Side s) const { return s == Side::Left ? lbound : rbound; }
  BoundRel rel(Side s) const { return s == Side::Left ? lrel : rrel; }
  VarSet vars() const;
};

struct Hypothesis {
  std::string id;
  TermP lhs;
  TermP rhs;
  TermP constraint;
};

struct ProofState {
  std::vector<EqContext> eqs;  // ordered by id
  std::vector<Hypothesis> hyps;
  std::vector<Requirement> ledger;
  bool complete = true;
  bool refuted = false;
  std::string refutation;
  int next_eq = 1;
  int next_hyp = 1;
  int next_req = 1;
  int next_disc = 1;
  int step = 0;

  const EqContext* find(int id) const;
  const Hypothesis* find_hyp(const std::string& id) const;
  bool closed() const { return eqs.empty() && !refuted; }
  int pending_requirements() const;
};

std::string show(const EqContext& e, bool full);
std::string show(const Hypothesis& h);
std::string to_string(Side s);
bool same_content(const EqContext& a, const EqContext& b);

struct EngineOptions {
  bool trust_quasi_reductive = false;
  bool trust_termination = false;
  bool trust_ground_confluence = false;
};

enum class Direction { LeftToRight, RightToLeft };

// Arguments shared by the rewriting-style rules; unset fields are searched.
struct RewriteArgs {
  std::optional<int> id;
  std::optional<Side> side;
  std::optional<Position> pos;
  std::optional<std::string> name;  // rule, hypothesis or axiom
  std::optional<Direction> dir;
  Subst subst;
  // false: skip candidates that would leave a pending ordering requirement
  bool allow_pending = true;
};

struct StepResult {
  ProofState state;
  std::string rule;
  std::string args;
  bool complete_rule = true;
  std::vector<std::string> notes;
};

// The deduction rules. Each returns the successor state or throws Error
// with a stable code; none of them mutate the input.
class Engine {
 public:
  Engine(const RewriteSystem& sys, SmtSolver& smt, EngineOptions opts = {});

  ProofState initial(const std::vector<Equation>& goals) const;

  StepResult simplify(const ProofState& st, const RewriteArgs& a) const;
  StepResult calc(const ProofState& st, std::optional<int> id, std::optional<Side> side,
                  const std::vector<Position>& positions) const;
  StepResult case_constraints(const ProofState& st, int id, const std::vector<TermP>& splits) const;
  StepResult case_variable(const ProofState& st, int id, const Variable& x) const;
  StepResult del(const ProofState& st, std::optional<int> id) const;
  StepResult eq_delete(const ProofState& st, std::optional<int> id) const;
  StepResult induct(const ProofState& st, std::optional<int> id) const;
  StepResult hypothesis(const ProofState& st, const RewriteArgs& a) const;
  StepResult hdelete(const ProofState& st, const RewriteArgs& a) const;
  StepResult generalize(const ProofState& st, int id, const Equation& e) const;
  StepResult generalize_constraint(const ProofState& st, int id, const TermP& psi) const;
  StepResult alter_constraint(const ProofState& st, int id, const TermP& psi) const;
  StepResult alter_subst(const ProofState& st, int id, const Subst& gamma) const;
  StepResult postulate(const ProofState& st, const Equation& e) const;
  StepResult semiconstructor(const ProofState& st, std::optional<int> id) const;
  StepResult axiom(const ProofState& st, const RewriteArgs& a) const;
  StepResult expand(const ProofState& st, int id, Side side, const Position& pos) const;
  // Needs a complete state (the caller tracks completeness across history).
  StepResult disprove(const ProofState& st, std::optional<int> id, const Subst& inst, bool state_complete) const;

  // One step of the automatic strategy, or nullopt when nothing applies.
  std::optional<StepResult> auto_step(const ProofState& st, bool state_complete) const;

  // Preserving-bounds invariant; returns the violations.
  std::vector<std::string> check_bounds(const ProofState& st) const;

  const RewriteSystem& system() const { return sys_; }
  SmtSolver& smt() const { return smt_; }
  const EngineOptions& options() const { return opts_; }
  void set_options(EngineOptions o) { opts_ = o; }

 private:
  struct Placed;
  void add_requirement(ProofState& st, const std::optional<TermP>& left, const TermP& right, const TermP& psi,
                       bool strict, const std::string& note, std::vector<std::string>& notes) const;
  // Settles left > right (strict) for a step; returns false when refuted.
  bool require(ProofState& st, const std::optional<TermP>& left, const TermP& right, const TermP& psi,
               const std::string& what, std::vector<std::string>& notes, std::string& refutation) const;
  std::set<std::string> taken_names(const EqContext& e) const;
  Variable fresh_var_for(const EqContext& e, const std::string& base, const TypeP& type,
                         std::set<std::string>& taken) const;

  const RewriteSystem& sys_;
  SmtSolver& smt_;
  EngineOptions opts_;
};

}  // namespace bri
