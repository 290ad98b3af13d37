#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bri/rewriting.hpp"
#include "bri/smt.hpp"
#include "bri/term.hpp"

namespace bri {

enum class ReqStatus { DischargedSyntactic, Pending, Proved, Trusted, Failed };
std::string to_string(ReqStatus s);

// left > right [constraint] (or >= when !strict); an empty left is the
// infinite bound, which dominates everything.
struct Requirement {
  std::string id;
  std::optional<TermP> left;
  TermP right;
  TermP constraint;
  bool strict = true;
  ReqStatus status = ReqStatus::Pending;
  int step = 0;
  std::string note;
};

std::string show(const Requirement& r);
std::string show_bound(const std::optional<TermP>& b);

// Search for right from left in the relation (->R u |>)* under psi, at
// least one step when strict. Returns a printable witness path.
std::optional<std::vector<std::string>> baseline_reach(const TermP& left, const TermP& right, const TermP& psi,
                                                       bool strict, const RewriteSystem& sys, SmtSolver& smt,
                                                       int budget = 200);

enum class Discharge { Discharged, Pending, Refuted };

struct DischargeResult {
  Discharge verdict = Discharge::Pending;
  std::string note;
};

// Tries to settle left > right [psi] (or >=) without the termination oracle.
// Refuted when right reaches left, which would make the bound cyclic.
DischargeResult try_discharge(const std::optional<TermP>& left, const TermP& right, const TermP& psi, bool strict,
                              const RewriteSystem& sys, SmtSolver& smt);

// Multiset extension for two-element multisets over a strict order gt and
// its reflexive closure geq.
using OrderFn = std::function<bool(const TermP&, const TermP&)>;
bool mul_geq(const TermP& a1, const TermP& a2, const TermP& b1, const TermP& b2, const OrderFn& gt, const OrderFn& geq);
bool mul_gt(const TermP& a1, const TermP& a2, const TermP& b1, const TermP& b2, const OrderFn& gt, const OrderFn& geq);

struct Abstraction {
  bool ok = false;
  Rule rule;
  SymbolP bridge;  // generated constructor when the sides' types differ
  std::string reason;
};

// Turns a pending requirement into a rule for the termination check.
Abstraction abstract_to_rule(const Requirement& r);

struct TerminationResult {
  enum class Status { Proved, Failed } status = Status::Failed;
  std::string certificate;
  std::vector<std::string> log;
};

struct TerminationOptions {
  // Every ground normal form of sort int is a value (quasi-reductive, no
  // constructor of sort int). Measures may then use int arguments that are
  // not constrained, with non-negative coefficients: such an argument stands
  // for the largest value it reduces to, which never grows under rewriting.
  bool int_normal_forms_are_values = false;
};

// Termination of rules (R together with abstracted requirements): LPO over a
// searched precedence, otherwise dependency pairs whose cycles are removed by
// the subterm criterion or SMT-checked integer measures.
TerminationResult check_termination(const std::vector<Rule>& rules, SmtSolver& smt,
                                    const TerminationOptions& opts = {});

}  // namespace bri
