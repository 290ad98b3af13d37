#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "bri/subst.hpp"
#include "bri/term.hpp"

namespace bri {

struct SmtConfig {
  std::string command = "z3 -in -smt2";
  int timeout_ms = 5000;

  // BRI_SMT_CMD and BRI_SMT_TIMEOUT override the defaults; a config file
  // with "smt-cmd = ..." / "timeout = <seconds>" lines is read from
  // BRI_CONFIG when set.
  static SmtConfig from_environment();
};

enum class SmtVerdict { Sat, Unsat, Unknown };

struct SmtResult {
  SmtVerdict verdict = SmtVerdict::Unknown;
  Subst model;  // only for Sat; every free variable is bound to a value
  std::string reason;
};

enum class Validity { Valid, Invalid, Unknown };

struct ValidityResult {
  Validity validity = Validity::Unknown;
  Subst countermodel;
  std::string reason;
};

// Talks SMT-LIB 2 to a solver subprocess. Queries are cached by their text,
// so repeated questions get identical answers within a process.
class SmtSolver {
 public:
  explicit SmtSolver(SmtConfig config = SmtConfig::from_environment());
  ~SmtSolver();
  SmtSolver(const SmtSolver&) = delete;
  SmtSolver& operator=(const SmtSolver&) = delete;

  SmtResult check_sat(const TermP& phi);
  // Satisfiability of a raw SMT-LIB assertion over the given free variables
  // (may contain quantifiers; no model re-check).
  SmtResult check_sat_raw(const VarSet& free, const std::string& assertion);

  ValidityResult valid(const TermP& phi);
  ValidityResult implies(const TermP& psi, const TermP& phi);
  bool satisfiable(const TermP& phi);

  const SmtConfig& config() const { return config_; }
  void set_config(SmtConfig c);
  void clear_cache();
  long queries() const { return queries_; }
  long cache_hits() const { return cache_hits_; }

 private:
  struct Process;
  SmtResult run(const VarSet& free, const std::string& assertion, bool want_model);
  std::string exchange(const std::string& commands);
  void restart();

  SmtConfig config_;
  std::unique_ptr<Process> proc_;
  std::map<std::string, SmtResult> cache_;
  std::recursive_mutex mu_;
  long queries_ = 0;
  long cache_hits_ = 0;
};

std::string to_smtlib(const TermP& t);
std::string smt_name(const Variable& v);

struct Entailment {
  bool ok = false;
  std::string code;  // "var-condition", "entailment-failed" or "solver-unknown" when !ok
  std::string detail;
  Subst countermodel;
};

// psi |=^delta phi: delta maps Var(phi) into values and Var(psi), and
// psi => phi.delta is valid.
Entailment entails_under(SmtSolver& smt, const TermP& psi, const Subst& delta, const TermP& phi);

// Shared solver used by the engine unless told otherwise.
SmtSolver& default_solver();

}  // namespace bri
