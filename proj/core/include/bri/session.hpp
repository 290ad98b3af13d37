#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bri/confluence.hpp"
#include "bri/engine.hpp"
#include "bri/rewriting.hpp"
#include "bri/smt.hpp"

namespace bri {

struct SessionOptions {
  bool trust_quasi_reductive = false;
  bool trust_termination = false;
  bool trust_ground_confluence = false;
  int auto_limit = 500;
  std::string system_name;
};

enum class Verdict { Open, Proved, Refuted, AwaitingCheck };
std::string to_string(Verdict v);

struct CommandResult {
  bool ok = true;
  std::string output;
  std::string error_code;
  std::string error;
  bool quit = false;
  int steps = 0;  // deduction steps performed
};

// One proof session: the current proof state, its history (for :undo and
// the completeness bookkeeping), the lazily established assumptions and the
// replayable transcript.
class Session {
 public:
  Session(RewriteSystem sys, SmtSolver& smt, SessionOptions opts = {});

  void start(const std::vector<Equation>& goals);
  // Goals are the critical peaks of the system.
  void start_ground_confluence();

  CommandResult execute(const std::string& line);
  // Runs every non-comment line; stops at the first error, whose message
  // names the line number.
  CommandResult run_script(const std::string& text);

  const ProofState& state() const { return history_.back().state; }
  bool complete() const { return history_.back().complete; }
  Verdict verdict() const;
  std::string render(bool full) const;
  std::string render_ledger() const;
  // Header comments followed by one resolved command per step.
  std::string transcript() const;
  const std::vector<std::string>& commands() const { return commands_; }
  const std::map<std::string, std::string>& assumptions() const { return assumptions_; }
  void set_assumption(const std::string& name, const std::string& status) { assumptions_[name] = status; }
  const std::vector<CriticalPeak>& peaks() const { return peaks_; }
  bool ground_confluence_mode() const { return gc_mode_; }
  long bounds_checks() const { return bounds_checks_; }
  const RewriteSystem& system() const { return sys_; }
  const Engine& engine() const { return engine_; }
  const std::vector<Equation>& goals() const { return goals_; }
  std::string termination_certificate() const { return certificate_; }

  // JSON protocol: one request object per line in, one response per line out.
  std::string handle_json(const std::string& line, bool* quit = nullptr);
  std::string hello_json() const;
  std::string state_json() const;

 private:
  struct Snapshot {
    ProofState state;
    bool complete = true;
    std::size_t commands = 0;
  };

  CommandResult dispatch(const std::string& verb, const std::string& rest);
  void push(const StepResult& r, CommandResult& out);
  CommandResult check();
  // Establishes (or looks up) an assumption; returns true when it holds.
  bool demand(const std::string& name, std::string* why = nullptr);
  TerminationOptions termination_options();

  RewriteSystem sys_;
  SmtSolver& smt_;
  SessionOptions opts_;
  Engine engine_;
  std::vector<Snapshot> history_;
  std::vector<std::string> commands_;
  std::map<std::string, std::string> assumptions_;
  std::vector<Equation> goals_;
  std::vector<CriticalPeak> peaks_;
  bool gc_mode_ = false;
  long bounds_checks_ = 0;
  std::string certificate_;
  std::string checked_ledger_;
};

}  // namespace bri
