#include "bri/smt.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include "bri/error.hpp"
#include "bri/print.hpp"
#include "bri/theory.hpp"

namespace bri {

namespace {

constexpr const char* kMarker = "@@bri-done@@";

std::string trim(std::string s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Minimal s-expression reader for solver output.
struct Sexp {
  std::string atom;
  std::vector<Sexp> list;
  bool is_atom = true;
};

void skip_ws(const std::string& s, std::size_t& i) {
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
}

Sexp read_sexp(const std::string& s, std::size_t& i) {
  skip_ws(s, i);
  Sexp out;
  if (i >= s.size()) return out;
  if (s[i] == '(') {
    out.is_atom = false;
    ++i;
    while (true) {
      skip_ws(s, i);
      if (i >= s.size()) break;
      if (s[i] == ')') {
        ++i;
        break;
      }
      out.list.push_back(read_sexp(s, i));
    }
    return out;
  }
  if (s[i] == '"') {
    std::size_t j = i + 1;
    while (j < s.size() && s[j] != '"') ++j;
    out.atom = s.substr(i, j + 1 - i);
    i = j + 1;
    return out;
  }
  std::size_t j = i;
  while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j])) && s[j] != '(' &&
         s[j] != ')')
    ++j;
  out.atom = s.substr(i, j - i);
  i = j;
  return out;
}

std::optional<TermP> sexp_value(const Sexp& e, const TypeP& type) {
  if (e.is_atom) {
    if (e.atom == "true") return theory::bool_term(true);
    if (e.atom == "false") return theory::bool_term(false);
    if (type->sort == "int" && !e.atom.empty() &&
        (std::isdigit(static_cast<unsigned char>(e.atom[0])))) {
      return theory::int_term(mpz_class(e.atom));
    }
    return std::nullopt;
  }
  if (e.list.size() == 2 && e.list[0].is_atom && e.list[0].atom == "-") {
    auto v = sexp_value(e.list[1], type);
    if (!v) return std::nullopt;
    return theory::int_term(-(*v)->symbol()->int_value);
  }
  return std::nullopt;
}

std::string smt_sort(const TypeP& t) { return t->sort == "bool" ? "Bool" : "Int"; }

}  // namespace

SmtConfig SmtConfig::from_environment() {
  SmtConfig c;
  if (const char* path = std::getenv("BRI_CONFIG")) {
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
      auto eq = line.find('=');
      if (eq == std::string::npos || trim(line).rfind('#', 0) == 0) continue;
      std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
      if (key == "smt-cmd") c.command = val;
      if (key == "timeout") c.timeout_ms = static_cast<int>(std::stod(val) * 1000);
    }
  }
  if (const char* cmd = std::getenv("BRI_SMT_CMD")) c.command = cmd;
  if (const char* t = std::getenv("BRI_SMT_TIMEOUT")) c.timeout_ms = static_cast<int>(std::stod(t) * 1000);
  return c;
}

std::string smt_name(const Variable& v) { return "v" + std::to_string(v.id); }

std::string to_smtlib(const TermP& t) {
  if (t->var_head()) {
    if (t->nargs() != 0) throw Error("not-a-constraint", "applied variable in " + show(t));
    return smt_name(t->variable());
  }
  const SymbolP& f = t->symbol();
  if (f->is_value()) {
    if (f->type->sort == "bool") return f->bool_value ? "true" : "false";
    if (f->int_value < 0) return "(- " + mpz_class(-f->int_value).get_str() + ")";
    return f->int_value.get_str();
  }
  if (f->kind != SymKind::Theory || static_cast<int>(t->nargs()) != theory::calc_arity(f))
    throw Error("not-a-constraint", show(t));
  std::string op = f->name;
  if (op == "/\\") op = "and";
  if (op == "\\/") op = "or";
  std::string out = "(" + op;
  for (const auto& a : t->args()) out += " " + to_smtlib(a);
  return out + ")";
}

struct SmtSolver::Process {
  pid_t pid = -1;
  int to_child = -1;
  int from_child = -1;
  std::string buffer;

  ~Process() {
    if (to_child >= 0) close(to_child);
    if (from_child >= 0) close(from_child);
    if (pid > 0) {
      kill(pid, SIGKILL);
      waitpid(pid, nullptr, 0);
    }
  }
};

SmtSolver::SmtSolver(SmtConfig config) : config_(std::move(config)) {}
SmtSolver::~SmtSolver() = default;

void SmtSolver::set_config(SmtConfig c) {
  std::lock_guard lock(mu_);
  config_ = std::move(c);
  proc_.reset();
  cache_.clear();
}

void SmtSolver::clear_cache() {
  std::lock_guard lock(mu_);
  cache_.clear();
}

void SmtSolver::restart() {
  proc_.reset();
  signal(SIGPIPE, SIG_IGN);
  int in_pipe[2], out_pipe[2];
  if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0)
    throw Error("solver-unavailable", std::strerror(errno));
  pid_t pid = fork();
  if (pid < 0) throw Error("solver-unavailable", std::strerror(errno));
  if (pid == 0) {
    dup2(in_pipe[0], 0);
    dup2(out_pipe[1], 1);
    int devnull = open("/dev/null", O_WRONLY);
    if (devnull >= 0) dup2(devnull, 2);
    close(in_pipe[1]);
    close(out_pipe[0]);
    execl("/bin/sh", "sh", "-c", ("exec " + config_.command).c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(in_pipe[0]);
  close(out_pipe[1]);
  proc_ = std::make_unique<Process>();
  proc_->pid = pid;
  proc_->to_child = in_pipe[1];
  proc_->from_child = out_pipe[0];
  std::string init = "(set-option :print-success false)\n(set-option :produce-models true)\n";
  if (config_.timeout_ms > 0)
    init += "(set-option :timeout " + std::to_string(config_.timeout_ms) + ")\n";
  exchange(init);
}

std::string SmtSolver::exchange(const std::string& commands) {
  if (!proc_) restart();
  std::string msg = commands + "(echo \"" + kMarker + "\")\n";
  const char* p = msg.data();
  std::size_t left = msg.size();
  while (left > 0) {
    ssize_t n = write(proc_->to_child, p, left);
    if (n <= 0) {
      proc_.reset();
      throw Error("solver-unavailable", "cannot write to '" + config_.command + "'");
    }
    p += n;
    left -= static_cast<std::size_t>(n);
  }
  int wait_ms = config_.timeout_ms > 0 ? config_.timeout_ms + 10000 : -1;
  while (true) {
    auto pos = proc_->buffer.find(kMarker);
    if (pos != std::string::npos) {
      std::string out = proc_->buffer.substr(0, pos);
      auto nl = proc_->buffer.find('\n', pos);
      proc_->buffer.erase(0, nl == std::string::npos ? proc_->buffer.size() : nl + 1);
      return out;
    }
    pollfd pfd{proc_->from_child, POLLIN, 0};
    int r = poll(&pfd, 1, wait_ms);
    if (r <= 0) {
      proc_.reset();
      throw Error("solver-timeout", "no answer from '" + config_.command + "'");
    }
    char buf[4096];
    ssize_t n = read(proc_->from_child, buf, sizeof buf);
    if (n <= 0) {
      proc_.reset();
      throw Error("solver-unavailable", "solver '" + config_.command + "' exited");
    }
    proc_->buffer.append(buf, static_cast<std::size_t>(n));
  }
}

SmtResult SmtSolver::run(const VarSet& free, const std::string& assertion, bool want_model) {
  std::string decls;
  for (const auto& [id, v] : free) decls += "(declare-const " + smt_name(v) + " " + smt_sort(v.type) + ")\n";
  std::string key = decls + assertion;
  std::lock_guard lock(mu_);
  ++queries_;
  if (auto it = cache_.find(key); it != cache_.end()) {
    ++cache_hits_;
    return it->second;
  }
  SmtResult res;
  std::string out;
  try {
    out = exchange("(push 1)\n" + decls + "(assert " + assertion + ")\n(check-sat)\n");
  } catch (const Error& e) {
    if (e.code() == "solver-timeout") {
      res.verdict = SmtVerdict::Unknown;
      res.reason = "timeout";
      return res;
    }
    throw;
  }
  std::string verdict = trim(out);
  if (verdict.find("(error") != std::string::npos) {
    exchange("(pop 1)\n");
    throw Error("solver-error", verdict);
  }
  if (verdict == "unsat") {
    res.verdict = SmtVerdict::Unsat;
  } else if (verdict == "sat") {
    res.verdict = SmtVerdict::Sat;
    if (want_model && !free.empty()) {
      std::string names;
      for (const auto& [id, v] : free) names += " " + smt_name(v);
      std::string model = exchange("(get-value (" + names + "))\n");
      std::size_t i = 0;
      Sexp e = read_sexp(model, i);
      std::map<std::string, const Sexp*> vals;
      for (const auto& pair : e.list)
        if (!pair.is_atom && pair.list.size() == 2 && pair.list[0].is_atom)
          vals[pair.list[0].atom] = &pair.list[1];
      for (const auto& [id, v] : free) {
        auto it = vals.find(smt_name(v));
        std::optional<TermP> val;
        if (it != vals.end()) val = sexp_value(*it->second, v.type);
        if (!val) val = v.type->sort == "bool" ? theory::bool_term(false) : theory::int_term(0);
        res.model.bind(v, *val);
      }
    }
  } else {
    res.verdict = SmtVerdict::Unknown;
    res.reason = verdict.empty() ? "no answer" : verdict;
  }
  exchange("(pop 1)\n");
  cache_[key] = res;
  return res;
}

SmtResult SmtSolver::check_sat(const TermP& phi) {
  if (!is_constraint(phi)) throw Error("not-a-constraint", show(phi));
  if (auto v = try_evaluate(phi)) {
    SmtResult r;
    r.verdict = (*v)->symbol()->bool_value ? SmtVerdict::Sat : SmtVerdict::Unsat;
    return r;
  }
  VarSet free = vars_of(phi);
  SmtResult r = run(free, to_smtlib(phi), true);
  if (r.verdict == SmtVerdict::Sat && !respects(r.model, phi))
    throw Error("solver-integrity", "model returned by the solver does not satisfy " + show(phi));
  return r;
}

SmtResult SmtSolver::check_sat_raw(const VarSet& free, const std::string& assertion) {
  return run(free, assertion, true);
}

ValidityResult SmtSolver::valid(const TermP& phi) {
  SmtResult r = check_sat(mk_not(phi));
  ValidityResult out;
  if (r.verdict == SmtVerdict::Unsat) {
    out.validity = Validity::Valid;
  } else if (r.verdict == SmtVerdict::Sat) {
    out.validity = Validity::Invalid;
    out.countermodel = r.model;
  } else {
    out.validity = Validity::Unknown;
    out.reason = r.reason;
  }
  return out;
}

ValidityResult SmtSolver::implies(const TermP& psi, const TermP& phi) {
  if (is_true(phi)) return ValidityResult{Validity::Valid, {}, ""};
  std::vector<TermP> have = conjuncts(psi);
  bool all_present = true;
  for (const auto& c : conjuncts(phi)) {
    bool found = false;
    for (const auto& h : have)
      if (term_equal(h, c)) found = true;
    if (!found) {
      all_present = false;
      break;
    }
  }
  if (all_present) return ValidityResult{Validity::Valid, {}, ""};
  SmtResult r = check_sat(mk_and(psi, mk_not(phi)));
  ValidityResult out;
  if (r.verdict == SmtVerdict::Unsat) {
    out.validity = Validity::Valid;
  } else if (r.verdict == SmtVerdict::Sat) {
    out.validity = Validity::Invalid;
    out.countermodel = r.model;
  } else {
    out.reason = r.reason;
  }
  return out;
}

bool SmtSolver::satisfiable(const TermP& phi) { return check_sat(phi).verdict == SmtVerdict::Sat; }

Entailment entails_under(SmtSolver& smt, const TermP& psi, const Subst& delta, const TermP& phi) {
  Entailment e;
  VarSet psi_vars = vars_of(psi);
  for (const auto& [id, v] : vars_of(phi)) {
    const TermP* img = delta.find(id);
    TermP t = img ? *img : mk_var(v);
    if (is_value(t)) continue;
    if (t->is_var() && psi_vars.count(t->variable().id)) continue;
    e.code = "var-condition";
    e.detail = "constraint variable " + v.name + " is mapped to " + show(t) +
               ", which is neither a value nor a variable of the constraint";
    return e;
  }
  TermP goal = substitute(phi, delta);
  ValidityResult r = smt.implies(psi, goal);
  if (r.validity == Validity::Valid) {
    e.ok = true;
    return e;
  }
  if (r.validity == Validity::Invalid) {
    e.code = "entailment-failed";
    e.detail = "[" + show(psi) + "] does not imply [" + show(goal) + "]; countermodel " +
               show(r.countermodel);
    e.countermodel = r.countermodel;
    return e;
  }
  e.code = "solver-unknown";
  e.detail = "could not decide whether [" + show(psi) + "] implies [" + show(goal) + "] (" +
             r.reason + ")";
  return e;
}

SmtSolver& default_solver() {
  static SmtSolver solver;
  return solver;
}

}  // namespace bri
