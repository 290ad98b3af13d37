// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "bri/confluence.hpp"
#include "bri/error.hpp"
#include "bri/parser.hpp"
#include "bri/print.hpp"
#include "bri/session.hpp"
#include "bri/smt.hpp"
#include "bri/theory.hpp"

using namespace bri;

namespace {

// Tolerances.
constexpr double kReplayLimitSeconds = 30.0;
constexpr double kPropertyLimitSeconds = 60.0;
constexpr int kSoundnessInstances = 50;
constexpr long kNormalizeBudget = 100000;
constexpr int kJoinTrials = 1000;
constexpr int kJoinSteps = 20;
constexpr int kJoinDepth = 4;

std::string data(const std::string& name) { return std::string(BRI_TEST_DATA) + "/" + name; }

std::string read(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

struct Outcome {
  bool ok = false;
  std::string detail;
};

struct Golden {
  RewriteSystem sys;
  Session session;
  explicit Golden(const std::string& file) : sys(load_system(data(file))), session(sys, default_solver()) {
    session.start(sys.goals());
  }
};

// Every original goal, instantiated by respecting ground substitutions,
// has sides with equal normal forms.
Outcome sample_goals(const RewriteSystem& sys, const std::vector<Equation>& goals, std::uint64_t seed) {
  TermSampler sampler(sys, seed, 10);
  int done = 0;
  for (const auto& g : goals) {
    VarSet vs = vars_of(g.lhs);
    collect_vars(g.rhs, vs);
    collect_vars(g.constraint, vs);
    int found = 0;
    for (int tries = 0; found < kSoundnessInstances && tries < 100 * kSoundnessInstances; ++tries) {
      Subst gamma = sampler.ground_instance(vs, 2);
      if (!respects(gamma, g.constraint)) continue;
      ++found;
      TermP l = substitute(g.lhs, gamma), r = substitute(g.rhs, gamma);
      TermP nl, nr;
      try {
        nl = normalize(l, sys, kNormalizeBudget);
        nr = normalize(r, sys, kNormalizeBudget);
      } catch (const Error& e) {
        return {false, show(l) + ": " + e.what()};
      }
      if (!term_equal(nl, nr)) return {false, show(l) + " = " + show(nl) + " but " + show(r) + " = " + show(nr)};
    }
    if (found < kSoundnessInstances) return {false, "only " + std::to_string(found) + " respecting instances"};
    done += found;
  }
  return {true, std::to_string(done) + " instances"};
}

Outcome replay_recdown() {
  auto t0 = std::chrono::steady_clock::now();
  Golden g("recdown.sys");
  CommandResult r = g.session.run_script(read(data("recdown.script")));
  if (!r.ok) return {false, r.output};
  const ProofState& st = g.session.state();
  if (!st.eqs.empty()) return {false, "equations remain"};
  if (st.ledger.size() != 1 || st.ledger[0].id != "REQ1" || st.ledger[0].status != ReqStatus::Pending)
    return {false, "expected exactly one pending REQ1"};
  CommandResult c = g.session.execute(":check");
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (g.session.verdict() != Verdict::Proved) return {false, c.output};
  for (const char* part : {"recdown > tailup", "i - n", "m - i"})
    if (!contains(c.output, part)) return {false, "certificate lacks '" + std::string(part) + "': " + c.output};
  if (secs >= kReplayLimitSeconds) return {false, std::to_string(secs) + " s"};
  Outcome s = sample_goals(g.sys, g.session.goals(), 81);
  if (!s.ok) return {false, "soundness sampling: " + s.detail};
  std::ostringstream d;
  d.precision(2);
  d << std::fixed << secs << " s";
  return {true, d.str()};
}

Outcome replay_revapp() {
  Golden g("revapp.sys");
  CommandResult r = g.session.run_script(read(data("revapp.script")));
  if (!r.ok) return {false, r.output};
  if (!g.session.state().eqs.empty()) return {false, "equations remain"};
  CommandResult c = g.session.execute(":check");
  if (g.session.verdict() != Verdict::Proved) return {false, c.output};
  for (const auto& q : g.session.state().ledger)
    if (q.status != ReqStatus::DischargedSyntactic && q.status != ReqStatus::Proved)
      return {false, q.id + " is " + to_string(q.status)};
  return {true, std::to_string(g.session.state().ledger.size()) + " requirements settled"};
}

Outcome disprove_gh() {
  Golden g("gh.sys");
  std::istringstream in(read(data("gh_disprove.script")));
  std::string line, last;
  bool complete_at_disprove = false;
  while (std::getline(in, line)) {
    if (line.rfind("disprove", 0) == 0) complete_at_disprove = g.session.complete();
    CommandResult r = g.session.execute(line);
    if (!r.ok) return {false, line + ": " + r.output};
    last = r.output;
  }
  if (!g.session.state().refuted) return {false, "no refutation"};
  if (!complete_at_disprove) return {false, "state was not complete at the disprove step"};
  if (!contains(last, "⊥") || !contains(last, "k := ")) return {false, "no witness printed: " + last};
  return {true, g.session.state().refutation};
}

Outcome confluence_gh() {
  RewriteSystem sys = load_system(data("gh.sys"));
  auto peaks = critical_peaks(sys, default_solver());
  if (peaks.size() != 1) return {false, std::to_string(peaks.size()) + " peaks"};
  if (show(peaks[0]) != "⟨H f n m x, H f (n - 1) m (f x), H f (m - 1) n (f x)⟩ [n > 0 /\\ m > 0]")
    return {false, show(peaks[0])};
  Session s(sys, default_solver());
  s.start_ground_confluence();
  CommandResult r = s.run_script(read(data("gh_confluence.script")));
  if (!r.ok || !s.state().eqs.empty()) return {false, r.output};
  CommandResult c = s.execute(":check");
  if (!contains(c.output, "ground confluence: proved")) return {false, c.output};
  Outcome smp = sample_goals(sys, s.goals(), 82);
  if (!smp.ok) return {false, "soundness sampling: " + smp.detail};
  return {true, show(peaks[0])};
}

Outcome ho_peak() {
  RewriteSystem sys = load_system(data("hopeak.sys"));
  auto peaks = critical_peaks(sys, default_solver());
  if (peaks.size() != 1) return {false, std::to_string(peaks.size()) + " peaks"};
  std::string got = show(peaks[0]) + " at " + to_string(peaks[0].pos);
  if (got != "⟨u (f x), u (g x), h x⟩ [true] at 1.⋆1") return {false, got};
  return {true, got};
}

Outcome property_suites() {
  auto t0 = std::chrono::steady_clock::now();
  std::string bins = BRI_PROPERTY_BINARIES;
  std::istringstream in(bins);
  std::string bin;
  int n = 0;
  while (std::getline(in, bin, ',')) {
    if (bin.empty()) continue;
    ++n;
    if (std::system((bin + " > /dev/null 2>&1").c_str()) != 0) return {false, bin + " failed"};
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs >= kPropertyLimitSeconds) return {false, std::to_string(secs) + " s"};
  std::ostringstream d;
  d.precision(2);
  d << std::fixed << n << " suites in " << secs << " s";
  return {true, d.str()};
}

Outcome joinability() {
  std::string detail;
  for (const char* name : {"gh.sys", "revapp.sys"}) {
    RewriteSystem sys = load_system(data(name));
    JoinabilityReport rep = sample_joinability(sys, default_solver(), kJoinTrials, kJoinDepth, 83, kJoinSteps);
    if (rep.local_peaks == 0) return {false, std::string(name) + ": no local peaks sampled"};
    if (rep.unexplained != 0) return {false, std::string(name) + ": " + rep.examples.front()};
    detail += std::string(detail.empty() ? "" : "; ") + name + " " + std::to_string(rep.local_peaks) + " local peaks, " +
              std::to_string(rep.joined) + " joined, " + std::to_string(rep.peak_instances) + " peak instances";
  }
  return {true, detail};
}

Outcome soundness() {
  std::string detail;
  for (const char* name : {"recdown", "revapp"}) {
    Golden g(std::string(name) + ".sys");
    CommandResult r = g.session.run_script(read(data(std::string(name) + ".script")));
    g.session.execute(":check");
    if (!r.ok || g.session.verdict() != Verdict::Proved) return {false, std::string(name) + " did not reach QED"};
    Outcome s = sample_goals(g.sys, g.session.goals(), 84);
    if (!s.ok) return {false, std::string(name) + ": " + s.detail};
    detail += std::string(detail.empty() ? "" : "; ") + name + " " + s.detail;
  }
  return {true, detail};
}

Outcome negative_controls() {
  struct Control {
    const char* script;
    const char* code;
  };
  const Control controls[] = {
      {"induct 1\ncase 1 [i < n] [i >= n]\nsimplify 3 left ε R1", "entailment-failed"},
      {"induct 1\nhdelete 1 H1 ltr", "ordering-refuted"},
      {"postulate tailup f i m a == tailup f i m a\ndisprove 1", "state-not-complete"},
      {"case 1 [i < n] [i > n]", "coverset-not-verified"},
  };
  std::string detail;
  for (const auto& c : controls) {
    Golden g("recdown.sys");
    CommandResult r = g.session.run_script(c.script);
    if (r.ok || r.error_code != c.code) return {false, std::string(c.code) + " expected, got '" + r.error_code + "'"};
    detail += std::string(detail.empty() ? "" : ", ") + c.code;
  }
  return {true, detail};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"golden replay recdown/tailup", replay_recdown},
      {"golden replay rev/app", replay_revapp},
      {"golden disproof G/H", disprove_gh},
      {"ground confluence G/H", confluence_gh},
      {"higher-order peak", ho_peak},
      {"property suites", property_suites},
      {"critical peak sampling", joinability},
      {"soundness sampling", soundness},
      {"negative controls", negative_controls},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, e.what()};
    }
    if (!o.ok) ++failed;
    std::cout << (o.ok ? "PASS" : "FAIL") << " " << c.name << ": " << o.detail << "\n";
  }
  return failed == 0 ? 0 : 1;
}
