#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "bri/engine.hpp"
#include "bri/ordering.hpp"
#include "bri/position.hpp"
#include "bri/rewriting.hpp"
#include "bri/smt.hpp"

namespace bri {

// <source, left, right> [constraint]: source reduces to left with rule1 at
// pos and to right with rule2 at the root.
struct CriticalPeak {
  TermP source;
  TermP left;
  TermP right;
  TermP constraint;
  std::string rule1;
  std::string rule2;
  Position pos;
};

std::string show(const CriticalPeak& p);
// "left == right [constraint]" in the system file syntax.
std::string export_equation(const CriticalPeak& p);

// All critical peaks of R together with the calculation rules, without
// peaks whose reducts coincide (syntactically or by the constraint), and
// with one representative per class of renamed or swapped peaks.
std::vector<CriticalPeak> critical_peaks(const RewriteSystem& sys, SmtSolver& smt);

// Same peak up to renaming and swapping the reducts.
bool same_peak(const CriticalPeak& a, const CriticalPeak& b);

// <source> left ≈ right <source> [constraint], numbered from first_id.
std::vector<EqContext> ground_confluence_goals(const std::vector<CriticalPeak>& peaks, int first_id = 1);

// Proof state for the ground-confluence driver. Throws termination-unproved
// unless R terminates or termination is trusted.
ProofState ground_confluence_state(const RewriteSystem& sys, SmtSolver& smt, bool trust_termination,
                                   std::vector<CriticalPeak>* peaks = nullptr, std::string* certificate = nullptr,
                                   const TerminationOptions& topts = {});

struct JoinabilityReport {
  long trials = 0;
  long local_peaks = 0;
  long joined = 0;
  long peak_instances = 0;  // an instance of a critical peak
  long unexplained = 0;     // neither joinable nor a peak instance; must stay zero
  std::vector<std::string> examples;
};

// Random ground terms up to the given depth; every pair of distinct one-step
// reducts must be an instance of a critical peak or have a common reduct
// within join_depth steps on each side.
JoinabilityReport sample_joinability(const RewriteSystem& sys, SmtSolver& smt, int trials, int depth,
                                     std::uint64_t seed = 1, int join_depth = 20);

// Random well-typed ground terms (ints drawn from [-range, range]); shared
// with the test oracles.
class TermSampler {
 public:
  TermSampler(const RewriteSystem& sys, std::uint64_t seed, int range = 20);
  TermP sample(const TypeP& type, int depth);
  // Random ground instance of the variables.
  Subst ground_instance(const VarSet& vars, int depth);
  std::mt19937_64& rng() { return rng_; }

 private:
  const RewriteSystem& sys_;
  std::mt19937_64 rng_;
  int range_;
};

}  // namespace bri
