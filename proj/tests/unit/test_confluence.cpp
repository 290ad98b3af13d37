#include "bri/confluence.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bri;
using bri::test::term;

TEST_CASE("the G/H system has exactly one critical peak") {
  RewriteSystem sys = test::load("gh.sys");
  auto peaks = critical_peaks(sys, default_solver());
  REQUIRE(peaks.size() == 1);
  const CriticalPeak& p = peaks[0];
  // by hand: R3 and R4 overlap at the root whenever both n > 0 and m > 0
  CHECK(show(p) == "⟨H f n m x, H f (n - 1) m (f x), H f (m - 1) n (f x)⟩ [n > 0 /\\ m > 0]");
  CHECK(to_string(p.pos) == "ε");
  CHECK(((p.rule1 == "R3" && p.rule2 == "R4") || (p.rule1 == "R4" && p.rule2 == "R3")));
  CHECK(export_equation(p) == "H f (n - 1) m (f x) == H f (m - 1) n (f x) [n > 0 /\\ m > 0]");

  auto goals = ground_confluence_goals(peaks);
  REQUIRE(goals.size() == 1);
  CHECK(show(goals[0], true) ==
        "E1: ⟨H f n m x⟩ H f (n - 1) m (f x) ≈ H f (m - 1) n (f x) ⟨H f n m x⟩ [n > 0 /\\ m > 0]");
  CHECK(goals[0].lrel == BoundRel::Strict);
  CHECK(goals[0].rrel == BoundRel::Strict);
}

TEST_CASE("peaks below the root of an application") {
  RewriteSystem sys = test::load("hopeak.sys");
  auto peaks = critical_peaks(sys, default_solver());
  REQUIRE(peaks.size() == 1);
  CHECK(show(peaks[0]) == "⟨u (f x), u (g x), h x⟩ [true]");
  CHECK(to_string(peaks[0].pos) == "1.⋆1");
}

TEST_CASE("systems without overlaps") {
  CHECK(critical_peaks(test::load("recdown.sys"), default_solver()).empty());
  CHECK(critical_peaks(test::load("revapp.sys"), default_solver()).empty());
}

TEST_CASE("a non-joinable peak is disproved") {
  RewriteSystem sys = parse_system(R"(
sort s;
fun a b c : s;
a -> b;
a -> c;
)");
  auto peaks = critical_peaks(sys, default_solver());
  REQUIRE(peaks.size() == 1);
  Session session(sys, default_solver());
  session.start_ground_confluence();
  CommandResult r = session.execute("disprove 1");
  INFO(r.output);
  REQUIRE(r.ok);
  CHECK(session.verdict() == Verdict::Refuted);
}

TEST_CASE("peaks are identified up to renaming and swapping") {
  RewriteSystem sys = test::load("gh.sys");
  auto peaks = critical_peaks(sys, default_solver());
  REQUIRE(peaks.size() == 1);
  CriticalPeak q = peaks[0];
  std::swap(q.left, q.right);
  CHECK(same_peak(peaks[0], q));
  Subst ren = renaming(vars_of(q.source));
  q.source = substitute(q.source, ren);
  q.left = substitute(q.left, ren);
  q.right = substitute(q.right, ren);
  q.constraint = substitute(q.constraint, ren);
  CHECK(same_peak(peaks[0], q));
  q.constraint = mk_true();
  CHECK_FALSE(same_peak(peaks[0], q));
}

TEST_CASE("ground confluence of G/H") {
  RewriteSystem sys = test::load("gh.sys");
  Session session(sys, default_solver());
  session.start_ground_confluence();
  CHECK(session.ground_confluence_mode());
  CHECK(session.termination_certificate().find("max(n, 0) + max(m, 0)") != std::string::npos);
  CommandResult r = session.run_script(test::read_file(test::data_path("gh_confluence.script")));
  INFO(r.output);
  REQUIRE(r.ok);
  CHECK(session.state().closed());
  REQUIRE(session.execute(":check").ok);
  CHECK(session.verdict() == Verdict::Proved);
}

TEST_CASE("random local peaks are joinable or instances of critical peaks") {
  for (const char* name : {"gh.sys", "revapp.sys", "recdown.sys"}) {
    RewriteSystem sys = test::load(name);
    JoinabilityReport rep = sample_joinability(sys, default_solver(), 200, 4, 7);
    INFO(name);
    CHECK(rep.trials == 200);
    CHECK(rep.local_peaks > 0);
    CHECK(rep.joined + rep.peak_instances == rep.local_peaks);
    CHECK(rep.unexplained == 0);
    if (std::string(name) == "gh.sys") CHECK(rep.peak_instances > 0);
  }
}

TEST_CASE("a peak that is not an overlap instance must join") {
  RewriteSystem sys = parse_system(R"(
sort s;
fun a b c : s;
fun k : s -> s -> s;
a -> b;
a -> c;
)");
  JoinabilityReport rep = sample_joinability(sys, default_solver(), 200, 3, 5);
  CHECK(rep.local_peaks > 0);
  CHECK(rep.unexplained == 0);
  CHECK(rep.peak_instances > 0);
  // with the overlap gone the remaining peaks are parallel and join in one step
  RewriteSystem single = parse_system(R"(
sort s;
fun a b c : s;
fun k : s -> s -> s;
a -> b;
)");
  rep = sample_joinability(single, default_solver(), 200, 3, 5);
  CHECK(rep.peak_instances == 0);
  CHECK(rep.joined == rep.local_peaks);
}

TEST_CASE("the term sampler produces well-typed ground terms") {
  RewriteSystem sys = test::load("revapp.sys");
  TermSampler sampler(sys, 3);
  TypeP list = parse_type("list", sys);
  for (int i = 0; i < 50; ++i) {
    TermP t = sampler.sample(list, 3);
    CHECK(well_typed(t));
    CHECK(vars_of(t).empty());
    CHECK(same_type(t->type(), list));
  }
}
