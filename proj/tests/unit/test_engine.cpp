#include "doctest.h"
#include "support.hpp"

using namespace bri;
using bri::test::Fixture;
using bri::test::Inline;

namespace {

const char* kLists = R"(
sort list;
fun nil : list;
fun cons : int -> list -> list;
fun app : list -> list -> list;
fun sum : list -> int;
app nil ys -> ys;
app (cons x xs) ys -> cons x (app xs ys);
sum nil -> 0;
sum (cons x xs) -> x + sum xs;
axiom comm: x + y == y + x;
axiom grow bounded-convertible: xs == app nil xs;
)";

std::string with_goal(const std::string& goal) { return std::string(kLists) + goal + ";\n"; }

std::string shown(const Session& s, int id, bool full = false) {
  const EqContext* e = s.state().find(id);
  REQUIRE(e != nullptr);
  return show(*e, full);
}

CommandResult must(Session& s, const std::string& cmd) {
  CommandResult r = s.execute(cmd);
  INFO(cmd << " -> " << r.output);
  REQUIRE(r.ok);
  return r;
}

std::string error_of(Session& s, const std::string& cmd) {
  CommandResult r = s.execute(cmd);
  CHECK_FALSE(r.ok);
  return r.error_code;
}

}  // namespace

TEST_CASE("initial contexts have no bounds") {
  Fixture fx("recdown.sys");
  CHECK(shown(fx.session, 1) == "E1: • recdown f n i a ≈ tailup f n i a • [true]");
  CHECK(fx.session.complete());

  Inline none("");
  CHECK(none.session.state().closed());
  CHECK(none.session.verdict() == Verdict::AwaitingCheck);
  must(none.session, ":check");
  CHECK(none.session.verdict() == Verdict::Proved);
}

TEST_CASE("induct sets the bounds and records a hypothesis") {
  Fixture fx("recdown.sys");
  must(fx.session, "induct 1");
  CHECK(shown(fx.session, 1) == "E1: ⊙ recdown f n i a ≈ tailup f n i a ⊙ [true]");
  CHECK(shown(fx.session, 1, true) ==
        "E1: ⟨recdown f n i a⟩ recdown f n i a ≈ tailup f n i a ⟨tailup f n i a⟩ [true]");
  REQUIRE(fx.session.state().hyps.size() == 1);
  CHECK(show(fx.session.state().hyps[0]) == "H1: recdown f n i a ≈ tailup f n i a [true]");
}

TEST_CASE("case over constraints and over a variable") {
  Fixture fx("recdown.sys");
  must(fx.session, "induct 1");
  must(fx.session, "case 1 [i < n] [i >= n]");
  CHECK(shown(fx.session, 2) == "E2: ⊙ recdown f n i a ≈ tailup f n i a ⊙ [i < n]");
  CHECK(shown(fx.session, 3) == "E3: ⊙ recdown f n i a ≈ tailup f n i a ⊙ [i >= n]");
  CHECK(fx.session.complete());

  Fixture bad("recdown.sys");
  CHECK(error_of(bad.session, "case 1 [i < n] [i > n]") == "coverset-not-verified");

  Inline lists(with_goal("app xs nil == xs"));
  must(lists.session, "case 1 xs");
  CHECK(lists.session.state().eqs.size() == 2);
  CHECK(shown(lists.session, 2) == "E2: • app nil nil ≈ nil • [true]");
  CHECK(shown(lists.session, 3).find("app (cons") != std::string::npos);
}

TEST_CASE("simplify makes the side strict") {
  Fixture fx("recdown.sys");
  must(fx.session, "induct 1");
  must(fx.session, "case 1 [i < n] [i >= n]");
  must(fx.session, "simplify 2 left ε R1");
  CHECK(shown(fx.session, 2) == "E2: ▷ a ≈ tailup f n i a ⊙ [i < n]");
  CHECK(error_of(fx.session, "simplify 3 left ε R1") == "entailment-failed");
  CHECK(error_of(fx.session, "simplify 3 left 1 R1") == "no-match");
}

TEST_CASE("delete") {
  Inline eq(with_goal("app xs nil == app xs nil"));
  must(eq.session, "delete 1");
  CHECK(eq.session.state().closed());

  Inline unsat(with_goal("cons x nil == nil [x > 0 /\\ x < 0]"));
  must(unsat.session, "delete 1");
  CHECK(unsat.session.state().closed());

  Inline keep(with_goal("cons x nil == nil [x > 0]"));
  CHECK(error_of(keep.session, "delete 1") == "not-deletable");
}

TEST_CASE("eq-delete") {
  Inline forced(with_goal("cons i nil == cons n nil [i >= n /\\ i <= n]"));
  must(forced.session, "eq-delete 1");
  CHECK(forced.session.state().closed());

  Inline same(with_goal("app xs nil == app xs nil"));
  must(same.session, "eq-delete 1");
  CHECK(same.session.state().closed());

  Inline open(with_goal("cons i nil == cons n nil [i >= n]"));
  CHECK(error_of(open.session, "eq-delete 1") == "not-applicable");
}

TEST_CASE("semi-constructor steps") {
  Inline lists(with_goal("cons x xs == cons x (app xs nil)"));
  must(lists.session, "semiconstructor 1");
  CHECK(shown(lists.session, 2) == "E2: • x ≈ x • [true]");
  CHECK(shown(lists.session, 3) == "E3: • xs ≈ app xs nil • [true]");
  CHECK(lists.session.complete());

  Inline unary(std::string(kLists) + "fun k : list -> list;\nk (F nil) == k (F (cons 1 nil));\n");
  must(unary.session, "semiconstructor 1");
  CHECK(unary.session.state().eqs.size() == 1);
  CHECK(unary.session.complete());
  // a variable head may not be injective: F := const nil
  must(unary.session, "semiconstructor 2");
  CHECK(shown(unary.session, 3) == "E3: • nil ≈ cons 1 nil • [true]");
  CHECK_FALSE(unary.session.complete());
  CHECK(error_of(unary.session, "disprove 3") == "state-not-complete");

  Inline heads(with_goal("app nil nil == cons 1 nil"));
  CHECK(error_of(heads.session, "semiconstructor 1") == "head-mismatch");
  Inline full(with_goal("app xs nil == app nil xs"));
  CHECK(error_of(full.session, "semiconstructor 1") == "arity-too-high");
}

TEST_CASE("hypothesis steps record requirements") {
  Fixture fx("recdown.sys");
  for (const char* c : {"induct 1", "case 1 [i < n] [i >= n]", "simplify 2 left", "simplify 2 right",
                        "simplify 3 left", "simplify 3 right", "delete 2",
                        "alter 3 [i' = i - 1 /\\ n' = n + 1 /\\ i >= n]", "calc 3"})
    must(fx.session, c);
  CHECK(fx.session.state().ledger.empty());
  must(fx.session, "hypothesis 3 left 2 H1 ltr");
  const auto& ledger = fx.session.state().ledger;
  REQUIRE(ledger.size() == 1);
  CHECK(ledger[0].id == "REQ1");
  CHECK(ledger[0].status == ReqStatus::Pending);
  CHECK(show(ledger[0].constraint) == "i' = i - 1 /\\ n' = n + 1 /\\ i >= n");

  // at the root of its own goal the hypothesis is not below the bound
  Fixture root("recdown.sys");
  must(root.session, "induct 1");
  CHECK(error_of(root.session, "hypothesis 1 left ε H1 ltr") == "ordering-refuted");
  CHECK(error_of(root.session, "hdelete 1 H1 ltr") == "ordering-refuted");
}

TEST_CASE("the recdown proof closes") {
  Fixture fx("recdown.sys");
  CommandResult r = fx.session.run_script(test::read_file(test::data_path("recdown.script")));
  REQUIRE(r.ok);
  CHECK(fx.session.state().closed());
  CHECK(fx.session.state().ledger.size() == 1);
  CHECK(fx.session.verdict() == Verdict::AwaitingCheck);
  must(fx.session, ":check");
  CHECK(fx.session.verdict() == Verdict::Proved);
}

TEST_CASE("generalize, alter and postulate") {
  Inline g(with_goal("app (app xs nil) nil == app xs nil"));
  must(g.session, "induct 1");
  CHECK(error_of(g.session, "generalize 1 app xs nil == nil") == "verification-failed");
  CHECK(g.session.complete());
  must(g.session, "generalize 1 app zs nil == zs");
  CHECK(shown(g.session, 1, true) == "E1: ⟨app zs nil⟩ app zs nil ≈ zs ⟨zs⟩ [true]");
  CHECK_FALSE(g.session.complete());

  Fixture a("recdown.sys");
  CHECK(error_of(a.session, "alter 1 [i > 0]") == "verification-failed");
  must(a.session, "alter 1 [i' = i + 1]");
  CHECK(shown(a.session, 1) == "E1: • recdown f n i a ≈ tailup f n i a • [i' = i + 1]");
  CHECK(a.session.complete());

  Inline p(with_goal("app xs nil == xs"));
  must(p.session, "postulate app xs (app ys zs) == app (app xs ys) zs");
  CHECK(p.session.state().eqs.size() == 2);
  CHECK_FALSE(p.session.complete());
  must(p.session, "postulate sum xs == sum xs");
  must(p.session, "delete 3");
  // completeness only comes back when E shrinks below a complete state's E
  CHECK_FALSE(p.session.complete());
}

TEST_CASE("calc") {
  Inline c(with_goal("cons (x + (y + 1)) nil == cons z nil"));
  must(c.session, "calc 1");
  CHECK(shown(c.session, 1) == "E1: • cons x' nil ≈ cons z nil • [x' = x + (y + 1)]");

  Inline v(with_goal("cons 3 nil == cons z nil"));
  must(v.session, "calc 1 left 1");
  CHECK(shown(v.session, 1) == "E1: • cons x nil ≈ cons z nil • [x = 3]");
  Inline bound(with_goal("cons 3 nil == cons z nil"));
  must(bound.session, "induct 1");
  CHECK(error_of(bound.session, "calc 1 left 1") == "calc-breaks-bound");

  Inline none(with_goal("app xs nil == xs"));
  CHECK(error_of(none.session, "calc 1") == "not-theory-subterm");
}

TEST_CASE("axioms") {
  Inline c(with_goal("x + sum xs == sum xs + x"));
  must(c.session, "axiom 1 right ε comm ltr");
  CHECK(shown(c.session, 1) == "E1: • x + sum xs ≈ x + sum xs • [true]");
  CHECK_FALSE(c.session.complete());

  Inline t(with_goal("app xs nil == xs"));
  must(t.session, "induct 1");
  CHECK(error_of(t.session, "axiom 1 left ε grow ltr") == "ordering-refuted");
}

TEST_CASE("expand matches induct, case and simplify") {
  Fixture manual("recdown.sys");
  for (const char* c : {"induct 1", "case 1 [i < n] [i >= n]", "simplify 2 left ε R1", "simplify 3 left ε R2"})
    must(manual.session, c);
  Fixture fast("recdown.sys");
  must(fast.session, "expand 1 left ε");
  const auto& a = manual.session.state().eqs;
  const auto& b = fast.session.state().eqs;
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(show(a[i], true) == show(b[i], true));
    CHECK(a[i].lrel == b[i].lrel);
    CHECK(a[i].rrel == b[i].rrel);
  }
  CHECK(fast.session.state().hyps.size() == 1);

  Inline con(with_goal("sum (cons 1 xs) == 1 + sum xs"));
  CHECK(error_of(con.session, "expand 1 left 1") == "not-expandable");
}

TEST_CASE("disprove") {
  Inline heads(with_goal("nil == cons x xs"));
  must(heads.session, "disprove 1");
  CHECK(heads.session.state().refuted);
  CHECK(heads.session.verdict() == Verdict::Refuted);

  Inline sat(with_goal("nil == cons x xs [x > 0 /\\ x < 0]"));
  CHECK(error_of(sat.session, "disprove 1") == "not-contradictory");

  Inline ho(std::string(kLists) + "x + 1 == F x;\n");
  CHECK(error_of(ho.session, "disprove 1") == "higher-order-variables");
  must(ho.session, "disprove 1 [F := (+) 2]");
  CHECK(ho.session.state().refuted);
}

TEST_CASE("auto") {
  Fixture fx("recdown.sys");
  must(fx.session, "induct 1");
  must(fx.session, "case 1 [i < n] [i >= n]");
  must(fx.session, "simplify 2 left");
  must(fx.session, "simplify 2 right");
  CHECK(shown(fx.session, 2).find("a ≈ a") != std::string::npos);
  must(fx.session, "auto");
  CHECK(fx.session.state().find(2) == nullptr);
  CHECK(fx.session.state().ledger.empty());

  Inline empty("");
  CommandResult r = must(empty.session, "auto");
  CHECK(r.steps == 0);
}

TEST_CASE("undo restores the previous state") {
  Fixture fx("recdown.sys");
  must(fx.session, "induct 1");
  must(fx.session, "case 1 [i < n] [i >= n]");
  must(fx.session, ":undo");
  CHECK(fx.session.state().eqs.size() == 1);
  CHECK(fx.session.commands().size() == 1);
}

TEST_CASE("bounds hold after every step of the golden scripts") {
  for (const char* name : {"recdown", "revapp"}) {
    Fixture fx(std::string(name) + ".sys");
    CommandResult r = fx.session.run_script(test::read_file(test::data_path(std::string(name) + ".script")));
    CHECK(r.ok);
    CHECK(fx.session.bounds_checks() > 0);
    CHECK(fx.session.engine().check_bounds(fx.session.state()).empty());
  }
}
