#include <algorithm>
#include <set>

#include "doctest.h"
#include "support.hpp"

using namespace bri;
using bri::test::term;

namespace {

const char* kSig = R"(
sort a;
fun f : a -> a -> a;
fun g u h : a -> a;
fun c d : a;
)";

std::set<std::string> shown(const std::vector<Position>& ps) {
  std::set<std::string> out;
  for (const auto& p : ps) out.insert(to_string(p));
  return out;
}

Position pos(const char* s) {
  auto p = parse_position(s);
  REQUIRE(p.has_value());
  return *p;
}

}  // namespace

TEST_CASE("positions follow the recursive definition") {
  RewriteSystem sys = parse_system(kSig);
  Scope sc;
  CHECK(shown(positions(term(sys, "x", sc, "a"))) == std::set<std::string>{"ε"});
  CHECK(shown(positions(term(sys, "f c d"))) == std::set<std::string>{"ε", "⋆1", "⋆2", "1.⋆0", "2.⋆0"});
  // by hand: u (g x) has the root, the bare head u, the argument, its head g, and x
  CHECK(shown(positions(term(sys, "u (g x)"))) == std::set<std::string>{"ε", "⋆1", "1.⋆0", "1.⋆1", "1.1.⋆0"});
}

TEST_CASE("position syntax round-trips") {
  for (const char* s : {"ε", "⋆1", "1.⋆0", "1.⋆1", "2.1.⋆3"}) CHECK(to_string(pos(s)) == s);
  CHECK(pos("1⋆1") == pos("1.⋆1"));
  CHECK(pos("2") == pos("2.⋆0"));
  CHECK_FALSE(parse_position("0").has_value());
  CHECK_FALSE(parse_position("1.").has_value());
}

TEST_CASE("subterm_at and replace_at") {
  RewriteSystem sys = parse_system(kSig);
  TermP fcd = term(sys, "f c d");
  CHECK(show(subterm_at(fcd, pos("⋆1"))) == "f c");
  CHECK(show(subterm_at(fcd, pos("2.⋆0"))) == "d");
  CHECK(show(replace_at(fcd, pos("1.⋆0"), term(sys, "d"))) == "f d d");
  TermP s = term(sys, "g c");
  CHECK(term_equal(replace_at(fcd, root_position(), s), s));

  Scope sc;
  TermP ufx = term(sys, "u (f c x)", sc);
  CHECK(show(subterm_at(ufx, pos("1.⋆2"))) == "f");
  TermP ugx = term(sys, "u (g x)", sc);
  CHECK(show(subterm_at(ugx, pos("1⋆1"))) == "g");
  CHECK(show(replace_at(ugx, pos("1⋆1"), term(sys, "h"))) == "u (h x)");
  CHECK_FALSE(is_position_of(fcd, pos("3.⋆0")));
  CHECK_FALSE(is_position_of(fcd, pos("⋆3")));
}

TEST_CASE("substitution is homomorphic and handles variable heads") {
  RewriteSystem sys = parse_system(R"(
fun tailup : (int -> int -> int) -> int -> int -> int -> int;
)");
  Scope sc;
  TermP t = term(sys, "tailup f n i a", sc);
  Subst s;
  s.bind(sc.vars.at("n"), theory::int_term(0));
  s.bind(sc.vars.at("i"), theory::int_term(1));
  CHECK(show(substitute(t, s)) == "tailup f 0 1 a");
  CHECK(term_equal(substitute(t, Subst{}), t));

  RewriteSystem sig = parse_system(kSig);
  Scope vs;
  TermP xy = term(sig, "u (x d)", vs, "a");
  Subst hs;
  hs.bind(vs.vars.at("x"), term(sig, "f c"));
  TermP r = substitute(xy, hs);
  CHECK(show(r) == "u (f c d)");
  // the head is no longer a variable, and the application is flattened
  CHECK_FALSE(subterm_at(r, pos("1")).get()->var_head());
  CHECK(subterm_at(r, pos("1"))->nargs() == 2);
  CHECK(well_typed(r));
}

TEST_CASE("matching") {
  RewriteSystem sys = parse_system(R"(
fun recdown : (int -> int -> int) -> int -> int -> int -> int;
fun a0 : int;
sort a;
fun p : a -> a -> a;
fun c d : a;
)");
  Scope sc;
  TermP pat = term(sys, "recdown f n i a", sc);
  TermP target = term(sys, "recdown (+) 0 1 a0");
  auto m = match(pat, target);
  REQUIRE(m.has_value());
  CHECK(term_equal(substitute(pat, *m), target));
  CHECK(show(*m->find(sc.vars.at("f").id)) == "(+)");
  CHECK(show(*m->find(sc.vars.at("i").id)) == "1");

  Scope s2;
  CHECK_FALSE(match(term(sys, "p x x", s2), term(sys, "p c d")).has_value());
  Scope s3;
  TermP x = term(sys, "x", s3, "a");
  auto m2 = match(x, term(sys, "p c d"));
  REQUIRE(m2.has_value());
  CHECK(show(substitute(x, *m2)) == "p c d");
}

TEST_CASE("unification") {
  RewriteSystem sys = parse_system(R"(
fun H : (int -> int) -> int -> int -> int -> int;
sort a;
fun p : a -> a -> a;
fun u : a -> a;
fun c d : a;
)");
  Scope s1, s2;
  TermP l = term(sys, "H f n m x", s1);
  TermP r = term(sys, "H g i j y", s2);
  auto mgu = unify(l, r);
  REQUIRE(mgu.has_value());
  CHECK(term_equal(substitute(l, *mgu), substitute(r, *mgu)));
  // a renaming: four variable-to-variable bindings
  CHECK(mgu->size() == 4);
  for (const auto& [id, b] : mgu->map()) CHECK(b.second->is_var());

  Scope s3;
  CHECK_FALSE(unify(term(sys, "u x", s3), term(sys, "u (u x)", s3)).has_value());

  Scope s4;
  TermP a = term(sys, "p x d", s4);
  TermP b = term(sys, "p c y", s4);
  auto m = unify(a, b);
  REQUIRE(m.has_value());
  CHECK(show(substitute(a, *m)) == "p c d");
  CHECK(show(substitute(b, *m)) == "p c d");
}

TEST_CASE("renaming apart gives disjoint fresh variables") {
  RewriteSystem sys = parse_system("fun H : (int -> int) -> int -> int -> int -> int;");
  Scope sc;
  TermP l = term(sys, "H f n m x", sc);
  VarSet vs = vars_of(l);
  Subst r1 = renaming(vs);
  TermP l1 = substitute(l, r1);
  Subst r2 = renaming(vars_of(l1));
  TermP l2 = substitute(l1, r2);
  CHECK(is_renaming(r1));
  CHECK(show(l1) == show(l));
  std::set<long> seen;
  for (const auto& t : {l, l1, l2})
    for (const auto& [id, v] : vars_of(t)) CHECK(seen.insert(id).second);
  CHECK(match(l, l2).has_value());
  CHECK(match(l2, l).has_value());
}

TEST_CASE("fresh names prime the base") {
  CHECK(fresh_name("x", {}) == "x");
  CHECK(fresh_name("x", {"x"}) == "x'");
  CHECK(fresh_name("x", {"x", "x'"}) == "x''");
}
