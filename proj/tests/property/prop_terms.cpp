#include <map>
#include <vector>

#include "doctest.h"
#include "gen.hpp"

using namespace bri;
using bri::test::TextGen;

namespace {

constexpr int kCases = 600;

// |Pos(h t1 .. tn)| = 1 + n + sum |Pos(ti)|, counted independently.
std::size_t position_count(const TermP& t) {
  std::size_t n = 1 + t->nargs();
  for (const auto& a : t->args()) n += position_count(a);
  return n;
}

std::vector<TermP> ground_terms(const RewriteSystem& sys) {
  std::vector<TermP> out;
  for (const char* s : {"c", "d", "g c", "g d", "f c c", "f c d", "f d c", "f d d"}) out.push_back(test::term(sys, s));
  return out;
}

std::vector<TermP> ground_functions(const RewriteSystem& sys) {
  std::vector<TermP> out;
  for (const char* s : {"g", "f c", "f d"}) out.push_back(test::term(sys, s));
  return out;
}

// Every ground substitution of vars over the small pools, in turn.
template <class F>
void for_each_ground(const std::vector<Variable>& vars, const std::vector<TermP>& base,
                     const std::vector<TermP>& funs, F&& visit) {
  std::vector<std::size_t> idx(vars.size(), 0);
  auto pool = [&](std::size_t i) -> const std::vector<TermP>& { return vars[i].type->is_arrow() ? funs : base; };
  while (true) {
    Subst g;
    for (std::size_t i = 0; i < vars.size(); ++i) g.bind(vars[i], pool(i)[idx[i]]);
    visit(g);
    std::size_t i = 0;
    while (i < vars.size() && ++idx[i] == pool(i).size()) idx[i++] = 0;
    if (i == vars.size()) return;
  }
}

}  // namespace

TEST_CASE("positions round-trip and match the recursive count") {
  RewriteSystem sys = parse_system(test::kApplicative);
  TextGen gen(11);
  long checked = 0;
  for (int k = 0; k < kCases; ++k) {
    Scope sc = test::applicative_scope(sys);
    TermP t = test::term(sys, gen.open_term(4), sc);
    auto ps = positions(t);
    CHECK(ps.size() == position_count(t));
    for (const auto& p : ps) {
      auto back = parse_position(to_string(p));
      REQUIRE(back.has_value());
      CHECK(*back == p);
      CHECK(is_position_of(t, p));
      TermP u = subterm_at(t, p);
      CHECK(term_equal(replace_at(t, p, u), t));
      CHECK(well_typed(u));
      ++checked;
    }
    CHECK(show(test::term(sys, show(t), sc)) == show(t));
  }
  CHECK(checked >= kCases);
}

TEST_CASE("matching finds the substitution that produced an instance") {
  RewriteSystem sys = parse_system(test::kApplicative);
  TextGen gen(12);
  auto base = ground_terms(sys);
  auto funs = ground_functions(sys);
  for (int k = 0; k < kCases; ++k) {
    Scope sc = test::applicative_scope(sys);
    TermP p = test::term(sys, gen.open_term(3), sc);
    Subst g;
    for (const auto& [id, v] : vars_of(p)) {
      const auto& pool = v.type->is_arrow() ? funs : base;
      g.bind(v, pool[static_cast<std::size_t>(gen.pick(static_cast<int>(pool.size())))]);
    }
    TermP inst = substitute(p, g);
    CHECK(well_typed(inst));
    CHECK(vars_of(inst).empty());
    auto m = match(p, inst);
    REQUIRE(m.has_value());
    CHECK(term_equal(substitute(p, *m), inst));
  }
}

TEST_CASE("unifiers are sound and most general") {
  RewriteSystem sys = parse_system(test::kApplicative);
  TextGen gen(13);
  auto base = ground_terms(sys);
  auto funs = ground_functions(sys);
  int unified = 0;
  long ground_unifiers = 0;
  for (int k = 0; k < 2 * kCases; ++k) {
    Scope sc = test::applicative_scope(sys);
    // shallow pairs unify more often; deeper ones exercise the occurs check
    int depth = k % 2 ? 3 : 2;
    TermP s = test::term(sys, gen.open_term(depth), sc);
    TermP t = test::term(sys, gen.open_term(depth), sc);
    VarSet vs = vars_of(s);
    collect_vars(t, vs);
    std::vector<Variable> vars;
    for (const auto& [id, v] : vs) vars.push_back(v);
    auto mgu = unify(s, t);
    if (mgu) {
      ++unified;
      CHECK(term_equal(substitute(s, *mgu), substitute(t, *mgu)));
    }
    // every ground unifier over the pools factors through the mgu
    for_each_ground(vars, base, funs, [&](const Subst& g) {
      if (!term_equal(substitute(s, g), substitute(t, g))) return;
      ++ground_unifiers;
      REQUIRE(mgu.has_value());
      Subst rest;
      for (const auto& v : vars) {
        TermP sv = substitute(mk_var(v), *mgu);
        CHECK(match_into(sv, substitute(mk_var(v), g), rest));
      }
    });
  }
  MESSAGE("unifiable pairs: " << unified << ", ground unifiers checked: " << ground_unifiers);
  CHECK(unified >= 50);
  CHECK(ground_unifiers >= 1000);
}
