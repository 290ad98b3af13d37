#include "bri/confluence.hpp"
#include "bri/error.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bri;

namespace {

std::vector<TypeP> sample_types(const RewriteSystem& sys) {
  std::vector<TypeP> out;
  auto add = [&](const TypeP& t) {
    for (const auto& u : out)
      if (same_type(u, t)) return;
    out.push_back(t);
  };
  for (const auto& r : sys.rules()) {
    add(r.lhs->type());
    for (const auto& a : r.lhs->args()) add(a->type());
  }
  return out;
}

}  // namespace

TEST_CASE("ground semi-constructor terms are exactly the irreducible ones") {
  long checked = 0;
  for (const char* name : {"recdown.sys", "revapp.sys", "gh.sys"}) {
    RewriteSystem sys = test::load(name);
    TermSampler sampler(sys, 31);
    auto types = sample_types(sys);
    for (int k = 0; k < 200; ++k) {
      TermP t = sampler.sample(types[static_cast<std::size_t>(k) % types.size()], 3);
      bool semi = is_semi_constructor(t, sys);
      bool irreducible = reduce_once(t, sys).empty();
      INFO(name << ": " << show(t));
      CHECK(well_typed(t));
      // one direction always; the converse is quasi-reductivity
      if (semi) CHECK(irreducible);
      if (irreducible) CHECK(semi);
      ++checked;
    }
  }
  CHECK(checked >= 500);
}

TEST_CASE("normal forms are irreducible and reachable") {
  long checked = 0;
  for (const char* name : {"recdown.sys", "revapp.sys", "gh.sys"}) {
    RewriteSystem sys = test::load(name);
    TermSampler sampler(sys, 32, 6);
    auto types = sample_types(sys);
    for (int k = 0; k < 200; ++k) {
      TermP t = sampler.sample(types[static_cast<std::size_t>(k) % types.size()], 3);
      TermP n;
      try {
        n = normalize(t, sys, 100000);
      } catch (const Error&) {
        continue;
      }
      INFO(name << ": " << show(t));
      CHECK(reduce_once(n, sys).empty());
      CHECK(same_type(n->type(), t->type()));
      // one step first, then normalise: same result for a confluent system
      auto steps = reduce_once(t, sys);
      if (!steps.empty()) {
        try {
          CHECK(term_equal(normalize(steps.front().result, sys, 100000), n));
        } catch (const Error&) {
        }
      }
      ++checked;
    }
  }
  CHECK(checked >= 500);
}
