#include "bri/engine.hpp"

#include "bri/error.hpp"
#include "bri/theory.hpp"

namespace bri {

namespace {

template <class F>
std::optional<StepResult> attempt(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == "solver-integrity") throw;
    return std::nullopt;
  }
}

}  // namespace

// Per equation, in order: delete, eq-delete, hdelete without new
// requirements, disprove, simplify, calc, semi-constructor on symbol heads.
std::optional<StepResult> Engine::auto_step(const ProofState& st, bool state_complete) const {
  if (st.refuted) return std::nullopt;
  for (const auto& e : st.eqs) {
    int id = e.id;
    if (auto r = attempt([&] { return del(st, id); })) return r;
    if (auto r = attempt([&] { return eq_delete(st, id); })) return r;
    RewriteArgs h;
    h.id = id;
    h.allow_pending = false;
    if (auto r = attempt([&] { return hdelete(st, h); })) return r;
    if (state_complete)
      if (auto r = attempt([&] { return disprove(st, id, {}, true); })) return r;
    RewriteArgs s;
    s.id = id;
    if (auto r = attempt([&] { return simplify(st, s); })) return r;
    if (auto r = attempt([&] { return calc(st, id, std::nullopt, {}); })) return r;
    const TermP& l = e.lhs;
    if (!l->var_head())
      if (auto r = attempt([&] { return semiconstructor(st, id); })) return r;
  }
  return std::nullopt;
}

}  // namespace bri
