#pragma once

#include <map>
#include <string>

#include "bri/rewriting.hpp"
#include "bri/subst.hpp"
#include "bri/term.hpp"

namespace bri {

// Variables visible while parsing. Unknown names become fresh variables
// (added to the scope) when allow_new is set.
struct Scope {
  std::map<std::string, Variable> vars;
  bool allow_new = true;

  void add(const VarSet& vs) {
    for (const auto& [id, v] : vs) vars[v.name] = v;
  }
};

TypeP parse_type(const std::string& text, const RewriteSystem& sys);
TermP parse_term(const std::string& text, const RewriteSystem& sys, Scope& scope, const TypeP& expected = nullptr);
// "lhs == rhs [phi]" (constraint optional).
Equation parse_equation(const std::string& text, const RewriteSystem& sys, Scope& scope);
// "[x := t, y := u]": x, y resolve in dom; t, u are parsed in img.
Subst parse_subst(const std::string& text, const RewriteSystem& sys, const Scope& dom, Scope& img);

// System files: sort / fun declarations, rules "l -> r [phi];", goals
// "s == t [phi];", "axiom name [mode]: s == t [phi];", "trust <what>;".
RewriteSystem parse_system(const std::string& text);
RewriteSystem load_system(const std::string& path);
std::string print_system(const RewriteSystem& sys);

}  // namespace bri
