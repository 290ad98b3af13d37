#include "bri/print.hpp"

#include "bri/theory.hpp"

namespace bri {

namespace {

bool is_negative_value(const TermP& t) { return is_value(t) && t->symbol()->is_int_value() && t->symbol()->int_value < 0; }

bool is_full_infix(const TermP& t) {
  return !t->var_head() && t->nargs() == 2 && t->symbol()->is_theory() &&
         theory::is_infix(t->symbol()->name);
}

// ctx: 0 = top level, otherwise the minimal precedence that needs no parentheses.
std::string show_prec(const TermP& t, int ctx);

std::string show_head(const TermP& t) {
  if (t->var_head()) return t->variable().name;
  const std::string& n = t->symbol()->name;
  if (t->symbol()->is_theory() && (theory::is_infix(n) || (n == "not" && t->nargs() == 0)))
    return "(" + n + ")";
  return n;
}

std::string show_prec(const TermP& t, int ctx) {
  if (is_full_infix(t)) {
    const std::string& op = t->symbol()->name;
    int p = theory::infix_precedence(op);
    bool left_assoc = op == "+" || op == "-" || op == "*" || op == "/\\" || op == "\\/";
    std::string l = show_prec(t->args()[0], left_assoc ? p : p + 1);
    std::string r = show_prec(t->args()[1], p + 1);
    std::string s = l + " " + op + " " + r;
    return ctx > p ? "(" + s + ")" : s;
  }
  if (t->nargs() == 0) {
    std::string s = show_head(t);
    if (is_negative_value(t) && ctx > 0) return "(" + s + ")";
    return s;
  }
  std::string s = show_head(t);
  for (const auto& a : t->args()) s += " " + show_prec(a, 100);
  return ctx >= 100 ? "(" + s + ")" : s;
}

}  // namespace

std::string show(const TermP& t) { return show_prec(t, 0); }

std::string show(const Subst& s) {
  std::string out = "[";
  bool first = true;
  for (const auto& [id, entry] : s.map()) {
    if (!first) out += ", ";
    first = false;
    out += entry.first.name + " := " + show(entry.second);
  }
  return out + "]";
}

}  // namespace bri
