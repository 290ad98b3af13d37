#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "support.hpp"

namespace bri::test {

// Random terms over a small applicative signature, produced as text so
// that the parser builds them.
inline const char* kApplicative = R"(
sort a;
fun f : a -> a -> a;
fun g : a -> a;
fun c d : a;
)";

class TextGen {
 public:
  explicit TextGen(std::uint64_t seed) : rng_(seed) {}

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  // sort a, variables x y z : a and F : a -> a
  std::string open_term(int depth) {
    if (depth == 0 || pick(3) == 0) {
      static const char* leaves[] = {"c", "d", "x", "y", "z"};
      return leaves[pick(5)];
    }
    switch (pick(3)) {
      case 0:
        return "f " + arg(open_term(depth - 1)) + " " + arg(open_term(depth - 1));
      case 1:
        return "g " + arg(open_term(depth - 1));
      default:
        return "F " + arg(open_term(depth - 1));
    }
  }

  // Ground integer expression and its value, computed independently.
  std::string int_expr(int depth, long long& value) {
    if (depth == 0 || pick(3) == 0) {
      value = pick(19) - 9;
      return value < 0 ? "(" + std::to_string(value) + ")" : std::to_string(value);
    }
    long long l = 0, r = 0;
    std::string a = int_expr(depth - 1, l), b = int_expr(depth - 1, r);
    switch (pick(3)) {
      case 0:
        value = l + r;
        return "(" + a + " + " + b + ")";
      case 1:
        value = l - r;
        return "(" + a + " - " + b + ")";
      default:
        value = l * r;
        return "(" + a + " * " + b + ")";
    }
  }

  std::string bool_expr(int depth, bool& value) {
    if (depth == 0 || pick(3) == 0) {
      long long l = 0, r = 0;
      std::string a = int_expr(2, l), b = int_expr(2, r);
      switch (pick(4)) {
        case 0:
          value = l < r;
          return "(" + a + " < " + b + ")";
        case 1:
          value = l >= r;
          return "(" + a + " >= " + b + ")";
        case 2:
          value = l == r;
          return "(" + a + " = " + b + ")";
        default:
          value = l <= r;
          return "(" + a + " <= " + b + ")";
      }
    }
    bool l = false, r = false;
    std::string a = bool_expr(depth - 1, l), b = bool_expr(depth - 1, r);
    switch (pick(3)) {
      case 0:
        value = l && r;
        return "(" + a + " /\\ " + b + ")";
      case 1:
        value = l || r;
        return "(" + a + " \\/ " + b + ")";
      default:
        value = !l;
        return "(not " + a + ")";
    }
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  static std::string arg(const std::string& s) { return s.find(' ') == std::string::npos ? s : "(" + s + ")"; }

  std::mt19937_64 rng_;
};

// A scope in which x, y, z : a and F : a -> a are already known.
inline Scope applicative_scope(const RewriteSystem& sys) {
  Scope sc;
  parse_term("f x (f y (F (g z)))", sys, sc);
  return sc;
}

}  // namespace bri::test
