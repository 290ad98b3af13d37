#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "bri/parser.hpp"
#include "bri/print.hpp"
#include "bri/rewriting.hpp"
#include "bri/session.hpp"
#include "bri/smt.hpp"
#include "bri/theory.hpp"

namespace bri::test {

inline std::string data_path(const std::string& name) { return std::string(BRI_TEST_DATA) + "/" + name; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline RewriteSystem load(const std::string& name) { return load_system(data_path(name)); }

// Parses t in sys; variables are shared through scope.
inline TermP term(const RewriteSystem& sys, const std::string& t, Scope& scope) { return parse_term(t, sys, scope); }

inline TermP term(const RewriteSystem& sys, const std::string& t) {
  Scope scope;
  return parse_term(t, sys, scope);
}

inline TermP term(const RewriteSystem& sys, const std::string& t, Scope& scope, const std::string& type) {
  return parse_term(t, sys, scope, parse_type(type, sys));
}

inline TermP constraint(const RewriteSystem& sys, const std::string& t, Scope& scope) {
  return parse_term(t, sys, scope, bool_type());
}

// Session on a data file with the file's goals loaded.
struct Fixture {
  RewriteSystem sys;
  Session session;
  Fixture(const std::string& file, SessionOptions opts = {})
      : sys(load(file)), session(sys, default_solver(), with_name(opts, file)) {
    session.start(sys.goals());
  }
  static SessionOptions with_name(SessionOptions o, const std::string& file) {
    if (o.system_name.empty()) o.system_name = file;
    return o;
  }
};

// Session on an inline system text with its goals loaded.
struct Inline {
  RewriteSystem sys;
  Session session;
  explicit Inline(const std::string& text, SessionOptions opts = {})
      : sys(parse_system(text)), session(sys, default_solver(), opts) {
    session.start(sys.goals());
  }
};

}  // namespace bri::test
