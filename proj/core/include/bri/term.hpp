#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <map>
#include <set>
#include <memory>
#include <string>
#include <vector>

#include "bri/types.hpp"

namespace bri {

enum class SymKind { Term, Theory, Value };

struct Symbol {
  std::string name;
  TypeP type;
  SymKind kind = SymKind::Term;
  mpz_class int_value;
  bool bool_value = false;

  bool is_value() const { return kind == SymKind::Value; }
  bool is_theory() const { return kind != SymKind::Term; }
  bool is_int_value() const { return is_value() && type->sort == "int"; }
};
using SymbolP = std::shared_ptr<const Symbol>;

SymbolP make_symbol(const std::string& name, TypeP type, SymKind kind = SymKind::Term);
bool same_symbol(const SymbolP& a, const SymbolP& b);

// Variables are identified by a process-wide unique id; the name is only
// used for printing.
struct Variable {
  long id = 0;
  std::string name;
  TypeP type;
};

Variable fresh_variable(const std::string& name, TypeP type);

class Term;
using TermP = std::shared_ptr<const Term>;

// Applicative term a t1 .. tn whose head a is a symbol or a variable.
class Term {
 public:
  bool var_head() const { return var_head_; }
  const SymbolP& symbol() const { return sym_; }
  const Variable& variable() const { return var_; }
  const std::vector<TermP>& args() const { return args_; }
  std::size_t nargs() const { return args_.size(); }
  const TypeP& type() const { return type_; }
  std::size_t hash() const { return hash_; }

  bool is_var() const { return var_head_ && args_.empty(); }
  bool is_symbol() const { return !var_head_; }
  const std::string& head_name() const { return var_head_ ? var_.name : sym_->name; }

 private:
  friend TermP mk_sym(const SymbolP&);
  friend TermP mk_var(const Variable&);
  friend TermP with_args(const TermP&, std::vector<TermP>);

  bool var_head_ = false;
  SymbolP sym_;
  Variable var_;
  std::vector<TermP> args_;
  TypeP type_;
  std::size_t hash_ = 0;
};

TermP mk_sym(const SymbolP& f);
TermP mk_var(const Variable& x);
// Same head as t, the given argument list (type-checked).
TermP with_args(const TermP& t, std::vector<TermP> args);
// Applies t to further arguments, flattening the head.
TermP mk_app(const TermP& t, const std::vector<TermP>& extra);
TermP mk_app(const SymbolP& f, const std::vector<TermP>& args);
TermP head_of(const TermP& t);
// a t1 .. tk for k <= n.
TermP prefix(const TermP& t, std::size_t k);

bool term_equal(const TermP& a, const TermP& b);
// Total order used for deterministic sorting.
int term_compare(const TermP& a, const TermP& b);

struct TermHash {
  std::size_t operator()(const TermP& t) const { return t->hash(); }
};
struct TermEq {
  bool operator()(const TermP& a, const TermP& b) const { return term_equal(a, b); }
};
struct TermLess {
  bool operator()(const TermP& a, const TermP& b) const { return term_compare(a, b) < 0; }
};

using VarSet = std::map<long, Variable>;

void collect_vars(const TermP& t, VarSet& out);
VarSet vars_of(const TermP& t);
// Variables in order of first occurrence (left to right).
std::vector<Variable> vars_in_order(const TermP& t);
bool contains_var(const TermP& t, long id);
bool is_ground(const TermP& t);
std::size_t term_size(const TermP& t);
// Recomputes types bottom-up; false if some application is ill-typed.
bool well_typed(const TermP& t);

}  // namespace bri

namespace bri {

// base, base', base'', ... : the first of these not in taken.
std::string fresh_name(const std::string& base, const std::set<std::string>& taken);
std::set<std::string> var_names(const VarSet& vars);

}  // namespace bri
