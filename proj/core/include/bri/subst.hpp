#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>

#include "bri/term.hpp"

namespace bri {

class Subst {
 public:
  using Map = std::map<long, std::pair<Variable, TermP>>;

  void bind(const Variable& x, TermP t);
  void erase(long id) { map_.erase(id); }
  const TermP* find(long id) const;
  bool contains(long id) const { return map_.count(id) != 0; }
  bool empty() const { return map_.empty(); }
  std::size_t size() const { return map_.size(); }
  const Map& map() const { return map_; }

 private:
  Map map_;
};

TermP substitute(const TermP& t, const Subst& s);
// x -> (x a) b, followed by the bindings of b outside dom(a).
Subst compose(const Subst& a, const Subst& b);
// Restriction of s to the given variables.
Subst restrict(const Subst& s, const VarSet& vars);

// Extends s so that pattern s == t; variables of t are treated as constants.
bool match_into(const TermP& pattern, const TermP& t, Subst& s);
std::optional<Subst> match(const TermP& pattern, const TermP& t);
// Most general unifier, treating application as a binary constructor.
std::optional<Subst> unify(const TermP& a, const TermP& b);
bool unify_into(const TermP& a, const TermP& b, Subst& s);

// Maps every variable of vars to a fresh one with the same name and type.
Subst renaming(const VarSet& vars);
// True if s is a bijection between variables.
bool is_renaming(const Subst& s);

}  // namespace bri
