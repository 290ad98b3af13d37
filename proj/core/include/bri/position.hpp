#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bri/term.hpp"

namespace bri {

// A position i1 . i2 ... ik . *j: descend into argument i1, then i2, ...,
// then drop the last j arguments. The root is *0 (printed as the empty word).
struct Position {
  std::vector<int> path;
  int star = 0;

  bool is_root() const { return path.empty() && star == 0; }
  bool operator==(const Position& o) const { return path == o.path && star == o.star; }
  bool operator<(const Position& o) const {
    return path != o.path ? path < o.path : star < o.star;
  }
};

Position root_position();
// Position i.p from p.
Position prepend(int i, const Position& p);

// All positions of t, outermost first.
std::vector<Position> positions(const TermP& t);
// Innermost-leftmost order: argument positions left to right, then the head
// prefixes from the bare head outwards, root last.
std::vector<Position> innermost_positions(const TermP& t);

bool is_position_of(const TermP& t, const Position& p);
TermP subterm_at(const TermP& t, const Position& p);
TermP replace_at(const TermP& t, const Position& p, const TermP& s);

std::string to_string(const Position& p);
std::optional<Position> parse_position(std::string_view text);

}  // namespace bri
