#include "bri/position.hpp"

#include <cctype>

#include "bri/error.hpp"

namespace bri {

Position root_position() { return Position{}; }

Position prepend(int i, const Position& p) {
  Position q;
  q.path.reserve(p.path.size() + 1);
  q.path.push_back(i);
  q.path.insert(q.path.end(), p.path.begin(), p.path.end());
  q.star = p.star;
  return q;
}

std::vector<Position> positions(const TermP& t) {
  std::vector<Position> out;
  int n = static_cast<int>(t->nargs());
  for (int j = 0; j <= n; ++j) out.push_back(Position{{}, j});
  for (int i = 1; i <= n; ++i)
    for (const auto& p : positions(t->args()[i - 1])) out.push_back(prepend(i, p));
  return out;
}

std::vector<Position> innermost_positions(const TermP& t) {
  std::vector<Position> out;
  int n = static_cast<int>(t->nargs());
  for (int i = 1; i <= n; ++i)
    for (const auto& p : innermost_positions(t->args()[i - 1])) out.push_back(prepend(i, p));
  for (int j = n; j >= 0; --j) out.push_back(Position{{}, j});
  return out;
}

bool is_position_of(const TermP& t, const Position& p) {
  const Term* cur = t.get();
  for (int i : p.path) {
    if (i < 1 || i > static_cast<int>(cur->nargs())) return false;
    cur = cur->args()[i - 1].get();
  }
  return p.star >= 0 && p.star <= static_cast<int>(cur->nargs());
}

TermP subterm_at(const TermP& t, const Position& p) {
  TermP cur = t;
  for (int i : p.path) {
    if (i < 1 || i > static_cast<int>(cur->nargs()))
      throw Error("invalid-position", to_string(p));
    cur = cur->args()[i - 1];
  }
  if (p.star < 0 || p.star > static_cast<int>(cur->nargs()))
    throw Error("invalid-position", to_string(p));
  return prefix(cur, cur->nargs() - p.star);
}

namespace {

TermP replace_rec(const TermP& t, const Position& p, std::size_t depth, const TermP& s) {
  if (depth == p.path.size()) {
    if (p.star < 0 || p.star > static_cast<int>(t->nargs()))
      throw Error("invalid-position", to_string(p));
    std::size_t keep = t->nargs() - p.star;
    if (!same_type(prefix(t, keep)->type(), s->type()))
      throw Error("type-mismatch", "replacement at " + to_string(p) + " changes the type");
    std::vector<TermP> rest(t->args().begin() + keep, t->args().end());
    return mk_app(s, rest);
  }
  int i = p.path[depth];
  if (i < 1 || i > static_cast<int>(t->nargs())) throw Error("invalid-position", to_string(p));
  std::vector<TermP> args = t->args();
  args[i - 1] = replace_rec(args[i - 1], p, depth + 1, s);
  return with_args(t, std::move(args));
}

}  // namespace

TermP replace_at(const TermP& t, const Position& p, const TermP& s) {
  return replace_rec(t, p, 0, s);
}

std::string to_string(const Position& p) {
  if (p.is_root()) return "ε";
  std::string out;
  for (int i : p.path) {
    out += std::to_string(i);
    out += '.';
  }
  out += "⋆" + std::to_string(p.star);
  return out;
}

std::optional<Position> parse_position(std::string_view text) {
  if (text == "ε" || text == "e" || text == "eps" || text == "root") return Position{};
  Position p;
  std::size_t i = 0;
  bool have_star = false;
  while (i < text.size()) {
    if (have_star) return std::nullopt;
    bool star = false;
    if (text.compare(i, 3, "⋆") == 0) {
      star = true;
      i += 3;
    } else if (text[i] == '*') {
      star = true;
      ++i;
    }
    std::size_t start = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (start == i) return std::nullopt;
    int v = std::stoi(std::string(text.substr(start, i - start)));
    if (star) {
      p.star = v;
      have_star = true;
    } else {
      if (v < 1) return std::nullopt;
      p.path.push_back(v);
    }
    if (i < text.size()) {
      if (text[i] == '.') {
        ++i;
        if (i == text.size()) return std::nullopt;
      } else if (text.compare(i, 3, "⋆") != 0 && text[i] != '*') {
        return std::nullopt;
      }
    }
  }
  return p;
}

}  // namespace bri
