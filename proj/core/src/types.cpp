#include "bri/types.hpp"

namespace bri {

TypeP sort_type(const std::string& name) {
  auto t = std::make_shared<Type>();
  t->sort = name;
  return t;
}

TypeP arrow(TypeP from, TypeP to) {
  auto t = std::make_shared<Type>();
  t->from = std::move(from);
  t->to = std::move(to);
  return t;
}

TypeP arrows(const std::vector<TypeP>& args, TypeP result) {
  for (auto it = args.rbegin(); it != args.rend(); ++it) result = arrow(*it, result);
  return result;
}

TypeP int_type() {
  static const TypeP t = sort_type("int");
  return t;
}

TypeP bool_type() {
  static const TypeP t = sort_type("bool");
  return t;
}

bool same_type(const TypeP& a, const TypeP& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->is_arrow() != b->is_arrow()) return false;
  if (!a->is_arrow()) return a->sort == b->sort;
  return same_type(a->from, b->from) && same_type(a->to, b->to);
}

int arrow_count(const TypeP& t) {
  int n = 0;
  for (const Type* p = t.get(); p->is_arrow(); p = p->to.get()) ++n;
  return n;
}

TypeP result_after(const TypeP& t, int k) {
  TypeP cur = t;
  for (int i = 0; i < k; ++i) {
    if (!cur->is_arrow()) return nullptr;
    cur = cur->to;
  }
  return cur;
}

std::vector<TypeP> arg_types(const TypeP& t) {
  std::vector<TypeP> out;
  for (TypeP cur = t; cur->is_arrow(); cur = cur->to) out.push_back(cur->from);
  return out;
}

TypeP base_result(const TypeP& t) {
  TypeP cur = t;
  while (cur->is_arrow()) cur = cur->to;
  return cur;
}

bool is_theory_sort(const std::string& sort) { return sort == "int" || sort == "bool"; }

bool is_theory_base(const TypeP& t) { return !t->is_arrow() && is_theory_sort(t->sort); }

std::string to_string(const TypeP& t) {
  if (!t) return "?";
  if (!t->is_arrow()) return t->sort;
  std::string left = to_string(t->from);
  if (t->from->is_arrow()) left = "(" + left + ")";
  return left + " -> " + to_string(t->to);
}

}  // namespace bri
