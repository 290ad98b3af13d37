#pragma once

#include <memory>
#include <string>
#include <vector>

namespace bri {

struct Type;
using TypeP = std::shared_ptr<const Type>;

// A simple type: either a sort or an arrow from -> to.
struct Type {
  std::string sort;
  TypeP from;
  TypeP to;

  bool is_arrow() const { return from != nullptr; }
};

TypeP sort_type(const std::string& name);
TypeP arrow(TypeP from, TypeP to);
TypeP arrows(const std::vector<TypeP>& args, TypeP result);
TypeP int_type();
TypeP bool_type();

bool same_type(const TypeP& a, const TypeP& b);
int arrow_count(const TypeP& t);
// Type after consuming k arguments, nullptr if t has fewer than k arrows.
TypeP result_after(const TypeP& t, int k);
std::vector<TypeP> arg_types(const TypeP& t);
TypeP base_result(const TypeP& t);

bool is_theory_sort(const std::string& sort);
// A base type whose sort is int or bool.
bool is_theory_base(const TypeP& t);

std::string to_string(const TypeP& t);

}  // namespace bri
