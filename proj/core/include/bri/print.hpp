#pragma once

#include <string>

#include "bri/subst.hpp"
#include "bri/term.hpp"

namespace bri {

std::string show(const TermP& t);
// "[x := t, y := u]"
std::string show(const Subst& s);

}  // namespace bri
