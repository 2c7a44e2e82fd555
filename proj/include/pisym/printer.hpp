#pragma once

#include <string>

#include "pisym/syntax.hpp"

namespace pisym {

/// Concrete-syntax rendering. Inverse of parse(): parse(to_string(p)) yields
/// a term structurally equal to p. Precedence is dot > '+' > '|', `new`
/// extends right, so restrictions and nested compositions are parenthesized
/// where needed.
std::string to_string(const ProcessPtr& p);

}  // namespace pisym
