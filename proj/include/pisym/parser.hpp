#pragma once

#include <stdexcept>
#include <string>

#include "pisym/syntax.hpp"

namespace pisym {

struct ParseError : std::runtime_error {
    int line;
    int column;
    ParseError(int l, int c, const std::string& msg)
        : std::runtime_error(std::to_string(l) + ":" + std::to_string(c) + ": " + msg),
          line(l),
          column(c) {}
};

/// Parses the concrete term grammar:
///   P ::= 0 | check | x!y . P | x! . P | x?(z) . P | x?() . P | tau . P
///       | P + P | P | P | new x . P | !P | (P)
/// '#' starts a line comment. Dot binds tightest, then '+', then '|';
/// `new` extends to the right; a missing prefix continuation means 0.
/// Operands of '+' must be prefix-guarded. The result must pass
/// well_formed(); violations are reported as ParseError too.
ProcessPtr parse(const std::string& text);

/// parse() without the well-formedness gate (syntax only).
ProcessPtr parse_syntax(const std::string& text);

}  // namespace pisym
