#pragma once

#include <compare>
#include <string>

#include "pisym/names.hpp"

namespace pisym {

/// Transition label of the early-style labelled semantics.
///   FreeInput   x y   - receive datum y on x
///   FreeOutput  x!y   - send free datum y on x
///   BoundOutput x!(y) - extrude restricted y on x (y binds into the target)
///   Tau               - internal step
struct Label {
    enum class Kind { FreeInput, FreeOutput, BoundOutput, Tau };

    Kind kind = Kind::Tau;
    Name subject;  // unused for Tau
    Name object;   // unused for Tau

    bool operator==(const Label&) const = default;
    auto operator<=>(const Label&) const = default;

    static Label tau() { return {}; }
    static Label free_input(Name s, Name o) {
        return {Kind::FreeInput, std::move(s), std::move(o)};
    }
    static Label free_output(Name s, Name o) {
        return {Kind::FreeOutput, std::move(s), std::move(o)};
    }
    static Label bound_output(Name s, Name o) {
        return {Kind::BoundOutput, std::move(s), std::move(o)};
    }

    bool is_tau() const { return kind == Kind::Tau; }
    bool is_output() const { return kind == Kind::FreeOutput || kind == Kind::BoundOutput; }

    /// Names occurring in the label (n(mu)); unit is invisible as usual.
    NameSet names() const;
    /// The bound name of the label: just the object of a bound output.
    NameSet binding() const;
};

/// Rendering used everywhere (reports, traces, tests): "x!y", "x!(y)", "x?y",
/// "tau"; unit payloads print as the bare sugar "x!" / "x?".
std::string to_string(const Label& l);

}  // namespace pisym
