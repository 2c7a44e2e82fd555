#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pisym/names.hpp"

namespace pisym {

struct Process;
using ProcessPtr = std::shared_ptr<const Process>;

/// Guard of a sum branch. Output carries a datum, Input a binder; datum-free
/// prefixes use Name::unit() in that slot. Tau ignores both name slots.
struct Prefix {
    enum class Kind { Output, Input, Tau };
    Kind kind = Kind::Tau;
    Name channel;
    Name payload;  // datum for Output, binder for Input, unit for Tau

    bool operator==(const Prefix&) const = default;
    auto operator<=>(const Prefix&) const = default;
};

struct Branch {
    Prefix prefix;
    ProcessPtr continuation;
};

/// Immutable process term. Sum covers 0 (no branches) and single prefixes
/// (one branch). Par is an n-ary ordered list, length >= 2, and nested Par
/// nodes are kept as written; structural congruence flattens them only
/// inside canonical forms.
struct Process {
    enum class Kind { Sum, Par, Res, Rep, Success };

    Kind kind = Kind::Sum;
    std::vector<Branch> branches;    // Sum
    std::vector<ProcessPtr> parts;   // Par
    Name binder;                     // Res
    ProcessPtr body;                 // Res, Rep
};

bool equal(const ProcessPtr& a, const ProcessPtr& b);
bool equal(const Process& a, const Process& b);

// Constructors.
ProcessPtr nil();
ProcessPtr success();
ProcessPtr sum(std::vector<Branch> branches);
ProcessPtr prefixed(Prefix p, ProcessPtr cont);
ProcessPtr par(std::vector<ProcessPtr> parts);  // singleton list collapses
ProcessPtr res(Name binder, ProcessPtr body);
ProcessPtr res(const NameSeq& binders, ProcessPtr body);  // right-nested chain
ProcessPtr rep(ProcessPtr body);

inline ProcessPtr out(Name ch, Name datum, ProcessPtr cont) {
    return prefixed({Prefix::Kind::Output, std::move(ch), std::move(datum)}, std::move(cont));
}
inline ProcessPtr in(Name ch, Name binder, ProcessPtr cont) {
    return prefixed({Prefix::Kind::Input, std::move(ch), std::move(binder)}, std::move(cont));
}
inline ProcessPtr tau(ProcessPtr cont) {
    return prefixed({Prefix::Kind::Tau, Name::unit(), Name::unit()}, std::move(cont));
}

/// Names with a free occurrence. The reserved unit name is never reported.
NameSet free_names(const ProcessPtr& p);
/// Names bound by a restriction or input binder, unit excluded.
NameSet bound_names(const ProcessPtr& p);
/// Every name appearing anywhere (free or bound).
NameSet all_names(const ProcessPtr& p);

struct WellFormedness {
    bool ok = true;
    std::string reason;  // empty when ok
};

/// Checked predicate, not a type invariant: binders pairwise distinct and
/// disjoint from the free names. Transition machinery tolerates weaker terms
/// (symmetric networks deliberately share binders across components).
WellFormedness well_formed(const ProcessPtr& p);

enum class Fragment { ChoiceFree, SeparateChoice, Mixed };

/// Tightest fragment: Mixed if any sum mixes input and output guards,
/// ChoiceFree if every sum has at most one branch, SeparateChoice otherwise.
/// Tau guards never make a sum mixed.
Fragment classify(const ProcessPtr& p);

const char* fragment_name(Fragment f);

std::size_t ast_size(const ProcessPtr& p);

}  // namespace pisym
