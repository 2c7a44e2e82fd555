#pragma once

#include <string>
#include <vector>

#include "pisym/label.hpp"
#include "pisym/names.hpp"
#include "pisym/subst.hpp"
#include "pisym/syntax.hpp"

namespace pisym {

/// Structural address of a consumed prefix, from the term root: Par
/// component, Res body, replication copy, sum branch. Stable across the
/// renamings applied by symmetry images, which lets round constructions
/// select "the same redex" in sibling components.
struct PathElem {
    enum class Kind { Part, Body, Rep, Branch };
    Kind kind;
    int index = 0;

    bool operator==(const PathElem&) const = default;
    auto operator<=>(const PathElem&) const = default;
};

using Path = std::vector<PathElem>;

std::string to_string(const Path& p);

/// How a transition was derived: the consumed prefix (solo) or the
/// sender/receiver prefix pair of a communication.
struct StepDetail {
    bool pair = false;
    Path prefix_a;        // consumed prefix; sender side for pairs
    Path prefix_b;        // receiver side (pairs only)
    Name channel;         // pairs only
    Name datum;           // pairs only: transmitted name
    bool extruded = false;  // pair via scope extrusion (bound-output sender)

    bool operator==(const StepDetail&) const = default;
};

struct Transition {
    ProcessPtr source;
    Label label;
    ProcessPtr target;
    std::vector<int> actors;  // touched top-level parallel components
    StepDetail detail;
};

/// All transitions of p, with early-style free inputs instantiated over
/// `universe` plus one designated fresh witness name (_w0 or the first free
/// variant). `universe` must contain every free name of p. Datum-free input
/// prefixes receive only the unit name. Deterministic: order, targets and
/// any alpha-renaming of extruded objects depend only on (p, universe).
std::vector<Transition> transitions(const ProcessPtr& p, const NameSet& universe);

/// The designated witness transitions() would use for this term/universe.
Name input_witness(const ProcessPtr& p, const NameSet& universe);

/// Internal-step fragment of the relation; needs no universe because
/// communication datums come from the term itself.
std::vector<Transition> tau_transitions(const ProcessPtr& p);

/// A structural-congruence normal form: binders renamed canonically in a
/// fixed traversal order, restrictions pulled maximally outward across
/// parallel compositions, parallel components sorted as a multiset.
struct CanonicalForm {
    ProcessPtr term;
    std::string key;  // printed form of `term`; equal keys iff congruent
};

CanonicalForm canonical(const ProcessPtr& p);

/// Structural congruence: alpha-conversion, scope mobility across '|',
/// commutativity (and associativity via the multiset reading of '|').
bool congruent(const ProcessPtr& a, const ProcessPtr& b);

}  // namespace pisym
