#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pisym/label.hpp"
#include "pisym/names.hpp"
#include "pisym/subst.hpp"
#include "pisym/syntax.hpp"

namespace pisym {

/// (v x~)(P | s(P) | ... | s^{n-1}(P)) with x~ closed under s and no
/// alpha-renaming across components: every component is a literal s-image.
struct SymmetricNetwork {
    NameSeq restriction;       // x~, outermost first
    ProcessPtr base;           // P, component 0
    SymmetryRelation relation; // s with s^n = id

    int degree() const { return relation.degree; }
};

/// The n labels of one round: labels[0] is the generator, position t carries
/// the s^{t-1}-image with bound outputs demoted to free outputs once their
/// object has already been extruded earlier in the round.
using LabelRound = std::vector<Label>;

/// Validates and builds a network record plus its denoted term.
/// Checks, each with a named error: base well-formed; relation a bijection of
/// the right degree avoiding bn(base); restriction names distinct, free in
/// base, and closed under the relation.
SymmetricNetwork build_network(const ProcessPtr& base, const SymmetryRelation& relation,
                               const NameSeq& restriction);

/// The expanded term (v x~)(P | s(P) | ...). Components are not flattened:
/// the top-level Par has exactly `degree` parts even when P is itself
/// parallel (degree 1 denotes just (v x~)P).
ProcessPtr denoted_term(const SymmetricNetwork& net);

/// The component images [P, s(P), ..., s^{n-1}(P)].
std::vector<ProcessPtr> network_components(const SymmetricNetwork& net);

/// Networks that arise mid-execution may restrict names no longer free in
/// the base (a consumed prefix was their only use); this constructor skips
/// the x~-subset-of-fn check but keeps the others.
SymmetricNetwork network_unchecked(const ProcessPtr& base, const SymmetryRelation& relation,
                                   const NameSeq& restriction);

/// Replace the indexed components of the denoted term; the result is
/// generally not symmetric. Indices must be distinct and in range.
ProcessPtr indexed_substitute(const SymmetricNetwork& net,
                              const std::map<int, ProcessPtr>& replacements);

/// The round of labels generated by mu under the relation:
///   position 1: mu
///   position t: tau stays tau; subjects map through s^{t-1}; free-input and
///   free-output objects map through s^{t-1}; a bound-output object maps to
///   s^{t-1}(b) and the label stays a bound output iff that name differs
///   from all earlier positions' objects (the same name cannot be extruded
///   twice), otherwise it demotes to a free output.
LabelRound symmetric_action_sequence(const Label& mu, const SymmetryRelation& relation,
                                     const NameSeq& restriction);

/// Literal recognition: term is (v x~)(P0 | ... | Pn-1) with the exact
/// restriction spine, and P_{k+1} == apply(s, P_k) syntactically for all k
/// cyclically. No alpha-conversion is applied.
bool is_symmetric(const ProcessPtr& term, const SymmetryRelation& relation,
                  const NameSeq& restriction);

/// Attempt to recover (s, x~) for a term whose outer restrictions and
/// `degree` top-level components are read off syntactically; the candidate
/// permutation comes from position-wise name alignment of consecutive
/// components (including the wrap-around pair).
struct DiscoveredSymmetry {
    SymmetryRelation relation;
    NameSeq restriction;
};
std::optional<DiscoveredSymmetry> discover_symmetry(const ProcessPtr& term, int degree);

}  // namespace pisym
