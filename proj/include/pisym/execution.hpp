#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pisym/semantics.hpp"
#include "pisym/symmetry.hpp"

namespace pisym {

struct Execution {
    ProcessPtr initial;
    std::vector<Transition> steps;
    bool maximal = false;    // no further step from the last state
    bool truncated = false;  // depth bound or cycle pruning cut the branch

    ProcessPtr last_state() const { return steps.empty() ? initial : steps.back().target; }
};

/// One completed round: n transitions whose labels form the symmetric
/// sequence of labels[0], ending in a network symmetric under `sigma`.
struct Round {
    LabelRound labels;
    SymmetryRelation sigma;  // relation after the round (may extend the prior one)
    NameSeq restriction;     // x~ after the round
    ProcessPtr base;         // component 0 after the round
    std::vector<Transition> steps;
};

struct SymmetricExecution {
    SymmetricNetwork initial;
    std::vector<Round> rounds;
    bool complete = false;  // final network has no transition at all

    ProcessPtr final_term() const;
    SymmetricNetwork final_network() const;
};

/// A construction the theory guarantees has failed anyway; callers surface
/// this as an internal defect, never as a property verdict.
struct ConstructionDefect : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An exploration outgrew its internal node budget; the result would be
/// incomplete, so nothing is returned.
struct BoundExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Deterministic choice among a state's transitions: lowest actor index,
/// then tau < bound output < free output < free input, then label text,
/// then derivation bookkeeping.
const Transition& pick_first(const std::vector<Transition>& options);

/// A transition of `state` carrying `want` — up to the fresh-name choice of
/// a bound-output object — into a state congruent with `want_target`;
/// optionally constrained to exact actors. Empty when none exists.
std::optional<Transition> matching_transition(const ProcessPtr& state, const Label& want,
                                              const ProcessPtr& want_target,
                                              const std::vector<int>* actors = nullptr);

struct RoundResult {
    std::vector<Transition> steps;  // n steps including the generator `first`
    LabelRound labels;
    SymmetricNetwork next;
};

/// Completes the round opened by `first` (a transition of the net's denoted
/// term) so the network is symmetric again after n steps total, extending
/// the relation when fresh names are extruded. Only separate-choice bases.
/// `fresh_hint` optionally pins the names used for extruded-name cycles
/// (position by position); invalid hints are ignored.
RoundResult restore_symmetry(const SymmetricNetwork& net, const Transition& first,
                             const NameSeq& fresh_hint = {});

/// Round-by-round construction: picks the first transition by policy and
/// restores symmetry until the network is stuck (complete) or max_rounds is
/// reached (prefix, complete = false).
SymmetricExecution symmetric_execution(const SymmetricNetwork& net, int max_rounds = 64);

/// Depth-first enumeration of executions up to max_depth, deduplicated by
/// (alpha-normalized label sequence, canonical final state). With
/// `observables` only tau steps and outputs on those channels are explored
/// (closed-world reading). Cycles are pruned per path; a state whose every
/// successor is a revisit is reported as truncated.
std::vector<Execution> enumerate_executions(const ProcessPtr& term, int max_depth = 32,
                                            const std::optional<NameSet>& observables = {});

struct SymSearch {
    enum class Verdict { Yes, No, Unknown };
    Verdict verdict = Verdict::Unknown;
    std::optional<SymmetricExecution> witness;  // set for Yes
};

/// Does the network admit a symmetric execution? Works for mixed-choice
/// bases by searching round completions exhaustively; separate-choice bases
/// take the constructive path. No means the bounded search was exhaustive;
/// Unknown means a bound truncated it.
SymSearch has_symmetric_execution(const SymmetricNetwork& net, int max_rounds = 64);

/// Re-runs a symmetric execution at a smaller degree n' (the relation must
/// already satisfy sigma^n' = id): each original round's generator is
/// replayed in Sym^{n'}(P, sigma, x~), and every produced label is checked
/// to occur in the original round (a later bound output may reappear as its
/// free variant). Separate-choice bases only.
SymmetricExecution subdivide(const SymmetricExecution& exec, int n_prime);

struct ConfluenceOutcome {
    bool holds = true;
    // Filled for a counterexample:
    Label output, input;
    std::string stage;
    ProcessPtr state;  // the term the square was probed from
};

/// For every (output, input) transition pair of p, checks both completion
/// orders exist and meet in congruent states. `require_separate` guards the
/// precondition; lift it to demonstrate mixed-choice failures.
ConfluenceOutcome check_local_confluence(const ProcessPtr& p, const NameSet& universe,
                                         bool require_separate = true);

/// Independent replay of a symmetric execution through the transition
/// relation: step chaining, per-round symmetry, label rounds, relation
/// growth. Returns an error description, or nothing when everything checks.
std::optional<std::string> validate_symmetric_execution(const SymmetricExecution& exec);

}  // namespace pisym
