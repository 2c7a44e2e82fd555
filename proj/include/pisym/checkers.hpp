#pragma once

#include <optional>
#include <string>

#include "pisym/execution.hpp"

namespace pisym {

struct Verdict {
    enum class Outcome { Holds, Fails, Unknown };
    Outcome outcome = Outcome::Unknown;
    std::optional<Execution> witness;  // Fails carries a replayable execution
    std::string reason;                // Unknown: which bound was hit

    static Verdict holds() { return {Outcome::Holds, std::nullopt, {}}; }
    static Verdict fails(Execution w) { return {Outcome::Fails, std::move(w), {}}; }
    static Verdict unknown(std::string why) {
        return {Outcome::Unknown, std::nullopt, std::move(why)};
    }
};

const char* to_string(Verdict::Outcome o);

/// Closed-world check: every maximal execution (internal steps plus outputs
/// on the two announcement channels) has each top-level component announce
/// exactly once, and exactly one component announce on `leader`.
/// Throws std::invalid_argument if a channel is bound in the term or the
/// component count does not match the top level.
Verdict solves_leader_election_bouge(const ProcessPtr& term, const Name& leader,
                                     const Name& slave, int component_count, int max_depth);

/// Closed-world check: every maximal execution has each component emit
/// exactly one output on `out`, all carrying the same index.
Verdict solves_leader_election_indexed(const ProcessPtr& term, const Name& out,
                                       int component_count, int max_depth);

/// Every maximal internal-step execution passes a state with the success
/// marker unguarded at top level (under restriction and parallel). An
/// internal cycle that never passes it fails, with the lasso as witness.
Verdict must_succeed(const ProcessPtr& term, int max_depth);

enum class StepMode { AnyLabel, TauOnly };

bool can_step(const ProcessPtr& term, StepMode mode);

}  // namespace pisym
