#include "pisym/checkers.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace pisym {

const char* to_string(Verdict::Outcome o) {
    switch (o) {
        case Verdict::Outcome::Holds: return "holds";
        case Verdict::Outcome::Fails: return "fails";
        case Verdict::Outcome::Unknown: return "unknown";
    }
    return "?";
}

namespace {

int top_component_count(const ProcessPtr& term) {
    ProcessPtr cur = term;
    while (cur->kind == Process::Kind::Res) cur = cur->body;
    return cur->kind == Process::Kind::Par ? static_cast<int>(cur->parts.size()) : 1;
}

void check_election_inputs(const ProcessPtr& term, const std::vector<Name>& channels,
                           int component_count) {
    if (!term) throw std::invalid_argument("null term");
    NameSet bound = bound_names(term);
    for (const auto& ch : channels)
        if (bound.count(ch))
            throw std::invalid_argument("announcement channel '" + ch.id +
                                        "' is bound in the term");
    if (top_component_count(term) != component_count)
        throw std::invalid_argument("component count does not match the term's top level");
}

}  // namespace

Verdict solves_leader_election_bouge(const ProcessPtr& term, const Name& leader,
                                     const Name& slave, int component_count, int max_depth) {
    check_election_inputs(term, {leader, slave}, component_count);
    auto execs = enumerate_executions(term, max_depth, NameSet{leader, slave});
    bool truncated = false;
    for (auto& e : execs) {
        if (e.truncated) {
            truncated = true;
            continue;
        }
        std::vector<int> announced(component_count, 0);
        int leaders = 0;
        for (const auto& st : e.steps) {
            if (!st.label.is_output()) continue;
            int c = st.actors.empty() ? 0 : st.actors[0];
            if (c < 0 || c >= component_count) c = 0;
            ++announced[c];
            if (st.label.subject == leader) ++leaders;
        }
        bool ok = leaders == 1;
        for (int c = 0; c < component_count; ++c) ok = ok && announced[c] == 1;
        if (!ok) return Verdict::fails(std::move(e));
    }
    if (truncated) return Verdict::unknown("exploration depth exceeded");
    return Verdict::holds();
}

Verdict solves_leader_election_indexed(const ProcessPtr& term, const Name& out,
                                       int component_count, int max_depth) {
    check_election_inputs(term, {out}, component_count);
    auto execs = enumerate_executions(term, max_depth, NameSet{out});
    bool truncated = false;
    for (auto& e : execs) {
        if (e.truncated) {
            truncated = true;
            continue;
        }
        std::vector<int> emitted(component_count, 0);
        std::set<Name> indices;
        for (const auto& st : e.steps) {
            if (!st.label.is_output()) continue;
            int c = st.actors.empty() ? 0 : st.actors[0];
            if (c < 0 || c >= component_count) c = 0;
            ++emitted[c];
            indices.insert(st.label.object);
        }
        bool ok = indices.size() == 1;
        for (int c = 0; c < component_count; ++c) ok = ok && emitted[c] == 1;
        if (!ok) return Verdict::fails(std::move(e));
    }
    if (truncated) return Verdict::unknown("exploration depth exceeded");
    return Verdict::holds();
}

namespace {

bool success_at_top(const ProcessPtr& p) {
    switch (p->kind) {
        case Process::Kind::Success:
            return true;
        case Process::Kind::Res:
            return success_at_top(p->body);
        case Process::Kind::Par:
            return std::any_of(p->parts.begin(), p->parts.end(),
                               [](const ProcessPtr& q) { return success_at_top(q); });
        default:
            return false;
    }
}

struct SucceedWalker {
    int max_depth;
    ProcessPtr root;
    bool truncated = false;
    std::optional<Execution> fail;
    std::vector<Transition> steps;
    std::set<std::string> on_path;
    std::set<std::string> proven;  // states all of whose runs certainly succeed

    bool walk(const ProcessPtr& state, const std::string& key, int depth) {
        if (success_at_top(state)) return true;
        if (proven.count(key)) return true;
        auto opts = tau_transitions(state);
        if (opts.empty()) {
            fail = Execution{root, steps, true, false};
            return false;
        }
        if (depth >= max_depth) {
            truncated = true;
            return false;
        }
        bool all_ok = true;
        for (const auto& t : opts) {
            std::string k2 = canonical(t.target).key;
            if (on_path.count(k2)) {
                // A cycle that never passed the success marker.
                steps.push_back(t);
                fail = Execution{root, steps, false, true};
                steps.pop_back();
                return false;
            }
            on_path.insert(k2);
            steps.push_back(t);
            bool ok = walk(t.target, k2, depth + 1);
            steps.pop_back();
            on_path.erase(k2);
            if (fail) return false;
            all_ok = all_ok && ok;
        }
        if (all_ok) proven.insert(key);
        return all_ok;
    }
};

}  // namespace

Verdict must_succeed(const ProcessPtr& term, int max_depth) {
    if (!term) throw std::invalid_argument("null term");
    SucceedWalker w{max_depth, term, false, {}, {}, {}, {}};
    std::string k0 = canonical(term).key;
    w.on_path.insert(k0);
    bool ok = w.walk(term, k0, 0);
    if (w.fail) return Verdict::fails(std::move(*w.fail));
    if (!ok) return Verdict::unknown("internal-step depth exceeded");
    return Verdict::holds();
}

bool can_step(const ProcessPtr& term, StepMode mode) {
    if (!term) throw std::invalid_argument("null term");
    if (mode == StepMode::TauOnly) return !tau_transitions(term).empty();
    return !transitions(term, free_names(term)).empty();
}

}  // namespace pisym
