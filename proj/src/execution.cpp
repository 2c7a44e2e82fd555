#include "pisym/execution.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "pisym/printer.hpp"

namespace pisym {

namespace {

int label_order(const Label& l) {
    switch (l.kind) {
        case Label::Kind::Tau: return 0;
        case Label::Kind::BoundOutput: return 1;
        case Label::Kind::FreeOutput: return 2;
        case Label::Kind::FreeInput: return 3;
    }
    return 4;
}

ProcessPtr iterate_apply(const Substitution& perm, ProcessPtr p, int times) {
    for (int k = 0; k < times; ++k) p = pisym::apply(perm, p);
    return p;
}

Name iterate_name(const Substitution& perm, Name n, int times) {
    for (int k = 0; k < times; ++k) n = perm(n);
    return n;
}

/// Peel exactly the given restriction spine; false when the term's outer
/// binders do not literally match.
bool peel_spine(const ProcessPtr& term, const NameSeq& spine, ProcessPtr& core) {
    ProcessPtr cur = term;
    for (const auto& x : spine) {
        if (cur->kind != Process::Kind::Res || cur->binder != x) return false;
        cur = cur->body;
    }
    core = cur;
    return true;
}

std::vector<ProcessPtr> split_components(const ProcessPtr& core, int n) {
    if (n == 1) return {core};
    if (core->kind != Process::Kind::Par || static_cast<int>(core->parts.size()) != n)
        throw ConstructionDefect("network core does not split into " + std::to_string(n) +
                                 " components");
    return core->parts;
}

ProcessPtr assemble(const NameSeq& spine, std::vector<ProcessPtr> comps) {
    return res(spine, par(std::move(comps)));
}

NameSeq read_spine(const ProcessPtr& term) {
    NameSeq spine;
    ProcessPtr cur = term;
    while (cur->kind == Process::Kind::Res) {
        spine.push_back(cur->binder);
        cur = cur->body;
    }
    return spine;
}

ProcessPtr component0(const ProcessPtr& term, const NameSeq& spine, int n) {
    ProcessPtr core;
    if (!peel_spine(term, spine, core))
        throw ConstructionDefect("final state lost its restriction spine");
    return split_components(core, n)[0];
}

bool contains(const NameSeq& xs, const Name& n) {
    return std::find(xs.begin(), xs.end(), n) != xs.end();
}

}  // namespace

ProcessPtr SymmetricExecution::final_term() const {
    if (rounds.empty()) return denoted_term(initial);
    return rounds.back().steps.back().target;
}

SymmetricNetwork SymmetricExecution::final_network() const {
    if (rounds.empty()) return initial;
    const Round& r = rounds.back();
    return network_unchecked(r.base, r.sigma, r.restriction);
}

std::optional<Transition> matching_transition(const ProcessPtr& state, const Label& want,
                                        const ProcessPtr& want_target,
                                        const std::vector<int>* actors) {
    std::vector<Transition> cands;
    if (want.is_tau()) {
        cands = tau_transitions(state);
    } else {
        NameSet uni = free_names(state);
        uni.insert(want.subject);
        if (want.kind != Label::Kind::BoundOutput && !want.object.is_unit())
            uni.insert(want.object);
        cands = transitions(state, uni);
    }
    for (const auto& c : cands) {
        if (actors && c.actors != *actors) continue;
        if (want.kind == Label::Kind::BoundOutput) {
            if (c.label.kind != Label::Kind::BoundOutput || c.label.subject != want.subject)
                continue;
            ProcessPtr t = c.target;
            if (c.label.object != want.object) {
                if (all_names(t).count(want.object)) continue;
                t = rename_free_name(t, c.label.object, want.object);
            }
            if (!congruent(t, want_target)) continue;
        } else {
            if (!(c.label == want)) continue;
            if (!congruent(c.target, want_target)) continue;
        }
        return c;
    }
    return std::nullopt;
}

const Transition& pick_first(const std::vector<Transition>& options) {
    if (options.empty()) throw std::invalid_argument("pick_first: no transitions");
    auto key = [](const Transition& t) {
        int min_actor = *std::min_element(t.actors.begin(), t.actors.end());
        return std::tuple(min_actor, label_order(t.label), to_string(t.label), t.actors,
                          to_string(t.detail.prefix_a), to_string(t.detail.prefix_b),
                          to_string(t.target));
    };
    const Transition* best = &options[0];
    auto best_key = key(*best);
    for (const auto& t : options) {
        auto k = key(t);
        if (k < best_key) {
            best = &t;
            best_key = std::move(k);
        }
    }
    return *best;
}

// ---------------------------------------------------------------------------
// Round construction. The generator step comes from the transition relation;
// the n-1 completing steps are built substitutively (each component's new
// term is the relation's image of its predecessor's), then each is checked
// to exist as a genuine transition up to congruence and the choice of
// extruded fresh names. Substitutive construction is what makes the final
// network literally symmetric: the enumerator's own fresh-name choices need
// not line up across components, the relation's images do by definition.
// ---------------------------------------------------------------------------

namespace {

/// Cycle of fresh names for one round: position 1 takes `seed`, later
/// positions take hint names when they are usable, deterministic fresh
/// variants of the seed otherwise.
NameSeq make_cycle(const Name& seed, int n, const NameSet& avoid, const NameSeq& hint) {
    NameSeq cycle{seed};
    NameSet taken = avoid;
    taken.insert(seed);
    FreshSupply supply(taken);
    for (int t = 2; t <= n; ++t) {
        Name pick;
        if (static_cast<int>(hint.size()) >= t && !taken.count(hint[t - 1]) &&
            valid_name_token(hint[t - 1].id) && !hint[t - 1].is_unit()) {
            pick = hint[t - 1];
        } else {
            pick = supply.fresh(seed);
        }
        taken.insert(pick);
        supply.avoid(pick);
        cycle.push_back(pick);
    }
    return cycle;
}

struct RoundBuilder {
    const SymmetricNetwork& net;
    const Transition& first;
    const NameSeq& hint;
    int n;

    RoundResult run() {
        const ProcessPtr& state0 = first.source;
        ProcessPtr core0;
        if (!peel_spine(state0, net.restriction, core0))
            throw std::invalid_argument(
                "restore_symmetry: transition source does not carry the network's restriction");
        std::vector<ProcessPtr> comps = split_components(core0, n);
        if (!equal(comps[0], net.base))
            throw std::invalid_argument(
                "restore_symmetry: transition source does not match the network");
        if (n == 1) return solo_round();
        if (first.actors.size() == 1) return mimic_round(comps);
        return comm_round(comps);
    }

    RoundResult solo_round() {
        NameSeq spine = net.restriction;
        if (first.label.kind == Label::Kind::BoundOutput)
            std::erase(spine, first.label.object);
        SymmetricNetwork next = network_unchecked(
            component0(first.target, spine, 1), net.relation, spine);
        return {{first}, {first.label}, next};
    }

    // One component moved on its own; the others mimic its step through the
    // relation's powers, in component order from the actor.
    RoundResult mimic_round(std::vector<ProcessPtr> parts) {
        const int i = first.actors[0];
        const Label mu = first.label;
        SymmetryRelation sig2 = net.relation;
        NameSeq spine = net.restriction;

        if (mu.kind == Label::Kind::BoundOutput) {
            if (contains(spine, mu.object)) {
                std::erase(spine, mu.object);
            } else {
                // The object was the actor's own binder; siblings will
                // extrude fresh variants, and the relation grows by the
                // cycle of those names.
                NameSet avoid = all_names(first.source);
                avoid.merge(sig2.perm.support());
                avoid.merge(sig2.perm.image());
                NameSeq cycle = make_cycle(mu.object, n, avoid, hint);
                sig2 = extend_symmetry(net.relation, cycle);
            }
        }

        LabelRound labels = symmetric_action_sequence(mu, sig2, net.restriction);
        if (!(labels[0] == mu))
            throw ConstructionDefect("generator label disagrees with its own round");

        ProcessPtr core1;
        if (!peel_spine(first.target, spine, core1))
            throw ConstructionDefect("generator step produced an unexpected restriction spine");
        parts = split_components(core1, n);

        std::vector<Transition> steps{first};
        ProcessPtr state = first.target;
        for (int t = 2; t <= n; ++t) {
            const int k = (i + t - 1) % n;
            const int prev = (k + n - 1) % n;
            const Label& want = labels[t - 1];
            parts[k] = pisym::apply(sig2.perm, parts[prev]);
            if (want.kind == Label::Kind::BoundOutput) std::erase(spine, want.object);
            ProcessPtr expect = assemble(spine, parts);
            std::vector<int> actors{k};
            auto cand = matching_transition(state, want, expect, &actors);
            if (!cand)
                throw ConstructionDefect("no transition realizes round position " +
                                         std::to_string(t) + " (" + to_string(want) + ")");
            steps.push_back({state, want, expect, {k}, cand->detail});
            state = expect;
        }

        if (!is_symmetric(state, sig2, spine))
            throw ConstructionDefect("completed round is not symmetric");
        SymmetricNetwork next = network_unchecked(parts[0], sig2, spine);
        return {std::move(steps), std::move(labels), std::move(next)};
    }

    // A communication between components i and j; every component repeats
    // the send and the receive, offset by one component per step. The first
    // component to have done both anchors the doubly-advanced term, the
    // rest are its images.
    RoundResult comm_round(std::vector<ProcessPtr> parts) {
        const int i = first.actors[0];
        const int j = first.actors[1];
        if (!first.label.is_tau() || !first.detail.pair)
            throw std::invalid_argument("restore_symmetry: two-actor step is not a communication");
        const bool extruded = first.detail.extruded;
        const Name datum = first.detail.datum;
        const Name channel = first.detail.channel;

        SymmetryRelation sig2 = net.relation;
        NameSeq spine = net.restriction;
        NameSeq cycle;
        if (extruded) {
            NameSet avoid = all_names(first.source);
            avoid.merge(sig2.perm.support());
            avoid.merge(sig2.perm.image());
            cycle = make_cycle(datum, n, avoid, hint);
            sig2 = extend_symmetry(net.relation, cycle);
            spine.push_back(datum);
        }

        ProcessPtr core1;
        if (!peel_spine(first.target, spine, core1))
            throw ConstructionDefect("communication step produced an unexpected restriction");
        std::vector<ProcessPtr> cur = split_components(core1, n);
        const ProcessPtr sent_anchor = cur[i];  // after its send
        const ProcessPtr recv_anchor = cur[j];  // after its receive
        std::optional<std::pair<int, ProcessPtr>> both_anchor;

        std::set<int> sent{i}, received{j};
        parts = cur;
        std::vector<Transition> steps{first};
        ProcessPtr state = first.target;

        auto send_image = [&](int k) {
            return iterate_apply(sig2.perm, sent_anchor, (k - i + n) % n);
        };
        auto recv_image = [&](int k) {
            return iterate_apply(sig2.perm, recv_anchor, (k - j + n) % n);
        };

        for (int s = 2; s <= n; ++s) {
            const int a = (i + s - 1) % n;
            const int b = (j + s - 1) % n;
            const bool a_done = received.count(a) > 0;  // a now completes both
            const bool b_done = sent.count(b) > 0;
            const Name chan_exp = iterate_name(sig2.perm, channel, s - 1);
            const Name datum_exp =
                extruded ? cycle[s - 1] : iterate_name(sig2.perm, datum, s - 1);

            struct Accepted {
                ProcessPtr a_new, b_new;
                std::optional<std::pair<int, ProcessPtr>> anchor;
                StepDetail detail;
            };
            std::optional<Accepted> acc;

            for (const auto& cand : tau_transitions(state)) {
                if (cand.actors != std::vector<int>{a, b}) continue;
                if (!cand.detail.pair || cand.detail.extruded != extruded) continue;
                if (cand.detail.channel != chan_exp) continue;
                ProcessPtr core;
                NameSeq prior = spine;
                if (extruded) {
                    // Peel the spine so far plus the candidate's own fresh
                    // layer, then pin that layer to our cycle name.
                    if (!peel_spine(cand.target, prior, core)) continue;
                    if (core->kind != Process::Kind::Res) continue;
                    Name lts_name = core->binder;
                    core = core->body;
                    if (lts_name != datum_exp) {
                        if (all_names(core).count(datum_exp)) continue;
                        core = rename_free_name(core, lts_name, datum_exp);
                    }
                } else {
                    if (cand.detail.datum != datum_exp) continue;
                    if (!peel_spine(cand.target, prior, core)) continue;
                }
                std::vector<ProcessPtr> cparts;
                try {
                    cparts = split_components(core, n);
                } catch (const ConstructionDefect&) {
                    continue;
                }
                Accepted out;
                out.anchor = both_anchor;
                out.detail = cand.detail;
                out.detail.datum = datum_exp;
                if (!a_done) {
                    out.a_new = send_image(a);
                    if (!congruent(cparts[a], out.a_new)) continue;
                }
                if (!b_done) {
                    out.b_new = recv_image(b);
                    if (!congruent(cparts[b], out.b_new)) continue;
                }
                if (a_done || b_done) {
                    if (!out.anchor) out.anchor = {b_done ? b : a, cparts[b_done ? b : a]};
                    auto both_image = [&](int k) {
                        return iterate_apply(sig2.perm, out.anchor->second,
                                             (k - out.anchor->first + n) % n);
                    };
                    bool ok = true;
                    if (a_done) {
                        out.a_new = both_image(a);
                        ok = ok && congruent(cparts[a], out.a_new);
                    }
                    if (b_done) {
                        out.b_new = both_image(b);
                        ok = ok && congruent(cparts[b], out.b_new);
                    }
                    if (!ok) continue;
                }
                acc = std::move(out);
                break;
            }

            if (!acc)
                throw ConstructionDefect("no communication realizes round step " +
                                         std::to_string(s) + " between components " +
                                         std::to_string(a) + " and " + std::to_string(b));

            both_anchor = acc->anchor;
            parts[a] = acc->a_new;
            parts[b] = acc->b_new;
            sent.insert(a);
            received.insert(b);
            if (extruded) spine.push_back(cycle[s - 1]);
            ProcessPtr expect = assemble(spine, parts);
            steps.push_back({state, Label::tau(), expect, {a, b}, acc->detail});
            state = expect;
        }

        if (!is_symmetric(state, sig2, spine))
            throw ConstructionDefect("completed communication round is not symmetric");
        LabelRound labels(n, Label::tau());
        SymmetricNetwork next = network_unchecked(parts[0], sig2, spine);
        return {std::move(steps), std::move(labels), std::move(next)};
    }
};

}  // namespace

RoundResult restore_symmetry(const SymmetricNetwork& net, const Transition& first,
                             const NameSeq& fresh_hint) {
    if (classify(net.base) == Fragment::Mixed)
        throw std::invalid_argument("restore_symmetry: base process uses mixed choice");
    RoundBuilder builder{net, first, fresh_hint, net.degree()};
    return builder.run();
}

SymmetricExecution symmetric_execution(const SymmetricNetwork& net, int max_rounds) {
    if (classify(net.base) == Fragment::Mixed)
        throw std::invalid_argument("symmetric_execution: base process uses mixed choice");
    SymmetricExecution out{net, {}, false};
    SymmetricNetwork cur = net;
    ProcessPtr term = denoted_term(net);
    for (int r = 0; r < max_rounds; ++r) {
        auto opts = transitions(term, free_names(term));
        if (opts.empty()) {
            out.complete = true;
            return out;
        }
        RoundResult rr = restore_symmetry(cur, pick_first(opts));
        out.rounds.push_back(
            {rr.labels, rr.next.relation, rr.next.restriction, rr.next.base, rr.steps});
        cur = rr.next;
        term = rr.steps.back().target;
    }
    out.complete = transitions(term, free_names(term)).empty();
    return out;
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration.
// ---------------------------------------------------------------------------

namespace {

std::string execution_signature(const Execution& e) {
    std::map<Name, std::string> extruded;
    int next_token = 0;
    auto norm = [&](const Name& n) {
        auto it = extruded.find(n);
        return it == extruded.end() ? n.id : it->second;
    };
    std::string sig;
    for (const auto& st : e.steps) {
        const Label& l = st.label;
        switch (l.kind) {
            case Label::Kind::Tau:
                sig += "tau";
                break;
            case Label::Kind::BoundOutput:
                extruded[l.object] = "#" + std::to_string(next_token++);
                sig += norm(l.subject) + "!(" + norm(l.object) + ")";
                break;
            case Label::Kind::FreeOutput:
                sig += norm(l.subject) + "!" + (l.object.is_unit() ? "" : norm(l.object));
                break;
            case Label::Kind::FreeInput:
                sig += norm(l.subject) + "?" + (l.object.is_unit() ? "" : norm(l.object));
                break;
        }
        sig += ";";
    }
    return sig + "|" + canonical(e.last_state()).key;
}

}  // namespace

std::vector<Execution> enumerate_executions(const ProcessPtr& term, int max_depth,
                                            const std::optional<NameSet>& observables) {
    if (!term) throw std::invalid_argument("enumerate_executions: null term");
    WellFormedness wf = well_formed(term);
    (void)wf;  // shared network binders are tolerated; parsing already gates user input
    NameSet uni0 = free_names(term);

    std::vector<Execution> raw;
    std::vector<Transition> steps;
    std::set<std::string> on_path;
    std::size_t guard = 0;

    std::function<void(const ProcessPtr&, int)> walk = [&](const ProcessPtr& state, int depth) {
        if (++guard > 2000000) throw BoundExceeded("exploration guard exceeded");
        NameSet uni = uni0;
        NameSet fn = free_names(state);
        uni.insert(fn.begin(), fn.end());
        std::vector<Transition> options = transitions(state, uni);
        if (observables) {
            std::erase_if(options, [&](const Transition& t) {
                if (t.label.is_tau()) return false;
                return !(t.label.is_output() && observables->count(t.label.subject));
            });
        }
        if (options.empty()) {
            raw.push_back({term, steps, true, false});
            return;
        }
        if (depth >= max_depth) {
            raw.push_back({term, steps, false, true});
            return;
        }
        bool advanced = false;
        for (const auto& t : options) {
            std::string key = canonical(t.target).key;
            if (on_path.count(key)) continue;
            advanced = true;
            on_path.insert(key);
            steps.push_back(t);
            walk(t.target, depth + 1);
            steps.pop_back();
            on_path.erase(key);
        }
        if (!advanced) raw.push_back({term, steps, false, true});
    };

    on_path.insert(canonical(term).key);
    walk(term, 0);

    std::vector<Execution> out;
    std::set<std::string> seen;
    for (auto& e : raw)
        if (seen.insert(execution_signature(e)).second) out.push_back(std::move(e));
    return out;
}

// ---------------------------------------------------------------------------
// Search for symmetric executions (mixed-choice bases).
// ---------------------------------------------------------------------------

namespace {

struct CompletedRound {
    Round round;
    ProcessPtr final_state;
};

struct SymSearchCtx {
    int max_rounds;
    bool truncated = false;
    std::size_t budget = 200000;
};

// All ways to finish the round opened by `first` such that the result is
// symmetric again; bounded and deterministic.
void complete_round_search(const SymmetryRelation& sig, const NameSeq& restriction,
                           const Transition& first, std::vector<CompletedRound>& out,
                           SymSearchCtx& ctx) {
    const int n = sig.degree;
    const Label mu = first.label;
    const bool fresh_object = mu.kind == Label::Kind::BoundOutput &&
                              !contains(restriction, mu.object);

    struct Frame {
        ProcessPtr state;
        std::vector<Transition> steps;
        NameSeq objects;  // bound-output objects per position
    };

    std::function<void(Frame&, int)> extend = [&](Frame& f, int t) {
        if (ctx.budget == 0) {
            ctx.truncated = true;
            return;
        }
        --ctx.budget;
        if (t > n) {
            // Restriction after the round: orbit extrusions leave it, close
            // steps may append shared fresh layers. For tau rounds the split
            // between network layers and component-0 layers is not syntactic,
            // so every cut is tried.
            NameSeq erased = restriction;
            for (const auto& st : f.steps)
                if (st.label.kind == Label::Kind::BoundOutput &&
                    contains(restriction, st.label.object))
                    std::erase(erased, st.label.object);
            std::vector<NameSeq> spines;
            if (mu.is_tau()) {
                NameSeq greedy = read_spine(f.state);
                if (greedy.size() < restriction.size() ||
                    !std::equal(restriction.begin(), restriction.end(), greedy.begin()))
                    return;
                for (std::size_t len = greedy.size(); len >= restriction.size(); --len) {
                    spines.emplace_back(greedy.begin(), greedy.begin() + len);
                    if (len == 0) break;
                }
            } else {
                spines.push_back(erased);
            }
            for (const auto& spine : spines) {
                // Candidate relations: unchanged, or grown by the cycle of
                // fresh names this round introduced (extruded objects for a
                // bound-output round, shared close layers for a tau round).
                std::vector<SymmetryRelation> rels{sig};
                NameSeq cycle;
                if (fresh_object) cycle = f.objects;
                else if (mu.is_tau() && spine.size() == restriction.size() + n)
                    cycle.assign(spine.begin() + restriction.size(), spine.end());
                if (static_cast<int>(cycle.size()) == n) {
                    NameSet distinct(cycle.begin(), cycle.end());
                    if (distinct.size() == cycle.size()) {
                        try {
                            SymmetryRelation ext = extend_symmetry(sig, cycle);
                            if (!(ext == sig)) rels.push_back(std::move(ext));
                        } catch (const std::invalid_argument&) {
                        }
                    }
                }
                for (const auto& rel : rels) {
                    if (!is_symmetric(f.state, rel, spine)) continue;
                    LabelRound labels;
                    for (const auto& st : f.steps) labels.push_back(st.label);
                    if (labels != symmetric_action_sequence(mu, rel, restriction)) continue;
                    ProcessPtr core;
                    peel_spine(f.state, spine, core);
                    ProcessPtr base = n == 1 ? core : core->parts[0];
                    out.push_back({{labels, rel, spine, base, f.steps}, f.state});
                }
            }
            return;
        }
        Name subj_exp, obj_exp;
        if (!mu.is_tau()) {
            subj_exp = iterate_name(sig.perm, mu.subject, t - 1);
            obj_exp = mu.object.is_unit() ? mu.object : iterate_name(sig.perm, mu.object, t - 1);
        }
        NameSet uni = free_names(f.state);
        if (!mu.is_tau()) {
            uni.insert(subj_exp);
            if (!obj_exp.is_unit() && mu.kind == Label::Kind::FreeInput) uni.insert(obj_exp);
        }
        std::vector<Transition> options =
            mu.is_tau() ? tau_transitions(f.state) : transitions(f.state, uni);
        NameSet seen_objects(f.objects.begin(), f.objects.end());
        for (const auto& cand : options) {
            bool fits = false;
            switch (mu.kind) {
                case Label::Kind::Tau:
                    fits = cand.label.is_tau();
                    break;
                case Label::Kind::FreeInput:
                    fits = cand.label == Label::free_input(subj_exp, obj_exp);
                    break;
                case Label::Kind::FreeOutput:
                    fits = cand.label == Label::free_output(subj_exp, obj_exp);
                    break;
                case Label::Kind::BoundOutput:
                    if (fresh_object) {
                        fits = cand.label.kind == Label::Kind::BoundOutput &&
                               cand.label.subject == subj_exp &&
                               !seen_objects.count(cand.label.object);
                    } else if (seen_objects.count(obj_exp)) {
                        fits = cand.label == Label::free_output(subj_exp, obj_exp);
                    } else {
                        fits = cand.label == Label::bound_output(subj_exp, obj_exp);
                    }
                    break;
            }
            if (!fits) continue;
            Frame g{cand.target, f.steps, f.objects};
            g.steps.push_back(cand);
            if (mu.kind == Label::Kind::BoundOutput)
                g.objects.push_back(cand.label.kind == Label::Kind::BoundOutput
                                        ? cand.label.object
                                        : obj_exp);
            extend(g, t + 1);
        }
    };

    Frame f0{first.target, {first}, {}};
    if (mu.kind == Label::Kind::BoundOutput) f0.objects.push_back(mu.object);
    extend(f0, 2);
}

bool search_rounds(const SymmetricNetwork& net0, const ProcessPtr& term,
                   const SymmetryRelation& sig, const NameSeq& restriction, int depth,
                   std::vector<Round>& acc, SymSearchCtx& ctx, SymmetricExecution& found) {
    if (ctx.budget == 0) {
        ctx.truncated = true;
        return false;
    }
    --ctx.budget;
    auto opts = transitions(term, free_names(term));
    if (opts.empty()) {
        found = {net0, acc, true};
        return true;
    }
    if (depth >= ctx.max_rounds) {
        ctx.truncated = true;
        return false;
    }
    for (const auto& first : opts) {
        std::vector<CompletedRound> completions;
        complete_round_search(sig, restriction, first, completions, ctx);
        for (auto& c : completions) {
            acc.push_back(c.round);
            if (search_rounds(net0, c.final_state, c.round.sigma, c.round.restriction,
                              depth + 1, acc, ctx, found))
                return true;
            acc.pop_back();
        }
    }
    return false;
}

}  // namespace

SymSearch has_symmetric_execution(const SymmetricNetwork& net, int max_rounds) {
    if (classify(net.base) != Fragment::Mixed) {
        // Constructive fragment: the round builder always succeeds, and an
        // unfinished prefix only means the execution goes on forever.
        SymmetricExecution w = symmetric_execution(net, max_rounds);
        return {SymSearch::Verdict::Yes, std::move(w)};
    }
    SymSearchCtx ctx{max_rounds};
    std::vector<Round> acc;
    SymmetricExecution found;
    if (search_rounds(net, denoted_term(net), net.relation, net.restriction, 0, acc, ctx,
                      found))
        return {SymSearch::Verdict::Yes, std::move(found)};
    if (ctx.truncated) return {SymSearch::Verdict::Unknown, std::nullopt};
    return {SymSearch::Verdict::No, std::nullopt};
}

// ---------------------------------------------------------------------------
// Subdivision.
// ---------------------------------------------------------------------------

namespace {

bool label_in_round(const Label& l, const LabelRound& round) {
    for (const auto& m : round) {
        if (m == l) return true;
        if (l.kind == Label::Kind::FreeOutput && m.kind == Label::Kind::BoundOutput &&
            m.subject == l.subject && m.object == l.object)
            return true;
    }
    return false;
}

NameSeq round_hint(const Round& original) {
    NameSeq hint;
    if (!original.labels.empty() && original.labels[0].kind == Label::Kind::BoundOutput) {
        for (const auto& l : original.labels) hint.push_back(l.object);
    } else if (!original.labels.empty() && original.labels[0].is_tau()) {
        for (const auto& st : original.steps) hint.push_back(st.detail.datum);
    }
    return hint;
}

/// Rename the fresh name a generator step introduced (bound-output object,
/// or the restricted layer of a scope-extruding communication) to `want`.
std::optional<Transition> pin_fresh_name(const Transition& t, const NameSeq& spine,
                                         const Name& want) {
    const Name have =
        t.label.kind == Label::Kind::BoundOutput ? t.label.object : t.detail.datum;
    if (have == want) return t;
    Transition out = t;
    if (t.label.kind == Label::Kind::BoundOutput) {
        if (all_names(t.target).count(want)) return std::nullopt;
        out.label = Label::bound_output(t.label.subject, want);
        out.target = rename_free_name(t.target, have, want);
    } else {
        ProcessPtr rest;
        if (!peel_spine(t.target, spine, rest) || rest->kind != Process::Kind::Res ||
            rest->binder != have)
            return std::nullopt;
        if (all_names(rest->body).count(want)) return std::nullopt;
        out.target = res(spine, res(want, rename_free_name(rest->body, have, want)));
    }
    if (out.detail.datum == have) out.detail.datum = want;
    return out;
}

}  // namespace

SymmetricExecution subdivide(const SymmetricExecution& exec, int n_prime) {
    const int n = exec.initial.degree();
    if (n_prime <= 0 || n_prime >= n)
        throw std::invalid_argument("subdivide: degree must satisfy 0 < n' < n");
    if (!power(exec.initial.relation.perm, n_prime).is_identity())
        throw std::invalid_argument("subdivide: relation^" + std::to_string(n_prime) +
                                    " is not the identity");
    if (classify(exec.initial.base) == Fragment::Mixed)
        throw std::invalid_argument("subdivide: base process uses mixed choice");

    SymmetryRelation small_rel{exec.initial.relation.perm, n_prime};
    SymmetricNetwork cur =
        network_unchecked(exec.initial.base, small_rel, exec.initial.restriction);
    SymmetricExecution out{cur, {}, exec.complete};
    ProcessPtr term = denoted_term(cur);

    for (const auto& original : exec.rounds) {
        const Transition& gen = original.steps.at(0);
        const Label mu = original.labels.at(0);

        NameSet uni = free_names(term);
        if (!mu.is_tau()) {
            uni.insert(mu.subject);
            if (!mu.object.is_unit() && mu.kind == Label::Kind::FreeInput)
                uni.insert(mu.object);
        }
        std::vector<Transition> opts =
            mu.is_tau() ? tau_transitions(term) : transitions(term, uni);

        std::vector<int> want_actors;
        for (int a : gen.actors) want_actors.push_back(a % n_prime);
        const bool folded = want_actors.size() == 2 && want_actors[0] == want_actors[1];
        if (folded) want_actors.pop_back();  // the communication is now internal

        const bool fresh_gen =
            (mu.kind == Label::Kind::BoundOutput && !contains(cur.restriction, mu.object)) ||
            (mu.is_tau() && gen.detail.extruded && !folded);

        std::vector<const Transition*> matches;
        for (const auto& cand : opts) {
            // At degree 1 the denoted term is the base itself, so candidate
            // actors index the base's own parts, not network components.
            if (n_prime > 1 && cand.actors != want_actors) continue;
            if (mu.is_tau()) {
                if (cand.detail.pair != gen.detail.pair) continue;
                if (cand.detail.pair) {
                    if (cand.detail.channel != gen.detail.channel) continue;
                    if (cand.detail.extruded != gen.detail.extruded) continue;
                    if (!cand.detail.extruded && cand.detail.datum != gen.detail.datum)
                        continue;
                }
            } else if (mu.kind == Label::Kind::BoundOutput &&
                       !contains(cur.restriction, mu.object)) {
                if (cand.label.kind != Label::Kind::BoundOutput ||
                    cand.label.subject != mu.subject)
                    continue;
            } else {
                if (!(cand.label == mu)) continue;
            }
            // The generator's own prefix (same derivation position) goes first.
            if (cand.detail.prefix_a == gen.detail.prefix_a)
                matches.insert(matches.begin(), &cand);
            else
                matches.push_back(&cand);
        }

        std::optional<Transition> chosen;
        const Name want_fresh =
            mu.kind == Label::Kind::BoundOutput ? mu.object : gen.detail.datum;
        for (const Transition* m : matches) {
            if (!fresh_gen) {
                chosen = *m;
                break;
            }
            if (auto pinned = pin_fresh_name(*m, cur.restriction, want_fresh)) {
                chosen = std::move(pinned);
                break;
            }
        }
        if (!chosen)
            throw ConstructionDefect("subdivide: the original round's generator is not "
                                     "available in the smaller network");

        RoundResult rr = restore_symmetry(cur, *chosen, round_hint(original));
        for (const auto& l : rr.labels)
            if (!label_in_round(l, original.labels))
                throw ConstructionDefect("subdivide: label " + to_string(l) +
                                         " does not occur in the source round");
        out.rounds.push_back(
            {rr.labels, rr.next.relation, rr.next.restriction, rr.next.base, rr.steps});
        cur = rr.next;
        term = rr.steps.back().target;
    }
    if (exec.complete && !transitions(term, free_names(term)).empty())
        throw ConstructionDefect("subdivide: smaller network is not stuck where the "
                                 "original execution completed");
    return out;
}

// ---------------------------------------------------------------------------
// Local confluence.
// ---------------------------------------------------------------------------

ConfluenceOutcome check_local_confluence(const ProcessPtr& p, const NameSet& universe,
                                         bool require_separate) {
    if (!p) throw std::invalid_argument("check_local_confluence: null term");
    if (require_separate && classify(p) == Fragment::Mixed)
        throw std::invalid_argument("check_local_confluence: term uses mixed choice");
    NameSet uni = universe;
    NameSet fn = free_names(p);
    uni.insert(fn.begin(), fn.end());
    std::vector<Transition> all = transitions(p, uni);

    for (const auto& o : all) {
        if (!o.label.is_output()) continue;
        for (const auto& in : all) {
            if (in.label.kind != Label::Kind::FreeInput) continue;

            // Input after output: the extruded object (if any) is now free.
            NameSet uni2 = uni;
            if (!o.label.object.is_unit()) uni2.insert(o.label.object);
            if (!in.label.object.is_unit()) uni2.insert(in.label.object);
            std::optional<Transition> c1;
            for (const auto& t : transitions(o.target, uni2))
                if (t.label == in.label) {
                    c1 = t;
                    break;
                }
            if (!c1)
                return {false, o.label, in.label,
                        "the input is no longer available after the output", p};

            // Output after input, up to the fresh-name choice of a bound
            // output.
            std::optional<Transition> c2;
            ProcessPtr t2;
            NameSet uni3 = uni;
            if (!in.label.object.is_unit()) uni3.insert(in.label.object);
            for (const auto& t : transitions(in.target, uni3)) {
                if (t.label.kind != o.label.kind || t.label.subject != o.label.subject)
                    continue;
                if (o.label.kind == Label::Kind::BoundOutput) {
                    ProcessPtr adj = t.target;
                    if (t.label.object != o.label.object) {
                        if (all_names(adj).count(o.label.object)) continue;
                        adj = rename_free_name(adj, t.label.object, o.label.object);
                    }
                    c2 = t;
                    t2 = adj;
                    break;
                }
                if (t.label.object == o.label.object) {
                    c2 = t;
                    t2 = t.target;
                    break;
                }
            }
            if (!c2)
                return {false, o.label, in.label,
                        "the output is no longer available after the input", p};
            if (!congruent(c1->target, t2))
                return {false, o.label, in.label,
                        "the two completion orders reach different states", p};
        }
    }
    return {};
}

// ---------------------------------------------------------------------------
// Independent validation.
// ---------------------------------------------------------------------------

std::optional<std::string> validate_symmetric_execution(const SymmetricExecution& exec) {
    ProcessPtr state = denoted_term(exec.initial);
    SymmetryRelation sig_prev = exec.initial.relation;
    NameSeq x_prev = exec.initial.restriction;
    const int n = exec.initial.degree();

    for (std::size_t r = 0; r < exec.rounds.size(); ++r) {
        const Round& round = exec.rounds[r];
        auto err = [&](const std::string& what) {
            return "round " + std::to_string(r + 1) + ": " + what;
        };
        if (static_cast<int>(round.labels.size()) != n) return err("label round has wrong length");
        if (static_cast<int>(round.steps.size()) != n) return err("wrong number of steps");
        if (round.sigma.degree != sig_prev.degree) return err("relation degree changed");
        for (const auto& [k, v] : sig_prev.perm.mapping())
            if (!(round.sigma.perm(k) == v)) return err("relation does not extend the previous one");
        if (round.labels != symmetric_action_sequence(round.labels[0], round.sigma, x_prev))
            return err("labels are not the symmetric sequence of the generator");

        for (int s = 0; s < n; ++s) {
            const Transition& st = round.steps[s];
            if (!equal(st.source, state)) return err("step " + std::to_string(s + 1) +
                                                     " does not chain");
            if (!(st.label == round.labels[s]))
                return err("step " + std::to_string(s + 1) + " label differs from the round");
            if (!matching_transition(state, st.label, st.target, &st.actors))
                return err("step " + std::to_string(s + 1) + " does not replay");
            state = st.target;
        }
        if (!is_symmetric(state, round.sigma, round.restriction))
            return err("network is not symmetric after the round");
        ProcessPtr core;
        if (!peel_spine(state, round.restriction, core)) return err("restriction mismatch");
        ProcessPtr base = n == 1 ? core : core->parts[0];
        if (!equal(base, round.base)) return err("recorded base differs from component 0");
        sig_prev = round.sigma;
        x_prev = round.restriction;
    }
    if (exec.complete && !transitions(state, free_names(state)).empty())
        return std::string("execution is marked complete but the final network can step");
    return std::nullopt;
}

}  // namespace pisym
