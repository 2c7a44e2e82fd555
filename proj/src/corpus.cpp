#include "pisym/corpus.hpp"

#include <atomic>
#include <mutex>
#include <set>
#include <sstream>

#include "pisym/batch.hpp"
#include "pisym/checkers.hpp"
#include "pisym/gen.hpp"
#include "pisym/parser.hpp"
#include "pisym/printer.hpp"

namespace pisym {

namespace {

/// Collects failures from a randomized suite; remembers the first message.
struct Tally {
    std::atomic<int> failures{0};
    std::mutex mu;
    std::string first;

    void fail(long long index, const std::string& what) {
        ++failures;
        std::lock_guard<std::mutex> lock(mu);
        if (first.empty()) first = "case " + std::to_string(index) + ": " + what;
    }
    std::string summary(int total, const std::string& unit) const {
        std::ostringstream os;
        os << (total - failures.load()) << "/" << total << " " << unit;
        if (!first.empty()) os << "; first failure: " << first;
        return os.str();
    }
};

std::string label_line(const std::vector<Transition>& steps) {
    std::string s;
    for (const auto& st : steps) {
        if (!s.empty()) s += "·";
        s += to_string(st.label);
    }
    return s;
}

CriterionResult c1_mixed_exactness() {
    CriterionResult r{1, "mixed-choice pair has exactly two executions and no symmetric one",
                      false, ""};
    ProcessPtr base = parse("x! . 1! . 0 + y?() . 2! . 0");
    SymmetryRelation sig{parse_permutation("x>y,y>x,1>2,2>1"), 2};
    SymmetricNetwork net = build_network(base, sig, {"x", "y"});
    auto execs = enumerate_executions(denoted_term(net), 16, NameSet{"1", "2"});
    std::set<std::string> seqs;
    bool all_maximal = true;
    for (const auto& e : execs) {
        all_maximal = all_maximal && e.maximal && !e.truncated;
        seqs.insert(label_line(e.steps));
    }
    SymSearch search = has_symmetric_execution(net, 8);
    r.pass = execs.size() == 2 && all_maximal &&
             seqs == std::set<std::string>{"tau·1!·1!", "tau·2!·2!"} &&
             search.verdict == SymSearch::Verdict::No;
    std::ostringstream os;
    os << execs.size() << " executions {";
    for (const auto& s : seqs) os << " " << s;
    os << " }, symmetric-execution search: "
       << (search.verdict == SymSearch::Verdict::No
               ? "no (exhaustive)"
               : search.verdict == SymSearch::Verdict::Yes ? "yes" : "unknown");
    r.detail = os.str();
    return r;
}

CriterionResult c2_random_networks(bool parallel) {
    CriterionResult r{2, "random separate-choice networks build and validate symmetric executions",
                      false, ""};
    const int kCases = 200;
    const int kMaxRounds = 16;
    Tally tally;
    for_each_index(kCases, parallel, [&](long long i) {
        try {
            std::mt19937_64 rng(task_seed(0x5EED0002, i));
            SymmetricNetwork net = random_network(rng, 2 + static_cast<int>(i % 2));
            SymmetricExecution ex = symmetric_execution(net, kMaxRounds);
            if (!ex.complete && static_cast<int>(ex.rounds.size()) < kMaxRounds)
                throw std::runtime_error("construction stopped early");
            if (auto err = validate_symmetric_execution(ex)) throw std::runtime_error(*err);
        } catch (const std::exception& e) {
            tally.fail(i, e.what());
        }
    });
    r.pass = tally.failures == 0;
    r.detail = tally.summary(kCases, "networks executed and validated");
    return r;
}

CriterionResult c3_fresh_extrusion_round() {
    CriterionResult r{3, "fresh bound-output round extends the relation by the name cycle",
                      false, ""};
    ProcessPtr base = parse("new x . a!x . x! . 0");
    SymmetricNetwork net = build_network(base, SymmetryRelation::identity(2), {});
    SymmetricExecution ex = symmetric_execution(net, 8);
    bool ok = !ex.rounds.empty();
    std::string got;
    if (ok) {
        const Round& r1 = ex.rounds[0];
        got = label_line(r1.steps) + ", sigma' = " + to_string(r1.sigma.perm);
        std::map<Name, Name> want{{"x", "x'"}, {"x'", "x"}};
        ok = r1.labels.size() == 2 && to_string(r1.labels[0]) == "a!(x)" &&
             to_string(r1.labels[1]) == "a!(x')" && r1.sigma.perm.mapping() == want &&
             congruent(r1.steps.back().target, parse("x! . 0 | x'! . 0")) &&
             validate_symmetric_execution(ex) == std::nullopt;
    }
    r.pass = ok;
    r.detail = got.empty() ? "no rounds constructed" : got;
    return r;
}

CriterionResult c4_election_network() {
    CriterionResult r{4, "two-component election network: symmetry, verdict, round pattern",
                      false, ""};
    ProcessPtr base = parse("x! . 0 | x?() . out!1 . 0 + y?() . out!2 . 0");
    SymmetryRelation sig{parse_permutation("x>y,y>x"), 2};
    SymmetricNetwork net = build_network(base, sig, {});
    ProcessPtr term = denoted_term(net);

    bool sym = is_symmetric(term, sig, {});
    Verdict elected = solves_leader_election_indexed(term, "out", 2, 24);
    SymmetricExecution ex = symmetric_execution(net, 16);
    bool pattern = ex.complete && ex.rounds.size() == 2;
    if (pattern)
        for (const auto& l : ex.rounds[0].labels) pattern = pattern && l.is_tau();
    if (pattern)
        for (const auto& l : ex.rounds[1].labels)
            pattern = pattern && to_string(l) == "out!1";
    r.pass = sym && elected.outcome == Verdict::Outcome::Holds && pattern &&
             validate_symmetric_execution(ex) == std::nullopt;
    std::ostringstream os;
    os << "symmetric: " << (sym ? "yes" : "no") << ", election: "
       << to_string(elected.outcome) << ", rounds:";
    for (const auto& round : ex.rounds) os << " [" << label_line(round.steps) << "]";
    r.detail = os.str();
    return r;
}

CriterionResult c5_announcement_election() {
    CriterionResult r{5, "announcement election: composed pair holds, lone component fails",
                      false, ""};
    ProcessPtr p = parse("a?() . slave! . 0 + a! . leader! . 0");
    Verdict pair = solves_leader_election_bouge(par({p, p}), "leader", "slave", 2, 24);
    Verdict lone = solves_leader_election_bouge(p, "leader", "slave", 1, 24);
    r.pass = pair.outcome == Verdict::Outcome::Holds &&
             lone.outcome == Verdict::Outcome::Fails;
    r.detail = std::string("pair: ") + to_string(pair.outcome) + ", lone: " +
               to_string(lone.outcome);
    return r;
}

CriterionResult c6_success_reachability() {
    CriterionResult r{6, "success reachability: composed pair holds, lone component fails",
                      false, ""};
    ProcessPtr p = parse("a?() . 0 + a! . check");
    Verdict pair = must_succeed(par({p, p}), 24);
    Verdict lone = must_succeed(p, 24);
    r.pass = pair.outcome == Verdict::Outcome::Holds &&
             lone.outcome == Verdict::Outcome::Fails;
    r.detail = std::string("pair: ") + to_string(pair.outcome) + ", lone: " +
               to_string(lone.outcome);
    return r;
}

CriterionResult c7_internal_step() {
    CriterionResult r{7, "internal-step capability: lone component cannot, composed pair can",
                      false, ""};
    ProcessPtr p = parse("a?() . 0 + a! . 0");
    bool lone = can_step(p, StepMode::TauOnly);
    bool pair = can_step(par({p, p}), StepMode::TauOnly);
    r.pass = !lone && pair;
    r.detail = std::string("lone: ") + (lone ? "steps" : "stuck") + ", pair: " +
               (pair ? "steps" : "stuck");
    return r;
}

CriterionResult c8_confluence(bool parallel) {
    CriterionResult r{8, "separate choice is locally confluent; a mixed sum is not", false, ""};
    const int kCases = 200;
    Tally tally;
    for_each_index(kCases, parallel, [&](long long i) {
        try {
            std::mt19937_64 rng(task_seed(0x5EED0008, i));
            ProcessPtr p;
            for (int attempt = 0; attempt < 256 && !p; ++attempt) {
                ProcessPtr cand = random_process(rng);
                bool has_out = false, has_in = false;
                for (const auto& t : transitions(cand, free_names(cand))) {
                    has_out = has_out || t.label.is_output();
                    has_in = has_in || t.label.kind == Label::Kind::FreeInput;
                }
                if (has_out && has_in) p = cand;
            }
            if (!p) throw std::runtime_error("no term with both transition kinds");
            ConfluenceOutcome out = check_local_confluence(p, free_names(p));
            if (!out.holds)
                throw std::runtime_error("square failed (" + out.stage + ") on " +
                                         to_string(p));
        } catch (const std::exception& e) {
            tally.fail(i, e.what());
        }
    });
    ConfluenceOutcome witness =
        check_local_confluence(parse("a?() . 0 + a! . 0"), NameSet{"a"}, false);
    r.pass = tally.failures == 0 && !witness.holds;
    r.detail = tally.summary(kCases, "terms confluent") + "; mixed witness " +
               (witness.holds ? "unexpectedly holds" : "fails (" + witness.stage + ")");
    return r;
}

CriterionResult c9_subdivision(bool parallel) {
    CriterionResult r{9, "degree-2 executions re-run at degree 1 within the same rounds",
                      false, ""};
    const int kCases = 50;
    Tally tally;
    for_each_index(kCases, parallel, [&](long long i) {
        try {
            std::mt19937_64 rng(task_seed(0x5EED0009, i));
            ProcessPtr base = random_process(rng);
            NameSeq restriction;
            for (const auto& n : free_names(base))
                if (std::uniform_int_distribution<int>(0, 99)(rng) < 35)
                    restriction.push_back(n);
            SymmetricNetwork net =
                build_network(base, SymmetryRelation::identity(2), restriction);
            SymmetricExecution ex = symmetric_execution(net, 12);
            SymmetricExecution small = subdivide(ex, 1);
            if (auto err = validate_symmetric_execution(small))
                throw std::runtime_error(*err);
        } catch (const std::exception& e) {
            tally.fail(i, e.what());
        }
    });
    r.pass = tally.failures == 0;
    r.detail = tally.summary(kCases, "executions subdivided and replayed");
    return r;
}

CriterionResult c10_equivariance(bool parallel) {
    CriterionResult r{10, "transitions are equivariant under injective renaming", false, ""};
    const int kCases = 500;
    Tally tally;
    for_each_index(kCases, parallel, [&](long long i) {
        try {
            std::mt19937_64 rng(task_seed(0x5EED0010, i));
            GenConfig cfg;
            cfg.allow_mixed = i % 3 == 0;
            ProcessPtr p = random_process(rng, cfg);
            std::map<Name, Name> ren;
            int k = 0;
            for (const auto& n : free_names(p)) ren[n] = Name("m" + std::to_string(k++));
            Substitution sigma{std::move(ren)};
            ProcessPtr q = pisym::apply(sigma, p);

            auto t1 = transitions(p, free_names(p));
            auto t2 = transitions(q, free_names(q));
            if (t1.size() != t2.size())
                throw std::runtime_error("transition counts differ on " + to_string(p));
            for (const auto& t : t1) {
                Label want = apply_label(sigma, t.label);
                ProcessPtr want_target = pisym::apply(sigma, t.target);
                if (!matching_transition(q, want, want_target, &t.actors))
                    throw std::runtime_error("no image transition for " + to_string(t.label) +
                                             " on " + to_string(p));
            }
        } catch (const std::exception& e) {
            tally.fail(i, e.what());
        }
    });
    r.pass = tally.failures == 0;
    r.detail = tally.summary(kCases, "renamed pairs matched");
    return r;
}

CriterionResult guarded(int id, const std::string& title, CriterionResult (*fn)()) {
    try {
        return fn();
    } catch (const std::exception& e) {
        return {id, title, false, std::string("exception: ") + e.what()};
    }
}

CriterionResult guarded(int id, const std::string& title, CriterionResult (*fn)(bool),
                        bool parallel) {
    try {
        return fn(parallel);
    } catch (const std::exception& e) {
        return {id, title, false, std::string("exception: ") + e.what()};
    }
}

}  // namespace

std::vector<CriterionResult> run_acceptance(bool parallel) {
    std::vector<CriterionResult> out;
    out.push_back(guarded(1, "mixed-choice pair", c1_mixed_exactness));
    out.push_back(guarded(2, "random networks", c2_random_networks, parallel));
    out.push_back(guarded(3, "fresh bound-output round", c3_fresh_extrusion_round));
    out.push_back(guarded(4, "election network", c4_election_network));
    out.push_back(guarded(5, "announcement election", c5_announcement_election));
    out.push_back(guarded(6, "success reachability", c6_success_reachability));
    out.push_back(guarded(7, "internal-step capability", c7_internal_step));
    out.push_back(guarded(8, "local confluence", c8_confluence, parallel));
    out.push_back(guarded(9, "subdivision", c9_subdivision, parallel));
    out.push_back(guarded(10, "equivariance", c10_equivariance, parallel));
    return out;
}

}  // namespace pisym
