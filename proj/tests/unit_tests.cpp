#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "pisym/batch.hpp"
#include "pisym/checkers.hpp"
#include "pisym/execution.hpp"
#include "pisym/gen.hpp"
#include "pisym/parser.hpp"
#include "pisym/printer.hpp"
#include "pisym/report.hpp"

using namespace pisym;

namespace {

ProcessPtr P(const std::string& s) { return parse(s); }

bool has_label(const std::vector<Transition>& ts, const Label& l) {
    return std::any_of(ts.begin(), ts.end(), [&](const Transition& t) { return t.label == l; });
}

std::string label_line(const Execution& e) {
    std::string s;
    for (const auto& st : e.steps) {
        if (!s.empty()) s += " ";
        s += to_string(st.label);
    }
    return s;
}

// The base of the two-component election network and its relation.
ProcessPtr election_base() { return P("x! . 0 | x?() . out!1 . 0 + y?() . out!2 . 0"); }
SymmetryRelation election_sigma() { return {parse_permutation("x>y,y>x"), 2}; }

}  // namespace

// ---------------------------------------------------------------------------
// Names.
// ---------------------------------------------------------------------------

TEST_CASE("names: token shapes") {
    CHECK(valid_name_token("x"));
    CHECK(valid_name_token("out"));
    CHECK(valid_name_token("x'"));
    CHECK(valid_name_token("z0"));
    CHECK(valid_name_token("42"));  // numerals act as names
    CHECK_FALSE(valid_name_token(""));
    CHECK_FALSE(valid_name_token("1x"));
    CHECK_FALSE(valid_name_token("a-b"));
}

TEST_CASE("names: fresh supply walks primed variants and honours the avoid set") {
    FreshSupply s{NameSet{"x", "x'"}};
    CHECK(s.fresh(Name{"x"}) == Name{"x'2"});
    CHECK(s.fresh(Name{"x"}) == Name{"x'3"});  // emitted names join the avoid set
    FreshSupply t;
    CHECK(t.fresh(Name{"b"}) == Name{"b'"});
}

// ---------------------------------------------------------------------------
// Core syntax.
// ---------------------------------------------------------------------------

TEST_CASE("syntax: free names") {
    CHECK(free_names(P("x!y . 0")) == NameSet{"x", "y"});
    CHECK(free_names(P("new z . x!z . 0")) == NameSet{"x"});
    CHECK(free_names(election_base()) == NameSet{"1", "2", "out", "x", "y"});
}

TEST_CASE("syntax: bound names") {
    CHECK(bound_names(P("x!y . 0")).empty());
    CHECK(bound_names(P("x?(z) . z!y . 0")) == NameSet{"z"});
    CHECK(bound_names(P("new x . a!x . x!u . 0")) == NameSet{"x"});
}

TEST_CASE("syntax: well-formedness flags binder clashes") {
    CHECK_FALSE(well_formed(parse_syntax("x?(z) . 0 | y?(z) . 0")).ok);
    CHECK_FALSE(well_formed(parse_syntax("x?(z) . 0 | z!a . 0")).ok);
    CHECK(well_formed(P("(new x . a!x . x!u . 0) | new x' . a!x' . x'!u . 0")).ok);
}

TEST_CASE("syntax: fragment classification is the tightest fit") {
    CHECK(classify(P("a?() . 0 + a! . 0")) == Fragment::Mixed);
    CHECK(classify(P("a?() . 0 + b?() . 0")) == Fragment::SeparateChoice);
    CHECK(classify(P("0")) == Fragment::ChoiceFree);
    CHECK(classify(P("a! . 0")) == Fragment::ChoiceFree);
    CHECK(classify(P("tau . 0 + a! . 0")) == Fragment::SeparateChoice);  // tau never mixes
}

TEST_CASE("syntax: equality is exact, not up to alpha") {
    CHECK(equal(P("new x . x?(z) . 0"), P("new x . x?(z) . 0")));
    CHECK_FALSE(equal(P("new x . x?(z) . 0"), P("new w . w?(z) . 0")));
}

// ---------------------------------------------------------------------------
// Parser and printer.
// ---------------------------------------------------------------------------

TEST_CASE("parser: the election base term") {
    ProcessPtr p = election_base();
    REQUIRE(p->kind == Process::Kind::Par);
    REQUIRE(p->parts.size() == 2);
    CHECK(p->parts[0]->branches.size() == 1);
    CHECK(p->parts[1]->branches.size() == 2);
}

TEST_CASE("parser: unguarded choice operands are rejected") {
    CHECK_THROWS_AS(parse("0 + 0"), ParseError);
    CHECK_THROWS_AS(parse("a! . 0 + (b! . 0 | c! . 0)"), ParseError);
}

TEST_CASE("parser: restriction extends to the right") {
    ProcessPtr p = P("new x . a!x . x! . 0");
    REQUIRE(p->kind == Process::Kind::Res);
    CHECK(p->binder == Name{"x"});
    ProcessPtr q = P("new x . a! . 0 | x! . 0");
    REQUIRE(q->kind == Process::Kind::Res);
    CHECK(q->body->kind == Process::Kind::Par);
}

TEST_CASE("parser: dot binds tightest, then +, then |") {
    ProcessPtr p = P("a! . 0 + b! . 0 | c! . 0");
    REQUIRE(p->kind == Process::Kind::Par);
    CHECK(p->parts[0]->branches.size() == 2);
}

TEST_CASE("parser: errors carry a position") {
    try {
        parse("a! . 0 +");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line == 1);
        CHECK(e.column > 1);
    }
}

TEST_CASE("parser: the well-formedness gate applies to parse but not parse_syntax") {
    CHECK_THROWS_AS(parse("x?(z) . 0 | z!a . 0"), ParseError);
    CHECK(parse_syntax("x?(z) . 0 | z!a . 0") != nullptr);
}

TEST_CASE("parser: comments, replication, success") {
    CHECK(equal(P("# a comment\n0"), nil()));
    CHECK(P("!a?(v) . 0")->kind == Process::Kind::Rep);
    CHECK(equal(P("check"), success()));
}

TEST_CASE("parser: print then reparse is the identity") {
    const std::vector<std::string> sources = {
        "0",
        "check",
        "x!y . 0",
        "x?() . 0",
        "tau . x! . 0",
        "x! . 0 | x?() . out!1 . 0 + y?() . out!2 . 0",
        "new x . (a!x . x! . 0 | b?(w) . 0)",
        "!new q . q?(v) . v!q . 0",
        "a?() . 0 + a! . check",
    };
    for (const auto& s : sources) {
        ProcessPtr p = parse_syntax(s);
        CAPTURE(s);
        CHECK(equal(parse_syntax(to_string(p)), p));
    }
}

TEST_CASE("parser: print then reparse on random terms") {
    std::mt19937_64 rng(7);
    GenConfig cfg;
    cfg.allow_mixed = true;
    cfg.allow_success = true;
    for (int i = 0; i < 200; ++i) {
        ProcessPtr p = random_process(rng, cfg);
        CAPTURE(to_string(p));
        CHECK(equal(parse_syntax(to_string(p)), p));
    }
}

// ---------------------------------------------------------------------------
// Substitution and relations.
// ---------------------------------------------------------------------------

TEST_CASE("subst: plain renaming") {
    CHECK(equal(pisym::apply(Substitution::rename("y", "x"), P("y!a . 0")), P("x!a . 0")));
}

TEST_CASE("subst: the relation image of the election base") {
    CHECK(equal(pisym::apply(election_sigma().perm, election_base()),
                P("y! . 0 | y?() . out!1 . 0 + x?() . out!2 . 0")));
}

TEST_CASE("subst: a binder steps aside before a substituted name lands") {
    ProcessPtr q = pisym::apply(Substitution::rename("w", "z"), P("x?(z) . w!a . 0"));
    CHECK(free_names(q) == NameSet{"a", "x", "z"});
    REQUIRE(q->kind == Process::Kind::Sum);
    const Branch& b = q->branches[0];
    CHECK(b.prefix.payload != Name{"z"});  // renamed binder
    const Prefix& inner = b.continuation->branches[0].prefix;
    CHECK(inner.channel == Name{"z"});
    CHECK(inner.payload == Name{"a"});
}

TEST_CASE("subst: labels rename in both positions") {
    Substitution ac = parse_permutation("a>c,c>a");
    CHECK(apply_label(ac, Label::free_input("a", "b")) == Label::free_input("c", "b"));
    CHECK(apply_label(ac, Label::tau()) == Label::tau());
    Substitution xy = parse_permutation("x>y,y>x");
    CHECK(apply_label(xy, Label::free_output("x", "y")) == Label::free_output("y", "x"));
}

TEST_CASE("subst: identity entries are dropped") {
    std::map<Name, Name> m{{Name{"x"}, Name{"x"}}};
    CHECK(Substitution{m}.is_identity());
}

TEST_CASE("subst: powers of a relation") {
    SymmetryRelation xy{parse_permutation("x>y,y>x"), 2};
    CHECK(power(xy, 0).is_identity());
    CHECK(power(xy, 2).is_identity());
    Substitution twice = power(parse_permutation("a>b,b>c,c>a"), 2);
    CHECK(twice(Name{"a"}) == Name{"c"});
    CHECK(twice(Name{"b"}) == Name{"a"});
    CHECK(twice(Name{"c"}) == Name{"b"});
}

TEST_CASE("subst: relation validation") {
    Substitution xy = parse_permutation("x>y,y>x");
    CHECK_FALSE(validate_symmetry({xy, 2}, {}));
    auto wrong = validate_symmetry({xy, 3}, {});
    REQUIRE(wrong);
    CHECK(wrong->kind == SymmetryIssue::Kind::WrongDegree);
    auto touch = validate_symmetry({xy, 2}, NameSet{"x"});
    REQUIRE(touch);
    CHECK(touch->kind == SymmetryIssue::Kind::TouchesForbiddenName);
    std::map<Name, Name> m{{Name{"a"}, Name{"c"}}, {Name{"b"}, Name{"c"}}};
    auto non = validate_symmetry({Substitution{m}, 2}, {});
    REQUIRE(non);
    CHECK(non->kind == SymmetryIssue::Kind::NotBijective);
}

TEST_CASE("subst: extending a relation with a fresh cycle") {
    SymmetryRelation ext = extend_symmetry(SymmetryRelation::identity(2), {"x", "x'"});
    CHECK(ext.perm(Name{"x"}) == Name{"x'"});
    CHECK(ext.perm(Name{"x'"}) == Name{"x"});
    SymmetryRelation ext2 = extend_symmetry({parse_permutation("a>b,b>a"), 2}, {"z", "z'"});
    CHECK(power(ext2, 2).is_identity());
    CHECK(ext2.perm(Name{"a"}) == Name{"b"});
    CHECK(ext2.perm(Name{"z"}) == Name{"z'"});
    CHECK(extend_symmetry(SymmetryRelation::identity(1), {"x"}).perm.is_identity());
}

TEST_CASE("subst: permutation literals") {
    CHECK(parse_permutation("x>y,y>x")(Name{"x"}) == Name{"y"});
    CHECK_THROWS_AS(parse_permutation("x>"), std::invalid_argument);
    CHECK_THROWS_AS(parse_permutation("x y"), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Semantics.
// ---------------------------------------------------------------------------

TEST_CASE("semantics: communication merges sender and receiver") {
    ProcessPtr p = P("x!y . 0 | x?(z) . z!a . 0");
    auto ts = transitions(p, free_names(p));
    bool found = false;
    for (const auto& t : ts)
        if (t.label.is_tau() && equal(t.target, P("0 | y!a . 0")) &&
            t.actors == std::vector<int>{0, 1})
            found = true;
    CHECK(found);
}

TEST_CASE("semantics: emitting a restricted name opens its scope") {
    auto ts = transitions(P("new y . x!y . 0"), NameSet{"x"});
    REQUIRE(ts.size() == 1);
    CHECK(ts[0].label == Label::bound_output("x", "y"));
    CHECK(equal(ts[0].target, nil()));
}

TEST_CASE("semantics: a mixed sum offers both polarities") {
    auto ts = transitions(P("a?() . 0 + a! . 0"), NameSet{"a"});
    CHECK(has_label(ts, Label::free_input("a", Name::unit())));
    CHECK(has_label(ts, Label::free_output("a", Name::unit())));
}

TEST_CASE("semantics: inputs instantiate over the universe plus a fresh witness") {
    ProcessPtr p = P("x?(z) . z!a . 0");
    NameSet uni{"x", "a"};
    NameSet objects;
    for (const auto& t : transitions(p, uni))
        if (t.label.kind == Label::Kind::FreeInput) objects.insert(t.label.object);
    NameSet expect = uni;
    expect.insert(input_witness(p, uni));
    CHECK(objects == expect);
}

TEST_CASE("semantics: internal steps") {
    auto one = tau_transitions(P("x!a . 0 | x?(z) . 0"));
    REQUIRE(one.size() == 1);
    CHECK(equal(one[0].target, P("0 | 0")));

    auto two = tau_transitions(P("a?() . 0 + a! . check | a?() . 0 + a! . check"));
    REQUIRE(two.size() == 2);
    std::set<std::string> targets;
    for (const auto& t : two) targets.insert(to_string(t.target));
    CHECK(targets == std::set<std::string>{"0 | check", "check | 0"});

    CHECK(tau_transitions(P("(new x . a!x . x!u . 0) | new x' . a!x' . x'!u . 0")).empty());
}

TEST_CASE("semantics: structural congruence") {
    CHECK(congruent(P("x!y . 0 | 0"), P("0 | x!y . 0")));
    CHECK(congruent(P("new x . x?(z) . 0"), P("new w . w?(z') . 0")));
    CHECK(congruent(P("(new x . x!a . 0) | a?(z) . 0"), P("new x . (x!a . 0 | a?(z) . 0)")));
    CHECK_FALSE(congruent(P("x!y . 0"), P("x!z . 0")));
}

TEST_CASE("semantics: canonical forms") {
    CanonicalForm c = canonical(P("0 | 0"));
    CHECK(c.key == canonical(c.term).key);  // idempotent
    CHECK(canonical(P("a! . 0 | b?(v) . 0")).key == canonical(P("b?(v) . 0 | a! . 0")).key);
    CHECK(canonical(P("(new x . x!a . 0) | a?(z) . 0")).key ==
          canonical(P("new x . (x!a . 0 | a?(z) . 0)")).key);
    CHECK(canonical(P("out!1 . 0 | out!2 . 0")).key == canonical(P("out!2 . 0 | out!1 . 0")).key);
}

TEST_CASE("semantics: actors name the moved components") {
    ProcessPtr p = P("a!b . 0 | c!d . 0");
    std::set<std::vector<int>> actor_sets;
    for (const auto& t : transitions(p, free_names(p))) actor_sets.insert(t.actors);
    CHECK(actor_sets.count({0}));
    CHECK(actor_sets.count({1}));
}

// ---------------------------------------------------------------------------
// Symmetric networks.
// ---------------------------------------------------------------------------

TEST_CASE("symmetry: building the two-component network") {
    auto net = build_network(election_base(), election_sigma(), {});
    CHECK(equal(denoted_term(net),
                par({election_base(), pisym::apply(election_sigma().perm, election_base())})));

    ProcessPtr b2 = P("x! . 1! . 0 + y?() . 2! . 0");
    SymmetryRelation s2{parse_permutation("x>y,y>x,1>2,2>1"), 2};
    ProcessPtr d2 = denoted_term(build_network(b2, s2, {"x", "y"}));
    REQUIRE(d2->kind == Process::Kind::Res);
    CHECK(d2->binder == Name{"x"});
    REQUIRE(d2->body->kind == Process::Kind::Res);
    CHECK(d2->body->binder == Name{"y"});

    CHECK(equal(denoted_term(build_network(P("a!b . 0"), SymmetryRelation::identity(2), {})),
                P("a!b . 0 | a!b . 0")));
}

TEST_CASE("symmetry: network validation errors") {
    CHECK_THROWS_AS(build_network(P("a! . 0"), SymmetryRelation::identity(2), {"z"}),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_network(P("x?(z) . 0"), {parse_permutation("z>w,w>z"), 2}, {}),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_network(P("a! . 0"), {parse_permutation("a>b,b>a"), 3}, {}),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        build_network(P("x! . 0 | y! . 0"), {parse_permutation("x>y,y>x"), 2}, {"x"}),
        std::invalid_argument);
}

TEST_CASE("symmetry: replacing indexed components") {
    auto net = build_network(P("a!b . 0"), SymmetryRelation::identity(2), {});
    CHECK(equal(indexed_substitute(net, {}), denoted_term(net)));
    CHECK(equal(indexed_substitute(net, {{0, P("check")}}), P("check | a!b . 0")));
}

TEST_CASE("symmetry: label rounds") {
    CHECK(symmetric_action_sequence(Label::tau(), {parse_permutation("a>b,b>c,c>a"), 3}, {}) ==
          LabelRound(3, Label::tau()));

    CHECK(symmetric_action_sequence(Label::free_input("a", "w"),
                                    {parse_permutation("a>c,c>a"), 2}, {}) ==
          LabelRound{Label::free_input("a", "w"), Label::free_input("c", "w")});

    CHECK(symmetric_action_sequence(Label::bound_output("u", "z"),
                                    {parse_permutation("z>z',z'>z"), 2}, {"z", "z'"}) ==
          LabelRound{Label::bound_output("u", "z"), Label::bound_output("u", "z'")});

    // the same object cannot be extruded twice: later positions demote
    CHECK(symmetric_action_sequence(Label::bound_output("u", "z"),
                                    SymmetryRelation::identity(2), {"z"}) ==
          LabelRound{Label::bound_output("u", "z"), Label::free_output("u", "z")});
}

TEST_CASE("symmetry: literal recognition") {
    CHECK(is_symmetric(P("out!1 . 0 | out!1 . 0"), SymmetryRelation::identity(2), {}));
    CHECK_FALSE(is_symmetric(P("out!1 . 0 | out!2 . 0"), SymmetryRelation::identity(2), {}));
    auto net = build_network(election_base(), election_sigma(), {});
    CHECK(is_symmetric(denoted_term(net), election_sigma(), {}));
}

TEST_CASE("symmetry: recovering a relation from a term") {
    ProcessPtr q = P("a!b . 0");
    auto d = discover_symmetry(par({q, q}), 2);
    REQUIRE(d);
    CHECK(d->relation.perm.is_identity());
    CHECK(d->restriction.empty());

    auto net = build_network(election_base(), election_sigma(), {});
    auto d1 = discover_symmetry(denoted_term(net), 2);
    REQUIRE(d1);
    CHECK(d1->relation.perm == election_sigma().perm);

    CHECK_FALSE(discover_symmetry(P("x!a . 0 | y!b . 0 | 0"), 3));
}

// ---------------------------------------------------------------------------
// Execution: round construction.
// ---------------------------------------------------------------------------

TEST_CASE("execution: matching a transition up to the extruded name choice") {
    ProcessPtr p = P("new y . x!y . 0");
    auto m = matching_transition(p, Label::bound_output("x", "w"), nil());
    REQUIRE(m);
    CHECK(m->label.subject == Name{"x"});
    CHECK_FALSE(matching_transition(p, Label::bound_output("x", "w"), P("w! . 0")));
    CHECK_FALSE(matching_transition(p, Label::free_output("x", "y"), nil()));
    CHECK(matching_transition(P("a! . 0 | a?() . 0"), Label::tau(), P("0 | 0")));
}

TEST_CASE("execution: restoring symmetry after an own-binder extrusion") {
    auto net = build_network(P("new x . a!x . x!u . 0"), SymmetryRelation::identity(2), {});
    ProcessPtr d = denoted_term(net);
    const Transition* first = nullptr;
    auto ts = transitions(d, free_names(d));
    for (const auto& t : ts)
        if (t.actors == std::vector<int>{0}) first = &t;
    REQUIRE(first);
    CHECK(first->label == Label::bound_output("a", "x"));

    auto rr = restore_symmetry(net, *first);
    CHECK(rr.labels == LabelRound{Label::bound_output("a", "x"), Label::bound_output("a", "x'")});
    CHECK(rr.next.relation.perm == parse_permutation("x>x',x'>x"));
    CHECK(equal(rr.next.base, P("x!u . 0")));
    CHECK(congruent(rr.steps.back().target, P("x!u . 0 | x'!u . 0")));
}

TEST_CASE("execution: restoring symmetry after a free output") {
    auto net = build_network(P("a!b . 0"), SymmetryRelation::identity(2), {});
    ProcessPtr d = denoted_term(net);
    std::vector<int> comp0{0};
    auto first = matching_transition(d, Label::free_output("a", "b"), P("0 | a!b . 0"), &comp0);
    REQUIRE(first);
    auto rr = restore_symmetry(net, *first);
    CHECK(rr.labels == LabelRound(2, Label::free_output("a", "b")));
    CHECK(equal(rr.next.base, nil()));
    CHECK(rr.next.relation.perm.is_identity());
}

TEST_CASE("execution: restoring symmetry after an internal communication") {
    auto net = build_network(P("a! . 0 | a?() . c! . 0"), SymmetryRelation::identity(2), {});
    const Transition* first = nullptr;
    auto ts = tau_transitions(denoted_term(net));
    for (const auto& t : ts)
        if (t.actors == std::vector<int>{0}) first = &t;
    REQUIRE(first);
    auto rr = restore_symmetry(net, *first);
    CHECK(rr.labels == LabelRound(2, Label::tau()));
    CHECK(equal(rr.next.base, P("0 | c! . 0")));
    CHECK(is_symmetric(rr.steps.back().target, rr.next.relation, rr.next.restriction));
}

TEST_CASE("execution: the empty network completes in zero rounds") {
    auto ex = symmetric_execution(build_network(nil(), SymmetryRelation::identity(2), {}));
    CHECK(ex.complete);
    CHECK(ex.rounds.empty());
    CHECK_FALSE(validate_symmetric_execution(ex));
}

TEST_CASE("execution: the election network runs a tau round then an announcement round") {
    auto ex = symmetric_execution(build_network(election_base(), election_sigma(), {}));
    REQUIRE(ex.complete);
    REQUIRE(ex.rounds.size() == 2);
    CHECK(ex.rounds[0].labels == LabelRound(2, Label::tau()));
    CHECK(ex.rounds[1].labels == LabelRound(2, Label::free_output("out", "1")));
    CHECK(equal(ex.final_network().base, P("0 | 0")));
    CHECK_FALSE(validate_symmetric_execution(ex));
}

TEST_CASE("execution: mixed bases go through the search, not the constructor") {
    auto net = build_network(P("a?() . 0 + a! . check"), SymmetryRelation::identity(2), {});
    CHECK_THROWS_AS(symmetric_execution(net), std::invalid_argument);
    auto found = has_symmetric_execution(net);
    CHECK(found.verdict == SymSearch::Verdict::Yes);
    REQUIRE(found.witness);
    CHECK_FALSE(validate_symmetric_execution(*found.witness));
}

TEST_CASE("execution: enumerating executions") {
    auto singleton = enumerate_executions(nil());
    REQUIRE(singleton.size() == 1);
    CHECK(singleton[0].maximal);
    CHECK(singleton[0].steps.empty());

    // closed world: a lone mixed sum has no internal step
    auto closed = enumerate_executions(P("a?() . 0 + a! . 0"), 8, NameSet{});
    REQUIRE(closed.size() == 1);
    CHECK(closed[0].maximal);
    CHECK(closed[0].steps.empty());
}

TEST_CASE("execution: the restricted mixed network has exactly two closed-world runs") {
    ProcessPtr b = P("x! . 1! . 0 + y?() . 2! . 0");
    SymmetryRelation s{parse_permutation("x>y,y>x,1>2,2>1"), 2};
    auto net = build_network(b, s, {"x", "y"});
    auto execs = enumerate_executions(denoted_term(net), 16, NameSet{"1", "2"});
    REQUIRE(execs.size() == 2);
    std::set<std::string> seqs;
    for (const auto& e : execs) {
        CHECK(e.maximal);
        seqs.insert(label_line(e));
    }
    CHECK(seqs == std::set<std::string>{"tau 1! 1!", "tau 2! 2!"});
    CHECK(has_symmetric_execution(net).verdict == SymSearch::Verdict::No);
}

TEST_CASE("execution: a free-output network has the evident symmetric execution") {
    auto found = has_symmetric_execution(
        build_network(P("a!b . 0"), SymmetryRelation::identity(2), {}));
    REQUIRE(found.verdict == SymSearch::Verdict::Yes);
    REQUIRE(found.witness);
    REQUIRE(found.witness->rounds.size() == 1);
    CHECK(found.witness->rounds[0].labels == LabelRound(2, Label::free_output("a", "b")));
}

// ---------------------------------------------------------------------------
// Execution: subdivision.
// ---------------------------------------------------------------------------

TEST_CASE("execution: halving a degree-4 run over a degree-2 relation") {
    ProcessPtr b = P("x! . 0 | y?() . 0");
    auto net = build_network(b, {parse_permutation("x>y,y>x"), 4}, {});
    auto ex = symmetric_execution(net);
    REQUIRE(ex.complete);
    REQUIRE(ex.rounds.size() == 1);
    CHECK(ex.rounds[0].labels == LabelRound(4, Label::tau()));

    auto half = subdivide(ex, 2);
    CHECK(half.initial.degree() == 2);
    REQUIRE(half.rounds.size() == 1);
    CHECK(half.rounds[0].labels == LabelRound(2, Label::tau()));  // tau rounds stay tau rounds
    CHECK(half.complete);
    CHECK_FALSE(validate_symmetric_execution(half));
}

TEST_CASE("execution: degree two down to an ordinary run of the base") {
    auto net = build_network(P("a! . 0 | a?() . c! . 0"), SymmetryRelation::identity(2), {});
    auto ex = symmetric_execution(net, 16);
    REQUIRE(ex.complete);
    auto small = subdivide(ex, 1);
    CHECK(small.initial.degree() == 1);
    REQUIRE(small.rounds.size() == ex.rounds.size());
    for (std::size_t r = 0; r < small.rounds.size(); ++r) {
        CHECK(small.rounds[r].labels.size() == 1);
        CHECK(small.rounds[r].labels[0] == ex.rounds[r].labels[0]);
    }
    CHECK(small.complete);
    CHECK_FALSE(validate_symmetric_execution(small));
}

TEST_CASE("execution: a fresh-name round keeps the original's name choice when shrunk") {
    auto net = build_network(P("new q . a!q . q! . 0"), SymmetryRelation::identity(2), {});
    auto ex = symmetric_execution(net, 8);
    REQUIRE(ex.complete);
    auto small = subdivide(ex, 1);
    REQUIRE(!small.rounds.empty());
    CHECK(small.rounds[0].labels == LabelRound{Label::bound_output("a", "q")});
    CHECK_FALSE(validate_symmetric_execution(small));
}

TEST_CASE("execution: bad subdivision degrees are rejected") {
    auto ex = symmetric_execution(build_network(P("a!b . 0"), SymmetryRelation::identity(2), {}));
    CHECK_THROWS_AS(subdivide(ex, 0), std::invalid_argument);
    CHECK_THROWS_AS(subdivide(ex, 2), std::invalid_argument);
    auto ex4 = symmetric_execution(
        build_network(P("x! . 0 | y?() . 0"), {parse_permutation("x>y,y>x"), 4}, {}));
    CHECK_THROWS_AS(subdivide(ex4, 3), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Execution: local confluence.
// ---------------------------------------------------------------------------

TEST_CASE("execution: independent input and output commute without mixed choice") {
    ProcessPtr p = P("x!a . 0 | y?(z) . 0");
    CHECK(check_local_confluence(p, free_names(p)).holds);
    CHECK(check_local_confluence(nil(), {}).holds);
    auto bad = check_local_confluence(P("a?() . 0 + a! . 0"), NameSet{"a"}, false);
    CHECK_FALSE(bad.holds);
    CHECK_FALSE(bad.stage.empty());
    CHECK_THROWS_AS(check_local_confluence(P("a?() . 0 + a! . 0"), NameSet{"a"}),
                    std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Checkers.
// ---------------------------------------------------------------------------

TEST_CASE("checkers: leader election, announcement style") {
    ProcessPtr p = P("a?() . slave! . 0 + a! . leader! . 0");
    CHECK(solves_leader_election_bouge(P("a?() . slave! . 0 + a! . leader! . 0 | "
                                         "a?() . slave! . 0 + a! . leader! . 0"),
                                       "leader", "slave", 2, 24)
              .outcome == Verdict::Outcome::Holds);
    auto lone = solves_leader_election_bouge(p, "leader", "slave", 1, 24);
    CHECK(lone.outcome == Verdict::Outcome::Fails);
    REQUIRE(lone.witness);
    CHECK(lone.witness->steps.empty());  // the only closed-world run is empty
    CHECK(solves_leader_election_bouge(P("leader! . 0 | leader! . 0"), "leader", "slave", 2, 24)
              .outcome == Verdict::Outcome::Fails);
}

TEST_CASE("checkers: leader election, index style") {
    CHECK(solves_leader_election_indexed(
              denoted_term(build_network(election_base(), election_sigma(), {})), "out", 2, 24)
              .outcome == Verdict::Outcome::Holds);
    CHECK(solves_leader_election_indexed(P("out!1 . 0 | out!2 . 0"), "out", 2, 24).outcome ==
          Verdict::Outcome::Fails);

    // restricted two-component net: both executions announce one common index
    ProcessPtr b = P("x! . out!1 . 0 + y?() . out!2 . 0");
    SymmetryRelation s{parse_permutation("x>y,y>x,1>2,2>1"), 2};
    auto net = build_network(b, s, {"x", "y"});
    CHECK(solves_leader_election_indexed(denoted_term(net), "out", 2, 24).outcome ==
          Verdict::Outcome::Holds);
}

TEST_CASE("checkers: announcement channels must be observable") {
    CHECK_THROWS_AS(solves_leader_election_bouge(P("new leader . (leader! . 0 | leader! . 0)"),
                                                 "leader", "slave", 2, 24),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        solves_leader_election_bouge(P("leader! . 0 | leader! . 0"), "leader", "slave", 3, 24),
        std::invalid_argument);
}

TEST_CASE("checkers: must-succeed") {
    ProcessPtr p = P("a?() . 0 + a! . check");
    CHECK(must_succeed(P("a?() . 0 + a! . check | a?() . 0 + a! . check"), 24).outcome ==
          Verdict::Outcome::Holds);
    auto lone = must_succeed(p, 24);
    CHECK(lone.outcome == Verdict::Outcome::Fails);
    REQUIRE(lone.witness);
    CHECK(lone.witness->maximal);
    CHECK(must_succeed(success(), 24).outcome == Verdict::Outcome::Holds);
    CHECK(must_succeed(P("!tau . 0"), 6).outcome == Verdict::Outcome::Unknown);
}

TEST_CASE("checkers: stepping ability") {
    ProcessPtr p = P("a?() . 0 + a! . 0");
    CHECK_FALSE(can_step(p, StepMode::TauOnly));
    CHECK(can_step(P("a?() . 0 + a! . 0 | a?() . 0 + a! . 0"), StepMode::TauOnly));
    CHECK(can_step(p, StepMode::AnyLabel));
    CHECK_FALSE(can_step(nil(), StepMode::AnyLabel));
    CHECK_FALSE(can_step(nil(), StepMode::TauOnly));
}

// ---------------------------------------------------------------------------
// Reports.
// ---------------------------------------------------------------------------

TEST_CASE("report: transitions round-trip through JSON") {
    ProcessPtr p = P("x!y . 0 | x?(z) . z!a . 0");
    auto ts = tau_transitions(p);
    REQUIRE(!ts.empty());
    Transition back = transition_from_json(to_json(ts[0]));
    CHECK(back.label == ts[0].label);
    CHECK(equal(back.source, ts[0].source));
    CHECK(equal(back.target, ts[0].target));
    CHECK(back.actors == ts[0].actors);
    CHECK(back.detail == ts[0].detail);
}

TEST_CASE("report: symmetric executions round-trip through reports") {
    auto ex = symmetric_execution(build_network(election_base(), election_sigma(), {}));
    auto doc = report_envelope("symexec", {{"degree", 2}}, to_json(ex));
    CHECK(doc.at("schema").get<std::string>() == kReportSchema);
    SymmetricExecution back = symexec_from_report(doc);
    CHECK(back.complete == ex.complete);
    REQUIRE(back.rounds.size() == ex.rounds.size());
    CHECK_FALSE(validate_symmetric_execution(back));
}

TEST_CASE("report: verdicts and label kinds") {
    nlohmann::json holds = to_json(Verdict::holds());
    CHECK(holds.at("verdict").get<std::string>() == "holds");
    nlohmann::json lab = to_json(Label::bound_output("a", "x"));
    CHECK(lab.at("kind").get<std::string>() == "bound-output");
    CHECK(label_from_json(lab) == Label::bound_output("a", "x"));
    CHECK(label_from_json(to_json(Label::tau())) == Label::tau());
}

// ---------------------------------------------------------------------------
// Generators and the batch lane.
// ---------------------------------------------------------------------------

TEST_CASE("gen: generated terms are well-formed, bounded, and separate-choice") {
    std::mt19937_64 rng(11);
    GenConfig cfg;
    for (int i = 0; i < 300; ++i) {
        ProcessPtr p = random_process(rng, cfg);
        CAPTURE(to_string(p));
        CHECK(well_formed(p).ok);
        CHECK(ast_size(p) <= static_cast<std::size_t>(cfg.max_ast));
        CHECK(classify(p) != Fragment::Mixed);
    }
}

TEST_CASE("gen: generated networks validate") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 100; ++i) {
        auto net = random_network(rng, 2 + (i % 2));
        CAPTURE(to_string(net.base));
        CHECK_FALSE(validate_symmetry(net.relation, bound_names(net.base)));
        NameSet fn = free_names(net.base);
        for (const auto& x : net.restriction) {
            CHECK(fn.count(x));
            CHECK(std::count(net.restriction.begin(), net.restriction.end(),
                             net.relation(x)) == 1);
        }
        CHECK(is_symmetric(denoted_term(net), net.relation, net.restriction));
    }
}

TEST_CASE("batch: per-index seeds are order-independent") {
    std::vector<std::uint64_t> serial(64), threaded(64);
    for_each_index(64, false, [&](long long i) { serial[i] = task_seed(99, i); });
    for_each_index(64, true, [&](long long i) { threaded[i] = task_seed(99, i); });
    CHECK(serial == threaded);
}

TEST_CASE("property: renaming a term renames its transitions") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 60; ++i) {
        GenConfig cfg;
        cfg.allow_mixed = (i % 3 == 0);
        ProcessPtr p = random_process(rng, cfg);
        NameSet fn = free_names(p);
        std::map<Name, Name> m;
        int k = 0;
        for (const auto& x : fn) m[x] = Name{"m" + std::to_string(k++)};
        Substitution sig{m};
        ProcessPtr q = pisym::apply(sig, p);
        auto t1 = transitions(p, fn);
        auto t2 = transitions(q, free_names(q));
        CAPTURE(to_string(p));
        REQUIRE(t1.size() == t2.size());
        for (const auto& t : t1)
            CHECK(matching_transition(q, apply_label(sig, t.label), pisym::apply(sig, t.target),
                                      &t.actors));
    }
}

TEST_CASE("property: the relation chain of a symmetric execution never shrinks") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 40; ++i) {
        auto net = random_network(rng, 2);
        auto ex = symmetric_execution(net, 12);
        Substitution prev = net.relation.perm;
        for (const auto& r : ex.rounds) {
            for (const auto& [from, to] : prev.mapping()) CHECK(r.sigma.perm(from) == to);
            prev = r.sigma.perm;
        }
        CHECK_FALSE(validate_symmetric_execution(ex));
    }
}
