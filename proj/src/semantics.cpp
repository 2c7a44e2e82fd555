#include "pisym/semantics.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

#include "pisym/printer.hpp"

namespace pisym {

std::string to_string(const Path& p) {
    std::string out;
    for (const auto& e : p) {
        if (!out.empty()) out += ".";
        switch (e.kind) {
            case PathElem::Kind::Part: out += "c" + std::to_string(e.index); break;
            case PathElem::Kind::Body: out += "b"; break;
            case PathElem::Kind::Rep: out += "r" + std::to_string(e.index); break;
            case PathElem::Kind::Branch: out += "s" + std::to_string(e.index); break;
        }
    }
    return out;
}

namespace {

// Cross-copy communication inside !P needs two unfoldings; nested
// replications consume one budget level each.
constexpr int kRepBudget = 4;

struct Rec {
    Label label;
    ProcessPtr target;
    std::vector<int> actors;
    StepDetail detail;
};

Path prepend(PathElem e, Path p) {
    p.insert(p.begin(), e);
    return p;
}

int label_rank(const Label& l) {
    switch (l.kind) {
        case Label::Kind::Tau: return 0;
        case Label::Kind::BoundOutput: return 1;
        case Label::Kind::FreeOutput: return 2;
        case Label::Kind::FreeInput: return 3;
    }
    return 4;
}

class Stepper {
public:
    explicit Stepper(NameSet avoid) : avoid_(std::move(avoid)) {}

    std::vector<Rec> step(const ProcessPtr& p, const NameSet& uni, int budget) {
        switch (p->kind) {
            case Process::Kind::Success:
                return {};
            case Process::Kind::Sum:
                return step_sum(p, uni);
            case Process::Kind::Par:
                return step_par(p, uni, budget);
            case Process::Kind::Res:
                return step_res(p, uni, budget);
            case Process::Kind::Rep:
                return step_rep(p, uni, budget);
        }
        return {};
    }

private:
    std::vector<Rec> step_sum(const ProcessPtr& p, const NameSet& uni) {
        std::vector<Rec> out;
        for (std::size_t i = 0; i < p->branches.size(); ++i) {
            const auto& br = p->branches[i];
            Path path{{PathElem::Kind::Branch, static_cast<int>(i)}};
            StepDetail d;
            d.prefix_a = path;
            switch (br.prefix.kind) {
                case Prefix::Kind::Output:
                    out.push_back({Label::free_output(br.prefix.channel, br.prefix.payload),
                                   br.continuation,
                                   {0},
                                   d});
                    break;
                case Prefix::Kind::Tau:
                    out.push_back({Label::tau(), br.continuation, {0}, d});
                    break;
                case Prefix::Kind::Input: {
                    if (br.prefix.payload.is_unit()) {
                        out.push_back({Label::free_input(br.prefix.channel, Name::unit()),
                                       br.continuation,
                                       {0},
                                       d});
                    } else {
                        for (const auto& o : uni) {
                            ProcessPtr tgt =
                                pisym::apply(Substitution::rename(br.prefix.payload, o), br.continuation);
                            out.push_back(
                                {Label::free_input(br.prefix.channel, o), std::move(tgt), {0}, d});
                        }
                    }
                    break;
                }
            }
        }
        return out;
    }

    std::vector<Rec> step_par(const ProcessPtr& p, const NameSet& uni, int budget) {
        const auto& parts = p->parts;
        const int n = static_cast<int>(parts.size());

        auto enumerate = [&](const NameSet& u) {
            std::vector<std::vector<Rec>> rs(n);
            for (int i = 0; i < n; ++i) rs[i] = step(parts[i], u, budget);
            return rs;
        };
        std::vector<std::vector<Rec>> recs = enumerate(uni);

        // Offered datums widen input instantiation so communications match.
        NameSet datums;
        for (const auto& rs : recs)
            for (const auto& r : rs)
                if (r.label.is_output() && !r.label.object.is_unit())
                    datums.insert(r.label.object);
        bool widen = false;
        for (const auto& d : datums)
            if (!uni.count(d)) widen = true;
        NameSet uni2 = uni;
        if (widen) {
            uni2.insert(datums.begin(), datums.end());
            recs = enumerate(uni2);
        }

        std::vector<NameSet> part_fn(n), part_names(n);
        for (int i = 0; i < n; ++i) {
            part_fn[i] = free_names(parts[i]);
            part_names[i] = all_names(parts[i]);
        }

        auto replace = [&](int i, const ProcessPtr& q) {
            std::vector<ProcessPtr> ps = parts;
            ps[i] = q;
            return par(std::move(ps));
        };
        auto replace2 = [&](int i, const ProcessPtr& q, int j, const ProcessPtr& r) {
            std::vector<ProcessPtr> ps = parts;
            ps[i] = q;
            ps[j] = r;
            return par(std::move(ps));
        };
        auto fresh_supply = [&](const Rec& a, const Rec& b) {
            NameSet avoid = avoid_;
            for (const auto& s : part_names) avoid.insert(s.begin(), s.end());
            NameSet ta = all_names(a.target);
            avoid.insert(ta.begin(), ta.end());
            NameSet tb = all_names(b.target);
            avoid.insert(tb.begin(), tb.end());
            return FreshSupply(std::move(avoid));
        };

        std::vector<Rec> out;

        // Lifted solo steps; extruded objects are renamed when they clash
        // with a sibling's free names (alpha via the congruence rule).
        for (int i = 0; i < n; ++i) {
            for (const auto& r : recs[i]) {
                Label lab = r.label;
                ProcessPtr tgt = r.target;
                if (lab.kind == Label::Kind::BoundOutput) {
                    bool clash = false;
                    for (int k = 0; k < n && !clash; ++k)
                        if (k != i && part_fn[k].count(lab.object)) clash = true;
                    if (clash) {
                        FreshSupply sup = fresh_supply(r, r);
                        Name w2 = sup.fresh(lab.object);
                        tgt = rename_free_name(tgt, lab.object, w2);
                        lab.object = w2;
                    }
                }
                Rec lifted{std::move(lab), replace(i, tgt), {i}, r.detail};
                lifted.detail.prefix_a = prepend({PathElem::Kind::Part, i}, lifted.detail.prefix_a);
                if (lifted.detail.pair)
                    lifted.detail.prefix_b =
                        prepend({PathElem::Kind::Part, i}, lifted.detail.prefix_b);
                out.push_back(std::move(lifted));
            }
        }

        // Communication: i sends, j receives.
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                for (const auto& so : recs[i]) {
                    if (!so.label.is_output()) continue;
                    for (const auto& si : recs[j]) {
                        if (si.label.kind != Label::Kind::FreeInput) continue;
                        if (si.label.subject != so.label.subject) continue;
                        if (si.label.object != so.label.object) continue;
                        StepDetail d;
                        d.pair = true;
                        d.channel = so.label.subject;
                        d.prefix_a = prepend({PathElem::Kind::Part, i}, so.detail.prefix_a);
                        d.prefix_b = prepend({PathElem::Kind::Part, j}, si.detail.prefix_b.empty()
                                                                            ? si.detail.prefix_a
                                                                            : si.detail.prefix_b);
                        if (so.label.kind == Label::Kind::FreeOutput) {
                            d.datum = so.label.object;
                            out.push_back(
                                {Label::tau(), replace2(i, so.target, j, si.target), {i, j}, d});
                        } else {
                            // Scope extrusion: the restriction is re-imposed
                            // around the whole composition.
                            Name w = so.label.object;
                            ProcessPtr sendT = so.target;
                            ProcessPtr recvT = si.target;
                            bool clash = false;
                            for (int k = 0; k < n && !clash; ++k)
                                if (k != i && part_fn[k].count(w)) clash = true;
                            if (clash) {
                                FreshSupply sup = fresh_supply(so, si);
                                Name w2 = sup.fresh(w);
                                sendT = rename_free_name(sendT, w, w2);
                                // Re-derive the receiving step at the renamed
                                // datum so its substitution is consistent.
                                auto alt = step(parts[j], NameSet{w2}, budget);
                                const Rec* found = nullptr;
                                for (const auto& cand : alt)
                                    if (cand.detail.prefix_a == si.detail.prefix_a &&
                                        cand.label ==
                                            Label::free_input(so.label.subject, w2)) {
                                        found = &cand;
                                        break;
                                    }
                                if (!found) continue;
                                recvT = found->target;
                                w = w2;
                            }
                            d.datum = w;
                            d.extruded = true;
                            out.push_back({Label::tau(),
                                           res(w, replace2(i, sendT, j, recvT)),
                                           {i, j},
                                           d});
                        }
                    }
                }
            }
        }
        return out;
    }

    std::vector<Rec> step_res(const ProcessPtr& p, const NameSet& uni, int budget) {
        const Name& z = p->binder;
        std::vector<Rec> inner = step(p->body, uni, budget);
        std::vector<Rec> out;
        for (auto& r : inner) {
            auto lift = [&](Label lab, ProcessPtr tgt, bool keep_res) {
                Rec lifted{std::move(lab), keep_res ? res(z, std::move(tgt)) : std::move(tgt),
                           r.actors, r.detail};
                lifted.detail.prefix_a = prepend({PathElem::Kind::Body, 0}, lifted.detail.prefix_a);
                if (lifted.detail.pair)
                    lifted.detail.prefix_b =
                        prepend({PathElem::Kind::Body, 0}, lifted.detail.prefix_b);
                out.push_back(std::move(lifted));
            };
            switch (r.label.kind) {
                case Label::Kind::Tau:
                    lift(r.label, r.target, true);
                    break;
                case Label::Kind::FreeInput:
                    if (r.label.subject != z && r.label.object != z)
                        lift(r.label, r.target, true);
                    break;
                case Label::Kind::FreeOutput:
                    if (r.label.subject == z) break;
                    if (r.label.object == z)
                        lift(Label::bound_output(r.label.subject, z), r.target, false);
                    else
                        lift(r.label, r.target, true);
                    break;
                case Label::Kind::BoundOutput:
                    if (r.label.subject != z && r.label.object != z)
                        lift(r.label, r.target, true);
                    break;
            }
        }
        return out;
    }

    std::vector<Rec> step_rep(const ProcessPtr& p, const NameSet& uni, int budget) {
        if (budget <= 0) return {};
        ProcessPtr unfolded = par({p->body, p});
        std::vector<Rec> inner = step(unfolded, uni, budget - 1);
        auto remap = [](Path& path) {
            if (path.empty()) return;
            if (path.front().kind == PathElem::Kind::Part && path.front().index == 0) {
                path.front() = {PathElem::Kind::Rep, 0};
            } else {
                // Residual copy: drop the Part(1) hop and bump the nested
                // replication index.
                path.erase(path.begin());
                if (!path.empty() && path.front().kind == PathElem::Kind::Rep)
                    ++path.front().index;
            }
        };
        for (auto& r : inner) {
            r.actors = {0};
            remap(r.detail.prefix_a);
            if (r.detail.pair) remap(r.detail.prefix_b);
        }
        return inner;
    }

    NameSet avoid_;
};

void sort_and_dedup(std::vector<Rec>& recs) {
    auto key = [](const Rec& r) {
        std::ostringstream os;
        os << label_rank(r.label) << "\x01" << to_string(r.label) << "\x01";
        for (int a : r.actors) os << a << ",";
        os << "\x01" << to_string(r.detail.prefix_a) << "\x01" << to_string(r.detail.prefix_b)
           << "\x01" << to_string(r.target);
        return os.str();
    };
    std::vector<std::pair<std::string, std::size_t>> idx;
    idx.reserve(recs.size());
    for (std::size_t i = 0; i < recs.size(); ++i) idx.emplace_back(key(recs[i]), i);
    std::sort(idx.begin(), idx.end());
    std::vector<Rec> out;
    out.reserve(recs.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (i && idx[i].first == idx[i - 1].first) continue;
        out.push_back(std::move(recs[idx[i].second]));
    }
    recs = std::move(out);
}

}  // namespace

Name input_witness(const ProcessPtr& p, const NameSet& universe) {
    NameSet taken = all_names(p);
    taken.insert(universe.begin(), universe.end());
    for (unsigned k = 0;; ++k) {
        Name w{"_w" + std::to_string(k)};
        if (!taken.count(w)) return w;
    }
}

std::vector<Transition> transitions(const ProcessPtr& p, const NameSet& universe) {
    if (!p) throw std::invalid_argument("transitions: null process");
    for (const auto& n : free_names(p))
        if (!universe.count(n))
            throw std::invalid_argument("transitions: universe missing free name '" + n.id + "'");
    Name witness = input_witness(p, universe);
    NameSet uni = universe;
    uni.insert(witness);
    NameSet avoid = all_names(p);
    avoid.insert(uni.begin(), uni.end());
    Stepper st(std::move(avoid));
    std::vector<Rec> recs = st.step(p, uni, kRepBudget);
    std::erase_if(recs, [&](const Rec& r) {
        return r.label.kind == Label::Kind::FreeInput && !r.label.object.is_unit() &&
               !uni.count(r.label.object);
    });
    sort_and_dedup(recs);
    std::vector<Transition> out;
    out.reserve(recs.size());
    for (auto& r : recs)
        out.push_back({p, std::move(r.label), std::move(r.target), std::move(r.actors),
                       std::move(r.detail)});
    return out;
}

std::vector<Transition> tau_transitions(const ProcessPtr& p) {
    if (!p) throw std::invalid_argument("tau_transitions: null process");
    Stepper st(all_names(p));
    std::vector<Rec> recs = st.step(p, {}, kRepBudget);
    std::erase_if(recs, [](const Rec& r) { return !r.label.is_tau(); });
    sort_and_dedup(recs);
    std::vector<Transition> out;
    out.reserve(recs.size());
    for (auto& r : recs)
        out.push_back({p, std::move(r.label), std::move(r.target), std::move(r.actors),
                       std::move(r.detail)});
    return out;
}

// ---------------------------------------------------------------------------
// Canonical forms.
//
// normalize() orders restriction chains and parallel multisets bottom-up;
// canonical() then renames every binder in a fixed traversal order. Sorting
// under a restriction chain collapses the chain names to one placeholder and
// resolves the remaining ties by taking the lexicographically least full
// encoding over the tied candidate orders, so congruent terms cannot drift
// apart on binder-sensitive orderings.
// ---------------------------------------------------------------------------

namespace {

struct EncEnv {
    std::vector<std::pair<Name, std::string>> scopes;

    std::string* find(const Name& n) {
        for (auto it = scopes.rbegin(); it != scopes.rend(); ++it)
            if (it->first == n) return &it->second;
        return nullptr;
    }
};

struct Encoding {
    const NameSet* collapse = nullptr;   // chain names -> placeholder
    const NameSet* pending = nullptr;    // chain names -> "&k" by first use
    std::map<Name, int> assigned;
    NameSeq first_use;
    int binders = 0;

    std::string tok(const Name& n, EncEnv& env) {
        if (n.is_unit()) return "_";
        if (auto* s = env.find(n)) return *s;
        if (pending && pending->count(n)) {
            auto it = assigned.find(n);
            if (it == assigned.end()) {
                it = assigned.emplace(n, static_cast<int>(assigned.size())).first;
                first_use.push_back(n);
            }
            return "&" + std::to_string(it->second);
        }
        if (collapse && collapse->count(n)) return "\x01";
        return n.id;
    }

    void encode(const ProcessPtr& p, EncEnv& env, std::string& out) {
        switch (p->kind) {
            case Process::Kind::Success:
                out += "^";
                return;
            case Process::Kind::Sum: {
                out += "S(";
                for (const auto& br : p->branches) {
                    const Prefix& pre = br.prefix;
                    switch (pre.kind) {
                        case Prefix::Kind::Output:
                            out += "o" + tok(pre.channel, env) + "," + tok(pre.payload, env);
                            break;
                        case Prefix::Kind::Tau:
                            out += "t";
                            break;
                        case Prefix::Kind::Input: {
                            out += "i" + tok(pre.channel, env);
                            break;
                        }
                    }
                    out += ".";
                    std::size_t depth = env.scopes.size();
                    if (pre.kind == Prefix::Kind::Input && !pre.payload.is_unit())
                        env.scopes.emplace_back(pre.payload, "@" + std::to_string(binders++));
                    encode(br.continuation, env, out);
                    env.scopes.resize(depth);
                    out += ";";
                }
                out += ")";
                return;
            }
            case Process::Kind::Par: {
                out += "P(";
                for (const auto& q : p->parts) {
                    encode(q, env, out);
                    out += "|";
                }
                out += ")";
                return;
            }
            case Process::Kind::Res: {
                std::size_t depth = env.scopes.size();
                std::string t = "@" + std::to_string(binders++);
                if (!p->binder.is_unit()) env.scopes.emplace_back(p->binder, t);
                out += "R" + t + "(";
                encode(p->body, env, out);
                env.scopes.resize(depth);
                out += ")";
                return;
            }
            case Process::Kind::Rep: {
                out += "!(";
                encode(p->body, env, out);
                out += ")";
                return;
            }
        }
    }
};

std::string encode_term(const ProcessPtr& p, const NameSet* collapse) {
    Encoding e;
    e.collapse = collapse;
    EncEnv env;
    std::string out;
    e.encode(p, env, out);
    return out;
}

// Encoding of a whole chain node for a fixed component order; chain binders
// are numbered by first use. Returns the string and the first-use order.
std::pair<std::string, NameSeq> encode_chain_node(const NameSet& chain,
                                                  const std::vector<ProcessPtr>& comps) {
    Encoding e;
    e.pending = &chain;
    EncEnv env;
    std::string out = "N" + std::to_string(chain.size()) + "(";
    for (const auto& c : comps) {
        e.encode(c, env, out);
        out += "|";
    }
    out += ")";
    return {std::move(out), std::move(e.first_use)};
}

class Canonicalizer {
public:
    ProcessPtr normalize(const ProcessPtr& p) {
        switch (p->kind) {
            case Process::Kind::Success:
                return p;
            case Process::Kind::Sum: {
                std::vector<Branch> out;
                out.reserve(p->branches.size());
                for (const auto& br : p->branches)
                    out.push_back({br.prefix, normalize(br.continuation)});
                return sum(std::move(out));
            }
            case Process::Kind::Rep:
                return rep(normalize(p->body));
            case Process::Kind::Res: {
                ProcessPtr body = normalize(p->body);
                NameSeq chain;
                std::vector<ProcessPtr> comps;
                strip(body, chain, comps);
                Name binder = p->binder;
                for (const auto& c : chain)
                    if (c == binder) {
                        // Shadowed outer binder: binds nothing, relabel it.
                        NameSet avoid = all_names(p);
                        for (const auto& n : chain) avoid.insert(n);
                        binder = FreshSupply(std::move(avoid)).fresh(binder);
                        break;
                    }
                chain.insert(chain.begin(), binder);
                return make_node(std::move(chain), std::move(comps));
            }
            case Process::Kind::Par: {
                std::vector<ProcessPtr> parts;
                parts.reserve(p->parts.size());
                for (const auto& q : p->parts) parts.push_back(normalize(q));
                std::vector<NameSet> names(parts.size());
                NameSet total;
                for (std::size_t i = 0; i < parts.size(); ++i) {
                    names[i] = all_names(parts[i]);
                    total.insert(names[i].begin(), names[i].end());
                }
                FreshSupply supply(total);
                NameSeq chain;
                NameSet chain_set;
                std::vector<ProcessPtr> comps;
                for (std::size_t i = 0; i < parts.size(); ++i) {
                    NameSet others = chain_set;
                    for (std::size_t k = 0; k < parts.size(); ++k)
                        if (k != i) others.insert(names[k].begin(), names[k].end());
                    ProcessPtr cur = parts[i];
                    while (cur->kind == Process::Kind::Res) {
                        Name w = cur->binder;
                        ProcessPtr body = cur->body;
                        if (others.count(w)) {
                            Name w2 = supply.fresh(w);
                            body = rename_free_name(body, w, w2);
                            w = w2;
                        }
                        chain.push_back(w);
                        chain_set.insert(w);
                        others.insert(w);
                        cur = body;
                    }
                    if (cur->kind == Process::Kind::Par)
                        comps.insert(comps.end(), cur->parts.begin(), cur->parts.end());
                    else
                        comps.push_back(cur);
                }
                return make_node(std::move(chain), std::move(comps));
            }
        }
        return p;
    }

private:
    static void strip(const ProcessPtr& p, NameSeq& chain, std::vector<ProcessPtr>& comps) {
        ProcessPtr cur = p;
        while (cur->kind == Process::Kind::Res) {
            chain.push_back(cur->binder);
            cur = cur->body;
        }
        if (cur->kind == Process::Kind::Par)
            comps.insert(comps.end(), cur->parts.begin(), cur->parts.end());
        else
            comps.push_back(cur);
    }

    ProcessPtr make_node(NameSeq chain, std::vector<ProcessPtr> comps) {
        if (comps.size() == 1 && chain.empty()) return comps[0];
        NameSet chain_set(chain.begin(), chain.end());

        if (comps.size() > 1) {
            std::vector<std::pair<std::string, ProcessPtr>> keyed;
            keyed.reserve(comps.size());
            for (const auto& c : comps)
                keyed.emplace_back(encode_term(c, chain_set.empty() ? nullptr : &chain_set), c);
            std::stable_sort(keyed.begin(), keyed.end(),
                             [](const auto& a, const auto& b) { return a.first < b.first; });

            if (!chain_set.empty()) {
                comps = resolve_ties(keyed, chain_set);
            } else {
                comps.clear();
                for (auto& [_, c] : keyed) comps.push_back(std::move(c));
            }
        }

        if (chain.empty()) return par(std::move(comps));

        // Chain order: first use in the final encoding, unused binders last
        // in their collected order.
        auto [_, order] = encode_chain_node(chain_set, comps);
        NameSet used(order.begin(), order.end());
        for (const auto& n : chain)
            if (!used.count(n)) order.push_back(n);
        return res(order, par(std::move(comps)));
    }

    // Components tied under the placeholder key may still differ in which
    // chain name they mention; pick the permutation with the least full
    // encoding. The candidate space is capped; beyond it the sorted order
    // stands (not reachable at the term sizes this tool targets).
    static std::vector<ProcessPtr> resolve_ties(
        std::vector<std::pair<std::string, ProcessPtr>>& keyed, const NameSet& chain_set) {
        struct Block {
            std::size_t begin, end;  // half-open
            bool search;
        };
        std::vector<Block> blocks;
        std::size_t i = 0;
        long long candidates = 1;
        while (i < keyed.size()) {
            std::size_t j = i + 1;
            while (j < keyed.size() && keyed[j].first == keyed[i].first) ++j;
            bool search = j - i > 1 && keyed[i].first.find('\x01') != std::string::npos;
            if (search) {
                // Skip permuting literally identical members.
                bool all_equal = true;
                for (std::size_t k = i + 1; k < j && all_equal; ++k)
                    if (!equal(keyed[k].second, keyed[i].second)) all_equal = false;
                if (all_equal) search = false;
            }
            if (search)
                for (std::size_t k = 2; k <= j - i; ++k) candidates *= static_cast<long long>(k);
            blocks.push_back({i, j, search});
            i = j;
            if (candidates > 20000) break;
        }

        std::vector<ProcessPtr> base;
        base.reserve(keyed.size());
        for (auto& [_, c] : keyed) base.push_back(c);
        if (candidates > 20000) return base;

        std::vector<ProcessPtr> best = base;
        std::string best_key = encode_chain_node(chain_set, base).first;

        // Depth-first product of block permutations.
        std::vector<ProcessPtr> work = base;
        auto rec = [&](auto&& self, std::size_t bi) -> void {
            if (bi == blocks.size()) {
                std::string key = encode_chain_node(chain_set, work).first;
                if (key < best_key) {
                    best_key = std::move(key);
                    best = work;
                }
                return;
            }
            const Block& b = blocks[bi];
            if (!b.search) {
                self(self, bi + 1);
                return;
            }
            std::vector<ProcessPtr> slice(work.begin() + b.begin, work.begin() + b.end);
            std::sort(slice.begin(), slice.end());  // pointer order, permutation base
            do {
                std::copy(slice.begin(), slice.end(), work.begin() + b.begin);
                self(self, bi + 1);
            } while (std::next_permutation(slice.begin(), slice.end()));
            std::copy(base.begin() + b.begin, base.begin() + b.end, work.begin() + b.begin);
        };
        rec(rec, 0);
        return best;
    }
};

ProcessPtr rename_binders(const ProcessPtr& p, EncEnv& env, int& counter, const NameSet& taken) {
    auto next = [&]() {
        for (;; ++counter) {
            Name cand{"_b" + std::to_string(counter)};
            if (!taken.count(cand)) {
                ++counter;
                return cand;
            }
        }
    };
    auto look = [&](const Name& n) {
        if (n.is_unit()) return n;
        if (auto* s = env.find(n)) return Name{*s};
        return n;
    };
    switch (p->kind) {
        case Process::Kind::Success:
            return p;
        case Process::Kind::Sum: {
            std::vector<Branch> out;
            out.reserve(p->branches.size());
            for (const auto& br : p->branches) {
                Prefix pre = br.prefix;
                std::size_t depth = env.scopes.size();
                if (pre.kind != Prefix::Kind::Tau) pre.channel = look(pre.channel);
                if (pre.kind == Prefix::Kind::Output) pre.payload = look(pre.payload);
                if (pre.kind == Prefix::Kind::Input && !pre.payload.is_unit()) {
                    Name nb = next();
                    env.scopes.emplace_back(pre.payload, nb.id);
                    pre.payload = nb;
                }
                ProcessPtr cont = rename_binders(br.continuation, env, counter, taken);
                env.scopes.resize(depth);
                out.push_back({std::move(pre), std::move(cont)});
            }
            return sum(std::move(out));
        }
        case Process::Kind::Par: {
            std::vector<ProcessPtr> out;
            out.reserve(p->parts.size());
            for (const auto& q : p->parts) out.push_back(rename_binders(q, env, counter, taken));
            return par(std::move(out));
        }
        case Process::Kind::Res: {
            std::size_t depth = env.scopes.size();
            Name nb = p->binder;
            if (!nb.is_unit()) {
                nb = next();
                env.scopes.emplace_back(p->binder, nb.id);
            }
            ProcessPtr body = rename_binders(p->body, env, counter, taken);
            env.scopes.resize(depth);
            return res(nb, std::move(body));
        }
        case Process::Kind::Rep:
            return rep(rename_binders(p->body, env, counter, taken));
    }
    return p;
}

}  // namespace

CanonicalForm canonical(const ProcessPtr& p) {
    if (!p) throw std::invalid_argument("canonical: null process");
    Canonicalizer c;
    ProcessPtr norm = c.normalize(p);
    NameSet fn = free_names(p);
    EncEnv env;
    int counter = 0;
    ProcessPtr renamed = rename_binders(norm, env, counter, fn);
    std::string key = to_string(renamed);
    return {std::move(renamed), std::move(key)};
}

bool congruent(const ProcessPtr& a, const ProcessPtr& b) {
    if (!a || !b) return false;
    if (equal(a, b)) return true;
    return equal(canonical(a).term, canonical(b).term);
}

}  // namespace pisym
