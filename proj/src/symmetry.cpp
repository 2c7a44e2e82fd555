#include "pisym/symmetry.hpp"

#include <algorithm>
#include <stdexcept>

namespace pisym {

namespace {

void check_relation(const SymmetryRelation& relation, const ProcessPtr& base) {
    if (auto issue = validate_symmetry(relation, bound_names(base)))
        throw std::invalid_argument("symmetry relation: " + issue->detail);
}

void check_restriction(const NameSeq& restriction, const SymmetryRelation& relation) {
    NameSet set;
    for (const auto& x : restriction) {
        if (x.is_unit())
            throw std::invalid_argument("restriction cannot contain the reserved unit name");
        if (!set.insert(x).second)
            throw std::invalid_argument("restriction name '" + x.id + "' repeated");
    }
    for (const auto& x : restriction)
        if (!set.count(relation.perm(x)))
            throw std::invalid_argument("restriction is not closed under the relation ('" + x.id +
                                        "' maps to '" + relation.perm(x).id + "')");
}

}  // namespace

SymmetricNetwork build_network(const ProcessPtr& base, const SymmetryRelation& relation,
                               const NameSeq& restriction) {
    if (!base) throw std::invalid_argument("build_network: null base");
    WellFormedness wf = well_formed(base);
    if (!wf.ok) throw std::invalid_argument("base is not well formed: " + wf.reason);
    check_relation(relation, base);
    check_restriction(restriction, relation);
    NameSet fn = free_names(base);
    for (const auto& x : restriction)
        if (!fn.count(x))
            throw std::invalid_argument("restriction name '" + x.id +
                                        "' is not free in the base");
    return {restriction, base, relation};
}

SymmetricNetwork network_unchecked(const ProcessPtr& base, const SymmetryRelation& relation,
                                   const NameSeq& restriction) {
    if (!base) throw std::invalid_argument("network_unchecked: null base");
    check_relation(relation, base);
    check_restriction(restriction, relation);
    return {restriction, base, relation};
}

std::vector<ProcessPtr> network_components(const SymmetricNetwork& net) {
    std::vector<ProcessPtr> comps;
    comps.reserve(net.degree());
    ProcessPtr cur = net.base;
    for (int k = 0; k < net.degree(); ++k) {
        comps.push_back(cur);
        if (k + 1 < net.degree()) cur = pisym::apply(net.relation.perm, cur);
    }
    return comps;
}

ProcessPtr denoted_term(const SymmetricNetwork& net) {
    return res(net.restriction, par(network_components(net)));
}

ProcessPtr indexed_substitute(const SymmetricNetwork& net,
                              const std::map<int, ProcessPtr>& replacements) {
    std::vector<ProcessPtr> comps = network_components(net);
    for (const auto& [i, q] : replacements) {
        if (i < 0 || i >= net.degree())
            throw std::invalid_argument("indexed_substitute: index " + std::to_string(i) +
                                        " out of range");
        if (!q) throw std::invalid_argument("indexed_substitute: null replacement");
        comps[i] = q;
    }
    return res(net.restriction, par(std::move(comps)));
}

LabelRound symmetric_action_sequence(const Label& mu, const SymmetryRelation& relation,
                                     const NameSeq& restriction) {
    (void)restriction;  // demotion below subsumes the remaining-restriction
                        // test: restriction sets are closed under the
                        // relation, so a repeated object is precisely one
                        // already extruded earlier in the round.
    const int n = relation.degree;
    LabelRound out;
    out.reserve(n);
    if (mu.is_tau()) {
        out.assign(n, Label::tau());
        return out;
    }
    Name subj = mu.subject;
    Name obj = mu.object;
    NameSet seen_objects;
    for (int t = 0; t < n; ++t) {
        if (t > 0) {
            subj = relation.perm(subj);
            if (!obj.is_unit()) obj = relation.perm(obj);
        }
        switch (mu.kind) {
            case Label::Kind::FreeInput:
                out.push_back(Label::free_input(subj, obj));
                break;
            case Label::Kind::FreeOutput:
                out.push_back(Label::free_output(subj, obj));
                break;
            case Label::Kind::BoundOutput:
                if (seen_objects.count(obj))
                    out.push_back(Label::free_output(subj, obj));
                else
                    out.push_back(Label::bound_output(subj, obj));
                seen_objects.insert(obj);
                break;
            case Label::Kind::Tau:
                break;  // handled above
        }
    }
    return out;
}

bool is_symmetric(const ProcessPtr& term, const SymmetryRelation& relation,
                  const NameSeq& restriction) {
    if (!term) return false;
    ProcessPtr cur = term;
    for (const auto& x : restriction) {
        if (cur->kind != Process::Kind::Res || cur->binder != x) return false;
        cur = cur->body;
    }
    const int n = relation.degree;
    std::vector<ProcessPtr> comps;
    if (n == 1) {
        // the sole component is the whole core (it may carry its own Res)
        comps.push_back(cur);
    } else {
        if (cur->kind != Process::Kind::Par) return false;
        if (static_cast<int>(cur->parts.size()) != n) return false;
        comps = cur->parts;
    }
    for (int k = 0; k < n; ++k)
        if (!equal(pisym::apply(relation.perm, comps[k]), comps[(k + 1) % n])) return false;
    return true;
}

namespace {

// Position-wise name alignment of two structurally identical terms; free
// positions constrain the candidate map, binders must coincide literally.
bool align(const ProcessPtr& a, const ProcessPtr& b, std::map<Name, Name>& m) {
    auto constrain = [&](const Name& x, const Name& y) {
        if (x.is_unit() || y.is_unit()) return x.is_unit() && y.is_unit();
        auto it = m.find(x);
        if (it != m.end()) return it->second == y;
        m.emplace(x, y);
        return true;
    };
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Process::Kind::Success:
            return true;
        case Process::Kind::Sum: {
            if (a->branches.size() != b->branches.size()) return false;
            for (std::size_t i = 0; i < a->branches.size(); ++i) {
                const Prefix& pa = a->branches[i].prefix;
                const Prefix& pb = b->branches[i].prefix;
                if (pa.kind != pb.kind) return false;
                if (pa.kind != Prefix::Kind::Tau && !constrain(pa.channel, pb.channel))
                    return false;
                if (pa.kind == Prefix::Kind::Output && !constrain(pa.payload, pb.payload))
                    return false;
                if (pa.kind == Prefix::Kind::Input && pa.payload != pb.payload)
                    return false;  // binders are never permuted
                if (!align(a->branches[i].continuation, b->branches[i].continuation, m))
                    return false;
            }
            return true;
        }
        case Process::Kind::Par: {
            if (a->parts.size() != b->parts.size()) return false;
            for (std::size_t i = 0; i < a->parts.size(); ++i)
                if (!align(a->parts[i], b->parts[i], m)) return false;
            return true;
        }
        case Process::Kind::Res:
            if (a->binder != b->binder) return false;
            return align(a->body, b->body, m);
        case Process::Kind::Rep:
            return align(a->body, b->body, m);
    }
    return false;
}

}  // namespace

std::optional<DiscoveredSymmetry> discover_symmetry(const ProcessPtr& term, int degree) {
    if (!term || degree < 1) return std::nullopt;
    NameSeq restriction;
    ProcessPtr core = term;
    while (core->kind == Process::Kind::Res) {
        restriction.push_back(core->binder);
        core = core->body;
    }
    std::vector<ProcessPtr> comps;
    if (degree == 1) {
        comps.push_back(core);
    } else {
        if (core->kind != Process::Kind::Par) return std::nullopt;
        if (static_cast<int>(core->parts.size()) != degree) return std::nullopt;
        comps = core->parts;
    }
    std::map<Name, Name> m;
    for (int k = 0; k < degree; ++k)
        if (!align(comps[k], comps[(k + 1) % degree], m)) return std::nullopt;
    SymmetryRelation candidate{Substitution{std::move(m)}, degree};
    if (validate_symmetry(candidate, {})) return std::nullopt;
    NameSet xs(restriction.begin(), restriction.end());
    for (const auto& x : restriction)
        if (!xs.count(candidate.perm(x))) return std::nullopt;
    if (!is_symmetric(term, candidate, restriction)) return std::nullopt;
    return DiscoveredSymmetry{std::move(candidate), std::move(restriction)};
}

}  // namespace pisym
