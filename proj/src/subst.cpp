#include "pisym/subst.hpp"

#include <sstream>
#include <stdexcept>

namespace pisym {

Substitution::Substitution(std::map<Name, Name> mapping) : map_(std::move(mapping)) {
    for (auto it = map_.begin(); it != map_.end();) {
        if (it->first == it->second)
            it = map_.erase(it);
        else
            ++it;
    }
    if (map_.count(Name::unit()))
        throw std::invalid_argument("substitution must not move the reserved unit name");
}

Substitution Substitution::rename(const Name& replaced, const Name& replacement) {
    return Substitution{{{replaced, replacement}}};
}

NameSet Substitution::support() const {
    NameSet s;
    for (const auto& [k, _] : map_) s.insert(k);
    return s;
}

NameSet Substitution::image() const {
    NameSet s;
    for (const auto& [_, v] : map_) s.insert(v);
    return s;
}

Name Substitution::operator()(const Name& n) const {
    auto it = map_.find(n);
    return it == map_.end() ? n : it->second;
}

namespace {

ProcessPtr apply_impl(const Substitution& s, const ProcessPtr& p, FreshSupply& supply);

ProcessPtr descend_binder(const Substitution& s, const Name& binder, const ProcessPtr& body,
                          FreshSupply& supply, Name& binder_out) {
    binder_out = binder;
    if (binder.is_unit()) return apply_impl(s, body, supply);

    // The binder shadows any mapping of its own name.
    std::map<Name, Name> inner = s.mapping();
    inner.erase(binder);

    // Capture check: some free name of the body maps onto the binder.
    NameSet fn = free_names(body);
    bool capture = false;
    for (const auto& [from, to] : inner)
        if (to == binder && fn.count(from)) {
            capture = true;
            break;
        }
    ProcessPtr body2 = body;
    if (capture) {
        binder_out = supply.fresh(binder);
        body2 = rename_free_name(body2, binder, binder_out);
    }
    Substitution s2{std::move(inner)};
    return apply_impl(s2, body2, supply);
}

ProcessPtr apply_impl(const Substitution& s, const ProcessPtr& p, FreshSupply& supply) {
    if (s.is_identity()) return p;
    switch (p->kind) {
        case Process::Kind::Success:
            return p;
        case Process::Kind::Sum: {
            std::vector<Branch> out;
            out.reserve(p->branches.size());
            for (const auto& br : p->branches) {
                Prefix pre = br.prefix;
                ProcessPtr cont;
                if (pre.kind == Prefix::Kind::Tau) {
                    cont = apply_impl(s, br.continuation, supply);
                } else if (pre.kind == Prefix::Kind::Output) {
                    pre.channel = s(pre.channel);
                    if (!pre.payload.is_unit()) pre.payload = s(pre.payload);
                    cont = apply_impl(s, br.continuation, supply);
                } else {
                    pre.channel = s(pre.channel);
                    Name nb;
                    cont = descend_binder(s, pre.payload, br.continuation, supply, nb);
                    pre.payload = nb;
                }
                out.push_back({std::move(pre), std::move(cont)});
            }
            return sum(std::move(out));
        }
        case Process::Kind::Par: {
            std::vector<ProcessPtr> out;
            out.reserve(p->parts.size());
            for (const auto& q : p->parts) out.push_back(apply_impl(s, q, supply));
            return par(std::move(out));
        }
        case Process::Kind::Res: {
            Name nb;
            ProcessPtr body = descend_binder(s, p->binder, p->body, supply, nb);
            return res(nb, std::move(body));
        }
        case Process::Kind::Rep:
            return rep(apply_impl(s, p->body, supply));
    }
    return p;
}

}  // namespace

ProcessPtr rename_free_name(const ProcessPtr& p, const Name& n, const Name& to) {
    switch (p->kind) {
        case Process::Kind::Success:
            return p;
        case Process::Kind::Sum: {
            std::vector<Branch> out;
            out.reserve(p->branches.size());
            for (const auto& br : p->branches) {
                Prefix pre = br.prefix;
                ProcessPtr cont = br.continuation;
                if (pre.kind != Prefix::Kind::Tau) {
                    if (pre.channel == n) pre.channel = to;
                    if (pre.kind == Prefix::Kind::Output && pre.payload == n) pre.payload = to;
                }
                bool shadowed = pre.kind == Prefix::Kind::Input && pre.payload == n;
                if (!shadowed) cont = rename_free_name(cont, n, to);
                out.push_back({std::move(pre), std::move(cont)});
            }
            return sum(std::move(out));
        }
        case Process::Kind::Par: {
            std::vector<ProcessPtr> out;
            out.reserve(p->parts.size());
            for (const auto& q : p->parts) out.push_back(rename_free_name(q, n, to));
            return par(std::move(out));
        }
        case Process::Kind::Res:
            if (p->binder == n) return p;
            return res(p->binder, rename_free_name(p->body, n, to));
        case Process::Kind::Rep:
            return rep(rename_free_name(p->body, n, to));
    }
    return p;
}

ProcessPtr apply(const Substitution& s, const ProcessPtr& p) {
    NameSet avoid = all_names(p);
    avoid.merge(NameSet(s.support()));
    avoid.merge(NameSet(s.image()));
    FreshSupply supply(std::move(avoid));
    return apply_impl(s, p, supply);
}

Label apply_label(const Substitution& s, const Label& l) {
    if (l.is_tau()) return l;
    Label out = l;
    out.subject = s(out.subject);
    if (!out.object.is_unit()) out.object = s(out.object);
    return out;
}

Substitution power(const Substitution& s, int i) {
    if (i < 0) throw std::invalid_argument("power: negative exponent");
    std::map<Name, Name> acc;
    for (const auto& [k, _] : s.mapping()) {
        Name v = k;
        for (int j = 0; j < i; ++j) v = s(v);
        acc.emplace(k, v);
    }
    return Substitution{std::move(acc)};
}

std::optional<SymmetryIssue> validate_symmetry(const SymmetryRelation& s,
                                               const NameSet& forbidden) {
    const auto& m = s.perm.mapping();
    NameSet values;
    for (const auto& [_, v] : m)
        if (!values.insert(v).second)
            return SymmetryIssue{SymmetryIssue::Kind::NotBijective,
                                 "two names map to '" + v.id + "'"};
    for (const auto& [k, _] : m)
        if (!values.count(k))
            return SymmetryIssue{SymmetryIssue::Kind::NotBijective,
                                 "support name '" + k.id + "' is not in the image"};
    if (s.degree < 1)
        return SymmetryIssue{SymmetryIssue::Kind::WrongDegree, "degree must be >= 1"};
    if (!power(s.perm, s.degree).is_identity())
        return SymmetryIssue{SymmetryIssue::Kind::WrongDegree,
                             "sigma^" + std::to_string(s.degree) + " is not the identity"};
    for (const auto& [k, _] : m)
        if (forbidden.count(k))
            return SymmetryIssue{SymmetryIssue::Kind::TouchesForbiddenName,
                                 "support touches bound name '" + k.id + "'"};
    return std::nullopt;
}

SymmetryRelation extend_symmetry(const SymmetryRelation& s, const NameSeq& cycle) {
    if (cycle.empty()) return s;
    NameSet support = s.perm.support();
    NameSet seen;
    for (const auto& n : cycle) {
        if (support.count(n))
            throw std::invalid_argument("extend_symmetry: cycle name '" + n.id +
                                        "' already in support");
        if (!seen.insert(n).second)
            throw std::invalid_argument("extend_symmetry: cycle repeats '" + n.id + "'");
    }
    if (s.degree % static_cast<int>(cycle.size()) != 0)
        throw std::invalid_argument("extend_symmetry: cycle length does not divide degree");
    if (cycle.size() == 1) return s;  // identity entry, nothing to add
    std::map<Name, Name> m = s.perm.mapping();
    for (std::size_t i = 0; i < cycle.size(); ++i)
        m.emplace(cycle[i], cycle[(i + 1) % cycle.size()]);
    return {Substitution{std::move(m)}, s.degree};
}

Substitution parse_permutation(const std::string& text) {
    std::map<Name, Name> m;
    std::string token;
    std::istringstream is(text);
    auto strip = [](std::string s) {
        auto b = s.find_first_not_of(" \t");
        auto e = s.find_last_not_of(" \t");
        if (b == std::string::npos) return std::string{};
        return s.substr(b, e - b + 1);
    };
    while (std::getline(is, token, ',')) {
        token = strip(token);
        if (token.empty()) continue;
        auto gt = token.find('>');
        if (gt == std::string::npos)
            throw std::invalid_argument("permutation entry '" + token + "' lacks '>'");
        std::string from = strip(token.substr(0, gt));
        std::string to = strip(token.substr(gt + 1));
        if (!valid_name_token(from) || !valid_name_token(to))
            throw std::invalid_argument("bad name in permutation entry '" + token + "'");
        if (m.count(Name{from}))
            throw std::invalid_argument("permutation maps '" + from + "' twice");
        m.emplace(Name{from}, Name{to});
    }
    return Substitution{std::move(m)};
}

std::string to_string(const Substitution& s) {
    std::string out;
    for (const auto& [k, v] : s.mapping()) {
        if (!out.empty()) out += ",";
        out += k.id + ">" + v.id;
    }
    return out.empty() ? "id" : out;
}

NameSet Label::names() const {
    NameSet out;
    if (is_tau()) return out;
    out.insert(subject);
    if (!object.is_unit()) out.insert(object);
    return out;
}

NameSet Label::binding() const {
    NameSet out;
    if (kind == Kind::BoundOutput && !object.is_unit()) out.insert(object);
    return out;
}

std::string to_string(const Label& l) {
    switch (l.kind) {
        case Label::Kind::Tau:
            return "tau";
        case Label::Kind::FreeInput:
            return l.object.is_unit() ? l.subject.id + "?" : l.subject.id + "?" + l.object.id;
        case Label::Kind::FreeOutput:
            return l.object.is_unit() ? l.subject.id + "!" : l.subject.id + "!" + l.object.id;
        case Label::Kind::BoundOutput:
            return l.subject.id + "!(" + l.object.id + ")";
    }
    return "?";
}

}  // namespace pisym
