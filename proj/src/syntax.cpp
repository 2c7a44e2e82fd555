#include "pisym/syntax.hpp"

#include <algorithm>
#include <stdexcept>

namespace pisym {

bool equal(const Process& a, const Process& b) {
    if (&a == &b) return true;
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Process::Kind::Success:
            return true;
        case Process::Kind::Sum: {
            if (a.branches.size() != b.branches.size()) return false;
            for (std::size_t i = 0; i < a.branches.size(); ++i) {
                if (a.branches[i].prefix != b.branches[i].prefix) return false;
                if (!equal(a.branches[i].continuation, b.branches[i].continuation)) return false;
            }
            return true;
        }
        case Process::Kind::Par: {
            if (a.parts.size() != b.parts.size()) return false;
            for (std::size_t i = 0; i < a.parts.size(); ++i)
                if (!equal(a.parts[i], b.parts[i])) return false;
            return true;
        }
        case Process::Kind::Res:
            return a.binder == b.binder && equal(a.body, b.body);
        case Process::Kind::Rep:
            return equal(a.body, b.body);
    }
    return false;
}

bool equal(const ProcessPtr& a, const ProcessPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return equal(*a, *b);
}

ProcessPtr nil() {
    static const ProcessPtr n = std::make_shared<Process>();
    return n;
}

ProcessPtr success() {
    static const ProcessPtr s = [] {
        auto p = std::make_shared<Process>();
        p->kind = Process::Kind::Success;
        return p;
    }();
    return s;
}

ProcessPtr sum(std::vector<Branch> branches) {
    auto p = std::make_shared<Process>();
    p->kind = Process::Kind::Sum;
    p->branches = std::move(branches);
    return p;
}

ProcessPtr prefixed(Prefix pre, ProcessPtr cont) {
    if (!cont) throw std::invalid_argument("prefixed: null continuation");
    return sum({Branch{std::move(pre), std::move(cont)}});
}

ProcessPtr par(std::vector<ProcessPtr> parts) {
    for (const auto& q : parts)
        if (!q) throw std::invalid_argument("par: null component");
    if (parts.empty()) return nil();
    if (parts.size() == 1) return parts.front();
    auto p = std::make_shared<Process>();
    p->kind = Process::Kind::Par;
    p->parts = std::move(parts);
    return p;
}

ProcessPtr res(Name binder, ProcessPtr body) {
    if (!body) throw std::invalid_argument("res: null body");
    auto p = std::make_shared<Process>();
    p->kind = Process::Kind::Res;
    p->binder = std::move(binder);
    p->body = std::move(body);
    return p;
}

ProcessPtr res(const NameSeq& binders, ProcessPtr body) {
    ProcessPtr acc = std::move(body);
    for (auto it = binders.rbegin(); it != binders.rend(); ++it)
        acc = res(*it, std::move(acc));
    return acc;
}

ProcessPtr rep(ProcessPtr body) {
    if (!body) throw std::invalid_argument("rep: null body");
    auto p = std::make_shared<Process>();
    p->kind = Process::Kind::Rep;
    p->body = std::move(body);
    return p;
}

namespace {

void collect_free(const ProcessPtr& p, NameSet bound, NameSet& out) {
    switch (p->kind) {
        case Process::Kind::Success:
            return;
        case Process::Kind::Sum:
            for (const auto& br : p->branches) {
                const Prefix& pre = br.prefix;
                if (pre.kind != Prefix::Kind::Tau) {
                    if (!pre.channel.is_unit() && !bound.count(pre.channel)) out.insert(pre.channel);
                    if (pre.kind == Prefix::Kind::Output && !pre.payload.is_unit() &&
                        !bound.count(pre.payload))
                        out.insert(pre.payload);
                }
                NameSet inner = bound;
                if (pre.kind == Prefix::Kind::Input && !pre.payload.is_unit())
                    inner.insert(pre.payload);
                collect_free(br.continuation, std::move(inner), out);
            }
            return;
        case Process::Kind::Par:
            for (const auto& q : p->parts) collect_free(q, bound, out);
            return;
        case Process::Kind::Res: {
            NameSet inner = bound;
            if (!p->binder.is_unit()) inner.insert(p->binder);
            collect_free(p->body, std::move(inner), out);
            return;
        }
        case Process::Kind::Rep:
            collect_free(p->body, bound, out);
            return;
    }
}

void collect_bound(const ProcessPtr& p, NameSet& out) {
    switch (p->kind) {
        case Process::Kind::Success:
            return;
        case Process::Kind::Sum:
            for (const auto& br : p->branches) {
                if (br.prefix.kind == Prefix::Kind::Input && !br.prefix.payload.is_unit())
                    out.insert(br.prefix.payload);
                collect_bound(br.continuation, out);
            }
            return;
        case Process::Kind::Par:
            for (const auto& q : p->parts) collect_bound(q, out);
            return;
        case Process::Kind::Res:
            if (!p->binder.is_unit()) out.insert(p->binder);
            collect_bound(p->body, out);
            return;
        case Process::Kind::Rep:
            collect_bound(p->body, out);
            return;
    }
}

// Walks binders in preorder, reporting the first duplicate if any.
bool binders_distinct(const ProcessPtr& p, NameSet& seen, Name& dup) {
    switch (p->kind) {
        case Process::Kind::Success:
            return true;
        case Process::Kind::Sum:
            for (const auto& br : p->branches) {
                if (br.prefix.kind == Prefix::Kind::Input && !br.prefix.payload.is_unit()) {
                    if (!seen.insert(br.prefix.payload).second) {
                        dup = br.prefix.payload;
                        return false;
                    }
                }
                if (!binders_distinct(br.continuation, seen, dup)) return false;
            }
            return true;
        case Process::Kind::Par:
            for (const auto& q : p->parts)
                if (!binders_distinct(q, seen, dup)) return false;
            return true;
        case Process::Kind::Res:
            if (!p->binder.is_unit()) {
                if (!seen.insert(p->binder).second) {
                    dup = p->binder;
                    return false;
                }
            }
            return binders_distinct(p->body, seen, dup);
        case Process::Kind::Rep:
            return binders_distinct(p->body, seen, dup);
    }
    return true;
}

}  // namespace

NameSet free_names(const ProcessPtr& p) {
    NameSet out;
    collect_free(p, {}, out);
    return out;
}

NameSet bound_names(const ProcessPtr& p) {
    NameSet out;
    collect_bound(p, out);
    return out;
}

NameSet all_names(const ProcessPtr& p) {
    NameSet out = free_names(p);
    NameSet bn = bound_names(p);
    out.insert(bn.begin(), bn.end());
    return out;
}

WellFormedness well_formed(const ProcessPtr& p) {
    if (!p) return {false, "null process"};
    NameSet seen;
    Name dup;
    if (!binders_distinct(p, seen, dup))
        return {false, "binder '" + dup.id + "' bound more than once"};
    NameSet fn = free_names(p);
    for (const auto& b : seen)
        if (fn.count(b))
            return {false, "name '" + b.id + "' occurs both free and bound"};
    return {};
}

namespace {

void classify_walk(const ProcessPtr& p, bool& mixed, bool& real_choice) {
    switch (p->kind) {
        case Process::Kind::Success:
            return;
        case Process::Kind::Sum: {
            bool has_in = false, has_out = false;
            for (const auto& br : p->branches) {
                if (br.prefix.kind == Prefix::Kind::Input) has_in = true;
                if (br.prefix.kind == Prefix::Kind::Output) has_out = true;
                classify_walk(br.continuation, mixed, real_choice);
            }
            if (has_in && has_out) mixed = true;
            if (p->branches.size() > 1) real_choice = true;
            return;
        }
        case Process::Kind::Par:
            for (const auto& q : p->parts) classify_walk(q, mixed, real_choice);
            return;
        case Process::Kind::Res:
            classify_walk(p->body, mixed, real_choice);
            return;
        case Process::Kind::Rep:
            classify_walk(p->body, mixed, real_choice);
            return;
    }
}

}  // namespace

Fragment classify(const ProcessPtr& p) {
    bool mixed = false, real_choice = false;
    classify_walk(p, mixed, real_choice);
    if (mixed) return Fragment::Mixed;
    if (real_choice) return Fragment::SeparateChoice;
    return Fragment::ChoiceFree;
}

const char* fragment_name(Fragment f) {
    switch (f) {
        case Fragment::ChoiceFree: return "choice-free";
        case Fragment::SeparateChoice: return "separate-choice";
        case Fragment::Mixed: return "mixed-choice";
    }
    return "?";
}

std::size_t ast_size(const ProcessPtr& p) {
    switch (p->kind) {
        case Process::Kind::Success:
            return 1;
        case Process::Kind::Sum: {
            std::size_t n = 1;
            for (const auto& br : p->branches) n += 1 + ast_size(br.continuation);
            return n;
        }
        case Process::Kind::Par: {
            std::size_t n = 1;
            for (const auto& q : p->parts) n += ast_size(q);
            return n;
        }
        case Process::Kind::Res:
            return 1 + ast_size(p->body);
        case Process::Kind::Rep:
            return 1 + ast_size(p->body);
    }
    return 1;
}

}  // namespace pisym
