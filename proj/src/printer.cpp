#include "pisym/printer.hpp"

namespace pisym {

namespace {

bool is_nil(const Process& p) {
    return p.kind == Process::Kind::Sum && p.branches.empty();
}

std::string process_str(const ProcessPtr& p);

std::string prefix_str(const Prefix& pre) {
    switch (pre.kind) {
        case Prefix::Kind::Output:
            return pre.payload.is_unit() ? pre.channel.id + "!"
                                         : pre.channel.id + "!" + pre.payload.id;
        case Prefix::Kind::Input:
            return pre.payload.is_unit() ? pre.channel.id + "?()"
                                         : pre.channel.id + "?(" + pre.payload.id + ")";
        case Prefix::Kind::Tau:
            return "tau";
    }
    return "?";
}

// A prefix continuation: tight position, so anything that could swallow or
// rebind the surrounding operators gets parentheses.
std::string cont_str(const ProcessPtr& p) {
    switch (p->kind) {
        case Process::Kind::Success:
            return "check";
        case Process::Kind::Sum:
            if (p->branches.empty()) return "0";
            if (p->branches.size() == 1)
                return prefix_str(p->branches[0].prefix) + " . " +
                       cont_str(p->branches[0].continuation);
            return "(" + process_str(p) + ")";
        case Process::Kind::Par:
        case Process::Kind::Res:
            return "(" + process_str(p) + ")";
        case Process::Kind::Rep:
            return process_str(p);
    }
    return "?";
}

std::string choice_str(const ProcessPtr& p) {
    if (p->kind == Process::Kind::Sum && !p->branches.empty()) {
        std::string out;
        for (std::size_t i = 0; i < p->branches.size(); ++i) {
            if (i) out += " + ";
            out += prefix_str(p->branches[i].prefix) + " . " +
                   cont_str(p->branches[i].continuation);
        }
        return out;
    }
    if (p->kind == Process::Kind::Par) return "(" + process_str(p) + ")";
    return process_str(p);
}

std::string process_str(const ProcessPtr& p) {
    switch (p->kind) {
        case Process::Kind::Success:
            return "check";
        case Process::Kind::Sum:
            if (p->branches.empty()) return "0";
            return choice_str(p);
        case Process::Kind::Par: {
            std::string out;
            for (std::size_t i = 0; i < p->parts.size(); ++i) {
                if (i) out += " | ";
                const auto& q = p->parts[i];
                bool parens = q->kind == Process::Kind::Par || q->kind == Process::Kind::Res;
                out += parens ? "(" + process_str(q) + ")" : choice_str(q);
            }
            return out;
        }
        case Process::Kind::Res:
            return "new " + p->binder.id + " . " + process_str(p->body);
        case Process::Kind::Rep: {
            const auto& b = p->body;
            if (is_nil(*b)) return "!0";
            if (b->kind == Process::Kind::Success) return "!check";
            return "!(" + process_str(b) + ")";
        }
    }
    return "?";
}

}  // namespace

std::string to_string(const ProcessPtr& p) { return process_str(p); }

}  // namespace pisym
