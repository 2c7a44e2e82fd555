#include "pisym/gen.hpp"

#include <algorithm>
#include <map>

namespace pisym {

namespace {

struct TermGen {
    std::mt19937_64& rng;
    const GenConfig& cfg;
    int binder_counter = 0;

    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }
    bool chance(int percent) { return pick(100) < percent; }

    Name fresh_binder() { return Name("z" + std::to_string(binder_counter++)); }

    Name channel(const NameSeq& scope) { return scope[pick(static_cast<int>(scope.size()))]; }

    Name datum(const NameSeq& scope) {
        if (chance(30)) return Name::unit();
        return scope[pick(static_cast<int>(scope.size()))];
    }

    ProcessPtr leaf() {
        if (cfg.allow_success && chance(25)) return success();
        return nil();
    }

    // polarity: 0 outputs, 1 inputs; tau guards are allowed either way.
    Branch branch(int polarity, int budget, const NameSeq& scope) {
        if (chance(20)) return {{Prefix::Kind::Tau, Name::unit(), Name::unit()},
                                term(budget, scope)};
        if (polarity == 0)
            return {{Prefix::Kind::Output, channel(scope), datum(scope)}, term(budget, scope)};
        Name binder = chance(30) ? Name::unit() : fresh_binder();
        NameSeq inner = scope;
        if (!binder.is_unit()) inner.push_back(binder);
        return {{Prefix::Kind::Input, channel(scope), binder}, term(budget, inner)};
    }

    // Guarantees ast_size(result) <= budget: a sum costs 1 + width branch
    // nodes, a composition or restriction costs 1, and every continuation
    // gets the remainder split evenly.
    ProcessPtr term(int budget, const NameSeq& scope) {
        if (budget <= 2) return leaf();
        int roll = pick(100);
        if (roll < 55) {  // guarded sum
            int width = (chance(30) && budget >= 5) ? 2 : 1;
            std::vector<Branch> branches;
            int polarity = pick(2);
            for (int b = 0; b < width; ++b) {
                int pol = cfg.allow_mixed ? pick(2) : polarity;
                branches.push_back(branch(pol, (budget - 1 - width) / width, scope));
            }
            return sum(std::move(branches));
        }
        if (roll < 75 && budget >= 4) {  // parallel
            int left = 1 + pick(budget - 2);
            return par({term(left, scope), term(budget - 1 - left, scope)});
        }
        if (roll < 90) {  // restriction
            Name b = fresh_binder();
            NameSeq inner = scope;
            inner.push_back(b);
            return res(b, term(budget - 1, inner));
        }
        return leaf();
    }
};

}  // namespace

ProcessPtr random_process(std::mt19937_64& rng, const GenConfig& cfg) {
    TermGen g{rng, cfg};
    ProcessPtr p = g.term(cfg.max_ast, cfg.pool);
    return p;
}

SymmetryRelation random_symmetry(std::mt19937_64& rng, int degree, const NameSeq& pool,
                                 const NameSet& forbidden) {
    NameSeq avail;
    for (const auto& n : pool)
        if (!forbidden.count(n)) avail.push_back(n);
    std::shuffle(avail.begin(), avail.end(), rng);

    std::vector<int> lengths;
    for (int d = 2; d <= degree; ++d)
        if (degree % d == 0) lengths.push_back(d);

    std::map<Name, Name> mapping;
    std::size_t at = 0;
    while (!lengths.empty() && at < avail.size()) {
        int len = lengths[std::uniform_int_distribution<int>(
            0, static_cast<int>(lengths.size()) - 1)(rng)];
        if (at + len > avail.size()) break;
        if (std::uniform_int_distribution<int>(0, 99)(rng) < 35) {
            at += 1;  // leave this name fixed
            continue;
        }
        for (int k = 0; k < len; ++k)
            mapping[avail[at + k]] = avail[at + (k + 1) % len];
        at += len;
    }
    return {Substitution(std::move(mapping)), degree};
}

SymmetricNetwork random_network(std::mt19937_64& rng, int degree, const GenConfig& cfg) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        ProcessPtr base = random_process(rng, cfg);
        SymmetryRelation rel = random_symmetry(rng, degree, cfg.pool, bound_names(base));

        // Restriction: union of relation orbits lying inside fn(base).
        NameSet fn = free_names(base);
        NameSeq restriction;
        NameSet placed;
        for (const auto& n : fn) {
            if (placed.count(n)) continue;
            NameSeq orbit{n};
            placed.insert(n);
            Name cur = rel(n);
            bool inside = true;
            while (!(cur == n)) {
                orbit.push_back(cur);
                placed.insert(cur);
                inside = inside && fn.count(cur) > 0;
                cur = rel(cur);
            }
            if (inside && std::uniform_int_distribution<int>(0, 99)(rng) < 35)
                restriction.insert(restriction.end(), orbit.begin(), orbit.end());
        }
        try {
            return build_network(base, rel, restriction);
        } catch (const std::invalid_argument&) {
            // resample
        }
    }
    throw std::runtime_error("random_network: could not assemble a valid network");
}

}  // namespace pisym
