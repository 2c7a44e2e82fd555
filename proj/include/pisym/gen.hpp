#pragma once

#include <random>

#include "pisym/symmetry.hpp"

namespace pisym {

struct GenConfig {
    int max_ast = 12;          // node budget for generated terms
    bool allow_mixed = false;  // permit sums mixing input and output guards
    bool allow_success = false;
    NameSeq pool = {"a", "b", "c", "d"};  // free-name alphabet
};

/// Random process; separate-choice unless cfg.allow_mixed. Binders are drawn
/// from a z-pool disjoint from cfg.pool, pairwise distinct, so generated
/// terms are well-formed and any pool permutation avoids the binders.
ProcessPtr random_process(std::mt19937_64& rng, const GenConfig& cfg = {});

/// Random relation with perm^degree = id: disjoint cycles over pool names
/// outside `forbidden`, cycle lengths dividing the degree.
SymmetryRelation random_symmetry(std::mt19937_64& rng, int degree, const NameSeq& pool,
                                 const NameSet& forbidden);

/// Random degree-n network: separate-choice base, valid relation, and a
/// restriction assembled from relation orbits inside the base's free names.
SymmetricNetwork random_network(std::mt19937_64& rng, int degree, const GenConfig& cfg = {});

}  // namespace pisym
