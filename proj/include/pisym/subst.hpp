#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pisym/label.hpp"
#include "pisym/names.hpp"
#include "pisym/syntax.hpp"

namespace pisym {

/// Finite-support simultaneous name substitution. Identity entries are
/// dropped on construction, so support() is exactly the moved names.
class Substitution {
public:
    Substitution() = default;
    explicit Substitution(std::map<Name, Name> mapping);

    static Substitution identity() { return {}; }
    /// Single replacement {replacement/replaced}: occurrences of `replaced`
    /// become `replacement`.
    static Substitution rename(const Name& replaced, const Name& replacement);

    const std::map<Name, Name>& mapping() const { return map_; }
    NameSet support() const;
    NameSet image() const;
    bool is_identity() const { return map_.empty(); }

    Name operator()(const Name& n) const;

    bool operator==(const Substitution&) const = default;

private:
    std::map<Name, Name> map_;
};

/// Capture-avoiding simultaneous application. Binders are renamed to
/// deterministic fresh names (base', base'2, ...) only when a substituted
/// name would otherwise be captured.
ProcessPtr apply(const Substitution& s, const ProcessPtr& p);

/// Rename subject/object of a label; bound-output objects are renamed like
/// anything else (callers track freshness).
Label apply_label(const Substitution& s, const Label& l);

/// Free occurrences of `from` become `to`. The caller must ensure `to` is
/// fresh for p; no capture check is performed.
ProcessPtr rename_free_name(const ProcessPtr& p, const Name& from, const Name& to);

/// A name permutation sigma with sigma^degree = id (degree need not be the
/// order of sigma). The workhorse of symmetric networks.
struct SymmetryRelation {
    Substitution perm;
    int degree = 1;

    static SymmetryRelation identity(int degree) { return {Substitution::identity(), degree}; }

    Name operator()(const Name& n) const { return perm(n); }
    bool operator==(const SymmetryRelation&) const = default;
};

/// sigma composed with itself i times (i >= 0); power(s, 0) is the identity.
Substitution power(const Substitution& s, int i);
inline Substitution power(const SymmetryRelation& s, int i) { return power(s.perm, i); }

struct SymmetryIssue {
    enum class Kind { NotBijective, WrongDegree, TouchesForbiddenName };
    Kind kind;
    std::string detail;
};

/// Checks sigma is a bijection on its support, sigma^degree = id, and the
/// support avoids `forbidden` (typically bound names of the base process).
/// Empty optional means valid.
std::optional<SymmetryIssue> validate_symmetry(const SymmetryRelation& s,
                                               const NameSet& forbidden);

/// Extends sigma with a fresh cycle c0 -> c1 -> ... -> ck-1 -> c0. The cycle
/// must be disjoint from the support, pairwise distinct, and its length must
/// divide the degree. Length-1 cycles are identity entries and are dropped.
SymmetryRelation extend_symmetry(const SymmetryRelation& s, const NameSeq& cycle);

/// Parses the CLI permutation literal "a>b,b>a" (entry a>b maps a to b).
/// Throws std::invalid_argument with a message on malformed input.
Substitution parse_permutation(const std::string& text);

std::string to_string(const Substitution& s);

}  // namespace pisym
