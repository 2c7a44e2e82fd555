#pragma once

#include <set>
#include <string>
#include <vector>

namespace pisym {

/// Channel / datum identifier. Plain value type; ordering is lexicographic so
/// name sets and canonical encodings are deterministic.
struct Name {
    std::string id;

    Name() = default;
    explicit Name(std::string s) : id(std::move(s)) {}
    Name(const char* s) : id(s) {}

    bool operator==(const Name&) const = default;
    auto operator<=>(const Name&) const = default;

    /// Reserved datum for prefixes that carry no payload ("x!" / "x?()").
    /// It is invisible to the name discipline: never free, never bound,
    /// never renamed.
    static const Name& unit();
    bool is_unit() const { return id == "_unit"; }
};

using NameSet = std::set<Name>;
using NameSeq = std::vector<Name>;

inline const Name& Name::unit() {
    static const Name u{"_unit"};
    return u;
}

/// True for tokens the parser accepts: identifier over [A-Za-z0-9_'] not
/// starting with a digit, or a purely numeric token (numerals act as names).
bool valid_name_token(const std::string& s);

/// Deterministic fresh-name source. Candidates for base b are b', b'2, b'3,...
/// skipping the avoid set; every emitted name joins the avoid set.
class FreshSupply {
public:
    FreshSupply() = default;
    explicit FreshSupply(NameSet avoid) : avoid_(std::move(avoid)) {}

    void avoid(const Name& n) { avoid_.insert(n); }
    void avoid(const NameSet& ns) { avoid_.insert(ns.begin(), ns.end()); }

    Name fresh(const Name& base);

    std::size_t emitted() const { return emitted_; }

private:
    NameSet avoid_;
    std::size_t emitted_ = 0;
};

}  // namespace pisym
