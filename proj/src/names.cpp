#include "pisym/names.hpp"

#include <cctype>

namespace pisym {

bool valid_name_token(const std::string& s) {
    if (s.empty()) return false;
    bool all_digits = true;
    for (char c : s) {
        bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
        if (!ok) return false;
        if (!std::isdigit(static_cast<unsigned char>(c))) all_digits = false;
    }
    if (all_digits) return true;
    return !std::isdigit(static_cast<unsigned char>(s.front()));
}

Name FreshSupply::fresh(const Name& base) {
    Name candidate{base.id + "'"};
    for (unsigned k = 2; avoid_.count(candidate); ++k)
        candidate = Name{base.id + "'" + std::to_string(k)};
    avoid_.insert(candidate);
    ++emitted_;
    return candidate;
}

}  // namespace pisym
