#pragma once

#include <string>

#include "json.hpp"
#include "pisym/checkers.hpp"

namespace pisym {

/// JSON serialization for traces and verdicts. Every document goes through
/// report_envelope so consumers can key on the schema string.
inline constexpr const char* kReportSchema = "pisym-report/1";

nlohmann::json to_json(const Label& l);
nlohmann::json to_json(const Substitution& s);
nlohmann::json to_json(const Path& p);
nlohmann::json to_json(const Transition& t);
nlohmann::json to_json(const Execution& e);
nlohmann::json to_json(const Round& r);
nlohmann::json to_json(const SymmetricExecution& e);
nlohmann::json to_json(const Verdict& v);
nlohmann::json to_json(const ConfluenceOutcome& c);

nlohmann::json report_envelope(const std::string& command, nlohmann::json input,
                               nlohmann::json body);

/// Inverses for feeding a saved symexec report back in (`subdivide --exec`).
/// Accept either a bare report body or a full envelope; malformed documents
/// raise std::invalid_argument or the json library's own errors.
Label label_from_json(const nlohmann::json& j);
Path path_from_json(const nlohmann::json& j);
Transition transition_from_json(const nlohmann::json& j);
SymmetricExecution symexec_from_report(const nlohmann::json& doc);

}  // namespace pisym
