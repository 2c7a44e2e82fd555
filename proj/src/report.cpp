#include "pisym/report.hpp"

#include "pisym/parser.hpp"
#include "pisym/printer.hpp"

namespace pisym {

using nlohmann::json;

json to_json(const Label& l) {
    json j;
    j["text"] = to_string(l);
    switch (l.kind) {
        case Label::Kind::Tau: j["kind"] = "tau"; break;
        case Label::Kind::FreeInput: j["kind"] = "input"; break;
        case Label::Kind::FreeOutput: j["kind"] = "output"; break;
        case Label::Kind::BoundOutput: j["kind"] = "bound-output"; break;
    }
    if (!l.is_tau()) {
        j["subject"] = l.subject.id;
        if (!l.object.is_unit()) j["object"] = l.object.id;
    }
    return j;
}

json to_json(const Substitution& s) {
    json j = json::object();
    for (const auto& [k, v] : s.mapping()) j[k.id] = v.id;
    return j;
}

json to_json(const Path& p) {
    json arr = json::array();
    for (const auto& e : p) {
        const char* kind = "";
        switch (e.kind) {
            case PathElem::Kind::Part: kind = "part"; break;
            case PathElem::Kind::Body: kind = "body"; break;
            case PathElem::Kind::Rep: kind = "rep"; break;
            case PathElem::Kind::Branch: kind = "branch"; break;
        }
        arr.push_back(json{{"kind", kind}, {"index", e.index}});
    }
    return arr;
}

json to_json(const Transition& t) {
    json j;
    j["label"] = to_json(t.label);
    j["actors"] = t.actors;
    j["source"] = to_string(t.source);
    j["target"] = to_string(t.target);
    j["targetCanonical"] = canonical(t.target).key;
    json d;
    d["pair"] = t.detail.pair;
    d["prefixA"] = to_json(t.detail.prefix_a);
    if (t.detail.pair) {
        d["prefixB"] = to_json(t.detail.prefix_b);
        d["channel"] = t.detail.channel.id;
        d["datum"] = t.detail.datum.id;
        d["extruded"] = t.detail.extruded;
    }
    j["detail"] = std::move(d);
    return j;
}

json to_json(const Execution& e) {
    json j;
    j["initial"] = to_string(e.initial);
    j["maximal"] = e.maximal;
    j["truncated"] = e.truncated;
    json steps = json::array();
    for (const auto& st : e.steps) steps.push_back(to_json(st));
    j["steps"] = std::move(steps);
    j["final"] = to_string(e.last_state());
    return j;
}

json to_json(const Round& r) {
    json j;
    json labels = json::array();
    for (const auto& l : r.labels) labels.push_back(to_string(l));
    j["labels"] = std::move(labels);
    j["sigma"] = to_json(r.sigma.perm);
    json restr = json::array();
    for (const auto& n : r.restriction) restr.push_back(n.id);
    j["restriction"] = std::move(restr);
    j["base"] = to_string(r.base);
    json steps = json::array();
    for (const auto& st : r.steps) steps.push_back(to_json(st));
    j["steps"] = std::move(steps);
    return j;
}

json to_json(const SymmetricExecution& e) {
    json j;
    j["degree"] = e.initial.degree();
    j["base"] = to_string(e.initial.base);
    j["sigma"] = to_json(e.initial.relation.perm);
    json restr = json::array();
    for (const auto& n : e.initial.restriction) restr.push_back(n.id);
    j["restriction"] = std::move(restr);
    j["complete"] = e.complete;
    json rounds = json::array();
    json chain = json::array();
    for (const auto& r : e.rounds) {
        rounds.push_back(to_json(r));
        chain.push_back(to_json(r.sigma.perm));
    }
    j["rounds"] = std::move(rounds);
    j["sigmaChain"] = std::move(chain);
    j["final"] = to_string(e.final_term());
    return j;
}

json to_json(const Verdict& v) {
    json j;
    j["verdict"] = to_string(v.outcome);
    if (v.witness) j["witness"] = to_json(*v.witness);
    if (!v.reason.empty()) j["reason"] = v.reason;
    return j;
}

json to_json(const ConfluenceOutcome& c) {
    json j;
    j["holds"] = c.holds;
    if (!c.holds) {
        j["output"] = to_json(c.output);
        j["input"] = to_json(c.input);
        j["stage"] = c.stage;
        j["state"] = to_string(c.state);
    }
    return j;
}

json report_envelope(const std::string& command, json input, json body) {
    json j;
    j["schema"] = kReportSchema;
    j["command"] = command;
    j["input"] = std::move(input);
    j["report"] = std::move(body);
    return j;
}

Label label_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "tau") return Label::tau();
    Name subject{j.at("subject").get<std::string>()};
    Name object = j.contains("object") ? Name{j.at("object").get<std::string>()} : Name::unit();
    if (kind == "input") return Label::free_input(subject, object);
    if (kind == "output") return Label::free_output(subject, object);
    if (kind == "bound-output") return Label::bound_output(subject, object);
    throw std::invalid_argument("unknown label kind '" + kind + "'");
}

Path path_from_json(const json& j) {
    Path p;
    for (const auto& e : j) {
        const std::string kind = e.at("kind").get<std::string>();
        PathElem elem;
        if (kind == "part") elem.kind = PathElem::Kind::Part;
        else if (kind == "body") elem.kind = PathElem::Kind::Body;
        else if (kind == "rep") elem.kind = PathElem::Kind::Rep;
        else if (kind == "branch") elem.kind = PathElem::Kind::Branch;
        else throw std::invalid_argument("unknown path element kind '" + kind + "'");
        elem.index = e.at("index").get<int>();
        p.push_back(elem);
    }
    return p;
}

Transition transition_from_json(const json& j) {
    Transition t;
    t.label = label_from_json(j.at("label"));
    t.actors = j.at("actors").get<std::vector<int>>();
    t.source = parse_syntax(j.at("source").get<std::string>());
    t.target = parse_syntax(j.at("target").get<std::string>());
    const json& d = j.at("detail");
    t.detail.pair = d.value("pair", false);
    t.detail.prefix_a = path_from_json(d.at("prefixA"));
    if (d.contains("prefixB")) t.detail.prefix_b = path_from_json(d.at("prefixB"));
    if (d.contains("channel")) t.detail.channel = Name{d.at("channel").get<std::string>()};
    if (d.contains("datum")) t.detail.datum = Name{d.at("datum").get<std::string>()};
    t.detail.extruded = d.value("extruded", false);
    return t;
}

SymmetricExecution symexec_from_report(const json& doc) {
    const json& r = doc.contains("schema") ? doc.at("report") : doc;
    SymmetricExecution e;
    const int degree = r.at("degree").get<int>();
    auto names_of = [](const json& arr) {
        NameSeq names;
        for (const auto& s : arr) names.push_back(Name{s.get<std::string>()});
        return names;
    };
    auto subst_of = [](const json& obj) {
        std::map<Name, Name> m;
        for (auto it = obj.begin(); it != obj.end(); ++it)
            m.emplace(Name{it.key()}, Name{it.value().get<std::string>()});
        return Substitution{std::move(m)};
    };
    e.initial = build_network(parse_syntax(r.at("base").get<std::string>()),
                              SymmetryRelation{subst_of(r.at("sigma")), degree},
                              names_of(r.at("restriction")));
    e.complete = r.value("complete", false);
    for (const auto& rj : r.at("rounds")) {
        Round round;
        round.sigma = SymmetryRelation{subst_of(rj.at("sigma")), degree};
        round.restriction = names_of(rj.at("restriction"));
        round.base = parse_syntax(rj.at("base").get<std::string>());
        for (const auto& sj : rj.at("steps")) round.steps.push_back(transition_from_json(sj));
        for (const auto& st : round.steps) round.labels.push_back(st.label);
        e.rounds.push_back(std::move(round));
    }
    return e;
}

}  // namespace pisym
