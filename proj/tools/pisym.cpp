#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pisym/corpus.hpp"
#include "pisym/parser.hpp"
#include "pisym/printer.hpp"
#include "pisym/report.hpp"

using namespace pisym;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;       // success / Holds / yes
constexpr int kExitInvalid = 1;  // parse or validation error
constexpr int kExitFails = 2;    // property fails / no, with counterexample
constexpr int kExitUnknown = 3;  // verdict unknown, a bound was hit
constexpr int kExitDefect = 4;   // guaranteed construction failed

std::string slurp(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

ProcessPtr load_term(const std::string& path) { return parse(slurp(path)); }

NameSeq to_names(const std::vector<std::string>& xs) {
    NameSeq out;
    for (const auto& x : xs) {
        if (!valid_name_token(x)) throw std::invalid_argument("invalid name '" + x + "'");
        out.push_back(Name{x});
    }
    return out;
}

NameSet to_name_set(const std::vector<std::string>& xs) {
    NameSet out;
    for (const auto& x : to_names(xs)) out.insert(x);
    return out;
}

void emit(const json& doc) { std::cout << doc.dump(2) << "\n"; }

std::string label_line(const std::vector<Transition>& steps) {
    std::string s;
    for (const auto& st : steps) {
        if (!s.empty()) s += " . ";
        s += to_string(st.label);
    }
    return s.empty() ? "(empty)" : s;
}

// Shared --base/--perm/--degree/--restrict group.
struct NetOpts {
    std::string base_file;
    std::string perm;
    int degree = 2;
    std::vector<std::string> restrict_names;

    void attach(CLI::App* cmd) {
        cmd->add_option("--base", base_file, "term file with the base process")->required();
        cmd->add_option("--perm", perm, "permutation literal, e.g. \"x>y,y>x\" (default id)");
        cmd->add_option("--degree", degree, "number of components")->required();
        cmd->add_option("--restrict", restrict_names, "restricted names (comma separated)")
            ->delimiter(',');
    }

    SymmetricNetwork build() const {
        Substitution p = perm.empty() ? Substitution::identity() : parse_permutation(perm);
        return build_network(load_term(base_file), {p, degree}, to_names(restrict_names));
    }
};

int print_verdict(const Verdict& v, const std::string& command, const json& input, bool as_json) {
    if (as_json) {
        emit(report_envelope(command, input, to_json(v)));
    } else {
        std::cout << "verdict: " << to_string(v.outcome) << "\n";
        if (v.witness) {
            std::cout << "witness: " << label_line(v.witness->steps) << "\n";
            std::cout << "  final: " << to_string(v.witness->last_state()) << "\n";
        }
        if (!v.reason.empty()) std::cout << "reason: " << v.reason << "\n";
    }
    switch (v.outcome) {
        case Verdict::Outcome::Holds: return kExitOk;
        case Verdict::Outcome::Fails: return kExitFails;
        case Verdict::Outcome::Unknown: return kExitUnknown;
    }
    return kExitDefect;
}

void print_symexec(const SymmetricExecution& ex) {
    std::cout << "degree " << ex.initial.degree() << ", " << ex.rounds.size() << " round(s), "
              << (ex.complete ? "complete" : "prefix") << "\n";
    for (std::size_t r = 0; r < ex.rounds.size(); ++r) {
        const Round& round = ex.rounds[r];
        std::cout << "round " << (r + 1) << ": [";
        for (std::size_t i = 0; i < round.labels.size(); ++i)
            std::cout << (i ? ", " : "") << to_string(round.labels[i]);
        std::cout << "]";
        if (!(round.sigma.perm == (r == 0 ? ex.initial.relation.perm
                                          : ex.rounds[r - 1].sigma.perm)))
            std::cout << "  sigma' = " << to_string(round.sigma.perm);
        std::cout << "\n";
    }
    std::cout << "final: " << to_string(ex.final_term()) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"workbench for pi-calculus processes with (separate or mixed) guarded choice"};
    app.require_subcommand(1);
    std::function<int()> run;

    // ---- parse ----
    {
        auto* cmd = app.add_subcommand("parse", "parse a term file and echo its reading");
        auto file = std::make_shared<std::string>();
        auto as_json = std::make_shared<bool>(false);
        cmd->add_option("file", *file, "term file ('-' for stdin)")->required();
        cmd->add_flag("--json", *as_json, "emit a JSON report");
        cmd->callback([&run, file, as_json] {
            run = [file, as_json] {
                ProcessPtr p = load_term(*file);
                if (*as_json) {
                    json body{{"term", to_string(p)},
                              {"canonical", canonical(p).key},
                              {"fragment", fragment_name(classify(p))},
                              {"astSize", ast_size(p)}};
                    emit(report_envelope("parse", {{"file", *file}}, body));
                } else {
                    std::cout << to_string(p) << "\n";
                    std::cout << "canonical: " << canonical(p).key << "\n";
                    std::cout << "fragment: " << fragment_name(classify(p)) << "\n";
                }
                return kExitOk;
            };
        });
    }

    // ---- steps ----
    {
        auto* cmd = app.add_subcommand("steps", "one-step transitions of a term");
        auto file = std::make_shared<std::string>();
        auto universe = std::make_shared<std::vector<std::string>>();
        auto as_json = std::make_shared<bool>(false);
        cmd->add_option("file", *file, "term file")->required();
        cmd->add_option("--universe", *universe, "extra input datums beyond the free names")
            ->delimiter(',');
        cmd->add_flag("--json", *as_json, "emit a JSON report");
        cmd->callback([&run, file, universe, as_json] {
            run = [file, universe, as_json] {
                ProcessPtr p = load_term(*file);
                NameSet uni = free_names(p);
                for (const auto& x : to_name_set(*universe)) uni.insert(x);
                auto ts = transitions(p, uni);
                if (*as_json) {
                    json arr = json::array();
                    for (const auto& t : ts) arr.push_back(to_json(t));
                    emit(report_envelope("steps", {{"file", *file}},
                                         {{"count", ts.size()}, {"steps", arr}}));
                } else {
                    for (const auto& t : ts) {
                        std::cout << to_string(t.label) << "  ->  " << to_string(t.target)
                                  << "   [actors";
                        for (int a : t.actors) std::cout << " " << a;
                        std::cout << "]\n";
                    }
                    std::cout << ts.size() << " transition(s)\n";
                }
                return kExitOk;
            };
        });
    }

    // ---- explore ----
    {
        auto* cmd = app.add_subcommand("explore", "enumerate executions up to a depth");
        auto file = std::make_shared<std::string>();
        auto depth = std::make_shared<int>(32);
        auto observables = std::make_shared<std::vector<std::string>>();
        auto closed = std::make_shared<bool>(false);
        auto as_json = std::make_shared<bool>(false);
        cmd->add_option("file", *file, "term file")->required();
        cmd->add_option("--max-depth", *depth, "step bound per execution");
        cmd->add_option("--observables", *observables,
                        "closed world: keep internal steps and outputs on these channels only")
            ->delimiter(',');
        cmd->add_flag("--closed", *closed, "closed world with no observable channels");
        cmd->add_flag("--json", *as_json, "emit a JSON report");
        cmd->callback([&run, file, depth, observables, closed, as_json] {
            run = [file, depth, observables, closed, as_json] {
                ProcessPtr p = load_term(*file);
                std::optional<NameSet> obs;
                if (*closed || !observables->empty()) obs = to_name_set(*observables);
                auto execs = enumerate_executions(p, *depth, obs);
                if (*as_json) {
                    json arr = json::array();
                    for (const auto& e : execs) arr.push_back(to_json(e));
                    emit(report_envelope("explore",
                                         {{"file", *file}, {"maxDepth", *depth}},
                                         {{"count", execs.size()}, {"executions", arr}}));
                } else {
                    for (std::size_t i = 0; i < execs.size(); ++i) {
                        const Execution& e = execs[i];
                        std::cout << "execution " << (i + 1) << ": " << label_line(e.steps)
                                  << (e.maximal ? "  (maximal)" : "")
                                  << (e.truncated ? "  (truncated)" : "") << "\n";
                        std::cout << "  final: " << to_string(e.last_state()) << "\n";
                    }
                    std::cout << execs.size() << " execution(s)\n";
                }
                return kExitOk;
            };
        });
    }

    // ---- symnet ----
    {
        auto* cmd = app.add_subcommand("symnet", "build a symmetric network and show its term");
        auto opts = std::make_shared<NetOpts>();
        auto as_json = std::make_shared<bool>(false);
        opts->attach(cmd);
        cmd->add_flag("--json", *as_json, "emit a JSON report");
        cmd->callback([&run, opts, as_json] {
            run = [opts, as_json] {
                SymmetricNetwork net = opts->build();
                ProcessPtr d = denoted_term(net);
                if (*as_json) {
                    json restr = json::array();
                    for (const auto& x : net.restriction) restr.push_back(x.id);
                    json body{{"degree", net.degree()},
                              {"base", to_string(net.base)},
                              {"sigma", to_json(net.relation.perm)},
                              {"restriction", restr},
                              {"term", to_string(d)},
                              {"fragment", fragment_name(classify(net.base))}};
                    emit(report_envelope("symnet", {{"base", opts->base_file}}, body));
                } else {
                    std::cout << to_string(d) << "\n";
                }
                return kExitOk;
            };
        });
    }

    // ---- symexec ----
    {
        auto* cmd = app.add_subcommand(
            "symexec", "construct a symmetric execution (separate-choice bases)");
        auto opts = std::make_shared<NetOpts>();
        auto rounds = std::make_shared<int>(64);
        auto as_json = std::make_shared<bool>(false);
        opts->attach(cmd);
        cmd->add_option("--max-rounds", *rounds, "round bound");
        cmd->add_flag("--json", *as_json, "emit a JSON report");
        cmd->callback([&run, opts, rounds, as_json] {
            run = [opts, rounds, as_json] {
                SymmetricNetwork net = opts->build();
                SymmetricExecution ex = symmetric_execution(net, *rounds);
                if (auto err = validate_symmetric_execution(ex))
                    throw ConstructionDefect("constructed execution failed replay: " + *err);
                if (*as_json)
                    emit(report_envelope("symexec", {{"base", opts->base_file}}, to_json(ex)));
                else
                    print_symexec(ex);
                return ex.complete ? kExitOk : kExitUnknown;
            };
        });
    }

    // ---- find-symexec ----
    {
        auto* cmd = app.add_subcommand(
            "find-symexec", "decide whether any symmetric execution exists (mixed bases too)");
        auto opts = std::make_shared<NetOpts>();
        auto rounds = std::make_shared<int>(64);
        auto as_json = std::make_shared<bool>(false);
        opts->attach(cmd);
        cmd->add_option("--max-rounds", *rounds, "round bound");
        cmd->add_flag("--json", *as_json, "emit a JSON report");
        cmd->callback([&run, opts, rounds, as_json] {
            run = [opts, rounds, as_json] {
                SymmetricNetwork net = opts->build();
                SymSearch found = has_symmetric_execution(net, *rounds);
                const char* word = found.verdict == SymSearch::Verdict::Yes ? "yes"
                                   : found.verdict == SymSearch::Verdict::No ? "no"
                                                                             : "unknown";
                if (*as_json) {
                    json body{{"verdict", word}};
                    if (found.witness) body["witness"] = to_json(*found.witness);
                    emit(report_envelope("find-symexec", {{"base", opts->base_file}}, body));
                } else {
                    std::cout << "symmetric execution: " << word << "\n";
                    if (found.witness) print_symexec(*found.witness);
                }
                switch (found.verdict) {
                    case SymSearch::Verdict::Yes: return kExitOk;
                    case SymSearch::Verdict::No: return kExitFails;
                    case SymSearch::Verdict::Unknown: return kExitUnknown;
                }
                return kExitDefect;
            };
        });
    }

    // ---- subdivide ----
    {
        auto* cmd = app.add_subcommand(
            "subdivide", "re-run a saved symmetric execution at a smaller degree");
        auto report_file = std::make_shared<std::string>();
        auto n_prime = std::make_shared<int>(1);
        auto as_json = std::make_shared<bool>(false);
        cmd->add_option("--exec", *report_file, "JSON report from symexec")->required();
        cmd->add_option("--degree-prime", *n_prime, "target degree")->required();
        cmd->add_flag("--json", *as_json, "emit a JSON report");
        cmd->callback([&run, report_file, n_prime, as_json] {
            run = [report_file, n_prime, as_json] {
                SymmetricExecution ex = symexec_from_report(json::parse(slurp(*report_file)));
                SymmetricExecution small = subdivide(ex, *n_prime);
                if (auto err = validate_symmetric_execution(small))
                    throw ConstructionDefect("subdivided execution failed replay: " + *err);
                if (*as_json)
                    emit(report_envelope("subdivide", {{"exec", *report_file}}, to_json(small)));
                else
                    print_symexec(small);
                return kExitOk;
            };
        });
    }

    // ---- check ----
    {
        auto* check = app.add_subcommand("check", "run a property checker");
        check->require_subcommand(1);

        auto* le = check->add_subcommand(
            "leader-election", "every run elects one leader, everyone else a slave");
        auto le_file = std::make_shared<std::string>();
        auto le_leader = std::make_shared<std::string>("leader");
        auto le_slave = std::make_shared<std::string>("slave");
        auto le_count = std::make_shared<int>(2);
        auto le_depth = std::make_shared<int>(24);
        auto le_json = std::make_shared<bool>(false);
        le->add_option("file", *le_file, "term file")->required();
        le->add_option("--leader", *le_leader, "leader announcement channel");
        le->add_option("--slave", *le_slave, "slave announcement channel");
        le->add_option("--components", *le_count, "top-level component count")->required();
        le->add_option("--max-depth", *le_depth, "exploration depth");
        le->add_flag("--json", *le_json, "emit a JSON report");
        le->callback([&run, le_file, le_leader, le_slave, le_count, le_depth, le_json] {
            run = [=] {
                Verdict v = solves_leader_election_bouge(load_term(*le_file), Name{*le_leader},
                                                         Name{*le_slave}, *le_count, *le_depth);
                return print_verdict(v, "check leader-election", {{"file", *le_file}}, *le_json);
            };
        });

        auto* li = check->add_subcommand(
            "leader-indexed", "every run announces one common index on a channel");
        auto li_file = std::make_shared<std::string>();
        auto li_out = std::make_shared<std::string>("out");
        auto li_count = std::make_shared<int>(2);
        auto li_depth = std::make_shared<int>(24);
        auto li_json = std::make_shared<bool>(false);
        li->add_option("file", *li_file, "term file")->required();
        li->add_option("--out", *li_out, "announcement channel");
        li->add_option("--components", *li_count, "top-level component count")->required();
        li->add_option("--max-depth", *li_depth, "exploration depth");
        li->add_flag("--json", *li_json, "emit a JSON report");
        li->callback([&run, li_file, li_out, li_count, li_depth, li_json] {
            run = [=] {
                Verdict v = solves_leader_election_indexed(load_term(*li_file), Name{*li_out},
                                                           *li_count, *li_depth);
                return print_verdict(v, "check leader-indexed", {{"file", *li_file}}, *li_json);
            };
        });

        auto* ms = check->add_subcommand(
            "must-succeed", "every internal run reaches an unguarded success marker");
        auto ms_file = std::make_shared<std::string>();
        auto ms_depth = std::make_shared<int>(24);
        auto ms_json = std::make_shared<bool>(false);
        ms->add_option("file", *ms_file, "term file")->required();
        ms->add_option("--max-depth", *ms_depth, "exploration depth");
        ms->add_flag("--json", *ms_json, "emit a JSON report");
        ms->callback([&run, ms_file, ms_depth, ms_json] {
            run = [=] {
                Verdict v = must_succeed(load_term(*ms_file), *ms_depth);
                return print_verdict(v, "check must-succeed", {{"file", *ms_file}}, *ms_json);
            };
        });

        auto* cs = check->add_subcommand("can-step", "does the term have any step at all?");
        auto cs_file = std::make_shared<std::string>();
        auto cs_mode = std::make_shared<std::string>("tau");
        auto cs_json = std::make_shared<bool>(false);
        cs->add_option("file", *cs_file, "term file")->required();
        cs->add_option("--mode", *cs_mode, "tau: internal steps only; any: all labels")
            ->check(CLI::IsMember({"tau", "any"}));
        cs->add_flag("--json", *cs_json, "emit a JSON report");
        cs->callback([&run, cs_file, cs_mode, cs_json] {
            run = [=] {
                StepMode mode = *cs_mode == "any" ? StepMode::AnyLabel : StepMode::TauOnly;
                bool yes = can_step(load_term(*cs_file), mode);
                if (*cs_json)
                    emit(report_envelope("check can-step",
                                         {{"file", *cs_file}, {"mode", *cs_mode}},
                                         {{"canStep", yes}}));
                else
                    std::cout << (yes ? "yes" : "no") << "\n";
                return yes ? kExitOk : kExitFails;
            };
        });
    }

    // ---- confluence ----
    {
        auto* cmd = app.add_subcommand(
            "confluence", "check that available inputs and outputs commute");
        auto file = std::make_shared<std::string>();
        auto universe = std::make_shared<std::vector<std::string>>();
        auto allow_mixed = std::make_shared<bool>(false);
        auto as_json = std::make_shared<bool>(false);
        cmd->add_option("file", *file, "term file")->required();
        cmd->add_option("--universe", *universe, "extra input datums beyond the free names")
            ->delimiter(',');
        cmd->add_flag("--allow-mixed", *allow_mixed,
                      "lift the separate-choice precondition (to exhibit failures)");
        cmd->add_flag("--json", *as_json, "emit a JSON report");
        cmd->callback([&run, file, universe, allow_mixed, as_json] {
            run = [file, universe, allow_mixed, as_json] {
                ProcessPtr p = load_term(*file);
                ConfluenceOutcome c =
                    check_local_confluence(p, to_name_set(*universe), !*allow_mixed);
                if (*as_json) {
                    emit(report_envelope("confluence", {{"file", *file}}, to_json(c)));
                } else if (c.holds) {
                    std::cout << "holds\n";
                } else {
                    std::cout << "counterexample: " << to_string(c.output) << " vs "
                              << to_string(c.input) << " from " << to_string(c.state) << "\n"
                              << "  " << c.stage << "\n";
                }
                return c.holds ? kExitOk : kExitFails;
            };
        });
    }

    // ---- verify-paper ----
    {
        auto* cmd = app.add_subcommand(
            "verify-paper", "run the built-in verification corpus and print a table");
        auto serial = std::make_shared<bool>(false);
        auto as_json = std::make_shared<bool>(false);
        cmd->add_flag("--serial", *serial, "disable the parallel batch lane");
        cmd->add_flag("--json", *as_json, "emit a JSON report");
        cmd->callback([&run, serial, as_json] {
            run = [serial, as_json] {
                auto results = run_acceptance(!*serial);
                int failed = 0;
                if (*as_json) {
                    json arr = json::array();
                    for (const auto& r : results) {
                        arr.push_back(json{{"id", r.id},
                                           {"title", r.title},
                                           {"pass", r.pass},
                                           {"detail", r.detail}});
                        if (!r.pass) ++failed;
                    }
                    emit(report_envelope("verify-paper", {},
                                         {{"criteria", arr}, {"failed", failed}}));
                } else {
                    for (const auto& r : results) {
                        std::printf("criterion %2d: %s — %s%s%s\n", r.id,
                                    r.pass ? "PASS" : "FAIL", r.title.c_str(),
                                    r.detail.empty() ? "" : " — ", r.detail.c_str());
                        if (!r.pass) ++failed;
                    }
                }
                return failed == 0 ? kExitOk : kExitFails;
            };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitInvalid;
    }

    try {
        return run ? run() : kExitInvalid;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const ConstructionDefect& e) {
        std::cerr << "internal defect: " << e.what() << "\n";
        return kExitDefect;
    } catch (const BoundExceeded& e) {
        std::cerr << "bound exceeded: " << e.what() << "\n";
        return kExitUnknown;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const json::exception& e) {
        std::cerr << "report error: " << e.what() << "\n";
        return kExitInvalid;
    }
}
