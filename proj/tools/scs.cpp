// scs: command-line front end over a workspace directory.
#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include "scs/api.hpp"
#include "scs/json_io.hpp"
#include "scs/notation.hpp"
#include "scs/workspace.hpp"

namespace {

using nlohmann::json;

int exit_code_for(const std::string& code) {
    if (code == "IoError" || code == "JsonSyntax" || code == "InvalidDocument" ||
        code == "ParseError")
        return 2;
    return 1;
}

int fail(const scs::Error& e) {
    json details = json::object();
    if (!e.subject().empty()) details["subject"] = e.subject();
    std::cerr << scs::error_body(e.code(), e.what(), details).dump(2) << "\n";
    return exit_code_for(e.code());
}

void print(const json& doc) { std::cout << doc.dump(2) << "\n"; }

std::pair<std::string, int> split_bind(const std::string& bind) {
    auto colon = bind.rfind(':');
    if (colon == std::string::npos) throw scs::Error("InvalidArgument", "bind must be HOST:PORT");
    int port = 0;
    try {
        port = std::stoi(bind.substr(colon + 1));
    } catch (const std::exception&) {
        throw scs::Error("InvalidArgument", "invalid port in '" + bind + "'");
    }
    return {bind.substr(0, colon), port};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Semiotic conceptual graph workbench: ontology, corpus and story tools"};
    app.require_subcommand(1);

    std::string workspace = ".";
    if (const char* env = std::getenv("SCS_WORKSPACE"); env && *env) workspace = env;
    app.add_option("-w,--workspace", workspace, "Workspace directory (default: $SCS_WORKSPACE or .)");

    auto* check = app.add_subcommand("check", "Load and cross-validate the whole workspace");

    std::string fmt_file;
    bool fmt_stdout = false;
    auto* fmt = app.add_subcommand("fmt", "Rewrite a notation file in canonical form");
    fmt->add_option("file", fmt_file)->required();
    fmt->add_flag("--stdout", fmt_stdout, "Print instead of rewriting");

    std::string model_id;
    auto* form = app.add_subcommand("form", "Print the form schema derived from a model");
    form->add_option("model-id", model_id)->required();

    scs::SegmentFilter filter;
    std::string concept_opt, marker_opt, relation_opt, stratum_opt, model_opt;
    std::optional<std::int64_t> from_ms, to_ms;
    auto* query = app.add_subcommand("query", "List segments matching every given criterion");
    query->add_option("--concept", concept_opt);
    query->add_option("--marker", marker_opt);
    query->add_option("--relation", relation_opt);
    query->add_option("--stratum", stratum_opt);
    query->add_option("--from-ms", from_ms);
    query->add_option("--to-ms", to_ms);
    query->add_option("--model", model_opt);

    std::string scenario_id, step_id;
    auto* match = app.add_subcommand("match", "Rank segments for a scenario step");
    match->add_option("scenario-id", scenario_id)->required();
    match->add_option("step-id", step_id)->required();

    std::size_t max_len = 32;
    auto* paths = app.add_subcommand("paths", "Enumerate story paths of a scenario");
    paths->add_option("scenario-id", scenario_id)->required();
    paths->add_option("--max-len", max_len)->check(CLI::PositiveNumber);

    std::string mode = "fixed";
    auto* publish = app.add_subcommand("publish", "Compile a scenario into publications/");
    publish->add_option("scenario-id", scenario_id)->required();
    publish->add_option("--mode", mode)->check(CLI::IsMember({"fixed", "open"}));

    std::string bind = "127.0.0.1:8080";
    auto* serve = app.add_subcommand("serve", "Serve the HTTP API");
    serve->add_option("--bind", bind, "HOST:PORT");

    CLI11_PARSE(app, argc, argv);

    scs::Workspace ws(workspace);
    try {
        if (check->parsed()) {
            auto result = scs::check_workspace(workspace);
            for (const auto& e : result.entries)
                std::cout << e.file << (e.location.empty() ? "" : ":" + e.location) << ": "
                          << e.code << ": " << e.message << "\n";
            if (result.exit_code == 0) std::cout << "ok\n";
            return result.exit_code;
        }
        if (fmt->parsed()) {
            auto text = scs::read_file(fmt_file);
            auto out = scs::canonical_form(scs::parse_graph(text)) + "\n";
            if (fmt_stdout)
                std::cout << out;
            else if (out != text)
                scs::atomic_write(fmt_file, out);
            return 0;
        }
        if (serve->parsed()) {
            auto [host, port] = split_bind(bind);
            scs::Service service(ws);
            scs::HttpServer server(service);
            int bound = server.bind(host, port);
            std::cerr << "listening on " << host << ":" << bound << "\n";
            server.listen();
            return 0;
        }

        auto snap = ws.load();
        auto scenario = [&]() -> const scs::Scenario& {
            auto it = snap.scenarios.find(scenario_id);
            if (it == snap.scenarios.end())
                throw scs::Error("UnknownScenario", "unknown scenario '" + scenario_id + "'",
                                 scenario_id);
            return it->second;
        };

        if (form->parsed()) {
            const auto* model = snap.corpus.find_model(model_id);
            if (!model) {
                for (const auto& m : snap.models)
                    if (m.id == model_id) model = &m;
            }
            if (!model) throw scs::Error("UnknownModel", "unknown model '" + model_id + "'", model_id);
            print(scs::json_io::to_json(scs::derive_form_schema(snap.ontology, *model)));
        } else if (query->parsed()) {
            if (!concept_opt.empty()) filter.concept_type = concept_opt;
            if (!marker_opt.empty()) filter.marker = marker_opt;
            if (!relation_opt.empty()) filter.relation = relation_opt;
            if (!model_opt.empty()) filter.model = model_opt;
            if (!stratum_opt.empty()) filter.stratum_kind = scs::stratum_kind_from_string(stratum_opt);
            if (from_ms || to_ms) filter.time_window = scs::TimeWindow{from_ms.value_or(0), to_ms};
            json out = json::array();
            for (const auto& s : scs::query_segments(snap.corpus, snap.ontology, filter))
                out.push_back(scs::json_io::to_json(s));
            print(out);
        } else if (match->parsed()) {
            const auto* step = scenario().find_step(step_id);
            if (!step) throw scs::Error("UnknownStep", "unknown step '" + step_id + "'", step_id);
            json out = json::array();
            for (const auto& m : scs::match_step(snap.ontology, *step, snap.corpus))
                out.push_back(scs::json_io::to_json(m, snap.corpus));
            print(out);
        } else if (paths->parsed()) {
            for (const auto& p : scs::enumerate_paths(scenario(), max_len)) {
                for (std::size_t i = 0; i < p.size(); ++i) std::cout << (i ? " " : "") << p[i];
                std::cout << "\n";
            }
        } else if (publish->parsed()) {
            scenario();
            auto manifest = scs::publish(ws, scenario_id, scs::publication_mode_from_string(mode));
            for (const auto& w : manifest.warnings) std::cerr << "warning: " << w << "\n";
            std::cout << ws.publication_path(scenario_id).string() << "\n";
        }
        return 0;
    } catch (const scs::Error& e) {
        return fail(e);
    } catch (const std::exception& e) {
        std::cerr << scs::error_body("InternalError", e.what()).dump(2) << "\n";
        return 2;
    }
}
