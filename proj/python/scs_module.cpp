// Python bindings. Documents cross the boundary as JSON text; the `scs`
// package decodes them.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "scs/api.hpp"
#include "scs/json_io.hpp"
#include "scs/notation.hpp"
#include "scs/workspace.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

std::string dumps(const json& doc) { return doc.dump(); }

json graph_arg(const std::string& text_or_json) {
    auto first = text_or_json.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text_or_json[first] == '{') return json::parse(text_or_json);
    return text_or_json;
}

scs::WorkspaceSnapshot load(const std::string& root) { return scs::Workspace(root).load(); }

}  // namespace

PYBIND11_MODULE(_scs, m) {
    m.doc() = "Conceptual-graph core: ontology, projection, corpus and storyteller";

    // Raised as ScsError(code, message).
    static py::exception<scs::Error> error(m, "ScsError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const scs::Error& e) {
            PyErr_SetObject(error.ptr(), py::make_tuple(e.code(), e.what()).ptr());
        }
    });

    m.def("parse_graph", [](const std::string& text) { return dumps(scs::json_io::to_json(scs::parse_graph(text))); });
    m.def("serialize_graph", [](const std::string& g) {
        return scs::serialize_graph(scs::json_io::graph_from_json_or_text(graph_arg(g)));
    });
    m.def("canonical_form", [](const std::string& g) {
        return scs::canonical_form(scs::json_io::graph_from_json_or_text(graph_arg(g)));
    });

    m.def("check", [](const std::string& root) {
        auto r = scs::check_workspace(root);
        json entries = json::array();
        for (const auto& e : r.entries)
            entries.push_back({{"file", e.file}, {"location", e.location}, {"code", e.code}, {"message", e.message}});
        return dumps({{"exit_code", r.exit_code}, {"entries", entries}});
    });

    m.def("project", [](const std::string& root, const std::string& pattern, const std::string& target) {
        auto snap = load(root);
        auto p = scs::json_io::graph_from_json_or_text(graph_arg(pattern));
        auto t = scs::json_io::graph_from_json_or_text(graph_arg(target));
        json out = json::array();
        for (const auto& mo : scs::project(snap.ontology, p, t))
            out.push_back({{"nodes", mo.node_map}, {"edges", mo.edge_map}});
        return dumps(out);
    });

    m.def("form", [](const std::string& root, const std::string& model_id) {
        scs::Service service{scs::Workspace(root)};
        auto r = service.handle({"GET", "/api/models/" + model_id + "/form", {}, ""});
        if (r.status != 200) throw scs::Error(r.body["code"], r.body["message"], model_id);
        return dumps(r.body);
    });

    m.def("query", [](const std::string& root, const std::map<std::string, std::string>& filter) {
        scs::Service service{scs::Workspace(root)};
        auto r = service.handle({"GET", "/api/segments", filter, ""});
        if (r.status != 200) throw scs::Error(r.body["code"], r.body["message"]);
        return dumps(r.body);
    });

    m.def("match", [](const std::string& root, const std::string& scenario_id, const std::string& step_id) {
        scs::Service service{scs::Workspace(root)};
        auto r = service.handle({"GET", "/api/scenarios/" + scenario_id + "/steps/" + step_id + "/matches", {}, ""});
        if (r.status != 200) throw scs::Error(r.body["code"], r.body["message"], step_id);
        return dumps(r.body);
    });

    m.def("paths", [](const std::string& root, const std::string& scenario_id, std::size_t max_len) {
        auto snap = load(root);
        auto it = snap.scenarios.find(scenario_id);
        if (it == snap.scenarios.end())
            throw scs::Error("UnknownScenario", "unknown scenario '" + scenario_id + "'", scenario_id);
        return scs::enumerate_paths(it->second, max_len);
    }, py::arg("root"), py::arg("scenario_id"), py::arg("max_len") = 32);

    m.def("publish", [](const std::string& root, const std::string& scenario_id, const std::string& mode) {
        scs::Workspace ws(root);
        if (!ws.load().scenarios.contains(scenario_id))
            throw scs::Error("UnknownScenario", "unknown scenario '" + scenario_id + "'", scenario_id);
        return dumps(scs::json_io::to_json(scs::publish(ws, scenario_id, scs::publication_mode_from_string(mode))));
    }, py::arg("root"), py::arg("scenario_id"), py::arg("mode") = "fixed");
}
