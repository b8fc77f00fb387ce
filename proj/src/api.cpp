#include "scs/api.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "scs/json_io.hpp"

namespace scs {

using nlohmann::json;

namespace {

const std::set<std::string>& not_found_codes() {
    static const std::set<std::string> codes{
        "NotFound",       "UnknownId",    "UnknownModel",       "UnknownScenario",
        "UnknownStep",    "UnknownMedia", "UnknownCorpus",      "UnknownSegment",
        "UnknownMarker",  "UnknownRelation", "UnknownPublication", "UnknownStratum"};
    return codes;
}

std::vector<std::string> split_path(const std::string& path) {
    std::vector<std::string> parts;
    std::size_t i = 0;
    while (i < path.size()) {
        auto j = path.find('/', i);
        if (j == std::string::npos) j = path.size();
        if (j > i) parts.push_back(path.substr(i, j - i));
        i = j + 1;
    }
    return parts;
}

json parse_body(const std::string& body) {
    try {
        return json::parse(body);
    } catch (const json::parse_error& e) {
        throw ApiError(400, "JsonSyntax", std::string("request body is not JSON: ") + e.what());
    }
}

std::int64_t parse_int(const std::string& name, const std::string& text) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || p != text.data() + text.size())
        throw ApiError(400, "InvalidArgument", name + " must be an integer, got '" + text + "'");
    return v;
}

std::optional<std::string> param(const ApiRequest& req, const std::string& name) {
    auto it = req.query.find(name);
    if (it == req.query.end() || it->second.empty()) return std::nullopt;
    return it->second;
}

[[noreturn]] void not_found(const std::string& code, const std::string& what, const std::string& id) {
    throw ApiError(404, code, "unknown " + what + " '" + id + "'");
}

[[noreturn]] void no_route(const ApiRequest& req) {
    throw ApiError(404, "NotFound", "no route for " + req.method + " " + req.path);
}

const ModelTemplate& model_or_404(const WorkspaceSnapshot& s, const std::string& id) {
    const auto* m = s.corpus.find_model(id);
    if (!m) {
        auto it = std::find_if(s.models.begin(), s.models.end(),
                               [&](const ModelTemplate& t) { return t.id == id; });
        if (it == s.models.end()) not_found("UnknownModel", "model", id);
        return *it;
    }
    return *m;
}

const Scenario& scenario_or_404(const WorkspaceSnapshot& s, const std::string& id) {
    auto it = s.scenarios.find(id);
    if (it == s.scenarios.end()) not_found("UnknownScenario", "scenario", id);
    return it->second;
}

void corpus_or_404(const WorkspaceSnapshot& s, const std::string& id) {
    if (s.corpus.id != id) not_found("UnknownCorpus", "corpus", id);
}

json segments_json(const std::vector<Segment>& segs) {
    json out = json::array();
    for (const auto& s : segs) out.push_back(json_io::to_json(s));
    return out;
}

}  // namespace

int status_for(const std::string& code) {
    if (not_found_codes().contains(code)) return 404;
    if (code == "IoError" || code == "DigestFailure") return 500;
    if (code == "VersionConflict" || code == "SegmentExists") return 409;
    return 400;
}

json error_body(const std::string& code, const std::string& message, const json& details) {
    return {{"code", code}, {"message", message}, {"details", details}};
}

Service::Service(Workspace ws) : ws_(std::move(ws)) {
    snap_ = std::make_shared<const WorkspaceSnapshot>(ws_.load());
}

std::shared_ptr<const WorkspaceSnapshot> Service::snapshot() const {
    std::lock_guard lock(snap_mu_);
    return snap_;
}

void Service::swap(std::shared_ptr<const WorkspaceSnapshot> next) {
    std::lock_guard lock(snap_mu_);
    snap_ = std::move(next);
}

void Service::reload() {
    std::lock_guard writer(write_mu_);
    swap(std::make_shared<const WorkspaceSnapshot>(ws_.load()));
}

ApiResponse Service::handle(const ApiRequest& req) {
    ApiResponse res;
    try {
        res.body = dispatch(req, res.status);
    } catch (const ApiError& e) {
        res.status = e.status();
        res.body = error_body(e.code(), e.what(), e.details());
    } catch (const Error& e) {
        res.status = status_for(e.code());
        json details = json::object();
        if (!e.subject().empty()) details["subject"] = e.subject();
        res.body = error_body(e.code(), e.what(), details);
    } catch (const std::exception& e) {
        res.status = 500;
        res.body = error_body("InternalError", e.what());
    }
    return res;
}

json Service::dispatch(const ApiRequest& req, int& status) {
    auto parts = split_path(req.path);
    if (parts.size() < 2 || parts[0] != "api") no_route(req);
    const auto& m = req.method;
    const auto n = parts.size();
    const auto& res = parts[1];
    auto snap = snapshot();
    const auto& s = *snap;
    status = 200;

    if (res == "ontology" && n == 2 && m == "GET") return json_io::to_json(s.ontology);

    if (res == "models" && m == "GET") {
        if (n == 2) {
            auto models = s.models;
            std::sort(models.begin(), models.end(),
                      [](const auto& a, const auto& b) { return a.id < b.id; });
            json out = json::array();
            for (const auto& model : models) out.push_back(json_io::to_json(model));
            return out;
        }
        const auto& model = model_or_404(s, parts[2]);
        if (n == 3) return json_io::to_json(model);
        if (n == 4 && parts[3] == "form")
            return json_io::to_json(derive_form_schema(s.ontology, model));
    }

    if (res == "corpora" && n >= 3) {
        corpus_or_404(s, parts[2]);
        if (n == 3 && m == "GET") return json_io::to_json(s.corpus);
        if (n >= 4 && parts[3] == "segments") {
            if (n == 4 && m == "GET") return segments_json(s.corpus.segments);
            if (n == 4 && m == "POST") return write_segment(parts[2], nullptr, req.body, true, status);
            if (n == 5 && m == "GET") {
                const auto* seg = s.corpus.find_segment(parts[4]);
                if (!seg) not_found("UnknownSegment", "segment", parts[4]);
                return json_io::to_json(*seg);
            }
            if (n == 5 && m == "PUT")
                return write_segment(parts[2], &parts[4], req.body, false, status);
        }
    }

    if (res == "segments" && n == 2 && m == "GET") {
        SegmentFilter f;
        f.concept_type = param(req, "concept");
        f.marker = param(req, "marker");
        f.relation = param(req, "relation");
        f.model = param(req, "model");
        if (auto k = param(req, "stratum")) f.stratum_kind = stratum_kind_from_string(*k);
        auto from = param(req, "from_ms");
        auto to = param(req, "to_ms");
        if (from || to) {
            TimeWindow w;
            if (from) w.from_ms = parse_int("from_ms", *from);
            if (to) w.to_ms = parse_int("to_ms", *to);
            f.time_window = w;
        }
        return segments_json(query_segments(s.corpus, s.ontology, f));
    }

    if (res == "media" && n == 5 && parts[3] == "at" && m == "GET") {
        auto t = parse_int("t_ms", parts[4]);
        json strata = json::object();
        for (const auto& [kind, segs] : segments_at_instant(s.corpus, parts[2], t))
            strata[to_string(kind)] = segments_json(segs);
        return {{"media_id", parts[2]}, {"t_ms", t}, {"strata", strata}};
    }

    if (res == "validate" && n == 2 && m == "POST") {
        auto doc = parse_body(req.body);
        if (!doc.is_object() || !doc.contains("model_id") || !doc.contains("annotation"))
            throw ApiError(400, "InvalidDocument", "body must be {model_id, annotation}");
        const auto& model = model_or_404(s, doc.at("model_id").get<std::string>());
        auto annotation = json_io::graph_from_json_or_text(doc.at("annotation"));
        auto report = validate_annotation(s.ontology, model, annotation);
        return {{"valid", report.empty()}, {"report", json_io::to_json(report)}};
    }

    if (res == "scenarios" && m == "GET") {
        if (n == 2) {
            json out = json::array();
            for (const auto& [_, sc] : s.scenarios) out.push_back(json_io::to_json(sc));
            return out;
        }
        const auto& sc = scenario_or_404(s, parts[2]);
        if (n == 3) return json_io::to_json(sc);
        if (n == 4 && parts[3] == "paths") {
            std::int64_t max_len = 32;
            if (auto v = param(req, "max_len")) max_len = parse_int("max_len", *v);
            if (max_len < 1) throw ApiError(400, "InvalidArgument", "max_len must be at least 1");
            return {{"scenario_id", sc.id},
                    {"max_len", max_len},
                    {"paths", enumerate_paths(sc, static_cast<std::size_t>(max_len))}};
        }
        if (n == 6 && parts[3] == "steps" && parts[5] == "matches") {
            const auto* step = sc.find_step(parts[4]);
            if (!step) not_found("UnknownStep", "step", parts[4]);
            json out = json::array();
            for (const auto& match : match_step(s.ontology, *step, s.corpus))
                out.push_back(json_io::to_json(match, s.corpus));
            return out;
        }
    }

    if (res == "scenarios" && n == 4 && parts[3] == "publish" && m == "POST")
        return publish(parts[2], req);

    if (res == "publications" && n == 3 && m == "GET") {
        auto path = ws_.publication_path(parts[2]);
        if (!std::filesystem::exists(path)) not_found("UnknownPublication", "publication", parts[2]);
        return read_json(path);
    }

    if (res == "reload" && n == 2 && m == "POST") {
        reload();
        return {{"reloaded", true}};
    }

    no_route(req);
}

json Service::write_segment(const std::string& corpus_id, const std::string* path_sid,
                            const std::string& body, bool create_only, int& status) {
    auto doc = parse_body(body);
    if (!doc.is_object()) throw ApiError(400, "InvalidDocument", "segment body must be an object");
    if (path_sid) {
        if (doc.contains("id") && doc.at("id") != *path_sid)
            throw ApiError(400, "InvalidDocument", "segment id in body does not match the URL");
        doc["id"] = *path_sid;
    }
    auto segment = json_io::segment_from_json(doc);

    std::lock_guard writer(write_mu_);
    auto snap = snapshot();
    corpus_or_404(*snap, corpus_id);
    const auto* existing = snap->corpus.find_segment(segment.id);
    if (existing && create_only)
        throw ApiError(409, "SegmentExists", "segment '" + segment.id + "' already exists",
                       {{"current_version", existing->version}});
    if (existing && (!doc.contains("version") || segment.version != existing->version))
        throw ApiError(409, "VersionConflict",
                       "segment '" + segment.id + "' is at version " +
                           std::to_string(existing->version),
                       {{"current_version", existing->version}});
    if (const auto* model = snap->corpus.find_model(segment.model_id)) {
        auto report = validate_annotation(snap->ontology, *model, segment.annotation);
        if (!report.empty())
            throw ApiError(400, report.front().code, report.front().message,
                           {{"report", json_io::to_json(report)}});
    }
    Corpus next_corpus;
    try {
        next_corpus = upsert_segment(snap->ontology, snap->corpus, segment);
    } catch (const Error& e) {
        // References in the body, not the URL, so these are validation failures.
        throw ApiError(e.code() == "IoError" ? 500 : 400, e.code(), e.what(),
                       {{"subject", e.subject()}});
    }
    ws_.save_corpus(next_corpus);
    auto next = std::make_shared<WorkspaceSnapshot>(*snap);
    next->corpus = std::move(next_corpus);
    const auto* stored = next->corpus.find_segment(segment.id);
    json out = json_io::to_json(*stored);
    swap(std::move(next));
    status = existing ? 200 : 201;
    return out;
}

json Service::publish(const std::string& scenario_id, const ApiRequest& req) {
    std::string mode_text = "fixed";
    if (!req.body.empty()) {
        auto doc = parse_body(req.body);
        if (doc.is_object() && doc.contains("mode")) mode_text = doc.at("mode").get<std::string>();
    }
    if (auto v = param(req, "mode")) mode_text = *v;
    auto mode = publication_mode_from_string(mode_text);

    std::lock_guard writer(write_mu_);
    auto snap = snapshot();
    const auto& sc = scenario_or_404(*snap, scenario_id);
    auto manifest = compile_publication(snap->ontology, sc, snap->corpus, mode);
    ws_.write_publication(manifest);
    return json_io::to_json(manifest);
}

}  // namespace scs
