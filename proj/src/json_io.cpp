#include "scs/json_io.hpp"

#include <algorithm>

#include "scs/notation.hpp"

namespace scs::json_io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error("InvalidDocument", what); }

const json& member(const json& doc, const char* key, const char* ctx) {
    if (!doc.is_object()) bad(std::string(ctx) + " must be an object");
    auto it = doc.find(key);
    if (it == doc.end()) bad(std::string(ctx) + " is missing '" + key + "'");
    return *it;
}

std::string str(const json& doc, const char* key, const char* ctx) {
    const auto& v = member(doc, key, ctx);
    if (!v.is_string()) bad(std::string(ctx) + "." + key + " must be a string");
    return v.get<std::string>();
}

std::string opt_str(const json& doc, const char* key, const std::string& fallback = {}) {
    auto it = doc.find(key);
    if (it == doc.end() || it->is_null()) return fallback;
    if (!it->is_string()) bad(std::string(key) + " must be a string");
    return it->get<std::string>();
}

std::int64_t integer(const json& doc, const char* key, const char* ctx) {
    const auto& v = member(doc, key, ctx);
    if (!v.is_number_integer()) bad(std::string(ctx) + "." + key + " must be an integer");
    return v.get<std::int64_t>();
}

std::vector<std::string> str_list(const json& doc, const char* key, const char* ctx,
                                  bool required = true) {
    auto it = doc.find(key);
    if (it == doc.end()) {
        if (required) bad(std::string(ctx) + " is missing '" + key + "'");
        return {};
    }
    if (!it->is_array()) bad(std::string(ctx) + "." + key + " must be an array");
    std::vector<std::string> out;
    for (const auto& v : *it) {
        if (!v.is_string()) bad(std::string(ctx) + "." + key + " must hold strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

const json& array(const json& doc, const char* key, const char* ctx) {
    const auto& v = member(doc, key, ctx);
    if (!v.is_array()) bad(std::string(ctx) + "." + key + " must be an array");
    return v;
}

}  // namespace

json to_json(const Alignment& a) { return {{"scheme", a.scheme}, {"external_ref", a.external_ref}}; }

json to_json(const Ontology& ont) {
    json concepts = json::array();
    for (const auto& c : ont.concept_types())
        concepts.push_back({{"id", c.id}, {"label", c.label}, {"parent_ids", c.parent_ids}});
    json relations = json::array();
    for (const auto& r : ont.relation_types())
        relations.push_back({{"id", r.id},
                             {"label", r.label},
                             {"parent_ids", r.parent_ids},
                             {"signature",
                              {{"source", r.signature.source}, {"target", r.signature.target}}}});
    json individuals = json::array();
    for (const auto& i : ont.individuals()) {
        json aligns = json::array();
        for (const auto& a : i.alignments) aligns.push_back(to_json(a));
        individuals.push_back({{"marker", i.marker},
                               {"label", i.label},
                               {"concept_ids", i.concept_ids},
                               {"alignments", aligns}});
    }
    return {{"concept_types", concepts},
            {"relation_types", relations},
            {"individuals", individuals},
            {"root_id", ont.root_id()}};
}

Ontology ontology_from_json(const json& doc) {
    std::vector<ConceptType> concepts;
    for (const auto& c : array(doc, "concept_types", "ontology"))
        concepts.push_back({str(c, "id", "concept type"), opt_str(c, "label", str(c, "id", "")),
                            str_list(c, "parent_ids", "concept type", false)});
    std::vector<RelationType> relations;
    for (const auto& r : array(doc, "relation_types", "ontology")) {
        const auto& sig = member(r, "signature", "relation type");
        relations.push_back({str(r, "id", "relation type"), opt_str(r, "label", str(r, "id", "")),
                             str_list(r, "parent_ids", "relation type", false),
                             {str(sig, "source", "signature"), str(sig, "target", "signature")}});
    }
    std::vector<Individual> individuals;
    for (const auto& i : array(doc, "individuals", "ontology")) {
        Individual ind{str(i, "marker", "individual"), opt_str(i, "label", str(i, "marker", "")),
                       str_list(i, "concept_ids", "individual"), {}};
        if (auto it = i.find("alignments"); it != i.end()) {
            if (!it->is_array()) bad("individual.alignments must be an array");
            for (const auto& a : *it)
                ind.alignments.push_back(
                    {str(a, "scheme", "alignment"), str(a, "external_ref", "alignment")});
        }
        individuals.push_back(std::move(ind));
    }
    return Ontology::build(std::move(concepts), std::move(relations), std::move(individuals),
                           str(doc, "root_id", "ontology"));
}

json to_json(const Referent& r) {
    json out = {{"kind", to_string(r.kind)}};
    if (r.kind != Referent::Kind::generic) out["value"] = r.value;
    return out;
}

Referent referent_from_json(const json& doc) {
    auto kind = referent_kind_from_string(str(doc, "kind", "referent"));
    Referent r{kind, {}};
    if (kind != Referent::Kind::generic) {
        r.value = str(doc, "value", "referent");
        if (r.value.empty()) bad("referent value must be non-empty");
    }
    return r;
}

json to_json(const ConceptualGraph& g) {
    json nodes = json::array();
    for (const auto& [_, n] : g.nodes())
        nodes.push_back({{"node_id", n.node_id}, {"type_id", n.type_id},
                         {"referent", to_json(n.referent)}});
    json edges = json::array();
    for (const auto& [_, e] : g.edges())
        edges.push_back({{"edge_id", e.edge_id}, {"rel_id", e.rel_id}, {"source", e.source},
                         {"target", e.target}});
    return {{"nodes", nodes}, {"edges", edges}};
}

ConceptualGraph graph_from_json(const json& doc) {
    ConceptualGraph g;
    for (const auto& n : array(doc, "nodes", "graph"))
        g.add_node(str(n, "node_id", "node"), str(n, "type_id", "node"),
                   n.contains("referent") ? referent_from_json(n.at("referent"))
                                          : Referent::generic());
    if (doc.contains("edges"))
        for (const auto& e : array(doc, "edges", "graph"))
            g.add_edge(str(e, "edge_id", "edge"), str(e, "rel_id", "edge"),
                       str(e, "source", "edge"), str(e, "target", "edge"));
    return g;
}

ConceptualGraph graph_from_json_or_text(const json& doc) {
    if (doc.is_string()) return parse_graph(doc.get<std::string>());
    return graph_from_json(doc);
}

json to_json(const ModelTemplate& m) {
    return {{"id", m.id}, {"label", m.label}, {"head_node", m.head_node}, {"graph", to_json(m.graph)}};
}

ModelTemplate model_from_json(const json& doc) {
    ModelTemplate m;
    m.id = str(doc, "id", "model");
    m.label = opt_str(doc, "label", m.id);
    m.head_node = str(doc, "head_node", "model");
    if (doc.contains("graph")) {
        m.graph = graph_from_json(doc.at("graph"));
    } else if (doc.contains("graph_text")) {
        m.graph = parse_graph(str(doc, "graph_text", "model"));
        if (!m.graph.find_node(m.head_node)) {
            for (const auto& [id, n] : m.graph.nodes()) {
                if (n.referent.kind == Referent::Kind::variable && n.referent.value == m.head_node) {
                    m.head_node = id;
                    break;
                }
            }
        }
    } else {
        bad("model '" + m.id + "' needs 'graph' or 'graph_text'");
    }
    return m;
}

json to_json(const FormSchema& s) {
    json fields = json::array();
    for (const auto& f : s.fields) {
        json field = {{"relation_id", f.relation_id},
                      {"relation_label", f.relation_label},
                      {"target_type_id", f.target_type_id},
                      {"required", f.required}};
        if (f.value_domain)
            field["value_domain"] = *f.value_domain;
        else
            field["value_domain"] = "free";
        fields.push_back(std::move(field));
    }
    return {{"model_id", s.model_id}, {"fields", fields}};
}

json to_json(const MediaResource& m) {
    return {{"id", m.id}, {"title", m.title}, {"uri", m.uri}, {"duration_ms", m.duration_ms}};
}

json to_json(const Stratum& s) {
    return {{"id", s.id}, {"media_id", s.media_id}, {"kind", to_string(s.kind)}};
}

json to_json(const Segment& s) {
    return {{"id", s.id},
            {"stratum_id", s.stratum_id},
            {"start_ms", s.start_ms},
            {"end_ms", s.end_ms},
            {"model_id", s.model_id},
            {"annotation", to_json(s.annotation)},
            {"version", s.version}};
}

Segment segment_from_json(const json& doc) {
    Segment s;
    s.id = str(doc, "id", "segment");
    s.stratum_id = str(doc, "stratum_id", "segment");
    s.start_ms = integer(doc, "start_ms", "segment");
    s.end_ms = integer(doc, "end_ms", "segment");
    s.model_id = str(doc, "model_id", "segment");
    if (doc.contains("annotation"))
        s.annotation = graph_from_json_or_text(doc.at("annotation"));
    else if (doc.contains("annotation_text"))
        s.annotation = parse_graph(str(doc, "annotation_text", "segment"));
    else
        bad("segment '" + s.id + "' needs 'annotation' or 'annotation_text'");
    s.version = doc.contains("version") ? integer(doc, "version", "segment") : 1;
    return s;
}

json to_json(const Corpus& c) {
    auto sorted = [](auto items) {
        std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
        json out = json::array();
        for (const auto& x : items) out.push_back(to_json(x));
        return out;
    };
    json models = json::array();
    for (const auto& m : c.model_library) models.push_back(m.id);
    std::sort(models.begin(), models.end());
    return {{"id", c.id},
            {"media", sorted(c.media)},
            {"strata", sorted(c.strata)},
            {"segments", sorted(c.segments)},
            {"models", models}};
}

Corpus corpus_from_json(const json& doc, const std::vector<ModelTemplate>& library) {
    Corpus c;
    c.id = opt_str(doc, "id", "main");
    for (const auto& m : array(doc, "media", "corpus"))
        c.media.push_back({str(m, "id", "media"), opt_str(m, "title"), opt_str(m, "uri"),
                           integer(m, "duration_ms", "media")});
    for (const auto& s : array(doc, "strata", "corpus"))
        c.strata.push_back({str(s, "id", "stratum"), str(s, "media_id", "stratum"),
                            stratum_kind_from_string(str(s, "kind", "stratum"))});
    for (const auto& s : array(doc, "segments", "corpus")) c.segments.push_back(segment_from_json(s));
    if (doc.contains("models")) {
        for (const auto& m : array(doc, "models", "corpus")) {
            if (m.is_string()) {
                auto id = m.get<std::string>();
                auto it = std::find_if(library.begin(), library.end(),
                                       [&](const ModelTemplate& t) { return t.id == id; });
                if (it == library.end())
                    throw Error("UnknownModel", "corpus lists unknown model '" + id + "'", id);
                c.model_library.push_back(*it);
            } else {
                c.model_library.push_back(model_from_json(m));
            }
        }
    } else {
        c.model_library = library;
    }
    return c;
}

TypeDefinitions definitions_from_json(const json& doc) {
    const json& list = doc.is_array() ? doc : array(doc, "definitions", "definitions");
    TypeDefinitions defs;
    for (const auto& d : list) {
        TypeDefinition def;
        def.defined_type = str(d, "defined_type", "definition");
        def.parameter = str(d, "parameter", "definition");
        if (d.contains("body")) {
            def.body = graph_from_json_or_text(d.at("body"));
        } else {
            def.body = parse_graph(str(d, "body_text", "definition"));
        }
        if (!def.body.find_node(def.parameter)) {
            for (const auto& [id, n] : def.body.nodes())
                if (n.referent.kind == Referent::Kind::variable && n.referent.value == def.parameter) {
                    def.parameter = id;
                    break;
                }
        }
        defs.push_back(std::move(def));
    }
    return defs;
}

json to_json(const TypeDefinition& d) {
    return {{"defined_type", d.defined_type}, {"parameter", d.parameter}, {"body", to_json(d.body)}};
}

json to_json(const Transition& t) {
    return {{"from", t.from}, {"to", t.to}, {"condition", t.condition}};
}

json to_json(const Scenario& s) {
    json steps = json::array();
    for (const auto& st : s.steps)
        steps.push_back({{"id", st.id}, {"label", st.label}, {"kind", st.kind},
                         {"requirement", to_json(st.requirement)}});
    json transitions = json::array();
    for (const auto& t : s.transitions) transitions.push_back(to_json(t));
    return {{"id", s.id},       {"label", s.label},          {"steps", steps},
            {"transitions", transitions}, {"start_id", s.start_id}, {"final_ids", s.final_ids}};
}

Scenario scenario_from_json(const json& doc) {
    Scenario s;
    s.id = str(doc, "id", "scenario");
    s.label = opt_str(doc, "label", s.id);
    for (const auto& st : array(doc, "steps", "scenario")) {
        Step step{str(st, "id", "step"), opt_str(st, "label"), opt_str(st, "kind"), {}};
        if (st.contains("requirement"))
            step.requirement = graph_from_json_or_text(st.at("requirement"));
        else if (st.contains("requirement_text"))
            step.requirement = parse_graph(str(st, "requirement_text", "step"));
        s.steps.push_back(std::move(step));
    }
    for (const auto& t : array(doc, "transitions", "scenario")) {
        auto cond = str_list(t, "condition", "transition", false);
        s.transitions.push_back(
            {str(t, "from", "transition"), str(t, "to", "transition"), {cond.begin(), cond.end()}});
    }
    s.start_id = str(doc, "start_id", "scenario");
    auto finals = str_list(doc, "final_ids", "scenario");
    s.final_ids = {finals.begin(), finals.end()};
    return s;
}

json to_json(const PublicationManifest& m) {
    json steps = json::array();
    for (const auto& st : m.steps) {
        json segs = json::array();
        for (const auto& e : st.segments)
            segs.push_back({{"segment_id", e.segment_id},
                            {"media_id", e.media_id},
                            {"start_ms", e.start_ms},
                            {"end_ms", e.end_ms},
                            {"match_score", e.match_score}});
        json links = json::array();
        for (const auto& a : st.links) links.push_back(to_json(a));
        steps.push_back({{"step_id", st.step_id},
                         {"label", st.label},
                         {"requirement", st.requirement},
                         {"segments", segs},
                         {"links", links}});
    }
    json transitions = json::array();
    for (const auto& t : m.transitions) transitions.push_back(to_json(t));
    json out = {{"scenario_id", m.scenario_id},
                {"mode", to_string(m.mode)},
                {"steps", steps},
                {"transitions", transitions},
                {"start_id", m.start_id},
                {"final_ids", m.final_ids},
                {"warnings", m.warnings}};
    if (m.digest) out["digest"] = *m.digest;
    return out;
}

PublicationManifest manifest_from_json(const json& doc) {
    PublicationManifest m;
    m.scenario_id = str(doc, "scenario_id", "manifest");
    m.mode = publication_mode_from_string(str(doc, "mode", "manifest"));
    for (const auto& st : array(doc, "steps", "manifest")) {
        ManifestStep step{str(st, "step_id", "step"), opt_str(st, "label"),
                          opt_str(st, "requirement"), {}, {}};
        for (const auto& e : array(st, "segments", "step"))
            step.segments.push_back({str(e, "segment_id", "entry"), str(e, "media_id", "entry"),
                                     integer(e, "start_ms", "entry"), integer(e, "end_ms", "entry"),
                                     static_cast<std::size_t>(integer(e, "match_score", "entry"))});
        for (const auto& a : array(st, "links", "step"))
            step.links.push_back({str(a, "scheme", "link"), str(a, "external_ref", "link")});
        m.steps.push_back(std::move(step));
    }
    if (doc.contains("transitions"))
        for (const auto& t : array(doc, "transitions", "manifest")) {
            auto cond = str_list(t, "condition", "transition", false);
            m.transitions.push_back({str(t, "from", "transition"), str(t, "to", "transition"),
                                     {cond.begin(), cond.end()}});
        }
    m.start_id = opt_str(doc, "start_id");
    auto finals = str_list(doc, "final_ids", "manifest", false);
    m.final_ids = {finals.begin(), finals.end()};
    m.warnings = str_list(doc, "warnings", "manifest", false);
    if (doc.contains("digest")) m.digest = str(doc, "digest", "manifest");
    return m;
}

json to_json(const Report& report) {
    json out = json::array();
    for (const auto& i : report)
        out.push_back({{"code", i.code}, {"subject", i.subject}, {"message", i.message}});
    return out;
}

json to_json(const StepMatch& m, const Corpus& corpus) {
    const auto* st = corpus.find_stratum(m.segment.stratum_id);
    return {{"segment_id", m.segment.id},
            {"media_id", st ? st->media_id : std::string{}},
            {"start_ms", m.segment.start_ms},
            {"end_ms", m.segment.end_ms},
            {"score", m.score}};
}

}  // namespace scs::json_io
