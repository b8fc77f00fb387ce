#include "scs/corpus.hpp"

#include <algorithm>
#include <set>

#include "scs/projection.hpp"

namespace scs {

const char* to_string(StratumKind kind) {
    switch (kind) {
        case StratumKind::thematic: return "thematic";
        case StratumKind::rhetoric: return "rhetoric";
        case StratumKind::visual: return "visual";
        case StratumKind::acoustic: return "acoustic";
        case StratumKind::other: return "other";
    }
    return "other";
}

StratumKind stratum_kind_from_string(const std::string& s) {
    for (auto k : {StratumKind::thematic, StratumKind::rhetoric, StratumKind::visual,
                   StratumKind::acoustic, StratumKind::other})
        if (s == to_string(k)) return k;
    throw Error("InvalidDocument", "unknown stratum kind '" + s + "'", s);
}

namespace {

template <class T>
const T* find_by_id(const std::vector<T>& items, const std::string& id) {
    auto it = std::find_if(items.begin(), items.end(), [&](const T& x) { return x.id == id; });
    return it == items.end() ? nullptr : &*it;
}

const std::string& media_of(const Corpus& c, const Segment& s) {
    static const std::string none;
    const auto* st = c.find_stratum(s.stratum_id);
    return st ? st->media_id : none;
}

}  // namespace

const MediaResource* Corpus::find_media(const std::string& id) const { return find_by_id(media, id); }
const Stratum* Corpus::find_stratum(const std::string& id) const { return find_by_id(strata, id); }
const Segment* Corpus::find_segment(const std::string& id) const { return find_by_id(segments, id); }
const ModelTemplate* Corpus::find_model(const std::string& id) const {
    return find_by_id(model_library, id);
}

bool segment_order(const Corpus& corpus, const Segment& a, const Segment& b) {
    return std::tie(media_of(corpus, a), a.start_ms, a.id) <
           std::tie(media_of(corpus, b), b.start_ms, b.id);
}

Report validate_model(const Ontology& ont, const ModelTemplate& model) {
    Report report = validate_graph(ont, model.graph);
    if (!model.graph.is_generic())
        report.push_back({"ModelNotGeneric", model.id, "model '" + model.id + "' carries markers"});
    if (!model.graph.find_node(model.head_node))
        report.push_back({"UnknownHead", model.id,
                          "head node '" + model.head_node + "' is not in model '" + model.id + "'"});
    return report;
}

FormSchema derive_form_schema(const Ontology& ont, const ModelTemplate& model) {
    if (auto r = validate_model(ont, model); !r.empty())
        throw Error("InvalidModel", "model '" + model.id + "' is invalid: " + r.front().message,
                    model.id);
    FormSchema schema{model.id, {}};
    for (const auto& [_, e] : model.graph.edges()) {
        if (e.source != model.head_node && e.target != model.head_node) continue;
        const auto& other = model.graph.node(e.source == model.head_node ? e.target : e.source);
        FormField field;
        field.relation_id = e.rel_id;
        field.relation_label = ont.relation_type(e.rel_id).label;
        field.target_type_id = other.type_id;
        auto inds = ont.individuals_for(other.type_id);
        if (!inds.empty()) {
            std::vector<std::string> markers;
            for (const auto& ind : inds) markers.push_back(ind.marker);
            field.value_domain = std::move(markers);
        }
        field.required = other.referent.is_marker();
        schema.fields.push_back(std::move(field));
    }
    return schema;
}

Report validate_annotation(const Ontology& ont, const ModelTemplate& model,
                           const ConceptualGraph& annotation) {
    Report report = validate_graph(ont, annotation);
    if (!report.empty()) return report;
    if (!validate_graph(ont, model.graph).empty() || !projects(ont, model.graph, annotation))
        report.push_back({"NoProjection", model.id,
                          "annotation does not instantiate model '" + model.id + "'"});
    return report;
}

Corpus upsert_segment(const Ontology& ont, const Corpus& corpus, Segment segment) {
    const auto* stratum = corpus.find_stratum(segment.stratum_id);
    if (!stratum)
        throw Error("UnknownStratum", "unknown stratum '" + segment.stratum_id + "'",
                    segment.stratum_id);
    const auto* media = corpus.find_media(stratum->media_id);
    if (!media)
        throw Error("UnknownMedia", "unknown media '" + stratum->media_id + "'", stratum->media_id);
    if (segment.start_ms < 0 || segment.start_ms >= segment.end_ms ||
        segment.end_ms > media->duration_ms)
        throw Error("TimecodeOutOfRange",
                    "segment '" + segment.id + "' interval [" + std::to_string(segment.start_ms) +
                        ", " + std::to_string(segment.end_ms) + ") does not fit in [0, " +
                        std::to_string(media->duration_ms) + ")",
                    segment.id);
    const auto* model = corpus.find_model(segment.model_id);
    if (!model)
        throw Error("UnknownModel", "unknown model '" + segment.model_id + "'", segment.model_id);
    if (auto report = validate_annotation(ont, *model, segment.annotation); !report.empty())
        throw Error("AnnotationInvalid", report.front().code + ": " + report.front().message,
                    segment.id);

    Corpus out = corpus;
    auto it = std::find_if(out.segments.begin(), out.segments.end(),
                           [&](const Segment& s) { return s.id == segment.id; });
    if (it == out.segments.end()) {
        segment.version = 1;
        out.segments.push_back(std::move(segment));
    } else {
        segment.version = it->version + 1;
        *it = std::move(segment);
    }
    std::sort(out.segments.begin(), out.segments.end(),
              [](const Segment& a, const Segment& b) { return a.id < b.id; });
    return out;
}

std::vector<Segment> query_segments(const Corpus& corpus, const Ontology& ont,
                                    const SegmentFilter& f) {
    if (f.concept_type && !ont.find_concept(*f.concept_type))
        throw Error("UnknownId", "unknown concept type '" + *f.concept_type + "'", *f.concept_type);
    if (f.relation && !ont.find_relation(*f.relation))
        throw Error("UnknownId", "unknown relation type '" + *f.relation + "'", *f.relation);
    if (f.model && !corpus.find_model(*f.model))
        throw Error("UnknownId", "unknown model '" + *f.model + "'", *f.model);

    std::vector<Segment> out;
    for (const auto& seg : corpus.segments) {
        const auto* stratum = corpus.find_stratum(seg.stratum_id);
        if (f.stratum_kind && (!stratum || stratum->kind != *f.stratum_kind)) continue;
        if (f.model && seg.model_id != *f.model) continue;
        if (f.time_window) {
            const auto& w = *f.time_window;
            if (seg.end_ms <= w.from_ms) continue;
            if (w.to_ms && seg.start_ms >= *w.to_ms) continue;
        }
        const auto& nodes = seg.annotation.nodes();
        if (f.concept_type &&
            std::none_of(nodes.begin(), nodes.end(), [&](const auto& kv) {
                return ont.find_concept(kv.second.type_id) &&
                       ont.subsumes(*f.concept_type, kv.second.type_id);
            }))
            continue;
        if (f.marker && std::none_of(nodes.begin(), nodes.end(), [&](const auto& kv) {
                return kv.second.referent.is_marker() && kv.second.referent.value == *f.marker;
            }))
            continue;
        const auto& edges = seg.annotation.edges();
        if (f.relation && std::none_of(edges.begin(), edges.end(), [&](const auto& kv) {
                return ont.find_relation(kv.second.rel_id) &&
                       ont.relation_subsumes(*f.relation, kv.second.rel_id);
            }))
            continue;
        out.push_back(seg);
    }
    std::sort(out.begin(), out.end(),
              [&](const Segment& a, const Segment& b) { return segment_order(corpus, a, b); });
    return out;
}

std::map<StratumKind, std::vector<Segment>> segments_at_instant(const Corpus& corpus,
                                                                const std::string& media_id,
                                                                std::int64_t t_ms) {
    const auto* media = corpus.find_media(media_id);
    if (!media) throw Error("UnknownMedia", "unknown media '" + media_id + "'", media_id);
    if (t_ms < 0 || t_ms > media->duration_ms)
        throw Error("TimecodeOutOfRange",
                    "instant " + std::to_string(t_ms) + " is outside media '" + media_id + "'",
                    media_id);
    std::map<StratumKind, std::vector<Segment>> groups;
    for (const auto& st : corpus.strata)
        if (st.media_id == media_id) groups[st.kind];
    for (const auto& seg : corpus.segments) {
        const auto* st = corpus.find_stratum(seg.stratum_id);
        if (!st || st->media_id != media_id) continue;
        if (seg.start_ms <= t_ms && t_ms < seg.end_ms) groups[st->kind].push_back(seg);
    }
    for (auto& [_, segs] : groups)
        std::sort(segs.begin(), segs.end(),
                  [&](const Segment& a, const Segment& b) { return segment_order(corpus, a, b); });
    return groups;
}

Report audit_corpus(const Ontology& ont, const Corpus& corpus) {
    Report report;
    auto dup_check = [&](const auto& items, const char* what) {
        std::set<std::string> seen;
        for (const auto& x : items)
            if (!seen.insert(x.id).second)
                report.push_back({"DuplicateId", x.id, std::string("duplicate ") + what + " id"});
    };
    dup_check(corpus.media, "media");
    dup_check(corpus.strata, "stratum");
    dup_check(corpus.segments, "segment");
    dup_check(corpus.model_library, "model");

    for (const auto& m : corpus.media)
        if (m.duration_ms <= 0)
            report.push_back({"InvalidDuration", m.id, "media duration must be positive"});
    for (const auto& st : corpus.strata)
        if (!corpus.find_media(st.media_id))
            report.push_back({"UnknownMedia", st.id, "stratum references unknown media '" +
                                                         st.media_id + "'"});
    for (const auto& model : corpus.model_library)
        for (auto& issue : validate_model(ont, model)) {
            issue.subject = model.id;
            report.push_back(std::move(issue));
        }
    for (const auto& seg : corpus.segments) {
        const auto* st = corpus.find_stratum(seg.stratum_id);
        if (!st) {
            report.push_back({"UnknownStratum", seg.id, "unknown stratum '" + seg.stratum_id + "'"});
            continue;
        }
        const auto* media = corpus.find_media(st->media_id);
        if (media && (seg.start_ms < 0 || seg.start_ms >= seg.end_ms ||
                      seg.end_ms > media->duration_ms))
            report.push_back({"TimecodeOutOfRange", seg.id, "segment interval out of range"});
        const auto* model = corpus.find_model(seg.model_id);
        if (!model) {
            report.push_back({"UnknownModel", seg.id, "unknown model '" + seg.model_id + "'"});
            continue;
        }
        for (auto& issue : validate_annotation(ont, *model, seg.annotation)) {
            issue.message = "segment '" + seg.id + "': " + issue.message;
            issue.subject = seg.id;
            report.push_back(std::move(issue));
        }
    }
    return report;
}

}  // namespace scs
