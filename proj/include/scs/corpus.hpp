#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scs/graph.hpp"
#include "scs/ontology.hpp"

namespace scs {

struct MediaResource {
    std::string id;
    std::string title;
    std::string uri;
    std::int64_t duration_ms = 0;
};

enum class StratumKind { thematic, rhetoric, visual, acoustic, other };

const char* to_string(StratumKind kind);
StratumKind stratum_kind_from_string(const std::string& s);  // throws InvalidDocument

struct Stratum {
    std::string id;
    std::string media_id;
    StratumKind kind = StratumKind::other;
};

// Time-coded span [start_ms, end_ms) of a stratum, annotated with an
// individual graph instantiating a model. `version` counts accepted writes.
struct Segment {
    std::string id;
    std::string stratum_id;
    std::int64_t start_ms = 0;
    std::int64_t end_ms = 0;
    std::string model_id;
    ConceptualGraph annotation;
    std::int64_t version = 1;
};

// A "sujet": named generic graph with a head concept.
struct ModelTemplate {
    std::string id;
    std::string label;
    std::string head_node;
    ConceptualGraph graph;
};

struct FormField {
    std::string relation_id;
    std::string relation_label;
    std::string target_type_id;
    std::optional<std::vector<std::string>> value_domain;  // nullopt = free input
    bool required = false;
};

struct FormSchema {
    std::string model_id;
    std::vector<FormField> fields;
};

// A corpus is a value: mutating operations return an updated copy.
struct Corpus {
    std::string id = "main";
    std::vector<MediaResource> media;
    std::vector<Stratum> strata;
    std::vector<Segment> segments;
    std::vector<ModelTemplate> model_library;

    const MediaResource* find_media(const std::string& id) const;
    const Stratum* find_stratum(const std::string& id) const;
    const Segment* find_segment(const std::string& id) const;
    const ModelTemplate* find_model(const std::string& id) const;
};

// Model checks: graph generic and valid, head node present.
Report validate_model(const Ontology& ont, const ModelTemplate& model);

// One field per edge incident to the head node, in edge-id order. Throws
// InvalidModel when the model does not validate.
FormSchema derive_form_schema(const Ontology& ont, const ModelTemplate& model);

// validate_graph plus NoProjection when the model graph does not project.
Report validate_annotation(const Ontology& ont, const ModelTemplate& model,
                           const ConceptualGraph& annotation);

// Inserts or replaces by id (replacement bumps `version`). Errors:
// UnknownStratum, UnknownModel, TimecodeOutOfRange, AnnotationInvalid.
Corpus upsert_segment(const Ontology& ont, const Corpus& corpus, Segment segment);

struct TimeWindow {
    std::int64_t from_ms = 0;
    std::optional<std::int64_t> to_ms;
};

struct SegmentFilter {
    std::optional<std::string> concept_type;
    std::optional<std::string> marker;
    std::optional<std::string> relation;
    std::optional<StratumKind> stratum_kind;
    std::optional<TimeWindow> time_window;
    std::optional<std::string> model;
};

// Conjunctive, subsumption-aware filter. Segments intersect the window when
// start < to and end > from. Sorted by (media_id, start_ms, id). Throws
// UnknownId for unresolved concept/relation/model ids.
std::vector<Segment> query_segments(const Corpus& corpus, const Ontology& ont,
                                    const SegmentFilter& filter);

// Segments with start <= t < end, grouped by stratum kind; every kind that
// has a stratum on the media gets a (possibly empty) group.
// Errors: UnknownMedia, TimecodeOutOfRange.
std::map<StratumKind, std::vector<Segment>> segments_at_instant(const Corpus& corpus,
                                                                const std::string& media_id,
                                                                std::int64_t t_ms);

// Full referential + annotation audit used by `check`.
Report audit_corpus(const Ontology& ont, const Corpus& corpus);

// Sort key shared by query/match ordering.
bool segment_order(const Corpus& corpus, const Segment& a, const Segment& b);

}  // namespace scs
