#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "scs/corpus.hpp"
#include "scs/graph.hpp"
#include "scs/ontology.hpp"

namespace scs {

struct Step {
    std::string id;
    std::string label;
    std::string kind;  // free-form narrative kind (expository, testimony, ...)
    ConceptualGraph requirement;
};

// Traversable once every step in `condition` has been visited.
struct Transition {
    std::string from;
    std::string to;
    std::set<std::string> condition;
};

struct Scenario {
    std::string id;
    std::string label;
    std::vector<Step> steps;
    std::vector<Transition> transitions;
    std::string start_id;
    std::set<std::string> final_ids;

    const Step* find_step(const std::string& id) const;
};

// Structural checks: UnknownStep, DuplicateId, UnreachableStep,
// DanglingCondition, NoSatisfiablePath, MissingFinal.
Report validate_scenario(const Scenario& s);
// Adds InvalidRequirement entries for requirements that do not validate.
// Requirements may pin markers (a partially instantiated query).
Report validate_scenario(const Ontology& ont, const Scenario& s);

struct StepMatch {
    Segment segment;
    std::size_t score = 0;  // number of distinct projections
};

// Segments whose annotation the requirement projects into, by score
// descending then (media_id, start_ms, id). Throws InvalidRequirement.
std::vector<StepMatch> match_step(const Ontology& ont, const Step& step, const Corpus& corpus);

// Condition-respecting step sequences from start to a final step of length
// at most `max_len`, in lexicographic order. Paths may revisit steps and run
// through a final step. Throws InvalidScenario.
std::vector<std::vector<std::string>> enumerate_paths(const Scenario& s, std::size_t max_len);

// Alignments of the marker individuals of an annotation, de-duplicated and
// sorted by (scheme, external_ref). Throws InvalidGraph.
std::vector<Alignment> intertextual_links(const Ontology& ont, const ConceptualGraph& annotation);

enum class PublicationMode { fixed, open };

const char* to_string(PublicationMode mode);
PublicationMode publication_mode_from_string(const std::string& s);

struct ManifestEntry {
    std::string segment_id;
    std::string media_id;
    std::int64_t start_ms = 0;
    std::int64_t end_ms = 0;
    std::size_t match_score = 0;
};

struct ManifestStep {
    std::string step_id;
    std::string label;
    std::string requirement;  // canonical notation of the step's query
    std::vector<ManifestEntry> segments;
    std::vector<Alignment> links;
};

struct PublicationManifest {
    std::string scenario_id;
    PublicationMode mode = PublicationMode::fixed;
    std::vector<ManifestStep> steps;
    std::vector<Transition> transitions;
    std::string start_id;
    std::set<std::string> final_ids;
    std::vector<std::string> warnings;  // "EmptyStep:<step id>"
    std::optional<std::string> digest;  // fixed mode only
};

// Binds match_step results and their intertextual links to every step.
// Steps without footage produce EmptyStep warnings. Fixed manifests carry the
// SHA-256 of their canonical body. Throws InvalidScenario.
PublicationManifest compile_publication(const Ontology& ont, const Scenario& s,
                                        const Corpus& corpus, PublicationMode mode);

}  // namespace scs
