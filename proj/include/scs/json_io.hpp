#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "scs/corpus.hpp"
#include "scs/graph.hpp"
#include "scs/ontology.hpp"
#include "scs/operations.hpp"
#include "scs/storyteller.hpp"

// JSON documents for every file format of a workspace. Readers throw
// scs::Error("InvalidDocument") on shape errors; semantic validation is left
// to the core modules. Writers emit sorted keys (nlohmann's default object
// type is ordered) and arrays sorted by id where the format says so.
namespace scs::json_io {

using nlohmann::json;

json to_json(const Alignment& a);
json to_json(const Ontology& ont);
Ontology ontology_from_json(const json& doc);  // also runs Ontology::build checks

json to_json(const Referent& r);
Referent referent_from_json(const json& doc);
json to_json(const ConceptualGraph& g);
ConceptualGraph graph_from_json(const json& doc);
// Accepts either a structured graph object or a notation string.
ConceptualGraph graph_from_json_or_text(const json& doc);

json to_json(const ModelTemplate& m);
// `graph` (structured) or `graph_text` (notation). With notation, `head_node`
// may name a variable of the text instead of a node id.
ModelTemplate model_from_json(const json& doc);

json to_json(const FormSchema& s);

json to_json(const MediaResource& m);
json to_json(const Stratum& s);
json to_json(const Segment& s);
Segment segment_from_json(const json& doc);
// `models` entries are embedded model objects or ids looked up in `library`.
json to_json(const Corpus& c);
Corpus corpus_from_json(const json& doc, const std::vector<ModelTemplate>& library = {});

TypeDefinitions definitions_from_json(const json& doc);
json to_json(const TypeDefinition& d);

json to_json(const Transition& t);
json to_json(const Scenario& s);
Scenario scenario_from_json(const json& doc);

json to_json(const PublicationManifest& m);
PublicationManifest manifest_from_json(const json& doc);

json to_json(const Report& report);
json to_json(const StepMatch& m, const Corpus& corpus);

}  // namespace scs::json_io
