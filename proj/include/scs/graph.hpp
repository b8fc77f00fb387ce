#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scs/error.hpp"
#include "scs/ontology.hpp"

namespace scs {

// Referent of a concept node: `*` (generic), `*name` (variable) or an
// individual marker. Variables only carry coreference at parse time; every
// engine operation treats them like generic referents.
struct Referent {
    enum class Kind { generic, variable, marker };

    Kind kind = Kind::generic;
    std::string value;  // variable name or marker; empty for generic

    static Referent generic() { return {}; }
    static Referent variable(std::string name) { return {Kind::variable, std::move(name)}; }
    static Referent marker(std::string m) { return {Kind::marker, std::move(m)}; }

    bool is_marker() const { return kind == Kind::marker; }

    bool operator==(const Referent&) const = default;
};

const char* to_string(Referent::Kind kind);
Referent::Kind referent_kind_from_string(const std::string& s);

struct ConceptNode {
    std::string node_id;
    std::string type_id;
    Referent referent;

    bool operator==(const ConceptNode&) const = default;
};

struct RelationEdge {
    std::string edge_id;
    std::string rel_id;
    std::string source;
    std::string target;

    bool operator==(const RelationEdge&) const = default;
};

// Bipartite concept/relation structure with binary relations. Nodes and edges
// are keyed (and therefore iterated) by id. Edges may reference missing nodes;
// validate_graph reports them.
class ConceptualGraph {
public:
    using NodeMap = std::map<std::string, ConceptNode>;
    using EdgeMap = std::map<std::string, RelationEdge>;

    const NodeMap& nodes() const { return nodes_; }
    const EdgeMap& edges() const { return edges_; }

    bool empty() const { return nodes_.empty() && edges_.empty(); }

    // Throws DuplicateId when the id is taken.
    ConceptNode& add_node(ConceptNode node);
    RelationEdge& add_edge(RelationEdge edge);
    // Convenience builders returning the inserted id.
    const std::string& add_node(std::string id, std::string type, Referent ref = {});
    const std::string& add_edge(std::string id, std::string rel, std::string source,
                                std::string target);

    void remove_node(const std::string& id);  // drops incident edges too
    void remove_edge(const std::string& id);

    const ConceptNode* find_node(const std::string& id) const;
    ConceptNode* find_node(const std::string& id);
    const ConceptNode& node(const std::string& id) const;  // throws UnknownNode
    ConceptNode& node(const std::string& id);

    bool is_generic() const;
    bool is_individual() const { return !is_generic(); }

    // Number of edge endpoints touching the node (a self-loop counts twice).
    std::size_t degree(const std::string& node_id) const;

    // An id not yet used by any node (or edge), derived from `base`.
    std::string fresh_node_id(const std::string& base) const;
    std::string fresh_edge_id(const std::string& base) const;

    bool operator==(const ConceptualGraph&) const = default;

private:
    NodeMap nodes_;
    EdgeMap edges_;
};

// Same graph with every referent lifted to generic.
ConceptualGraph generic_skeleton(const ConceptualGraph& g);

// Checks every node/edge invariant against the ontology. Codes: UnknownType,
// UnknownRelation, UnknownMarker, NonConformingMarker, DanglingEndpoint,
// SignatureViolation. Empty iff the graph is valid.
Report validate_graph(const Ontology& ont, const ConceptualGraph& g);

}  // namespace scs
