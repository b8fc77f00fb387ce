#pragma once

#include <optional>
#include <string>
#include <vector>

#include "scs/graph.hpp"
#include "scs/projection.hpp"

namespace scs {

// Lowers the type of `node_id` and/or specializes its referent to a marker.
// Errors: UnknownNode, NotASubtype, NonConformingMarker, AlreadyIndividual.
ConceptualGraph restrict_node(const Ontology& ont, const ConceptualGraph& g,
                              const std::string& node_id,
                              const std::optional<std::string>& to_type,
                              const std::optional<std::string>& to_marker);

// Disjoint union of g1 and g2 with node1 and node2 merged. The merged node
// keeps node1's id; colliding ids from g2 are renamed.
// Errors: IncompatibleTypes, ConflictingMarkers.
ConceptualGraph join(const Ontology& ont, const ConceptualGraph& g1, const std::string& node1,
                     const ConceptualGraph& g2, const std::string& node2);

// Collapses edges with the same (rel_id, source, target); keeps the smallest id.
ConceptualGraph simplify(const ConceptualGraph& g);

// A maximal common generalization of two valid graphs (greedy pairing, so
// "a" generalization rather than "the" one). The result is generic and
// projects into both inputs. Empty when no node pair shares a supertype below
// the root. Throws InvalidGraph.
ConceptualGraph common_generalization(const Ontology& ont, const ConceptualGraph& g1,
                                      const ConceptualGraph& g2);

// `defined_type` is defined by the generic `body`, anchored at `parameter`,
// whose type (the genus) subsumes `defined_type`.
struct TypeDefinition {
    std::string defined_type;
    ConceptualGraph body;
    std::string parameter;
};

using TypeDefinitions = std::vector<TypeDefinition>;

// Throws InvalidDefinition when the body is not generic, does not validate or
// the parameter's type does not subsume the defined type.
void check_definition(const Ontology& ont, const TypeDefinition& def);

// Replaces `node_id` by the body of its type's definition, joined at the
// parameter. Errors: NoDefinition, JoinFailure.
ConceptualGraph expand_type(const Ontology& ont, const ConceptualGraph& g,
                            const std::string& node_id, const TypeDefinitions& defs);

// Inverse of expand_type: every detachable injective occurrence of a body is
// folded back into a single node of the defined type, first definition and
// first site first, until no site is left.
ConceptualGraph contract_type(const Ontology& ont, const ConceptualGraph& g,
                              const TypeDefinitions& defs);

}  // namespace scs
