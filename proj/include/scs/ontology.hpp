#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "scs/error.hpp"

namespace scs {

// Link from a thesaurus entry to an external vocabulary (ethnologue, gold,
// rameau, thesoz, unesco, dbpedia, ...). The reference is opaque.
struct Alignment {
    std::string scheme;
    std::string external_ref;

    auto operator<=>(const Alignment&) const = default;
};

struct ConceptType {
    std::string id;
    std::string label;
    std::vector<std::string> parent_ids;
};

struct Signature {
    std::string source;
    std::string target;
};

struct RelationType {
    std::string id;
    std::string label;
    std::vector<std::string> parent_ids;
    Signature signature;
};

struct Individual {
    std::string marker;
    std::string label;
    std::vector<std::string> concept_ids;
    std::vector<Alignment> alignments;
};

// Concept hierarchy, relation hierarchy with signatures and the thesaurus of
// individuals. Built once through `Ontology::build`, which checks every
// invariant and throws `scs::Error` on the first violation; immutable after.
//
// Both hierarchies are rooted DAGs (multiple parents allowed). Subsumption is
// answered from a precomputed reflexive-transitive closure.
class Ontology {
public:
    Ontology() = default;

    static Ontology build(std::vector<ConceptType> concept_types,
                          std::vector<RelationType> relation_types,
                          std::vector<Individual> individuals,
                          std::string root_id);

    const std::string& root_id() const { return root_id_; }
    const std::vector<ConceptType>& concept_types() const { return concepts_; }
    const std::vector<RelationType>& relation_types() const { return relations_; }
    const std::vector<Individual>& individuals() const { return individuals_; }

    const ConceptType* find_concept(const std::string& id) const;
    const RelationType* find_relation(const std::string& id) const;
    const Individual* find_individual(const std::string& marker) const;

    // Throwing lookups ("UnknownId", "UnknownRelation", "UnknownMarker").
    const ConceptType& concept_type(const std::string& id) const;
    const RelationType& relation_type(const std::string& id) const;
    const Individual& individual(const std::string& marker) const;

    // True iff `general` is `specific` or one of its ancestors.
    bool subsumes(const std::string& general, const std::string& specific) const;
    bool relation_subsumes(const std::string& general, const std::string& specific) const;

    // All ancestors of `id`, itself included, sorted by id.
    std::vector<std::string> ancestors(const std::string& id) const;
    std::vector<std::string> relation_ancestors(const std::string& id) const;

    // Minimal elements (under subsumption) of the common ancestors, sorted
    // by id. Never empty for concept types since the root is shared.
    std::vector<std::string> minimal_common_supertypes(const std::string& a,
                                                       const std::string& b) const;
    // Same for relations; may be empty when the hierarchies are disjoint.
    std::vector<std::string> minimal_common_superrelations(const std::string& a,
                                                           const std::string& b) const;

    bool relation_applicable(const std::string& rel, const std::string& source,
                             const std::string& target) const;

    bool conforms(const std::string& marker, const std::string& concept_id) const;

    // Individuals conforming to `concept_id`, sorted by marker.
    std::vector<Individual> individuals_for(const std::string& concept_id) const;

private:
    std::size_t concept_index(const std::string& id) const;
    std::size_t relation_index(const std::string& id) const;

    std::vector<ConceptType> concepts_;
    std::vector<RelationType> relations_;
    std::vector<Individual> individuals_;
    std::string root_id_;

    std::unordered_map<std::string, std::size_t> concept_pos_;
    std::unordered_map<std::string, std::size_t> relation_pos_;
    std::unordered_map<std::string, std::size_t> individual_pos_;

    // closure[i][j] != 0 iff concept j is an ancestor-or-self of concept i.
    std::vector<std::vector<char>> concept_closure_;
    std::vector<std::vector<char>> relation_closure_;
};

}  // namespace scs
