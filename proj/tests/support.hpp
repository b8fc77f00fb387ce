#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "scs/corpus.hpp"
#include "scs/graph.hpp"
#include "scs/ontology.hpp"
#include "scs/operations.hpp"
#include "scs/projection.hpp"
#include "scs/storyteller.hpp"
#include "scs/workspace.hpp"

namespace scs::testing {

using Rng = std::mt19937_64;

std::filesystem::path data_dir();
WorkspaceSnapshot load_sample(const std::string& name);

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

// Copies data/<name> into `dir`/<name> and returns the copy.
std::filesystem::path copy_sample(const std::string& name, const std::filesystem::path& dir);

// ---- generators ----------------------------------------------------------

// Rooted DAG of `n_types` concept types (root "T0"), relations whose
// children narrow their parent's signature, and individuals.
Ontology random_ontology(Rng& rng, int n_types, int n_relations, int n_individuals);

// A valid graph over `ont`: edges are drawn from relation signatures, nodes
// get conforming markers with probability `marker_p`.
ConceptualGraph random_graph(const Ontology& ont, Rng& rng, int max_nodes, double marker_p);

// A valid generalization of a random part of `target` (lifted types and
// relations, dropped markers), so that it usually projects.
ConceptualGraph random_pattern_from(const Ontology& ont, Rng& rng, const ConceptualGraph& target,
                                    int max_nodes);

// Graph over arbitrary names (quoted ones included), no ontology needed.
ConceptualGraph random_syntax_graph(Rng& rng, int max_nodes);

// Scenario with at most `max_steps` steps that passes validate_scenario.
Scenario random_scenario(Rng& rng, int max_steps);

// An ontology, one definition and a graph holding a node of the defined
// type, such that the graph has no contractible site before expansion.
struct DefinitionCase {
    Ontology ontology;
    TypeDefinitions definitions;
    ConceptualGraph graph;
    std::string node_id;
};
DefinitionCase random_definition_case(Rng& rng);

// ---- oracles -------------------------------------------------------------

// Enumerates every node assignment, then every edge assignment, and keeps
// the structure-preserving ones. Sorted.
std::vector<Morphism> brute_force_projections(const Ontology& ont, const ConceptualGraph& pattern,
                                              const ConceptualGraph& target);

// Breadth-first enumeration of every prefix; keeps those ending on a final.
std::vector<std::vector<std::string>> brute_force_paths(const Scenario& s, std::size_t max_len);

// Backtracking isomorphism test on labels (type, marker; variables count as
// generic) and relation multiplicities.
bool isomorphic(const ConceptualGraph& a, const ConceptualGraph& b);

// All nodes/edges of every graph shipped in a sample workspace.
std::vector<ConceptualGraph> sample_graphs(const WorkspaceSnapshot& snap);

}  // namespace scs::testing
