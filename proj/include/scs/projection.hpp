#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "scs/graph.hpp"

namespace scs {

// Structure-preserving map from a pattern graph into a target graph. Total on
// the pattern; node maps need not be injective.
struct Morphism {
    std::map<std::string, std::string> node_map;
    std::map<std::string, std::string> edge_map;

    auto operator<=>(const Morphism&) const = default;
};

// Every projection of `pattern` into `target`. Both graphs must validate
// against `ont` (otherwise throws InvalidGraph). The list is exhaustive,
// duplicate-free and ordered lexicographically by the images of the pattern
// nodes (in pattern node-id order), then of the pattern edges.
std::vector<Morphism> project(const Ontology& ont, const ConceptualGraph& pattern,
                              const ConceptualGraph& target);

// Cheaper queries over the same search; the graphs are assumed valid.
bool projects(const Ontology& ont, const ConceptualGraph& pattern, const ConceptualGraph& target);
std::size_t count_projections(const Ontology& ont, const ConceptualGraph& pattern,
                              const ConceptualGraph& target);

// Streams morphisms in unspecified order until `visit` returns false.
void for_each_projection(const Ontology& ont, const ConceptualGraph& pattern,
                         const ConceptualGraph& target,
                         const std::function<bool(const Morphism&)>& visit);

}  // namespace scs
