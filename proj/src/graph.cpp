#include "scs/graph.hpp"

#include <algorithm>

namespace scs {

const char* to_string(Referent::Kind kind) {
    switch (kind) {
        case Referent::Kind::generic: return "generic";
        case Referent::Kind::variable: return "variable";
        case Referent::Kind::marker: return "marker";
    }
    return "generic";
}

Referent::Kind referent_kind_from_string(const std::string& s) {
    if (s == "generic") return Referent::Kind::generic;
    if (s == "variable") return Referent::Kind::variable;
    if (s == "marker") return Referent::Kind::marker;
    throw Error("InvalidDocument", "unknown referent kind '" + s + "'", s);
}

ConceptNode& ConceptualGraph::add_node(ConceptNode node) {
    auto id = node.node_id;
    auto [it, inserted] = nodes_.emplace(id, std::move(node));
    if (!inserted) throw Error("DuplicateId", "duplicate node id '" + id + "'", id);
    return it->second;
}

RelationEdge& ConceptualGraph::add_edge(RelationEdge edge) {
    auto id = edge.edge_id;
    auto [it, inserted] = edges_.emplace(id, std::move(edge));
    if (!inserted) throw Error("DuplicateId", "duplicate edge id '" + id + "'", id);
    return it->second;
}

const std::string& ConceptualGraph::add_node(std::string id, std::string type, Referent ref) {
    return add_node(ConceptNode{std::move(id), std::move(type), std::move(ref)}).node_id;
}

const std::string& ConceptualGraph::add_edge(std::string id, std::string rel, std::string source,
                                             std::string target) {
    return add_edge(RelationEdge{std::move(id), std::move(rel), std::move(source),
                                 std::move(target)})
        .edge_id;
}

void ConceptualGraph::remove_node(const std::string& id) {
    nodes_.erase(id);
    std::erase_if(edges_, [&](const auto& kv) { return kv.second.source == id || kv.second.target == id; });
}
void ConceptualGraph::remove_edge(const std::string& id) { edges_.erase(id); }

const ConceptNode* ConceptualGraph::find_node(const std::string& id) const {
    auto it = nodes_.find(id);
    return it == nodes_.end() ? nullptr : &it->second;
}

ConceptNode* ConceptualGraph::find_node(const std::string& id) {
    auto it = nodes_.find(id);
    return it == nodes_.end() ? nullptr : &it->second;
}

const ConceptNode& ConceptualGraph::node(const std::string& id) const {
    const auto* n = find_node(id);
    if (!n) throw Error("UnknownNode", "unknown node '" + id + "'", id);
    return *n;
}

ConceptNode& ConceptualGraph::node(const std::string& id) {
    auto* n = find_node(id);
    if (!n) throw Error("UnknownNode", "unknown node '" + id + "'", id);
    return *n;
}

bool ConceptualGraph::is_generic() const {
    return std::none_of(nodes_.begin(), nodes_.end(),
                        [](const auto& kv) { return kv.second.referent.is_marker(); });
}

std::size_t ConceptualGraph::degree(const std::string& node_id) const {
    std::size_t d = 0;
    for (const auto& [_, e] : edges_) {
        if (e.source == node_id) ++d;
        if (e.target == node_id) ++d;
    }
    return d;
}

std::string ConceptualGraph::fresh_node_id(const std::string& base) const {
    if (!nodes_.contains(base)) return base;
    for (std::size_t k = 2;; ++k) {
        auto id = base + "_" + std::to_string(k);
        if (!nodes_.contains(id)) return id;
    }
}

std::string ConceptualGraph::fresh_edge_id(const std::string& base) const {
    if (!edges_.contains(base)) return base;
    for (std::size_t k = 2;; ++k) {
        auto id = base + "_" + std::to_string(k);
        if (!edges_.contains(id)) return id;
    }
}

ConceptualGraph generic_skeleton(const ConceptualGraph& g) {
    ConceptualGraph out;
    for (const auto& [id, n] : g.nodes()) out.add_node(id, n.type_id, Referent::generic());
    for (const auto& [id, e] : g.edges()) out.add_edge(e);
    return out;
}

Report validate_graph(const Ontology& ont, const ConceptualGraph& g) {
    Report report;
    for (const auto& [id, n] : g.nodes()) {
        if (!ont.find_concept(n.type_id)) {
            report.push_back({"UnknownType", id, "node '" + id + "' has unknown type '" +
                                                     n.type_id + "'"});
            continue;
        }
        if (n.referent.is_marker()) {
            if (!ont.find_individual(n.referent.value)) {
                report.push_back({"UnknownMarker", id, "node '" + id + "' names unknown marker '" +
                                                           n.referent.value + "'"});
            } else if (!ont.conforms(n.referent.value, n.type_id)) {
                report.push_back({"NonConformingMarker", id,
                                  "marker '" + n.referent.value + "' does not conform to type '" +
                                      n.type_id + "'"});
            }
        }
    }
    for (const auto& [id, e] : g.edges()) {
        const auto* src = g.find_node(e.source);
        const auto* tgt = g.find_node(e.target);
        if (!src || !tgt) {
            report.push_back({"DanglingEndpoint", id,
                              "edge '" + id + "' references a missing node"});
            continue;
        }
        if (!ont.find_relation(e.rel_id)) {
            report.push_back({"UnknownRelation", id, "edge '" + id + "' has unknown relation '" +
                                                         e.rel_id + "'"});
            continue;
        }
        if (!ont.find_concept(src->type_id) || !ont.find_concept(tgt->type_id)) continue;
        if (!ont.relation_applicable(e.rel_id, src->type_id, tgt->type_id)) {
            const auto& sig = ont.relation_type(e.rel_id).signature;
            report.push_back({"SignatureViolation", id,
                              "relation '" + e.rel_id + "' requires (" + sig.source + ", " +
                                  sig.target + ") but edge '" + id + "' links (" + src->type_id +
                                  ", " + tgt->type_id + ")"});
        }
    }
    return report;
}

}  // namespace scs
