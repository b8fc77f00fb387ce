#include "scs/operations.hpp"

#include <algorithm>
#include <set>
#include <tuple>

namespace scs {

namespace {

void require_valid(const Ontology& ont, const ConceptualGraph& g, const char* which) {
    auto report = validate_graph(ont, g);
    if (!report.empty())
        throw Error("InvalidGraph",
                    std::string(which) + " graph is invalid: " + report.front().message,
                    report.front().subject);
}

}  // namespace

ConceptualGraph restrict_node(const Ontology& ont, const ConceptualGraph& g,
                              const std::string& node_id,
                              const std::optional<std::string>& to_type,
                              const std::optional<std::string>& to_marker) {
    ConceptualGraph out = g;
    auto& node = out.node(node_id);
    if (to_type) {
        if (!ont.subsumes(node.type_id, *to_type))
            throw Error("NotASubtype",
                        "'" + *to_type + "' is not a subtype of '" + node.type_id + "'", *to_type);
        node.type_id = *to_type;
    }
    if (to_marker) {
        if (node.referent.is_marker() && node.referent.value != *to_marker)
            throw Error("AlreadyIndividual",
                        "node '" + node_id + "' already denotes '" + node.referent.value + "'",
                        node_id);
        node.referent = Referent::marker(*to_marker);
    }
    if (node.referent.is_marker()) {
        const auto& m = node.referent.value;
        if (!ont.find_individual(m) || !ont.conforms(m, node.type_id))
            throw Error("NonConformingMarker",
                        "marker '" + m + "' does not conform to type '" + node.type_id + "'", m);
    }
    return out;
}

ConceptualGraph join(const Ontology& ont, const ConceptualGraph& g1, const std::string& node1,
                     const ConceptualGraph& g2, const std::string& node2) {
    const auto& a = g1.node(node1);
    const auto& b = g2.node(node2);

    std::string type;
    if (ont.subsumes(a.type_id, b.type_id))
        type = b.type_id;
    else if (ont.subsumes(b.type_id, a.type_id))
        type = a.type_id;
    else
        throw Error("IncompatibleTypes",
                    "types '" + a.type_id + "' and '" + b.type_id + "' are not comparable", node1);

    Referent ref = a.referent;
    if (a.referent.is_marker() && b.referent.is_marker()) {
        if (a.referent.value != b.referent.value)
            throw Error("ConflictingMarkers",
                        "cannot merge '" + a.referent.value + "' with '" + b.referent.value + "'",
                        node1);
    } else if (b.referent.is_marker()) {
        ref = b.referent;
    }
    if (ref.is_marker() && !ont.conforms(ref.value, type))
        throw Error("IncompatibleTypes",
                    "marker '" + ref.value + "' does not conform to merged type '" + type + "'",
                    node1);

    ConceptualGraph out = g1;
    auto& merged = out.node(node1);
    merged.type_id = type;
    merged.referent = ref;

    std::map<std::string, std::string> rename{{node2, node1}};
    for (const auto& [id, n] : g2.nodes()) {
        if (id == node2) continue;
        auto fresh = out.fresh_node_id(id);
        rename.emplace(id, fresh);
        out.add_node(fresh, n.type_id, n.referent);
    }
    for (const auto& [id, e] : g2.edges()) {
        auto map_end = [&](const std::string& end) {
            auto it = rename.find(end);
            return it == rename.end() ? end : it->second;
        };
        out.add_edge(out.fresh_edge_id(id), e.rel_id, map_end(e.source), map_end(e.target));
    }
    return out;
}

ConceptualGraph simplify(const ConceptualGraph& g) {
    ConceptualGraph out;
    for (const auto& [_, n] : g.nodes()) out.add_node(n);
    std::set<std::tuple<std::string, std::string, std::string>> seen;
    for (const auto& [_, e] : g.edges())
        if (seen.emplace(e.rel_id, e.source, e.target).second) out.add_edge(e);
    return out;
}

ConceptualGraph common_generalization(const Ontology& ont, const ConceptualGraph& g1,
                                      const ConceptualGraph& g2) {
    require_valid(ont, g1, "first");
    require_valid(ont, g2, "second");

    auto uses_root = [&](const ConceptualGraph& g) {
        return std::any_of(g.nodes().begin(), g.nodes().end(),
                           [&](const auto& kv) { return kv.second.type_id == ont.root_id(); });
    };
    // When one input's skeleton already fits into the other it is the answer.
    for (const auto* g : {&g1, &g2}) {
        const auto* other = (g == &g1) ? &g2 : &g1;
        if (g->nodes().empty() || uses_root(*g)) continue;
        auto skeleton = generic_skeleton(*g);
        if (projects(ont, skeleton, *other)) return skeleton;
    }

    // Candidate node pairs with their generalized type.
    struct Pair {
        const ConceptNode* a;
        const ConceptNode* b;
        std::string type;
        std::size_t support = 0;
    };
    std::vector<Pair> pairs;
    std::map<std::pair<std::string, std::string>, std::size_t> pair_pos;
    for (const auto& [ia, a] : g1.nodes()) {
        for (const auto& [ib, b] : g2.nodes()) {
            auto lub = ont.minimal_common_supertypes(a.type_id, b.type_id);
            if (lub.front() == ont.root_id()) continue;
            pair_pos.emplace(std::make_pair(ia, ib), pairs.size());
            pairs.push_back({&a, &b, lub.front()});
        }
    }
    if (pairs.empty()) return {};

    // Support: number of edge pairs whose endpoint pairs are both candidates.
    for (const auto& [_, e1] : g1.edges()) {
        for (const auto& [_, e2] : g2.edges()) {
            if (ont.minimal_common_superrelations(e1.rel_id, e2.rel_id).empty()) continue;
            auto s = pair_pos.find({e1.source, e2.source});
            auto t = pair_pos.find({e1.target, e2.target});
            if (s == pair_pos.end() || t == pair_pos.end()) continue;
            ++pairs[s->second].support;
            ++pairs[t->second].support;
        }
    }
    std::vector<std::size_t> order(pairs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return pairs[x].support > pairs[y].support;
    });

    std::set<std::string> used_a, used_b;
    std::map<std::pair<std::string, std::string>, std::string> chosen;  // (a, b) -> result id
    ConceptualGraph out;
    for (std::size_t i : order) {
        const auto& p = pairs[i];
        if (used_a.contains(p.a->node_id) || used_b.contains(p.b->node_id)) continue;
        used_a.insert(p.a->node_id);
        used_b.insert(p.b->node_id);
        out.add_node(p.a->node_id, p.type, Referent::generic());
        chosen.emplace(std::make_pair(p.a->node_id, p.b->node_id), p.a->node_id);
    }

    std::set<std::tuple<std::string, std::string, std::string>> seen;
    std::size_t next_edge = 1;
    for (const auto& [_, e1] : g1.edges()) {
        for (const auto& [_, e2] : g2.edges()) {
            auto s = chosen.find({e1.source, e2.source});
            auto t = chosen.find({e1.target, e2.target});
            if (s == chosen.end() || t == chosen.end()) continue;
            const auto& st = out.node(s->second).type_id;
            const auto& tt = out.node(t->second).type_id;
            for (const auto& rel : ont.minimal_common_superrelations(e1.rel_id, e2.rel_id)) {
                if (!ont.relation_applicable(rel, st, tt)) continue;
                if (seen.emplace(rel, s->second, t->second).second)
                    out.add_edge("e" + std::to_string(next_edge++), rel, s->second, t->second);
                break;
            }
        }
    }
    return out;
}

void check_definition(const Ontology& ont, const TypeDefinition& def) {
    if (!ont.find_concept(def.defined_type))
        throw Error("InvalidDefinition", "unknown defined type '" + def.defined_type + "'",
                    def.defined_type);
    if (!def.body.is_generic())
        throw Error("InvalidDefinition", "definition body of '" + def.defined_type +
                                             "' must be generic",
                    def.defined_type);
    if (auto r = validate_graph(ont, def.body); !r.empty())
        throw Error("InvalidDefinition", "definition body of '" + def.defined_type +
                                             "' is invalid: " + r.front().message,
                    def.defined_type);
    const auto* param = def.body.find_node(def.parameter);
    if (!param)
        throw Error("InvalidDefinition", "parameter '" + def.parameter + "' is not a body node",
                    def.defined_type);
    if (!ont.subsumes(param->type_id, def.defined_type))
        throw Error("InvalidDefinition", "parameter type '" + param->type_id +
                                             "' does not subsume '" + def.defined_type + "'",
                    def.defined_type);
}

ConceptualGraph expand_type(const Ontology& ont, const ConceptualGraph& g,
                            const std::string& node_id, const TypeDefinitions& defs) {
    const auto& node = g.node(node_id);
    auto def = std::find_if(defs.begin(), defs.end(), [&](const TypeDefinition& d) {
        return d.defined_type == node.type_id;
    });
    if (def == defs.end())
        throw Error("NoDefinition", "no definition for type '" + node.type_id + "'",
                    node.type_id);

    // Body ids are namespaced under the expanded node.
    ConceptualGraph body;
    std::string param;
    for (const auto& [id, n] : def->body.nodes()) {
        auto renamed = node_id + "." + id;
        if (id == def->parameter) param = renamed;
        body.add_node(renamed, n.type_id, n.referent);
    }
    for (const auto& [id, e] : def->body.edges())
        body.add_edge(node_id + "." + id, e.rel_id, node_id + "." + e.source,
                      node_id + "." + e.target);
    try {
        return join(ont, g, node_id, body, param);
    } catch (const Error& err) {
        throw Error("JoinFailure", "cannot join definition of '" + node.type_id +
                                       "': " + err.what(),
                    node_id);
    }
}

namespace {

// Applies the first contractible site of `def` in `g`; false if there is none.
bool contract_once(const Ontology& ont, ConceptualGraph& g, const TypeDefinition& def) {
    std::vector<Morphism> sites;
    for_each_projection(ont, def.body, g, [&](const Morphism& m) {
        sites.push_back(m);
        return true;
    });
    std::sort(sites.begin(), sites.end(), [](const Morphism& x, const Morphism& y) {
        auto key = [](const Morphism& m) {
            std::vector<std::string> k;
            for (const auto& [_, v] : m.node_map) k.push_back(v);
            for (const auto& [_, v] : m.edge_map) k.push_back(v);
            return k;
        };
        return key(x) < key(y);
    });

    for (const auto& m : sites) {
        std::set<std::string> node_images, edge_images;
        for (const auto& [_, v] : m.node_map) node_images.insert(v);
        for (const auto& [_, v] : m.edge_map) edge_images.insert(v);
        if (node_images.size() != m.node_map.size() || edge_images.size() != m.edge_map.size())
            continue;  // not injective

        // Non-parameter images must be exact generic copies of the body.
        std::set<std::string> inner;
        bool exact = true;
        for (const auto& [pid, tid] : m.node_map) {
            if (pid == def.parameter) continue;
            const auto& tn = g.node(tid);
            if (tn.type_id != def.body.node(pid).type_id || tn.referent.is_marker()) exact = false;
            inner.insert(tid);
        }
        for (const auto& [pid, tid] : m.edge_map)
            if (g.edges().at(tid).rel_id != def.body.edges().at(pid).rel_id) exact = false;
        if (!exact) continue;

        // Detachable: only matched edges may touch the inner nodes.
        bool detachable = true;
        for (const auto& [eid, e] : g.edges()) {
            if (edge_images.contains(eid)) continue;
            if (inner.contains(e.source) || inner.contains(e.target)) {
                detachable = false;
                break;
            }
        }
        if (!detachable) continue;

        auto& anchor = g.node(m.node_map.at(def.parameter));
        std::string type;
        if (ont.subsumes(def.defined_type, anchor.type_id))
            type = anchor.type_id;
        else if (ont.subsumes(anchor.type_id, def.defined_type))
            type = def.defined_type;
        else
            continue;
        if (anchor.referent.is_marker() && !ont.conforms(anchor.referent.value, type)) continue;
        if (inner.empty() && type == anchor.type_id) continue;  // nothing to do

        anchor.type_id = type;
        for (const auto& e : edge_images) g.remove_edge(e);
        for (const auto& n : inner) g.remove_node(n);
        return true;
    }
    return false;
}

}  // namespace

ConceptualGraph contract_type(const Ontology& ont, const ConceptualGraph& g,
                              const TypeDefinitions& defs) {
    ConceptualGraph out = g;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& def : defs) {
            if (contract_once(ont, out, def)) {
                changed = true;
                break;
            }
        }
    }
    return out;
}

}  // namespace scs
