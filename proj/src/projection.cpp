#include "scs/projection.hpp"

#include <algorithm>

namespace scs {

namespace {

struct PatternNode {
    const ConceptNode* node;
    std::vector<std::size_t> candidates;  // indices into target nodes
};

class Search {
public:
    Search(const Ontology& ont, const ConceptualGraph& pattern, const ConceptualGraph& target)
        : ont_(ont), pattern_(pattern) {
        for (const auto& [_, n] : target.nodes()) target_nodes_.push_back(&n);
        for (std::size_t i = 0; i < target_nodes_.size(); ++i)
            target_index_.emplace(target_nodes_[i]->node_id, i);
        for (const auto& [_, e] : target.edges()) {
            auto s = target_index_.find(e.source);
            auto t = target_index_.find(e.target);
            if (s == target_index_.end() || t == target_index_.end()) continue;
            between_[{s->second, t->second}].push_back(&e);
        }

        for (const auto& [_, n] : pattern.nodes()) {
            PatternNode p{&n, {}};
            for (std::size_t i = 0; i < target_nodes_.size(); ++i)
                if (node_compatible(n, *target_nodes_[i])) p.candidates.push_back(i);
            order_.push_back(std::move(p));
        }
        // Most constrained first: descending degree, then id.
        std::stable_sort(order_.begin(), order_.end(), [&](const auto& a, const auto& b) {
            auto da = pattern.degree(a.node->node_id), db = pattern.degree(b.node->node_id);
            if (da != db) return da > db;
            return a.node->node_id < b.node->node_id;
        });
        for (std::size_t k = 0; k < order_.size(); ++k) rank_.emplace(order_[k].node->node_id, k);

        // Edges checked as soon as both endpoints are assigned.
        edges_at_.resize(order_.size());
        for (const auto& [_, e] : pattern.edges()) {
            const auto k = std::max(rank_.at(e.source), rank_.at(e.target));
            edges_at_[k].push_back(&e);
            pattern_edges_.push_back(&e);
        }
        assignment_.assign(order_.size(), 0);
    }

    // Returns false when the visitor asked to stop.
    bool run(const std::function<bool(const Morphism&)>& visit) { return assign(0, visit); }

private:
    bool node_compatible(const ConceptNode& p, const ConceptNode& t) const {
        if (!ont_.subsumes(p.type_id, t.type_id)) return false;
        if (p.referent.is_marker())
            return t.referent.is_marker() && t.referent.value == p.referent.value;
        return true;
    }

    std::vector<const RelationEdge*> edge_images(const RelationEdge& e) const {
        std::vector<const RelationEdge*> out;
        const auto s = assignment_[rank_.at(e.source)];
        const auto t = assignment_[rank_.at(e.target)];
        auto it = between_.find({s, t});
        if (it == between_.end()) return out;
        for (const auto* te : it->second)
            if (ont_.relation_subsumes(e.rel_id, te->rel_id)) out.push_back(te);
        return out;
    }

    bool assign(std::size_t k, const std::function<bool(const Morphism&)>& visit) {
        if (k == order_.size()) return emit(visit);
        for (std::size_t cand : order_[k].candidates) {
            assignment_[k] = cand;
            bool ok = true;
            for (const auto* e : edges_at_[k]) {
                if (edge_images(*e).empty()) {
                    ok = false;
                    break;
                }
            }
            if (ok && !assign(k + 1, visit)) return false;
        }
        return true;
    }

    bool emit(const std::function<bool(const Morphism&)>& visit) {
        Morphism m;
        for (std::size_t k = 0; k < order_.size(); ++k)
            m.node_map.emplace(order_[k].node->node_id, target_nodes_[assignment_[k]]->node_id);
        std::vector<std::vector<const RelationEdge*>> choices;
        choices.reserve(pattern_edges_.size());
        for (const auto* e : pattern_edges_) choices.push_back(edge_images(*e));
        // Cartesian product over parallel edge images.
        std::vector<std::size_t> pick(choices.size(), 0);
        while (true) {
            m.edge_map.clear();
            for (std::size_t i = 0; i < choices.size(); ++i)
                m.edge_map.emplace(pattern_edges_[i]->edge_id, choices[i][pick[i]]->edge_id);
            if (!visit(m)) return false;
            std::size_t i = 0;
            while (i < pick.size() && ++pick[i] == choices[i].size()) pick[i++] = 0;
            if (i == pick.size()) break;
        }
        return true;
    }

    const Ontology& ont_;
    const ConceptualGraph& pattern_;
    std::vector<const ConceptNode*> target_nodes_;
    std::map<std::string, std::size_t> target_index_;
    std::map<std::pair<std::size_t, std::size_t>, std::vector<const RelationEdge*>> between_;
    std::vector<PatternNode> order_;
    std::map<std::string, std::size_t> rank_;
    std::vector<std::vector<const RelationEdge*>> edges_at_;
    std::vector<const RelationEdge*> pattern_edges_;
    std::vector<std::size_t> assignment_;
};

// Lexicographic key: node images in pattern node-id order, then edge images.
std::vector<std::string> morphism_key(const Morphism& m) {
    std::vector<std::string> key;
    for (const auto& [_, v] : m.node_map) key.push_back(v);
    for (const auto& [_, v] : m.edge_map) key.push_back(v);
    return key;
}

}  // namespace

void for_each_projection(const Ontology& ont, const ConceptualGraph& pattern,
                         const ConceptualGraph& target,
                         const std::function<bool(const Morphism&)>& visit) {
    Search search(ont, pattern, target);
    search.run(visit);
}

std::vector<Morphism> project(const Ontology& ont, const ConceptualGraph& pattern,
                              const ConceptualGraph& target) {
    if (auto r = validate_graph(ont, pattern); !r.empty())
        throw Error("InvalidGraph", "pattern graph is invalid: " + r.front().message,
                    r.front().subject);
    if (auto r = validate_graph(ont, target); !r.empty())
        throw Error("InvalidGraph", "target graph is invalid: " + r.front().message,
                    r.front().subject);

    std::vector<Morphism> out;
    for_each_projection(ont, pattern, target, [&](const Morphism& m) {
        out.push_back(m);
        return true;
    });
    std::sort(out.begin(), out.end(), [](const Morphism& a, const Morphism& b) {
        return morphism_key(a) < morphism_key(b);
    });
    return out;
}

bool projects(const Ontology& ont, const ConceptualGraph& pattern, const ConceptualGraph& target) {
    bool found = false;
    for_each_projection(ont, pattern, target, [&](const Morphism&) {
        found = true;
        return false;
    });
    return found;
}

std::size_t count_projections(const Ontology& ont, const ConceptualGraph& pattern,
                              const ConceptualGraph& target) {
    std::size_t n = 0;
    for_each_projection(ont, pattern, target, [&](const Morphism&) {
        ++n;
        return true;
    });
    return n;
}

}  // namespace scs
