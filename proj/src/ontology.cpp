#include "scs/ontology.hpp"

#include <algorithm>
#include <functional>

namespace scs {

namespace {

// Fills `pos` (id -> index) and rejects duplicates.
void index_ids(const std::vector<std::string>& ids,
               std::unordered_map<std::string, std::size_t>& pos, const char* what) {
    pos.clear();
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (ids[i].empty())
            throw Error("DuplicateId", std::string(what) + " with empty id");
        if (!pos.emplace(ids[i], i).second)
            throw Error("DuplicateId", std::string("duplicate ") + what + " id '" + ids[i] + "'",
                        ids[i]);
    }
}

// Resolves parent ids to indices, detects cycles and returns the
// reflexive-transitive closure matrix.
std::vector<std::vector<char>> build_closure(
    const std::vector<std::string>& ids, const std::vector<std::vector<std::string>>& parents,
    const std::unordered_map<std::string, std::size_t>& pos, const char* what) {
    const std::size_t n = ids.size();
    std::vector<std::vector<std::size_t>> up(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& p : parents[i]) {
            auto it = pos.find(p);
            if (it == pos.end())
                throw Error("DanglingReference",
                            std::string(what) + " '" + ids[i] + "' has unknown parent '" + p + "'",
                            p);
            up[i].push_back(it->second);
        }
    }

    // 0 = unvisited, 1 = on stack, 2 = done
    std::vector<int> state(n, 0);
    std::vector<std::size_t> stack;
    std::vector<std::vector<char>> closure(n, std::vector<char>(n, 0));

    std::function<void(std::size_t)> visit = [&](std::size_t i) {
        state[i] = 1;
        stack.push_back(i);
        closure[i][i] = 1;
        for (std::size_t p : up[i]) {
            if (state[p] == 1) {
                std::string path;
                auto from = std::find(stack.begin(), stack.end(), p);
                for (auto it = from; it != stack.end(); ++it) path += ids[*it] + " -> ";
                path += ids[p];
                throw Error("CycleDetected", std::string(what) + " cycle: " + path, ids[p]);
            }
            if (state[p] == 0) visit(p);
            for (std::size_t j = 0; j < n; ++j)
                if (closure[p][j]) closure[i][j] = 1;
        }
        stack.pop_back();
        state[i] = 2;
    };
    for (std::size_t i = 0; i < n; ++i)
        if (state[i] == 0) visit(i);
    return closure;
}

template <class T>
std::vector<std::string> ids_of(const std::vector<T>& items) {
    std::vector<std::string> out;
    out.reserve(items.size());
    for (const auto& item : items) out.push_back(item.id);
    return out;
}

template <class T>
std::vector<std::vector<std::string>> parents_of(const std::vector<T>& items) {
    std::vector<std::vector<std::string>> out;
    out.reserve(items.size());
    for (const auto& item : items) out.push_back(item.parent_ids);
    return out;
}

std::vector<std::string> minimal_of(const std::vector<std::size_t>& common,
                                    const std::vector<std::vector<char>>& closure,
                                    const std::vector<std::string>& ids) {
    std::vector<std::string> out;
    for (std::size_t c : common) {
        bool minimal = true;
        for (std::size_t d : common) {
            // d strictly below c means c is not minimal
            if (d != c && closure[d][c]) {
                minimal = false;
                break;
            }
        }
        if (minimal) out.push_back(ids[c]);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

Ontology Ontology::build(std::vector<ConceptType> concept_types,
                         std::vector<RelationType> relation_types,
                         std::vector<Individual> individuals, std::string root_id) {
    Ontology ont;
    auto by_id = [](const auto& a, const auto& b) { return a.id < b.id; };
    std::sort(concept_types.begin(), concept_types.end(), by_id);
    std::sort(relation_types.begin(), relation_types.end(), by_id);
    std::sort(individuals.begin(), individuals.end(),
              [](const Individual& a, const Individual& b) { return a.marker < b.marker; });
    for (auto& c : concept_types) std::sort(c.parent_ids.begin(), c.parent_ids.end());
    for (auto& r : relation_types) std::sort(r.parent_ids.begin(), r.parent_ids.end());

    ont.concepts_ = std::move(concept_types);
    ont.relations_ = std::move(relation_types);
    ont.individuals_ = std::move(individuals);
    ont.root_id_ = std::move(root_id);

    // Concept hierarchy.
    const auto concept_ids = ids_of(ont.concepts_);
    index_ids(concept_ids, ont.concept_pos_, "concept type");
    auto root = ont.concept_pos_.find(ont.root_id_);
    if (root == ont.concept_pos_.end())
        throw Error("MissingRoot", "root type '" + ont.root_id_ + "' is not declared",
                    ont.root_id_);
    if (!ont.concepts_[root->second].parent_ids.empty())
        throw Error("MissingRoot", "root type '" + ont.root_id_ + "' must not have parents",
                    ont.root_id_);
    ont.concept_closure_ =
        build_closure(concept_ids, parents_of(ont.concepts_), ont.concept_pos_, "concept type");
    for (std::size_t i = 0; i < ont.concepts_.size(); ++i) {
        if (!ont.concept_closure_[i][root->second])
            throw Error("MissingRoot",
                        "concept type '" + concept_ids[i] + "' does not reach root '" +
                            ont.root_id_ + "'",
                        concept_ids[i]);
    }

    // Relation hierarchy.
    const auto relation_ids = ids_of(ont.relations_);
    index_ids(relation_ids, ont.relation_pos_, "relation type");
    ont.relation_closure_ = build_closure(relation_ids, parents_of(ont.relations_),
                                          ont.relation_pos_, "relation type");
    for (const auto& rel : ont.relations_) {
        for (const auto* end : {&rel.signature.source, &rel.signature.target}) {
            if (!ont.concept_pos_.contains(*end))
                throw Error("DanglingReference",
                            "relation '" + rel.id + "' signature names unknown type '" + *end + "'",
                            *end);
        }
    }
    // A sub-relation may only narrow its parents' signatures.
    for (const auto& rel : ont.relations_) {
        for (const auto& pid : rel.parent_ids) {
            const auto& parent = ont.relations_[ont.relation_pos_.at(pid)];
            if (!ont.subsumes(parent.signature.source, rel.signature.source) ||
                !ont.subsumes(parent.signature.target, rel.signature.target))
                throw Error("InvalidSignature",
                            "signature of relation '" + rel.id +
                                "' is not subsumed by the signature of its parent '" + pid + "'",
                            rel.id);
        }
    }

    // Thesaurus.
    ont.individual_pos_.clear();
    for (std::size_t i = 0; i < ont.individuals_.size(); ++i) {
        auto& ind = ont.individuals_[i];
        if (ind.marker.empty()) throw Error("DuplicateId", "individual with empty marker");
        if (!ont.individual_pos_.emplace(ind.marker, i).second)
            throw Error("DuplicateId", "duplicate individual marker '" + ind.marker + "'",
                        ind.marker);
        if (ind.concept_ids.empty())
            throw Error("EmptyConceptSet",
                        "individual '" + ind.marker + "' declares no concept type", ind.marker);
        for (const auto& c : ind.concept_ids) {
            if (!ont.concept_pos_.contains(c))
                throw Error("DanglingReference",
                            "individual '" + ind.marker + "' references unknown type '" + c + "'",
                            c);
        }
        for (const auto& a : ind.alignments) {
            if (a.scheme.empty() || a.external_ref.empty())
                throw Error("InvalidAlignment",
                            "individual '" + ind.marker + "' has an incomplete alignment",
                            ind.marker);
        }
        std::sort(ind.concept_ids.begin(), ind.concept_ids.end());
        ind.concept_ids.erase(std::unique(ind.concept_ids.begin(), ind.concept_ids.end()),
                              ind.concept_ids.end());
        std::sort(ind.alignments.begin(), ind.alignments.end());
        ind.alignments.erase(std::unique(ind.alignments.begin(), ind.alignments.end()),
                             ind.alignments.end());
    }
    return ont;
}

const ConceptType* Ontology::find_concept(const std::string& id) const {
    auto it = concept_pos_.find(id);
    return it == concept_pos_.end() ? nullptr : &concepts_[it->second];
}

const RelationType* Ontology::find_relation(const std::string& id) const {
    auto it = relation_pos_.find(id);
    return it == relation_pos_.end() ? nullptr : &relations_[it->second];
}

const Individual* Ontology::find_individual(const std::string& marker) const {
    auto it = individual_pos_.find(marker);
    return it == individual_pos_.end() ? nullptr : &individuals_[it->second];
}

const ConceptType& Ontology::concept_type(const std::string& id) const {
    return concepts_[concept_index(id)];
}

const RelationType& Ontology::relation_type(const std::string& id) const {
    return relations_[relation_index(id)];
}

const Individual& Ontology::individual(const std::string& marker) const {
    const auto* ind = find_individual(marker);
    if (!ind) throw Error("UnknownMarker", "unknown individual '" + marker + "'", marker);
    return *ind;
}

std::size_t Ontology::concept_index(const std::string& id) const {
    auto it = concept_pos_.find(id);
    if (it == concept_pos_.end()) throw Error("UnknownId", "unknown concept type '" + id + "'", id);
    return it->second;
}

std::size_t Ontology::relation_index(const std::string& id) const {
    auto it = relation_pos_.find(id);
    if (it == relation_pos_.end())
        throw Error("UnknownRelation", "unknown relation type '" + id + "'", id);
    return it->second;
}

bool Ontology::subsumes(const std::string& general, const std::string& specific) const {
    const auto g = concept_index(general);
    const auto s = concept_index(specific);
    return concept_closure_[s][g] != 0;
}

bool Ontology::relation_subsumes(const std::string& general, const std::string& specific) const {
    const auto g = relation_index(general);
    const auto s = relation_index(specific);
    return relation_closure_[s][g] != 0;
}

std::vector<std::string> Ontology::ancestors(const std::string& id) const {
    const auto& row = concept_closure_[concept_index(id)];
    std::vector<std::string> out;
    for (std::size_t j = 0; j < row.size(); ++j)
        if (row[j]) out.push_back(concepts_[j].id);
    return out;
}

std::vector<std::string> Ontology::relation_ancestors(const std::string& id) const {
    const auto& row = relation_closure_[relation_index(id)];
    std::vector<std::string> out;
    for (std::size_t j = 0; j < row.size(); ++j)
        if (row[j]) out.push_back(relations_[j].id);
    return out;
}

std::vector<std::string> Ontology::minimal_common_supertypes(const std::string& a,
                                                             const std::string& b) const {
    const auto& ra = concept_closure_[concept_index(a)];
    const auto& rb = concept_closure_[concept_index(b)];
    std::vector<std::size_t> common;
    for (std::size_t j = 0; j < ra.size(); ++j)
        if (ra[j] && rb[j]) common.push_back(j);
    return minimal_of(common, concept_closure_, ids_of(concepts_));
}

std::vector<std::string> Ontology::minimal_common_superrelations(const std::string& a,
                                                                 const std::string& b) const {
    const auto& ra = relation_closure_[relation_index(a)];
    const auto& rb = relation_closure_[relation_index(b)];
    std::vector<std::size_t> common;
    for (std::size_t j = 0; j < ra.size(); ++j)
        if (ra[j] && rb[j]) common.push_back(j);
    return minimal_of(common, relation_closure_, ids_of(relations_));
}

bool Ontology::relation_applicable(const std::string& rel, const std::string& source,
                                   const std::string& target) const {
    const auto& r = relation_type(rel);
    // resolve both ids up front so unknown ids throw regardless of short-circuiting
    concept_index(source);
    concept_index(target);
    return subsumes(r.signature.source, source) && subsumes(r.signature.target, target);
}

bool Ontology::conforms(const std::string& marker, const std::string& concept_id) const {
    const auto& ind = individual(marker);
    concept_index(concept_id);
    return std::any_of(ind.concept_ids.begin(), ind.concept_ids.end(),
                       [&](const std::string& t) { return subsumes(concept_id, t); });
}

std::vector<Individual> Ontology::individuals_for(const std::string& concept_id) const {
    concept_index(concept_id);
    std::vector<Individual> out;
    for (const auto& ind : individuals_)  // already sorted by marker
        if (conforms(ind.marker, concept_id)) out.push_back(ind);
    return out;
}

}  // namespace scs
