#include "support.hpp"

#include <stdlib.h>

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace scs::testing {

namespace fs = std::filesystem;

fs::path data_dir() { return SCS_DATA_DIR; }

WorkspaceSnapshot load_sample(const std::string& name) { return Workspace(data_dir() / name).load(); }

TempDir::TempDir() {
    auto tmpl = (fs::temp_directory_path() / "scs-test-XXXXXX").string();
    if (!::mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
    path_ = tmpl;
}

TempDir::~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
}

fs::path copy_sample(const std::string& name, const fs::path& dir) {
    auto dest = dir / name;
    fs::copy(data_dir() / name, dest, fs::copy_options::recursive);
    return dest;
}

namespace {

template <class T>
const T& pick(Rng& rng, const std::vector<T>& items) {
    return items[std::uniform_int_distribution<std::size_t>(0, items.size() - 1)(rng)];
}

bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

// Concept types subsumed by `general`.
std::vector<std::string> descendants(const Ontology& ont, const std::string& general) {
    std::vector<std::string> out;
    for (const auto& c : ont.concept_types())
        if (ont.subsumes(general, c.id)) out.push_back(c.id);
    return out;
}

// Same over raw parent lists, before an ontology exists.
std::vector<int> raw_descendants(const std::vector<std::vector<int>>& parents, int general) {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(parents.size()); ++i) {
        std::vector<int> stack{i};
        std::set<int> seen;
        bool hit = false;
        while (!stack.empty() && !hit) {
            int x = stack.back();
            stack.pop_back();
            if (x == general) hit = true;
            for (int p : parents[x])
                if (seen.insert(p).second) stack.push_back(p);
        }
        if (hit) out.push_back(i);
    }
    return out;
}

Referent normalized(const Referent& r) { return r.is_marker() ? r : Referent::generic(); }

}  // namespace

Ontology random_ontology(Rng& rng, int n_types, int n_relations, int n_individuals) {
    std::vector<std::vector<int>> parents(n_types);
    std::vector<ConceptType> types;
    for (int i = 0; i < n_types; ++i) {
        if (i > 0) {
            parents[i].push_back(uniform(rng, 0, i - 1));
            if (i > 2 && chance(rng, 0.3)) {
                int q = uniform(rng, 0, i - 1);
                if (q != parents[i][0]) parents[i].push_back(q);
            }
        }
        ConceptType t{"T" + std::to_string(i), "type " + std::to_string(i), {}};
        for (int p : parents[i]) t.parent_ids.push_back("T" + std::to_string(p));
        types.push_back(std::move(t));
    }

    struct RawRel {
        int source, target;
    };
    std::vector<RawRel> raw;
    std::vector<RelationType> rels;
    for (int i = 0; i < n_relations; ++i) {
        RelationType r{"r" + std::to_string(i), "rel " + std::to_string(i), {}, {}};
        RawRel sig{};
        if (i > 0 && chance(rng, 0.5)) {
            int p = uniform(rng, 0, i - 1);
            r.parent_ids.push_back("r" + std::to_string(p));
            sig.source = pick(rng, raw_descendants(parents, raw[p].source));
            sig.target = pick(rng, raw_descendants(parents, raw[p].target));
        } else {
            sig.source = chance(rng, 0.3) ? 0 : uniform(rng, 0, n_types - 1);
            sig.target = chance(rng, 0.3) ? 0 : uniform(rng, 0, n_types - 1);
        }
        r.signature = {"T" + std::to_string(sig.source), "T" + std::to_string(sig.target)};
        raw.push_back(sig);
        rels.push_back(std::move(r));
    }

    static const std::vector<Alignment> pool{{"ethnologue", "grn"}, {"gold", "Lexicon"},
                                             {"rameau", "Charbon"}, {"dbpedia", "Coron"}};
    std::vector<Individual> inds;
    for (int i = 0; i < n_individuals; ++i) {
        Individual ind{"i" + std::to_string(i), "individual " + std::to_string(i), {}, {}};
        ind.concept_ids.push_back("T" + std::to_string(uniform(rng, std::min(1, n_types - 1), n_types - 1)));
        if (chance(rng, 0.2)) {
            auto extra = "T" + std::to_string(uniform(rng, 0, n_types - 1));
            if (extra != ind.concept_ids[0]) ind.concept_ids.push_back(extra);
        }
        for (int k = uniform(rng, 0, 2); k > 0; --k) {
            auto a = pick(rng, pool);
            if (std::find(ind.alignments.begin(), ind.alignments.end(), a) == ind.alignments.end())
                ind.alignments.push_back(a);
        }
        inds.push_back(std::move(ind));
    }
    return Ontology::build(std::move(types), std::move(rels), std::move(inds), "T0");
}

ConceptualGraph random_graph(const Ontology& ont, Rng& rng, int max_nodes, double marker_p) {
    ConceptualGraph g;
    const int target_nodes = uniform(rng, 1, std::max(1, max_nodes));
    int next_node = 0, next_edge = 0;

    auto new_node = [&](const std::string& type) {
        auto id = "n" + std::to_string(++next_node);
        Referent ref;
        if (chance(rng, marker_p)) {
            auto inds = ont.individuals_for(type);
            if (!inds.empty()) ref = Referent::marker(pick(rng, inds).marker);
        }
        g.add_node(id, type, ref);
        return id;
    };
    auto node_for = [&](const std::string& general) -> std::string {
        std::vector<std::string> fits;
        for (const auto& [id, n] : g.nodes())
            if (ont.subsumes(general, n.type_id)) fits.push_back(id);
        bool room = static_cast<int>(g.nodes().size()) < target_nodes;
        if (!fits.empty() && (!room || chance(rng, 0.5))) return pick(rng, fits);
        if (!room) return {};
        return new_node(pick(rng, descendants(ont, general)));
    };

    const auto& rels = ont.relation_types();
    for (int attempt = 0; attempt < target_nodes + target_nodes / 2 + 1; ++attempt) {
        if (rels.empty()) break;
        const auto& r = pick(rng, rels);
        auto s = node_for(r.signature.source);
        if (s.empty()) continue;
        auto t = node_for(r.signature.target);
        if (t.empty()) continue;
        g.add_edge("e" + std::to_string(++next_edge), r.id, s, t);
    }
    while (static_cast<int>(g.nodes().size()) < target_nodes)
        new_node(pick(rng, ont.concept_types()).id);
    return g;
}

ConceptualGraph random_pattern_from(const Ontology& ont, Rng& rng, const ConceptualGraph& target,
                                    int max_nodes) {
    std::vector<std::string> ids;
    for (const auto& [id, _] : target.nodes()) ids.push_back(id);
    std::shuffle(ids.begin(), ids.end(), rng);
    ids.resize(std::min<std::size_t>(ids.size(), uniform(rng, 1, std::max(1, max_nodes))));
    std::set<std::string> chosen(ids.begin(), ids.end());

    for (int attempt = 0; attempt < 8; ++attempt) {
        const double lift = attempt < 6 ? 0.5 : 0.0;
        ConceptualGraph p;
        for (const auto& id : chosen) {
            const auto& n = target.node(id);
            auto type = n.type_id;
            if (chance(rng, lift)) type = pick(rng, ont.ancestors(type));
            Referent ref;
            if (n.referent.is_marker() && chance(rng, 0.4) && ont.conforms(n.referent.value, type))
                ref = n.referent;
            p.add_node(id, type, ref);
        }
        for (const auto& [eid, e] : target.edges()) {
            if (!chosen.contains(e.source) || !chosen.contains(e.target) || !chance(rng, 0.8))
                continue;
            std::vector<std::string> options;
            for (const auto& r : ont.relation_ancestors(e.rel_id))
                if (ont.relation_applicable(r, p.node(e.source).type_id, p.node(e.target).type_id))
                    options.push_back(r);
            if (options.empty()) continue;
            p.add_edge(eid, chance(rng, 0.5) ? e.rel_id : pick(rng, options), e.source, e.target);
        }
        if (validate_graph(ont, p).empty()) return p;
    }
    ConceptualGraph p;
    for (const auto& id : chosen) p.add_node(id, target.node(id).type_id);
    return p;
}

ConceptualGraph random_syntax_graph(Rng& rng, int max_nodes) {
    static const std::vector<std::string> types{
        "Langue", "Famille_de_langues", "Famille de langues", "Objet \"Mine (lieu)\"",
        "Mine-lieu", "Époque", "x", "T1", "Objet « Gisement »", "a\\b", "tab\there"};
    static const std::vector<std::string> markers{"guarani", "basque", "fosse n°1", "haveur",
                                                  "Compagnie des mines de Courrières", "42",
                                                  "l'époque", "line\nbreak", "é-è"};
    static const std::vector<std::string> rels{"partie_de", "loc_tmp", "Préciser l'époque",
                                               "r", "a-b", "-x", "(odd)"};
    ConceptualGraph g;
    const int n = uniform(rng, 0, max_nodes);
    for (int i = 0; i < n; ++i) {
        Referent ref;
        int k = uniform(rng, 0, 9);
        if (k < 3) ref = Referent::marker(pick(rng, markers));
        else if (k < 5) ref = Referent::variable("v" + std::to_string(i));
        g.add_node("n" + std::to_string(i), pick(rng, types), ref);
    }
    if (n > 0) {
        const int m = uniform(rng, 0, 2 * n);
        for (int j = 0; j < m; ++j)
            g.add_edge("e" + std::to_string(j), pick(rng, rels),
                       "n" + std::to_string(uniform(rng, 0, n - 1)),
                       "n" + std::to_string(uniform(rng, 0, n - 1)));
    }
    return g;
}

Scenario random_scenario(Rng& rng, int max_steps) {
    for (;;) {
        Scenario s;
        s.id = "sc";
        const int n = uniform(rng, 1, max_steps);
        auto sid = [](int i) { return "s" + std::to_string(i); };
        for (int i = 0; i < n; ++i) s.steps.push_back({sid(i), "step " + std::to_string(i), "", {}});
        s.start_id = sid(0);
        auto condition = [&] {
            std::set<std::string> c;
            if (chance(rng, 0.3))
                for (int k = uniform(rng, 1, 2); k > 0; --k) c.insert(sid(uniform(rng, 0, n - 1)));
            return c;
        };
        for (int i = 1; i < n; ++i) s.transitions.push_back({sid(uniform(rng, 0, i - 1)), sid(i), condition()});
        for (int extra = uniform(rng, 0, n); extra > 0; --extra)
            s.transitions.push_back({sid(uniform(rng, 0, n - 1)), sid(uniform(rng, 0, n - 1)), condition()});
        for (int k = uniform(rng, 1, 2); k > 0; --k) s.final_ids.insert(sid(uniform(rng, 0, n - 1)));
        if (validate_scenario(s).empty()) return s;
    }
}

DefinitionCase random_definition_case(Rng& rng) {
    for (;;) {
        DefinitionCase c;
        c.ontology = random_ontology(rng, uniform(rng, 6, 12), uniform(rng, 4, 8), uniform(rng, 3, 8));
        const auto& ont = c.ontology;
        const auto& types = ont.concept_types();
        const ConceptType defined = pick(rng, std::vector<ConceptType>(types.begin() + 1, types.end()));
        const auto genus = pick(rng, ont.ancestors(defined.id));

        TypeDefinition def{defined.id, {}, "p"};
        def.body.add_node("p", genus, Referent::variable("x"));
        const int inner = uniform(rng, 1, 4);
        std::vector<std::string> ids{"p"};
        for (int k = 1; k <= inner; ++k) {
            // Attach each inner node to an earlier one, in either direction.
            const auto anchor = pick(rng, ids);
            const auto& anchor_type = def.body.node(anchor).type_id;
            std::vector<std::pair<std::string, bool>> options;  // (relation, anchor is source)
            for (const auto& r : ont.relation_types()) {
                if (ont.subsumes(r.signature.source, anchor_type)) options.emplace_back(r.id, true);
                if (ont.subsumes(r.signature.target, anchor_type)) options.emplace_back(r.id, false);
            }
            if (options.empty()) break;
            const auto [rel, forward] = pick(rng, options);
            const auto& sig = ont.relation_type(rel).signature;
            auto id = "b" + std::to_string(k);
            def.body.add_node(id, pick(rng, descendants(ont, forward ? sig.target : sig.source)));
            def.body.add_edge("f" + std::to_string(k), rel, forward ? anchor : id, forward ? id : anchor);
            ids.push_back(id);
        }
        if (def.body.edges().empty()) continue;
        try {
            check_definition(ont, def);
        } catch (const Error&) {
            continue;
        }
        c.definitions.push_back(std::move(def));

        c.graph = random_graph(ont, rng, 6, 0.5);
        c.node_id = c.graph.fresh_node_id("d");
        Referent ref;
        auto inds = ont.individuals_for(defined.id);
        if (!inds.empty() && chance(rng, 0.5)) ref = Referent::marker(pick(rng, inds).marker);
        c.graph.add_node(c.node_id, defined.id, ref);
        for (const auto& r : ont.relation_types()) {
            if (!chance(rng, 0.3)) continue;
            for (const auto& [id, n] : c.graph.nodes()) {
                if (id == c.node_id) continue;
                if (ont.relation_applicable(r.id, defined.id, n.type_id)) {
                    c.graph.add_edge(c.graph.fresh_edge_id("g"), r.id, c.node_id, id);
                    break;
                }
            }
        }
        if (!validate_graph(ont, c.graph).empty()) continue;
        if (contract_type(ont, c.graph, c.definitions) != c.graph) continue;
        return c;
    }
}

std::vector<Morphism> brute_force_projections(const Ontology& ont, const ConceptualGraph& pattern,
                                              const ConceptualGraph& target) {
    std::vector<const ConceptNode*> pn;
    for (const auto& [_, n] : pattern.nodes()) pn.push_back(&n);
    std::vector<const ConceptNode*> tn;
    for (const auto& [_, n] : target.nodes()) tn.push_back(&n);

    // Node-local admissibility only; all structure is checked on full maps.
    std::vector<std::vector<const ConceptNode*>> cand(pn.size());
    for (std::size_t i = 0; i < pn.size(); ++i)
        for (const auto* t : tn)
            if (ont.subsumes(pn[i]->type_id, t->type_id) &&
                (!pn[i]->referent.is_marker() || pn[i]->referent == t->referent))
                cand[i].push_back(t);

    std::vector<Morphism> out;
    std::vector<std::size_t> odo(pn.size(), 0);
    for (const auto& c : cand)
        if (c.empty()) return out;
    for (;;) {
        std::map<std::string, std::string> nm;
        for (std::size_t i = 0; i < pn.size(); ++i) nm[pn[i]->node_id] = cand[i][odo[i]]->node_id;

        std::vector<std::pair<std::string, std::vector<std::string>>> edge_options;
        bool ok = true;
        for (const auto& [eid, e] : pattern.edges()) {
            std::vector<std::string> opts;
            for (const auto& [fid, f] : target.edges())
                if (ont.relation_subsumes(e.rel_id, f.rel_id) && f.source == nm[e.source] &&
                    f.target == nm[e.target])
                    opts.push_back(fid);
            if (opts.empty()) {
                ok = false;
                break;
            }
            edge_options.emplace_back(eid, std::move(opts));
        }
        if (ok) {
            std::vector<std::size_t> eo(edge_options.size(), 0);
            for (;;) {
                Morphism m{nm, {}};
                for (std::size_t k = 0; k < edge_options.size(); ++k)
                    m.edge_map[edge_options[k].first] = edge_options[k].second[eo[k]];
                out.push_back(std::move(m));
                std::size_t k = 0;
                while (k < eo.size() && ++eo[k] == edge_options[k].second.size()) eo[k++] = 0;
                if (k == eo.size()) break;
            }
        }
        std::size_t i = 0;
        while (i < odo.size() && ++odo[i] == cand[i].size()) odo[i++] = 0;
        if (i == odo.size()) break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::vector<std::string>> brute_force_paths(const Scenario& s, std::size_t max_len) {
    std::vector<std::vector<std::string>> out;
    std::vector<std::vector<std::string>> level{{s.start_id}};
    while (!level.empty()) {
        std::vector<std::vector<std::string>> next;
        for (const auto& p : level) {
            if (s.final_ids.contains(p.back())) out.push_back(p);
            if (p.size() == max_len) continue;
            std::set<std::string> seen(p.begin(), p.end());
            for (const auto& t : s.transitions) {
                if (t.from != p.back()) continue;
                if (!std::includes(seen.begin(), seen.end(), t.condition.begin(), t.condition.end()))
                    continue;
                auto q = p;
                q.push_back(t.to);
                next.push_back(std::move(q));
            }
        }
        level = std::move(next);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool isomorphic(const ConceptualGraph& a, const ConceptualGraph& b) {
    if (a.nodes().size() != b.nodes().size() || a.edges().size() != b.edges().size()) return false;
    using Adj = std::map<std::pair<std::string, std::string>, std::multiset<std::string>>;
    auto adjacency = [](const ConceptualGraph& g) {
        Adj adj;
        for (const auto& [_, e] : g.edges()) adj[{e.source, e.target}].insert(e.rel_id);
        return adj;
    };
    const Adj adj_a = adjacency(a), adj_b = adjacency(b);
    auto rels = [](const Adj& adj, const std::string& u, const std::string& v) {
        auto it = adj.find({u, v});
        return it == adj.end() ? std::multiset<std::string>{} : it->second;
    };

    std::vector<const ConceptNode*> an;
    for (const auto& [_, n] : a.nodes()) an.push_back(&n);
    // Most constrained first: high degree nodes.
    std::sort(an.begin(), an.end(), [&](const ConceptNode* x, const ConceptNode* y) {
        return a.degree(x->node_id) > a.degree(y->node_id);
    });
    std::map<std::string, std::string> h;
    std::set<std::string> used;

    std::function<bool(std::size_t)> extend = [&](std::size_t i) {
        if (i == an.size()) return true;
        const auto* u = an[i];
        for (const auto& [xid, x] : b.nodes()) {
            if (used.contains(xid) || x.type_id != u->type_id ||
                normalized(x.referent) != normalized(u->referent) ||
                a.degree(u->node_id) != b.degree(xid))
                continue;
            if (rels(adj_a, u->node_id, u->node_id) != rels(adj_b, xid, xid)) continue;
            bool ok = true;
            for (const auto& [w, y] : h) {
                if (rels(adj_a, u->node_id, w) != rels(adj_b, xid, y) ||
                    rels(adj_a, w, u->node_id) != rels(adj_b, y, xid)) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            h[u->node_id] = xid;
            used.insert(xid);
            if (extend(i + 1)) return true;
            h.erase(u->node_id);
            used.erase(xid);
        }
        return false;
    };
    return extend(0);
}

std::vector<ConceptualGraph> sample_graphs(const WorkspaceSnapshot& snap) {
    std::vector<ConceptualGraph> out;
    for (const auto& m : snap.models) out.push_back(m.graph);
    for (const auto& s : snap.corpus.segments) out.push_back(s.annotation);
    for (const auto& [_, sc] : snap.scenarios)
        for (const auto& st : sc.steps) out.push_back(st.requirement);
    for (const auto& d : snap.definitions) out.push_back(d.body);
    return out;
}

}  // namespace scs::testing
