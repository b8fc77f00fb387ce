#include "scs/storyteller.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>

#include "scs/digest.hpp"
#include "scs/json_io.hpp"
#include "scs/notation.hpp"
#include "scs/projection.hpp"

namespace scs {

const Step* Scenario::find_step(const std::string& id) const {
    auto it = std::find_if(steps.begin(), steps.end(), [&](const Step& s) { return s.id == id; });
    return it == steps.end() ? nullptr : &*it;
}

const char* to_string(PublicationMode mode) {
    return mode == PublicationMode::fixed ? "fixed" : "open";
}

PublicationMode publication_mode_from_string(const std::string& s) {
    if (s == "fixed") return PublicationMode::fixed;
    if (s == "open") return PublicationMode::open;
    throw Error("InvalidMode", "publication mode must be 'fixed' or 'open', got '" + s + "'", s);
}

namespace {

// Step ids mapped to dense indices for the path searches.
struct StepIndex {
    std::map<std::string, std::size_t> pos;
    std::vector<std::vector<const Transition*>> out;  // by source step

    explicit StepIndex(const Scenario& s) {
        for (const auto& st : s.steps) pos.emplace(st.id, pos.size());
        out.resize(pos.size());
        for (const auto& t : s.transitions) {
            auto f = pos.find(t.from);
            if (f != pos.end() && pos.contains(t.to)) out[f->second].push_back(&t);
        }
    }
};

bool condition_met(const Transition& t, const std::map<std::string, std::size_t>& pos,
                   const std::vector<char>& visited) {
    for (const auto& c : t.condition) {
        auto it = pos.find(c);
        if (it == pos.end() || !visited[it->second]) return false;
    }
    return true;
}

// Breadth-first search over (step, visited-set) states.
bool satisfiable(const Scenario& s, const StepIndex& idx) {
    auto start = idx.pos.find(s.start_id);
    if (start == idx.pos.end()) return false;
    using State = std::pair<std::size_t, std::vector<char>>;
    std::vector<char> init(idx.pos.size(), 0);
    init[start->second] = 1;
    std::set<State> seen{{start->second, init}};
    std::deque<State> queue{{start->second, init}};
    std::vector<std::string> ids(idx.pos.size());
    for (const auto& [id, i] : idx.pos) ids[i] = id;
    while (!queue.empty()) {
        auto [at, visited] = queue.front();
        queue.pop_front();
        if (s.final_ids.contains(ids[at])) return true;
        for (const auto* t : idx.out[at]) {
            if (!condition_met(*t, idx.pos, visited)) continue;
            auto next = idx.pos.at(t->to);
            auto v = visited;
            v[next] = 1;
            if (seen.emplace(next, v).second) queue.emplace_back(next, std::move(v));
        }
    }
    return false;
}

}  // namespace

Report validate_scenario(const Scenario& s) {
    Report report;
    std::set<std::string> ids;
    for (const auto& st : s.steps)
        if (!ids.insert(st.id).second)
            report.push_back({"DuplicateId", st.id, "duplicate step id '" + st.id + "'"});

    bool start_ok = ids.contains(s.start_id);
    if (!start_ok)
        report.push_back({"UnknownStep", s.start_id, "start step '" + s.start_id + "' not found"});
    if (s.final_ids.empty())
        report.push_back({"MissingFinal", s.id, "scenario declares no final step"});
    for (const auto& f : s.final_ids)
        if (!ids.contains(f))
            report.push_back({"UnknownStep", f, "final step '" + f + "' not found"});
    for (const auto& t : s.transitions) {
        for (const auto* end : {&t.from, &t.to})
            if (!ids.contains(*end))
                report.push_back({"UnknownStep", *end,
                                  "transition " + t.from + " -> " + t.to + " names unknown step '" +
                                      *end + "'"});
        for (const auto& c : t.condition)
            if (!ids.contains(c))
                report.push_back({"DanglingCondition", c,
                                  "transition " + t.from + " -> " + t.to +
                                      " is conditioned on unknown step '" + c + "'"});
    }
    if (!start_ok) return report;

    StepIndex idx(s);
    std::vector<char> reached(idx.pos.size(), 0);
    std::deque<std::size_t> queue{idx.pos.at(s.start_id)};
    reached[queue.front()] = 1;
    while (!queue.empty()) {
        auto at = queue.front();
        queue.pop_front();
        for (const auto* t : idx.out[at]) {
            auto n = idx.pos.at(t->to);
            if (!reached[n]) {
                reached[n] = 1;
                queue.push_back(n);
            }
        }
    }
    for (const auto& st : s.steps)
        if (!reached[idx.pos.at(st.id)])
            report.push_back({"UnreachableStep", st.id, "step '" + st.id + "' is unreachable"});

    if (!s.final_ids.empty() && !satisfiable(s, idx))
        report.push_back({"NoSatisfiablePath", s.id,
                          "no condition-respecting path leads from '" + s.start_id +
                              "' to a final step"});
    return report;
}

Report validate_scenario(const Ontology& ont, const Scenario& s) {
    Report report = validate_scenario(s);
    for (const auto& st : s.steps) {
        for (const auto& issue : validate_graph(ont, st.requirement))
            report.push_back({"InvalidRequirement", st.id,
                              "step '" + st.id + "': " + issue.code + ": " + issue.message});
    }
    return report;
}

std::vector<StepMatch> match_step(const Ontology& ont, const Step& step, const Corpus& corpus) {
    if (auto r = validate_graph(ont, step.requirement); !r.empty())
        throw Error("InvalidRequirement",
                    "requirement of step '" + step.id + "' is invalid: " + r.front().message, step.id);
    std::vector<StepMatch> out;
    for (const auto& seg : corpus.segments) {
        if (!validate_graph(ont, seg.annotation).empty()) continue;
        auto n = count_projections(ont, step.requirement, seg.annotation);
        if (n > 0) out.push_back({seg, n});
    }
    std::sort(out.begin(), out.end(), [&](const StepMatch& a, const StepMatch& b) {
        if (a.score != b.score) return a.score > b.score;
        return segment_order(corpus, a.segment, b.segment);
    });
    return out;
}

std::vector<std::vector<std::string>> enumerate_paths(const Scenario& s, std::size_t max_len) {
    if (auto r = validate_scenario(s); !r.empty())
        throw Error("InvalidScenario", r.front().code + ": " + r.front().message, s.id);
    if (max_len < 1) throw Error("InvalidArgument", "max_len must be at least 1");

    StepIndex idx(s);
    std::vector<std::string> ids(idx.pos.size());
    for (const auto& [id, i] : idx.pos) ids[i] = id;

    std::vector<std::vector<std::string>> out;
    std::vector<std::string> path{s.start_id};
    std::vector<std::size_t> counts(ids.size(), 0);
    std::vector<char> visited(ids.size(), 0);

    auto mark = [&](std::size_t i, int delta) {
        counts[i] = static_cast<std::size_t>(static_cast<long>(counts[i]) + delta);
        visited[i] = counts[i] > 0;
    };

    std::function<void(std::size_t)> dfs = [&](std::size_t at) {
        if (s.final_ids.contains(ids[at])) out.push_back(path);
        if (path.size() >= max_len) return;
        for (const auto* t : idx.out[at]) {
            if (!condition_met(*t, idx.pos, visited)) continue;
            auto next = idx.pos.at(t->to);
            path.push_back(t->to);
            mark(next, +1);
            dfs(next);
            mark(next, -1);
            path.pop_back();
        }
    };
    auto start = idx.pos.at(s.start_id);
    mark(start, +1);
    dfs(start);

    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<Alignment> intertextual_links(const Ontology& ont, const ConceptualGraph& annotation) {
    if (auto r = validate_graph(ont, annotation); !r.empty())
        throw Error("InvalidGraph", "annotation is invalid: " + r.front().message,
                    r.front().subject);
    std::set<Alignment> links;
    for (const auto& [_, n] : annotation.nodes()) {
        if (!n.referent.is_marker()) continue;
        for (const auto& a : ont.individual(n.referent.value).alignments) links.insert(a);
    }
    return {links.begin(), links.end()};
}

PublicationManifest compile_publication(const Ontology& ont, const Scenario& s,
                                        const Corpus& corpus, PublicationMode mode) {
    if (auto r = validate_scenario(ont, s); !r.empty())
        throw Error("InvalidScenario", r.front().code + ": " + r.front().message, s.id);

    PublicationManifest m;
    m.scenario_id = s.id;
    m.mode = mode;
    m.transitions = s.transitions;
    m.start_id = s.start_id;
    m.final_ids = s.final_ids;
    for (const auto& step : s.steps) {
        ManifestStep ms{step.id, step.label, canonical_form(step.requirement), {}, {}};
        std::set<Alignment> links;
        for (const auto& match : match_step(ont, step, corpus)) {
            const auto* st = corpus.find_stratum(match.segment.stratum_id);
            ms.segments.push_back({match.segment.id, st ? st->media_id : std::string{},
                                   match.segment.start_ms, match.segment.end_ms, match.score});
            for (const auto& a : intertextual_links(ont, match.segment.annotation)) links.insert(a);
        }
        ms.links.assign(links.begin(), links.end());
        if (ms.segments.empty()) m.warnings.push_back("EmptyStep:" + step.id);
        m.steps.push_back(std::move(ms));
    }
    if (mode == PublicationMode::fixed) m.digest = sha256_hex(json_io::to_json(m).dump());
    return m;
}

}  // namespace scs
