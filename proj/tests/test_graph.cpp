#include <doctest.h>

#include "scs/notation.hpp"
#include "support.hpp"

using namespace scs;

namespace {

const Ontology& langue() {
    static const Ontology ont = testing::load_sample("langue").ontology;
    return ont;
}

std::vector<std::string> codes(const Report& r) {
    std::vector<std::string> out;
    for (const auto& i : r) out.push_back(i.code);
    return out;
}

}  // namespace

TEST_SUITE("graph") {

TEST_CASE("building and querying") {
    ConceptualGraph g;
    g.add_node("a", "Langue", Referent::marker("guarani"));
    g.add_node("b", "Famille_de_langues");
    g.add_edge("e", "partie_de", "a", "b");
    g.add_edge("loop", "lien", "a", "a");
    CHECK(g.degree("a") == 3);
    CHECK(g.degree("b") == 1);
    CHECK(g.is_individual());
    CHECK(generic_skeleton(g).is_generic());
    CHECK_THROWS_AS(g.add_node("a", "Langue"), Error);
    CHECK_THROWS_AS(g.add_edge("e", "lien", "a", "b"), Error);
    CHECK(g.fresh_node_id("a") == "a_2");
    CHECK(g.fresh_node_id("c") == "c");
    CHECK_THROWS_WITH_AS(g.node("zz"), doctest::Contains("zz"), Error);
    g.remove_node("b");
    CHECK(g.edges().size() == 1);  // incident edge removed with the node
}

TEST_CASE("validation codes") {
    const auto& ont = langue();
    SUBCASE("valid") {
        auto g = parse_graph("[Langue: guarani] -(partie_de)-> [Famille_de_langues: tupi_guarani]");
        CHECK(validate_graph(ont, g).empty());
    }
    SUBCASE("unknown type") {
        auto g = parse_graph("[Dialecte: *]");
        CHECK(codes(validate_graph(ont, g)) == std::vector<std::string>{"UnknownType"});
    }
    SUBCASE("unknown marker") {
        auto g = parse_graph("[Langue: klingon]");
        CHECK(codes(validate_graph(ont, g)) == std::vector<std::string>{"UnknownMarker"});
    }
    SUBCASE("non conforming marker") {
        auto g = parse_graph("[Famille_de_langues: guarani]");
        CHECK(codes(validate_graph(ont, g)) == std::vector<std::string>{"NonConformingMarker"});
    }
    SUBCASE("unknown relation") {
        auto g = parse_graph("[Langue: *] -(voisin_de)-> [Langue: *]");
        CHECK(codes(validate_graph(ont, g)) == std::vector<std::string>{"UnknownRelation"});
    }
    SUBCASE("signature") {
        auto g = parse_graph("[Famille_de_langues: *] -(partie_de)-> [Langue: *]");
        CHECK(codes(validate_graph(ont, g)) == std::vector<std::string>{"SignatureViolation"});
        auto h = parse_graph("[Epoque: *] -(loc_tmp)-> [Langue: *]");
        CHECK(has_code(validate_graph(ont, h), "SignatureViolation"));
    }
    SUBCASE("dangling endpoint") {
        ConceptualGraph g;
        g.add_node("a", "Langue");
        g.add_edge("e", "lien", "a", "missing");
        CHECK(codes(validate_graph(ont, g)) == std::vector<std::string>{"DanglingEndpoint"});
    }
}

TEST_CASE("sample graphs validate") {
    for (const auto* name : {"memomines", "langue", "auteur"}) {
        auto snap = testing::load_sample(name);
        for (const auto& g : testing::sample_graphs(snap)) CHECK(validate_graph(snap.ontology, g).empty());
    }
}

TEST_CASE("random graphs are valid by construction") {
    testing::Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        auto ont = testing::random_ontology(rng, 8, 5, 5);
        auto g = testing::random_graph(ont, rng, 8, 0.4);
        CHECK(validate_graph(ont, g).empty());
    }
}


TEST_CASE("language view and its signature violations") {
    auto snap = testing::load_sample("langue");
    const auto& seg = *snap.corpus.find_segment("seg_guarani");
    CHECK(validate_graph(snap.ontology, seg.annotation).empty());
    CHECK(validate_annotation(snap.ontology, *snap.corpus.find_model("langue"), seg.annotation).empty());
    auto bad = parse_graph("[Epoque: *] -(partie_de)-> [Langue: *]");
    CHECK(codes(validate_graph(snap.ontology, bad)) == std::vector<std::string>{"SignatureViolation"});
}

}
