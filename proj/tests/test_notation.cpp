#include <doctest.h>

#include "scs/notation.hpp"
#include "support.hpp"

using namespace scs;

namespace {

ParseError parse_error(std::string_view text) {
    try {
        parse_graph(text);
    } catch (const ParseError& e) {
        return e;
    }
    FAIL("no ParseError for: " << text);
    throw;
}

ConceptualGraph relabelled(const ConceptualGraph& g, testing::Rng& rng) {
    std::vector<std::string> ids;
    for (const auto& [id, _] : g.nodes()) ids.push_back(id);
    auto fresh = ids;
    std::shuffle(fresh.begin(), fresh.end(), rng);
    std::map<std::string, std::string> to;
    for (std::size_t i = 0; i < ids.size(); ++i) to[ids[i]] = "z" + fresh[i];
    ConceptualGraph out;
    for (const auto& [id, n] : g.nodes()) {
        auto ref = n.referent;
        if (ref.kind == Referent::Kind::variable) ref = Referent::variable("w" + ref.value);
        out.add_node(to[id], n.type_id, ref);
    }
    std::vector<std::string> eids;
    for (const auto& [id, _] : g.edges()) eids.push_back(id);
    std::shuffle(eids.begin(), eids.end(), rng);
    std::size_t k = 0;
    for (const auto& [_, e] : g.edges())
        out.add_edge("f" + eids[k++], e.rel_id, to[e.source], to[e.target]);
    return out;
}

}  // namespace

TEST_SUITE("notation") {

TEST_CASE("chains, coreference and markers") {
    auto g = parse_graph(
        "[Mine_lieu: *m] -(preciser_gisement)-> [Gisement: charbon]\n"
        "*m -(identifier_nom)-> [Nom_site: nom_fosse_1_courrieres]; [Periode: *]\n"
        "[Mine_lieu: fosse_1_courrieres *m]");
    CHECK(g.nodes().size() == 4);
    CHECK(g.edges().size() == 2);
    CHECK(g.node("n1").referent == Referent::marker("fosse_1_courrieres"));
    CHECK(g.node("n4").referent == Referent::generic());
    CHECK(g.edges().at("e2").source == "n1");

    auto chain = parse_graph("[A: *] -(r)-> [B: *] -(s)-> [C: *]");
    CHECK(chain.edges().at("e2").source == chain.edges().at("e1").target);

    auto quoted = parse_graph("[\"Mine (lieu)\": \"fosse n°1\"] -(\"Préciser l'époque\")-> [Époque: *]  # note");
    CHECK(quoted.node("n1").type_id == "Mine (lieu)");
    CHECK(quoted.node("n1").referent.value == "fosse n°1");
    CHECK(quoted.edges().at("e1").rel_id == "Préciser l'époque");
    CHECK(quoted.node("n2").type_id == "Époque");

    CHECK(parse_graph("").empty());
    CHECK(parse_graph("\n; # only a comment\n").empty());
}

TEST_CASE("a repeated variable is one node") {
    auto g = parse_graph("[Mine_lieu: *m]; [Mine_lieu: *m] -(preciser_gisement)-> [Gisement: charbon]");
    CHECK(g.nodes().size() == 2);
    CHECK(g.edges().size() == 1);
}

TEST_CASE("sample graphs round-trip") {
    for (const auto* name : {"memomines", "langue", "auteur"}) {
        auto snap = testing::load_sample(name);
        for (const auto& g : testing::sample_graphs(snap)) {
            auto back = parse_graph(serialize_graph(g));
            CHECK(projects(snap.ontology, g, back));
            CHECK(projects(snap.ontology, back, g));
            CHECK(testing::isomorphic(g, back));
        }
    }
}

TEST_CASE("errors carry positions") {
    auto e = parse_error("[Langue: guarani] -(partie_de) [Famille: *]");
    CHECK(e.code() == "ParseError");
    CHECK(e.span().line == 1);
    CHECK(e.span().column == 30);

    e = parse_error("[Langue: *]\n[Famille *]");
    CHECK(e.span().line == 2);
    CHECK(e.span().column == 10);
    CHECK(e.expected() == std::vector<std::string>{"':'"});

    e = parse_error("[Époque: *] ]");
    CHECK(e.span().column == 13);

    e = parse_error("*x -(r)-> [A: *]");
    CHECK(e.detail().find("before its concept") != std::string::npos);

    e = parse_error("[A: *x]; [B: *x]");
    CHECK(e.span().column == 11);
    CHECK(parse_error("[A: a *x]; [A: b *x]").span().column == 18);
    CHECK(parse_error("[A: \"open").detail() == "unterminated string");
    CHECK(parse_error("[A: *] -(r)->").span().column == 14);
    CHECK(std::string(parse_error("[A: *] @").what()).starts_with("1:8: "));
}

TEST_CASE("identifier quoting") {
    CHECK(is_bare_identifier("Famille_de_langues"));
    CHECK(is_bare_identifier("Époque"));
    CHECK_FALSE(is_bare_identifier("fosse n°1"));
    CHECK_FALSE(is_bare_identifier(""));
    CHECK(quote_identifier("guarani") == "guarani");
    CHECK(quote_identifier("a \"b\"\n") == "\"a \\\"b\\\"\\n\"");
}

TEST_CASE("serialize round-trips up to isomorphism") {
    testing::Rng rng(3);
    for (int i = 0; i < 300; ++i) {
        auto g = testing::random_syntax_graph(rng, 12);
        auto text = serialize_graph(g);
        auto back = parse_graph(text);
        CHECK(testing::isomorphic(g, back));
        CHECK(back.nodes().size() == g.nodes().size());
        CHECK(back.edges().size() == g.edges().size());
        CHECK(canonical_form(back) == canonical_form(g));
    }
}

TEST_CASE("canonical form is a fixed point and decides isomorphism") {
    testing::Rng rng(4);
    for (int i = 0; i < 300; ++i) {
        auto g = testing::random_syntax_graph(rng, 10);
        auto c = canonical_form(g);
        CHECK(canonical_form(parse_graph(c)) == c);
        CHECK(canonical_form(relabelled(g, rng)) == c);

        auto h = testing::random_syntax_graph(rng, 4);
        CHECK((canonical_form(h) == c) == testing::isomorphic(g, h));
    }
}

TEST_CASE("canonical form separates near twins") {
    // Two triangles versus a hexagon: colour refinement alone cannot tell.
    auto two = parse_graph(
        "[A: *a] -(r)-> [A: *b] -(r)-> [A: *c] -(r)-> *a\n"
        "[A: *d] -(r)-> [A: *e] -(r)-> [A: *f] -(r)-> *d");
    auto six = parse_graph("[A: *a] -(r)-> [A: *b] -(r)-> [A: *c] -(r)-> [A: *d] -(r)-> [A: *e] -(r)-> [A: *f] -(r)-> *a");
    CHECK(canonical_form(two) != canonical_form(six));
    CHECK(canonical_form(parse_graph("[A: x] -(r)-> [A: *]")) !=
          canonical_form(parse_graph("[A: *] -(r)-> [A: x]")));
}

TEST_CASE("formatting a sample file is stable") {
    auto text = read_file(testing::data_dir() / "auteur" / "victor_hugo.cg");
    auto g = parse_graph(text);
    CHECK(g.nodes().size() == 7);
    CHECK(g.edges().size() == 6);
    auto once = canonical_form(g) + "\n";
    CHECK(canonical_form(parse_graph(once)) + "\n" == once);
    CHECK(testing::isomorphic(parse_graph(once), g));
}

}
