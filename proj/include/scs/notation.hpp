#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "scs/error.hpp"
#include "scs/graph.hpp"

namespace scs {

struct SourceSpan {
    std::size_t line = 1;    // 1-based
    std::size_t column = 1;  // 1-based, in code points
    std::size_t length = 0;  // in code points
};

class ParseError : public Error {
public:
    ParseError(SourceSpan span, std::string message, std::vector<std::string> expected = {})
        : Error("ParseError", format(span, message)),
          span_(span),
          detail_(std::move(message)),
          expected_(std::move(expected)) {}

    const SourceSpan& span() const { return span_; }
    const std::string& detail() const { return detail_; }
    const std::vector<std::string>& expected() const { return expected_; }

private:
    static std::string format(const SourceSpan& s, const std::string& m) {
        return std::to_string(s.line) + ":" + std::to_string(s.column) + ": " + m;
    }

    SourceSpan span_;
    std::string detail_;
    std::vector<std::string> expected_;
};

// Linear notation, one statement per line or `;`-separated:
//
//   [Langue: guarani] -(partie_de)-> [Famille_de_langues: *]
//   [Mine_lieu: *m]; *m -(preciser_gisement)-> [Gisement: charbon]
//
// Repeated `*name` denotes one node; once declared it may stand alone. Node ids are generated (n1, n2, ...;
// edges e1, e2, ...). No ontology is consulted. Throws ParseError.
ConceptualGraph parse_graph(std::string_view text);

// Deterministic text: isolated nodes in id order, then one edge per line in
// edge-id order. Nodes written more than once carry a coreference variable.
std::string serialize_graph(const ConceptualGraph& g);

// Serialization independent of node/edge ids, variable names and the
// generic/variable distinction: equal strings iff isomorphic graphs.
std::string canonical_form(const ConceptualGraph& g);

// Identifier as written in notation (quoted when it has other characters).
std::string quote_identifier(const std::string& id);
bool is_bare_identifier(std::string_view s);

}  // namespace scs
