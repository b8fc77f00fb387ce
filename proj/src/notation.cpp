#include "scs/notation.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <tuple>

namespace scs {

namespace {

// Length of the identifier character starting at s[i], 0 if none.
// Identifier characters: ASCII letters, digits, '_', '-', and U+00C0..U+00FF.
std::size_t ident_char_len(std::string_view s, std::size_t i) {
    const auto c = static_cast<unsigned char>(s[i]);
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
        c == '-')
        return 1;
    if (c == 0xC3 && i + 1 < s.size()) {
        const auto d = static_cast<unsigned char>(s[i + 1]);
        if (d >= 0x80 && d <= 0xBF) return 2;
    }
    return 0;
}

enum class Tok { lbracket, rbracket, colon, star, variable, name, string, arrow_open, arrow_close,
                 separator, end };

const char* tok_name(Tok t) {
    switch (t) {
        case Tok::lbracket: return "'['";
        case Tok::rbracket: return "']'";
        case Tok::colon: return "':'";
        case Tok::star: return "'*'";
        case Tok::variable: return "variable";
        case Tok::name: return "identifier";
        case Tok::string: return "quoted string";
        case Tok::arrow_open: return "'-('";
        case Tok::arrow_close: return "')->'";
        case Tok::separator: return "end of statement";
        case Tok::end: return "end of input";
    }
    return "?";
}

struct Token {
    Tok kind;
    std::string text;  // identifier / unescaped string / variable name
    SourceSpan span;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        skip_blanks();
        SourceSpan start{line_, col_, 1};
        if (pos_ >= src_.size()) return {Tok::end, {}, {line_, col_, 0}};
        const char c = src_[pos_];
        switch (c) {
            case '\n': advance(); newline(); return {Tok::separator, "\n", start};
            case ';': advance(); return {Tok::separator, ";", start};
            case '[': advance(); return {Tok::lbracket, "[", start};
            case ']': advance(); return {Tok::rbracket, "]", start};
            case ':': advance(); return {Tok::colon, ":", start};
            case '"': return lex_string(start);
            case '*': {
                advance();
                std::string name = lex_ident_chars();
                if (name.empty()) return {Tok::star, "*", start};
                start.length = 1 + count_points(name);
                return {Tok::variable, name, start};
            }
            case ')':
                if (src_.substr(pos_, 3) == ")->") {
                    advance(3);
                    start.length = 3;
                    return {Tok::arrow_close, ")->", start};
                }
                throw ParseError(start, "unexpected ')'", {tok_name(Tok::arrow_close)});
            default: break;
        }
        if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '(') {
            advance(2);
            start.length = 2;
            return {Tok::arrow_open, "-(", start};
        }
        if (ident_char_len(src_, pos_) > 0) {
            std::string name = lex_ident_chars();
            start.length = count_points(name);
            return {Tok::name, name, start};
        }
        throw ParseError(start, "unexpected character '" + std::string(current_point()) + "'");
    }

private:
    static std::size_t count_points(std::string_view s) {
        return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char ch) {
            return (static_cast<unsigned char>(ch) & 0xC0) != 0x80;
        }));
    }

    std::string_view current_point() const {
        std::size_t n = 1;
        while (pos_ + n < src_.size() && (static_cast<unsigned char>(src_[pos_ + n]) & 0xC0) == 0x80)
            ++n;
        return src_.substr(pos_, n);
    }

    void advance(std::size_t bytes = 1) {
        for (std::size_t k = 0; k < bytes && pos_ < src_.size(); ++k) {
            if ((static_cast<unsigned char>(src_[pos_]) & 0xC0) != 0x80) ++col_;
            ++pos_;
        }
    }

    void newline() {
        ++line_;
        col_ = 1;
    }

    void skip_blanks() {
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == ' ' || c == '\t' || c == '\r') {
                advance();
            } else if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else {
                break;
            }
        }
    }

    std::string lex_ident_chars() {
        std::string out;
        while (pos_ < src_.size()) {
            auto n = ident_char_len(src_, pos_);
            if (n == 0) break;
            // "-(" opens an arrow, it never belongs to an identifier
            if (src_[pos_] == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '(') break;
            out.append(src_.substr(pos_, n));
            advance(n);
        }
        return out;
    }

    Token lex_string(SourceSpan start) {
        advance();  // opening quote
        std::string out;
        std::size_t length = 1;
        while (true) {
            if (pos_ >= src_.size() || src_[pos_] == '\n')
                throw ParseError(start, "unterminated string", {"'\"'"});
            char c = src_[pos_];
            if (c == '"') {
                advance();
                ++length;
                break;
            }
            if (c == '\\') {
                if (pos_ + 1 >= src_.size()) throw ParseError(start, "unterminated string");
                char e = src_[pos_ + 1];
                switch (e) {
                    case '"': out += '"'; break;
                    case '\\': out += '\\'; break;
                    case 'n': out += '\n'; break;
                    case 't': out += '\t'; break;
                    default:
                        throw ParseError({line_, col_, 2},
                                         std::string("unknown escape '\\") + e + "'");
                }
                advance(2);
                length += 2;
                continue;
            }
            auto point = current_point();
            out.append(point);
            advance(point.size());
            ++length;
        }
        if (out.empty()) throw ParseError(start, "empty quoted identifier");
        start.length = length;
        return {Tok::string, out, start};
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

class Parser {
public:
    explicit Parser(std::string_view text) : lex_(text) { tok_ = lex_.next(); }

    ConceptualGraph parse() {
        while (true) {
            while (tok_.kind == Tok::separator) shift();
            if (tok_.kind == Tok::end) break;
            statement();
            if (tok_.kind != Tok::separator && tok_.kind != Tok::end)
                fail({Tok::arrow_open, Tok::separator});
        }
        return std::move(graph_);
    }

private:
    void shift() { tok_ = lex_.next(); }

    [[noreturn]] void fail(std::initializer_list<Tok> expected) {
        std::vector<std::string> names;
        std::string msg = "expected ";
        for (auto t : expected) {
            if (!names.empty()) msg += " or ";
            names.push_back(tok_name(t));
            msg += names.back();
        }
        msg += ", found " + std::string(tok_name(tok_.kind));
        if (tok_.kind == Tok::name || tok_.kind == Tok::string) msg += " '" + tok_.text + "'";
        throw ParseError(tok_.span, msg, names);
    }

    Token expect(Tok kind) {
        if (tok_.kind != kind) fail({kind});
        Token t = tok_;
        shift();
        return t;
    }

    std::string name() {
        if (tok_.kind != Tok::name && tok_.kind != Tok::string) fail({Tok::name, Tok::string});
        std::string out = tok_.text;
        shift();
        return out;
    }

    void statement() {
        std::string left = concept_term();
        while (tok_.kind == Tok::arrow_open) {
            shift();
            std::string rel = name();
            expect(Tok::arrow_close);
            std::string right = concept_term();
            graph_.add_edge("e" + std::to_string(++edges_), rel, left, right);
            left = right;
        }
    }

    // Returns the id of the (possibly shared) node.
    std::string concept_term() {
        if (tok_.kind == Tok::variable) {
            auto it = variables_.find(tok_.text);
            if (it == variables_.end())
                throw ParseError(tok_.span, "variable *" + tok_.text + " used before its concept");
            shift();
            return it->second;
        }
        if (tok_.kind != Tok::lbracket) fail({Tok::lbracket, Tok::variable});
        shift();
        const SourceSpan type_span = tok_.span;
        std::string type = name();
        expect(Tok::colon);

        std::optional<std::string> marker;
        std::optional<Token> var;
        if (tok_.kind == Tok::star) {
            shift();
        } else if (tok_.kind == Tok::variable) {
            var = tok_;
            shift();
        } else if (tok_.kind == Tok::name || tok_.kind == Tok::string) {
            marker = tok_.text;
            shift();
            if (tok_.kind == Tok::variable) {
                var = tok_;
                shift();
            }
        } else {
            fail({Tok::star, Tok::variable, Tok::name, Tok::string});
        }
        expect(Tok::rbracket);

        if (!var) {
            auto id = "n" + std::to_string(++nodes_);
            graph_.add_node(id, type, marker ? Referent::marker(*marker) : Referent::generic());
            return id;
        }
        auto it = variables_.find(var->text);
        if (it == variables_.end()) {
            auto id = "n" + std::to_string(++nodes_);
            graph_.add_node(id, type,
                            marker ? Referent::marker(*marker) : Referent::variable(var->text));
            variables_.emplace(var->text, id);
            return id;
        }
        auto& node = graph_.node(it->second);
        if (node.type_id != type)
            throw ParseError(type_span, "variable *" + var->text + " already declared with type '" +
                                            node.type_id + "'");
        if (marker) {
            if (node.referent.is_marker() && node.referent.value != *marker)
                throw ParseError(var->span, "variable *" + var->text + " already denotes '" +
                                                node.referent.value + "'");
            node.referent = Referent::marker(*marker);
        }
        return it->second;
    }

    Lexer lex_;
    Token tok_;
    ConceptualGraph graph_;
    std::map<std::string, std::string> variables_;
    std::size_t nodes_ = 0;
    std::size_t edges_ = 0;
};

std::string escape_quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out + "\"";
}

// Renders a concept term; `label` is the coreference variable, if needed.
std::string term(const ConceptNode& n, const std::string& label) {
    std::string out = "[" + quote_identifier(n.type_id) + ": ";
    if (n.referent.is_marker()) {
        out += quote_identifier(n.referent.value);
        if (!label.empty()) out += " *" + label;
    } else {
        out += label.empty() ? "*" : "*" + label;
    }
    return out + "]";
}

// ---- canonical labelling -------------------------------------------------

struct IndexedGraph {
    std::vector<const ConceptNode*> nodes;
    // (source index, rel, target index)
    std::vector<std::tuple<std::size_t, std::string, std::size_t>> edges;
};

IndexedGraph index_graph(const ConceptualGraph& g) {
    IndexedGraph ig;
    std::map<std::string, std::size_t> pos;
    for (const auto& [id, n] : g.nodes()) {
        pos.emplace(id, ig.nodes.size());
        ig.nodes.push_back(&n);
    }
    for (const auto& [_, e] : g.edges())
        ig.edges.emplace_back(pos.at(e.source), e.rel_id, pos.at(e.target));
    std::sort(ig.edges.begin(), ig.edges.end());
    return ig;
}

using Colors = std::vector<std::size_t>;

// Dense ranks of arbitrary ordered signatures.
template <class Sig>
Colors rank(const std::vector<Sig>& sigs) {
    std::vector<Sig> sorted = sigs;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    Colors out(sigs.size());
    for (std::size_t i = 0; i < sigs.size(); ++i)
        out[i] = static_cast<std::size_t>(
            std::lower_bound(sorted.begin(), sorted.end(), sigs[i]) - sorted.begin());
    return out;
}

std::size_t distinct(const Colors& c) {
    return std::set<std::size_t>(c.begin(), c.end()).size();
}

// Colour refinement until the partition is stable.
Colors refine(const IndexedGraph& g, Colors colors) {
    using Sig = std::pair<std::size_t, std::vector<std::tuple<int, std::string, std::size_t>>>;
    while (true) {
        std::vector<Sig> sigs(colors.size());
        for (std::size_t v = 0; v < colors.size(); ++v) sigs[v].first = colors[v];
        for (const auto& [s, rel, t] : g.edges) {
            sigs[s].second.emplace_back(0, rel, colors[t]);
            sigs[t].second.emplace_back(1, rel, colors[s]);
        }
        for (auto& sig : sigs) std::sort(sig.second.begin(), sig.second.end());
        Colors next = rank(sigs);
        if (distinct(next) == distinct(colors)) return next;
        colors = std::move(next);
    }
}

using EdgeKey = std::vector<std::tuple<std::size_t, std::string, std::size_t>>;

EdgeKey leaf_key(const IndexedGraph& g, const Colors& colors) {
    EdgeKey key;
    for (const auto& [s, rel, t] : g.edges) key.emplace_back(colors[s], rel, colors[t]);
    std::sort(key.begin(), key.end());
    return key;
}

// True iff swapping u and v is an automorphism of the edge multiset.
bool twins(const IndexedGraph& g, std::size_t u, std::size_t v) {
    auto swap = [&](std::size_t x) { return x == u ? v : x == v ? u : x; };
    EdgeKey swapped;
    swapped.reserve(g.edges.size());
    for (const auto& [s, rel, t] : g.edges) swapped.emplace_back(swap(s), rel, swap(t));
    std::sort(swapped.begin(), swapped.end());
    return swapped == g.edges;
}

void search(const IndexedGraph& g, const Colors& colors, std::optional<EdgeKey>& best_key,
            Colors& best_colors) {
    Colors refined = refine(g, colors);
    if (distinct(refined) == refined.size()) {
        EdgeKey key = leaf_key(g, refined);
        if (!best_key || key < *best_key) {
            best_key = std::move(key);
            best_colors = refined;
        }
        return;
    }
    // First non-singleton cell (smallest colour).
    std::map<std::size_t, std::vector<std::size_t>> cells;
    for (std::size_t v = 0; v < refined.size(); ++v) cells[refined[v]].push_back(v);
    const std::vector<std::size_t>* cell = nullptr;
    for (const auto& [_, members] : cells)
        if (members.size() > 1) {
            cell = &members;
            break;
        }

    std::vector<std::size_t> explored;
    for (std::size_t v : *cell) {
        bool redundant = std::any_of(explored.begin(), explored.end(),
                                     [&](std::size_t r) { return twins(g, r, v); });
        if (redundant) continue;
        explored.push_back(v);
        Colors split(refined.size());
        for (std::size_t u = 0; u < refined.size(); ++u)
            split[u] = 2 * refined[u] + ((refined[u] == refined[v] && u != v) ? 1 : 0);
        search(g, split, best_key, best_colors);
    }
}

}  // namespace

bool is_bare_identifier(std::string_view s) {
    if (s.empty()) return false;
    for (std::size_t i = 0; i < s.size();) {
        auto n = ident_char_len(s, i);
        if (n == 0) return false;
        if (s[i] == '-' && i + 1 < s.size() && s[i + 1] == '(') return false;
        i += n;
    }
    return true;
}

std::string quote_identifier(const std::string& id) {
    return is_bare_identifier(id) ? id : escape_quoted(id);
}

ConceptualGraph parse_graph(std::string_view text) { return Parser(text).parse(); }

std::string serialize_graph(const ConceptualGraph& g) {
    // Coreference labels: keep variable names, generate the rest.
    std::set<std::string> taken;
    for (const auto& [_, n] : g.nodes())
        if (n.referent.kind == Referent::Kind::variable) taken.insert(n.referent.value);
    std::map<std::string, std::string> label;
    std::set<std::string> assigned;
    std::size_t counter = 0;
    for (const auto& [id, n] : g.nodes()) {
        if (n.referent.kind == Referent::Kind::variable && assigned.insert(n.referent.value).second) {
            label[id] = n.referent.value;
            continue;
        }
        if (g.degree(id) < 2 && n.referent.kind != Referent::Kind::variable) continue;
        std::string name;
        do name = "x" + std::to_string(++counter);
        while (taken.contains(name));
        taken.insert(name);
        label[id] = name;
    }
    auto label_of = [&](const std::string& id) {
        auto it = label.find(id);
        return it == label.end() ? std::string{} : it->second;
    };

    std::vector<std::string> lines;
    for (const auto& [id, n] : g.nodes())
        if (g.degree(id) == 0) lines.push_back(term(n, label_of(id)));
    for (const auto& [_, e] : g.edges())
        lines.push_back(term(g.node(e.source), label_of(e.source)) + " -(" +
                        quote_identifier(e.rel_id) + ")-> " +
                        term(g.node(e.target), label_of(e.target)));
    std::string out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (i) out += '\n';
        out += lines[i];
    }
    return out;
}

std::string canonical_form(const ConceptualGraph& g) {
    if (g.nodes().empty()) return {};
    IndexedGraph ig = index_graph(g);

    // Initial colours: type, then generic before marker, then marker value.
    std::vector<std::tuple<std::string, int, std::string>> labels;
    for (const auto* n : ig.nodes)
        labels.emplace_back(n->type_id, n->referent.is_marker() ? 1 : 0,
                            n->referent.is_marker() ? n->referent.value : std::string{});
    std::optional<EdgeKey> best_key;
    Colors order;
    search(ig, rank(labels), best_key, order);

    // order[v] is the canonical position of node v.
    std::vector<std::size_t> degree(ig.nodes.size(), 0);
    for (const auto& [s, _, t] : ig.edges) {
        ++degree[s];
        ++degree[t];
    }
    std::vector<std::size_t> by_pos(ig.nodes.size());
    for (std::size_t v = 0; v < ig.nodes.size(); ++v) by_pos[order[v]] = v;

    auto canonical_term = [&](std::size_t v) {
        ConceptNode n = *ig.nodes[v];
        if (n.referent.kind == Referent::Kind::variable) n.referent = Referent::generic();
        return term(n, degree[v] >= 2 ? "c" + std::to_string(order[v] + 1) : std::string{});
    };

    std::vector<std::string> lines;
    for (std::size_t p = 0; p < by_pos.size(); ++p)
        if (degree[by_pos[p]] == 0) lines.push_back(canonical_term(by_pos[p]));
    for (const auto& [s, rel, t] : *best_key) {
        lines.push_back(canonical_term(by_pos[s]) + " -(" + quote_identifier(rel) + ")-> " +
                        canonical_term(by_pos[t]));
    }
    std::string out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (i) out += '\n';
        out += lines[i];
    }
    return out;
}

}  // namespace scs
