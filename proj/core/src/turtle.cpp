// Mapping-document parser. Two phases, like most small RDF loaders:
//
//   1. a Turtle-subset reader collects raw triples into a subject -> predicate
//      -> objects store (prefixes, 'a', predicate/object lists and blank-node
//      property lists are supported; collections, multiline literals, @base
//      and language tags are rejected with a positioned error);
//   2. a vocabulary walk builds the typed mapping model, resolving
//      parentTriplesMap references and validating every construct.
//
// Anything outside the supported vocabulary is an error, never a silent drop.

#include "rdfmat/turtle.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "rdfmat/errors.hpp"

namespace rdfmat {

namespace {

const std::string RML = "http://semweb.mmlab.be/ns/rml#";
const std::string RR = "http://www.w3.org/ns/r2rml#";
const std::string QL = "http://semweb.mmlab.be/ns/ql#";
const std::string RDF_TYPE = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

struct Node {
    enum class Kind { Iri, Blank, Literal };
    Kind kind = Kind::Iri;
    std::string value;    // IRI, blank id, or literal text
    std::string datatype; // literals only
    uint32_t line = 0;
    uint32_t column = 0;
};

using PredicateObjects = std::vector<std::pair<std::string, Node>>; // preserves order
struct SubjectEntry {
    Node subject;
    PredicateObjects statements;
};

struct TripleStore {
    std::vector<SubjectEntry> order; // document order of first appearance
    std::map<std::string, size_t> index;

    SubjectEntry& entry(const Node& subject) {
        std::string key = (subject.kind == Node::Kind::Blank ? "_:" : "") + subject.value;
        auto it = index.find(key);
        if (it == index.end()) {
            index.emplace(key, order.size());
            order.push_back(SubjectEntry{subject, {}});
            return order.back();
        }
        return order[it->second];
    }

    const SubjectEntry* find(const std::string& key) const {
        auto it = index.find(key);
        return it == index.end() ? nullptr : &order[it->second];
    }
};

std::string node_key(const Node& n) {
    return (n.kind == Node::Kind::Blank ? "_:" : "") + n.value;
}

// ---------------------------------------------------------------------------
// Turtle subset reader
// ---------------------------------------------------------------------------

class TurtleReader {
public:
    TurtleReader(std::string_view text, std::string_view filename)
        : text_(text), file_(filename) {}

    void read(TripleStore& store, std::map<std::string, std::string>& prefixes) {
        store_ = &store;
        prefixes_ = &prefixes;
        skip_ws();
        while (!eof()) {
            if (looking_at("@prefix")) {
                parse_prefix_decl();
            } else if (looking_at("@base")) {
                fail("@base is not supported; use absolute IRIs");
            } else if (looking_at("@")) {
                fail("unsupported directive");
            } else {
                parse_triples();
            }
            skip_ws();
        }
    }

private:
    std::string_view text_;
    std::string file_;
    size_t pos_ = 0;
    uint32_t line_ = 1;
    uint32_t col_ = 1;
    TripleStore* store_ = nullptr;
    std::map<std::string, std::string>* prefixes_ = nullptr;
    uint64_t blank_counter_ = 0;

    [[noreturn]] void fail(const std::string& message) const {
        throw MappingParseError(file_, line_, col_, message);
    }
    [[noreturn]] void fail_at(uint32_t line, uint32_t col, const std::string& message) const {
        throw MappingParseError(file_, line, col, message);
    }

    bool eof() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }
    char peek_at(size_t off) const {
        return pos_ + off < text_.size() ? text_[pos_ + off] : '\0';
    }

    char advance() {
        char c = text_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    void skip_ws() {
        while (!eof()) {
            char c = peek();
            if (c == '#') {
                while (!eof() && peek() != '\n') advance();
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else {
                break;
            }
        }
    }

    bool looking_at(std::string_view word) const {
        return text_.substr(pos_, word.size()) == word;
    }

    void expect(char c, const char* what) {
        skip_ws();
        if (eof() || peek() != c) {
            fail(std::string("expected '") + c + "' " + what);
        }
        advance();
    }

    static bool is_pn_char_start(char c) {
        return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
    }
    // No '.' in names: the statement terminator must stay unambiguous.
    static bool is_pn_char(char c) {
        return is_pn_char_start(c) || (c >= '0' && c <= '9') || c == '-';
    }

    void parse_prefix_decl() {
        pos_ += 7; // "@prefix"
        col_ += 7;
        skip_ws();
        std::string name;
        while (!eof() && is_pn_char(peek())) name += advance();
        expect(':', "after prefix name");
        skip_ws();
        if (eof() || peek() != '<') fail("expected IRI in @prefix");
        std::string iri = parse_iriref();
        expect('.', "after @prefix declaration");
        (*prefixes_)[name] = iri;
    }

    std::string parse_iriref() {
        advance(); // consume '<'
        std::string iri;
        while (true) {
            if (eof()) fail("unterminated IRI");
            char c = advance();
            if (c == '>') break;
            if (c == '\\') fail("IRI escape sequences are not supported");
            if (static_cast<unsigned char>(c) <= 0x20) fail("whitespace or control character in IRI");
            iri += c;
        }
        return iri;
    }

    Node parse_prefixed_name() {
        uint32_t l = line_, c = col_;
        std::string prefix;
        while (!eof() && is_pn_char(peek())) prefix += advance();
        if (eof() || peek() != ':') fail("expected ':' in prefixed name");
        advance();
        std::string local;
        while (!eof() && (is_pn_char(peek()))) local += advance();
        auto it = prefixes_->find(prefix);
        if (it == prefixes_->end()) {
            fail_at(l, c, "undeclared prefix '" + prefix + ":'");
        }
        Node n;
        n.kind = Node::Kind::Iri;
        n.value = it->second + local;
        n.line = l;
        n.column = c;
        return n;
    }

    Node parse_iri_node() {
        Node n;
        n.line = line_;
        n.column = col_;
        n.kind = Node::Kind::Iri;
        if (peek() == '<') {
            n.value = parse_iriref();
        } else {
            n = parse_prefixed_name();
        }
        return n;
    }

    Node parse_literal() {
        Node n;
        n.line = line_;
        n.column = col_;
        n.kind = Node::Kind::Literal;
        if (looking_at("\"\"\"")) fail("multiline literals are not supported");
        advance(); // consume '"'
        std::string value;
        while (true) {
            if (eof()) fail("unterminated string literal");
            char c = advance();
            if (c == '"') break;
            if (c == '\n') fail("newline in single-quoted literal");
            if (c != '\\') {
                value += c;
                continue;
            }
            if (eof()) fail("unterminated escape sequence");
            char e = advance();
            switch (e) {
            case 't': value += '\t'; break;
            case 'n': value += '\n'; break;
            case 'r': value += '\r'; break;
            case 'b': value += '\b'; break;
            case 'f': value += '\f'; break;
            case '"': value += '"'; break;
            case '\'': value += '\''; break;
            case '\\': value += '\\'; break;
            case 'u': value += parse_unicode_escape(4); break;
            case 'U': value += parse_unicode_escape(8); break;
            default: fail(std::string("unknown escape '\\") + e + "'");
            }
        }
        n.value = std::move(value);
        if (!eof() && peek() == '@') {
            fail("language tags are not supported");
        }
        if (looking_at("^^")) {
            advance();
            advance();
            skip_ws();
            if (eof() || (peek() != '<' && !is_pn_char_start(peek()) && peek() != ':')) {
                fail("expected datatype IRI after '^^'");
            }
            n.datatype = parse_iri_node().value;
        }
        return n;
    }

    std::string parse_unicode_escape(int digits) {
        char32_t cp = 0;
        for (int i = 0; i < digits; ++i) {
            if (eof()) fail("unterminated unicode escape");
            char c = advance();
            cp <<= 4;
            if (c >= '0' && c <= '9') cp |= static_cast<char32_t>(c - '0');
            else if (c >= 'a' && c <= 'f') cp |= static_cast<char32_t>(c - 'a' + 10);
            else if (c >= 'A' && c <= 'F') cp |= static_cast<char32_t>(c - 'A' + 10);
            else fail("invalid hex digit in unicode escape");
        }
        std::string out;
        if (cp < 0x80) {
            out += static_cast<char>(cp);
        } else if (cp < 0x800) {
            out += static_cast<char>(0xC0 | (cp >> 6));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        } else if (cp < 0x10000) {
            out += static_cast<char>(0xE0 | (cp >> 12));
            out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        } else {
            out += static_cast<char>(0xF0 | (cp >> 18));
            out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
            out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        }
        return out;
    }

    Node fresh_blank() {
        Node n;
        n.kind = Node::Kind::Blank;
        n.value = "b" + std::to_string(++blank_counter_);
        n.line = line_;
        n.column = col_;
        return n;
    }

    void parse_triples() {
        skip_ws();
        if (eof()) return;
        char c = peek();
        Node subject;
        if (c == '<' || is_pn_char_start(c) || c == ':') {
            subject = parse_iri_node();
        } else if (c == '[') {
            fail("blank-node subjects are not supported at the top level");
        } else if (c == '(') {
            fail("collections are not supported");
        } else if (c == '_') {
            fail("labeled blank nodes are not supported");
        } else {
            fail("expected a subject IRI");
        }
        parse_predicate_object_list(subject);
        expect('.', "to terminate the statement");
    }

    void parse_predicate_object_list(const Node& subject) {
        while (true) {
            skip_ws();
            Node predicate;
            if (!eof() && peek() == 'a' && !is_pn_char(peek_at(1)) && peek_at(1) != ':') {
                predicate.kind = Node::Kind::Iri;
                predicate.value = RDF_TYPE;
                predicate.line = line_;
                predicate.column = col_;
                advance();
            } else if (!eof() && (peek() == '<' || is_pn_char_start(peek()) || peek() == ':')) {
                predicate = parse_iri_node();
            } else {
                fail("expected a predicate");
            }
            parse_object_list(subject, predicate);
            skip_ws();
            if (!eof() && peek() == ';') {
                advance();
                skip_ws();
                // allow a trailing ';' before '.' or ']'
                if (!eof() && (peek() == '.' || peek() == ']')) return;
                continue;
            }
            return;
        }
    }

    void parse_object_list(const Node& subject, const Node& predicate) {
        while (true) {
            skip_ws();
            Node object = parse_object();
            store_->entry(subject).statements.emplace_back(predicate.value, std::move(object));
            skip_ws();
            if (!eof() && peek() == ',') {
                advance();
                continue;
            }
            return;
        }
    }

    Node parse_object() {
        if (eof()) fail("expected an object");
        char c = peek();
        if (c == '<') return parse_iri_node();
        if (c == '"') return parse_literal();
        if (c == '\'') fail("single-quoted literals are not supported");
        if (c == '(') fail("collections are not supported");
        if (c == '_') fail("labeled blank nodes are not supported");
        if (c == '[') {
            Node blank = fresh_blank();
            advance(); // '['
            skip_ws();
            if (!eof() && peek() != ']') {
                parse_predicate_object_list(blank);
            }
            expect(']', "to close the blank node");
            return blank;
        }
        if (is_pn_char_start(c) || c == ':') {
            // 'true'/'false' would land here; the vocabulary has no boolean
            // objects, so they resolve to undeclared prefixes and error out.
            return parse_prefixed_name();
        }
        if ((c >= '0' && c <= '9') || c == '-' || c == '+') {
            fail("numeric literals are not supported; quote the value");
        }
        fail("expected an object term");
    }
};

// ---------------------------------------------------------------------------
// Vocabulary walk
// ---------------------------------------------------------------------------

class MappingBuilder {
public:
    MappingBuilder(const TripleStore& store, std::string file) : store_(store), file_(std::move(file)) {}

    DataIntegrationSystem build(std::map<std::string, std::string> prefixes) {
        DataIntegrationSystem dis;
        dis.ontology_prefixes = std::move(prefixes);

        std::set<std::string> map_ids;
        for (const auto& entry : store_.order) {
            if (entry.subject.kind != Node::Kind::Iri) continue;
            if (!is_triples_map(entry)) {
                fail(entry.subject, "subject <" + entry.subject.value +
                                        "> is not a triples map (no rml:logicalSource, "
                                        "rr:subjectMap or rr:predicateObjectMap)");
            }
            TriplesMap tm = build_triples_map(entry);
            if (!map_ids.insert(tm.id).second) {
                fail(entry.subject, "duplicate triples map id <" + tm.id + ">");
            }
            dis.mappings.push_back(std::move(tm));
        }

        // resolve parent references and collect distinct sources
        for (const auto& m : dis.mappings) {
            for (const auto& pom : m.predicate_object_maps) {
                const std::string* parent_id = nullptr;
                if (const auto* ref = std::get_if<ReferenceObject>(&pom.object)) {
                    parent_id = &ref->parent_id;
                } else if (const auto* join = std::get_if<JoinObject>(&pom.object)) {
                    parent_id = &join->parent_id;
                }
                if (parent_id && dis.find_map(*parent_id) == nullptr) {
                    throw MappingParseError(file_, 0, 0,
                                            "rr:parentTriplesMap <" + *parent_id +
                                                "> in map <" + m.id + "> does not name a triples map");
                }
            }
            if (std::find(dis.sources.begin(), dis.sources.end(), m.logical_source) ==
                dis.sources.end()) {
                dis.sources.push_back(m.logical_source);
            }
        }
        return dis;
    }

private:
    const TripleStore& store_;
    std::string file_;

    [[noreturn]] void fail(const Node& at, const std::string& message) const {
        throw MappingParseError(file_, at.line, at.column, message);
    }

    static bool is_triples_map(const SubjectEntry& entry) {
        for (const auto& [p, o] : entry.statements) {
            if (p == RML + "logicalSource" || p == RR + "subjectMap" ||
                p == RR + "predicateObjectMap") {
                return true;
            }
        }
        return false;
    }

    const SubjectEntry& deref(const Node& node, const char* what) const {
        const SubjectEntry* e = store_.find(node_key(node));
        if (e == nullptr) {
            fail(node, std::string("empty ") + what +" (no properties)");
        }
        return *e;
    }

    static const Node* single(const SubjectEntry& entry, const std::string& predicate) {
        const Node* found = nullptr;
        for (const auto& [p, o] : entry.statements) {
            if (p != predicate) continue;
            if (found) return nullptr; // caller treats repeats as errors
            found = &o;
        }
        return found;
    }

    static size_t count(const SubjectEntry& entry, const std::string& predicate) {
        size_t n = 0;
        for (const auto& [p, o] : entry.statements) {
            if (p == predicate) ++n;
        }
        return n;
    }

    void require_known(const SubjectEntry& entry, std::initializer_list<std::string> allowed,
                       const char* where) const {
        for (const auto& [p, o] : entry.statements) {
            if (std::find(allowed.begin(), allowed.end(), p) == allowed.end()) {
                fail(o, "unsupported vocabulary term <" + p + "> in " + where);
            }
        }
    }

    std::string literal_value(const SubjectEntry& entry, const std::string& predicate,
                              const char* where) const {
        const Node* n = single(entry, predicate);
        if (n == nullptr) {
            if (count(entry, predicate) > 1) {
                fail(entry.subject, std::string("repeated <") + predicate + "> in " + where);
            }
            return {};
        }
        if (n->kind != Node::Kind::Literal) {
            fail(*n, std::string("expected a string literal for <") + predicate + ">");
        }
        return n->value;
    }

    TriplesMap build_triples_map(const SubjectEntry& entry) {
        TriplesMap tm;
        tm.id = entry.subject.value;

        require_known(entry,
                      {RDF_TYPE, RML + "logicalSource", RR + "subjectMap",
                       RR + "predicateObjectMap"},
                      "a triples map");

        for (const auto& [p, o] : entry.statements) {
            if (p == RDF_TYPE) {
                if (o.kind != Node::Kind::Iri || o.value != RR + "TriplesMap") {
                    fail(o, "unsupported rdf:type on a triples map (only rr:TriplesMap)");
                }
            }
        }

        const Node* ls = single(entry, RML + "logicalSource");
        if (ls == nullptr) {
            fail(entry.subject, "triples map <" + tm.id + "> needs exactly one rml:logicalSource");
        }
        tm.logical_source = build_logical_source(deref(*ls, "rml:logicalSource"));

        const Node* sm = single(entry, RR + "subjectMap");
        if (sm == nullptr) {
            fail(entry.subject, "triples map <" + tm.id + "> needs exactly one rr:subjectMap");
        }
        build_subject_map(deref(*sm, "rr:subjectMap"), tm);

        for (const auto& [p, o] : entry.statements) {
            if (p == RR + "predicateObjectMap") {
                tm.predicate_object_maps.push_back(build_pom(deref(o, "rr:predicateObjectMap")));
            }
        }
        return tm;
    }

    LogicalSource build_logical_source(const SubjectEntry& entry) {
        require_known(entry,
                      {RML + "source", RML + "referenceFormulation", RML + "iterator"},
                      "a logical source");
        LogicalSource ls;
        ls.source_path = literal_value(entry, RML + "source", "a logical source");
        if (ls.source_path.empty()) {
            fail(entry.subject, "logical source needs an rml:source file path");
        }
        const Node* rf = single(entry, RML + "referenceFormulation");
        if (rf == nullptr) {
            fail(entry.subject, "logical source needs an rml:referenceFormulation");
        }
        if (rf->kind != Node::Kind::Iri) fail(*rf, "referenceFormulation must be an IRI");
        if (rf->value == QL + "CSV") {
            ls.formulation = ReferenceFormulation::Csv;
        } else if (rf->value == QL + "JSONPath") {
            ls.formulation = ReferenceFormulation::JsonPath;
        } else {
            fail(*rf, "unsupported reference formulation <" + rf->value +
                          "> (ql:CSV and ql:JSONPath only)");
        }
        ls.iterator = literal_value(entry, RML + "iterator", "a logical source");
        if (ls.formulation == ReferenceFormulation::Csv && !ls.iterator.empty()) {
            fail(entry.subject, "CSV sources do not take an rml:iterator");
        }
        if (ls.formulation == ReferenceFormulation::JsonPath && ls.iterator.empty()) {
            fail(entry.subject, "JSON sources require an rml:iterator");
        }
        return ls;
    }

    TermMap build_term_map(const SubjectEntry& entry, const char* where) {
        const Node* tmpl = single(entry, RR + "template");
        const Node* ref = single(entry, RML + "reference");
        const Node* constant = single(entry, RR + "constant");
        int present = (tmpl != nullptr) + (ref != nullptr) + (constant != nullptr);
        if (present != 1) {
            fail(entry.subject, std::string(where) +
                                    " needs exactly one of rr:template, rml:reference, rr:constant");
        }
        TermMap tm;
        if (tmpl) {
            if (tmpl->kind != Node::Kind::Literal) fail(*tmpl, "rr:template must be a string");
            tm.kind = TermMapKind::Template;
            tm.value = tmpl->value;
            std::string err = validate_template(tm.value);
            if (!err.empty()) fail(*tmpl, err);
        } else if (ref) {
            if (ref->kind != Node::Kind::Literal) fail(*ref, "rml:reference must be a string");
            if (ref->value.empty()) fail(*ref, "rml:reference names an empty attribute");
            tm.kind = TermMapKind::Reference;
            tm.value = ref->value;
        } else {
            tm.kind = TermMapKind::Constant;
            tm.value = constant->value;
            tm.term_type = constant->kind == Node::Kind::Iri ? TermType::Iri : TermType::Literal;
            if (constant->kind == Node::Kind::Blank) {
                fail(*constant, "rr:constant must be an IRI or literal");
            }
            if (!constant->datatype.empty()) tm.datatype = constant->datatype;
        }
        return tm;
    }

    void build_subject_map(const SubjectEntry& entry, TriplesMap& tm) {
        require_known(entry,
                      {RR + "template", RML + "reference", RR + "constant", RR + "class"},
                      "a subject map");
        tm.subject_map = build_term_map(entry, "a subject map");
        tm.subject_map.term_type = TermType::Iri; // subjects produce IRIs only
        if (tm.subject_map.kind == TermMapKind::Constant &&
            single(entry, RR + "constant")->kind != Node::Kind::Iri) {
            fail(entry.subject, "subject map constants must be IRIs");
        }
        for (const auto& [p, o] : entry.statements) {
            if (p == RR + "class") {
                if (o.kind != Node::Kind::Iri) fail(o, "rr:class must be an IRI");
                tm.subject_classes.push_back(o.value);
            }
        }
    }

    PredicateObjectMap build_pom(const SubjectEntry& entry) {
        require_known(entry, {RR + "predicate", RR + "objectMap"}, "a predicate-object map");
        PredicateObjectMap pom;
        if (count(entry, RR + "predicate") != 1) {
            fail(entry.subject, "a predicate-object map needs exactly one rr:predicate");
        }
        const Node* pred = single(entry, RR + "predicate");
        if (pred->kind != Node::Kind::Iri) fail(*pred, "rr:predicate must be an IRI");
        pom.predicate = pred->value;

        if (count(entry, RR + "objectMap") != 1) {
            fail(entry.subject, "a predicate-object map needs exactly one rr:objectMap");
        }
        const Node* om = single(entry, RR + "objectMap");
        const SubjectEntry& obj = deref(*om, "rr:objectMap");

        const Node* parent = single(obj, RR + "parentTriplesMap");
        if (parent != nullptr) {
            require_known(obj, {RR + "parentTriplesMap", RR + "joinCondition"}, "an object map");
            if (parent->kind != Node::Kind::Iri) {
                fail(*parent, "rr:parentTriplesMap must be an IRI");
            }
            std::vector<JoinPair> condition;
            for (const auto& [p, o] : obj.statements) {
                if (p != RR + "joinCondition") continue;
                const SubjectEntry& jc = deref(o, "rr:joinCondition");
                require_known(jc, {RR + "child", RR + "parent"}, "a join condition");
                std::string child = literal_value(jc, RR + "child", "a join condition");
                std::string par = literal_value(jc, RR + "parent", "a join condition");
                if (child.empty() || par.empty()) {
                    fail(o, "a join condition needs non-empty rr:child and rr:parent attributes");
                }
                condition.push_back(JoinPair{child, par});
            }
            if (condition.empty()) {
                pom.object = ReferenceObject{parent->value};
            } else {
                pom.object = JoinObject{parent->value, std::move(condition)};
            }
        } else {
            require_known(obj,
                          {RR + "template", RML + "reference", RR + "constant", RR + "datatype"},
                          "an object map");
            TermMap tm = build_term_map(obj, "an object map");
            // objects default to literals for direct references, IRIs for templates
            if (tm.kind == TermMapKind::Reference) tm.term_type = TermType::Literal;
            if (tm.kind == TermMapKind::Template) tm.term_type = TermType::Iri;
            const Node* dt = single(obj, RR + "datatype");
            if (dt != nullptr) {
                if (dt->kind != Node::Kind::Iri) fail(*dt, "rr:datatype must be an IRI");
                if (tm.term_type == TermType::Iri) {
                    fail(*dt, "rr:datatype applies to literal object maps only");
                }
                tm.datatype = dt->value;
            }
            pom.object = SimpleObject{std::move(tm)};
        }
        return pom;
    }
};

} // namespace

DataIntegrationSystem parse_mapping(std::string_view document, std::string_view filename) {
    TripleStore store;
    std::map<std::string, std::string> prefixes;
    TurtleReader reader(document, filename);
    reader.read(store, prefixes);
    MappingBuilder builder(store, std::string(filename));
    return builder.build(std::move(prefixes));
}

DataIntegrationSystem parse_mapping_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw SourceError("cannot open mapping file: " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    DataIntegrationSystem dis = parse_mapping(buf.str(), path.string());
    dis.base_dir = path.parent_path().string();
    return dis;
}

} // namespace rdfmat
