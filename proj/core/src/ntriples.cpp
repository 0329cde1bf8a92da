#include "rdfmat/ntriples.hpp"

#include "rdfmat/errors.hpp"

namespace rdfmat {

namespace {

const char HEX[] = "0123456789ABCDEF";

void append_u_escape(std::string& out, unsigned char c) {
    out += "\\u00";
    out += HEX[c >> 4];
    out += HEX[c & 0xF];
}

} // namespace

std::string render_iri(std::string_view iri) {
    std::string out = "<";
    for (char c : iri) {
        unsigned char u = static_cast<unsigned char>(c);
        if (u <= 0x20 || c == '<' || c == '>' || c == '"' || c == '{' || c == '}' || c == '|' ||
            c == '^' || c == '`' || c == '\\') {
            throw SerializeError("character 0x" + std::string(1, HEX[u >> 4]) +
                                 std::string(1, HEX[u & 0xF]) + " is not allowed in the IRI <" +
                                 std::string(iri) + ">");
        }
        out += c;
    }
    out += '>';
    return out;
}

std::string render_literal(std::string_view lexical, std::string_view datatype) {
    std::string out = "\"";
    for (char c : lexical) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                append_u_escape(out, static_cast<unsigned char>(c));
            } else {
                out += c;
            }
        }
    }
    out += '"';
    if (!datatype.empty()) {
        out += "^^";
        out += render_iri(datatype);
    }
    return out;
}

std::string render_term(const TermValue& term) {
    return term.is_iri ? render_iri(term.lexical) : render_literal(term.lexical, term.datatype);
}

std::string ntriples_line(std::string_view subject_term, std::string_view predicate_term,
                          std::string_view object_term) {
    std::string line;
    line.reserve(subject_term.size() + predicate_term.size() + object_term.size() + 5);
    line += subject_term;
    line += ' ';
    line += predicate_term;
    line += ' ';
    line += object_term;
    line += " .\n";
    return line;
}

std::string serialize_ntriples(std::string_view subject_iri, std::string_view predicate_iri,
                               const TermValue& object) {
    return ntriples_line(render_iri(subject_iri), render_iri(predicate_iri), render_term(object));
}

} // namespace rdfmat
