#pragma once

#include <string>
#include <string_view>

namespace rdfmat {

/// A fully expanded RDF term ready for serialization.
struct TermValue {
    bool is_iri = true;
    std::string lexical;  // IRI text or literal value (unescaped)
    std::string datatype; // optional datatype IRI for literals
};

/// "<iri>" token. Throws SerializeError when the IRI contains characters the
/// N-Triples grammar forbids even after escaping (controls, spaces, <>"{}|^`\).
std::string render_iri(std::string_view iri);

/// Quoted literal token with N-Triples escapes and optional ^^<datatype>.
std::string render_literal(std::string_view lexical, std::string_view datatype = {});

std::string render_term(const TermValue& term);

/// One canonical N-Triples line, terminated with " .\n".
std::string serialize_ntriples(std::string_view subject_iri, std::string_view predicate_iri,
                               const TermValue& object);

/// Compose a line from already rendered term tokens.
std::string ntriples_line(std::string_view subject_term, std::string_view predicate_term,
                          std::string_view object_term);

} // namespace rdfmat
