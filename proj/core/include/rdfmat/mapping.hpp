#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rdfmat/record.hpp"

namespace rdfmat {

enum class TermMapKind { Constant, Reference, Template };
enum class TermType { Iri, Literal };

/// A term map produces one RDF term per source record: a fixed constant, the
/// value of a single attribute, or a template with `{attr}` placeholders.
struct TermMap {
    TermMapKind kind = TermMapKind::Constant;
    std::string value;    // constant IRI/literal text, attribute name, or template
    TermType term_type = TermType::Iri;
    std::string datatype; // optional datatype IRI, empty when none

    bool operator==(const TermMap&) const = default;
};

enum class ReferenceFormulation { Csv, JsonPath };

struct LogicalSource {
    std::string source_path;
    ReferenceFormulation formulation = ReferenceFormulation::Csv;
    std::string iterator; // JSON only, e.g. "$.rows[*]"

    bool operator==(const LogicalSource&) const = default;
};

struct JoinPair {
    std::string child_attr;
    std::string parent_attr;

    bool operator==(const JoinPair&) const = default;
};

/// Object produced from the record itself.
struct SimpleObject {
    TermMap term;
    bool operator==(const SimpleObject&) const = default;
};

/// Object is the parent map's subject over the same record (same logical source).
struct ReferenceObject {
    std::string parent_id;
    bool operator==(const ReferenceObject&) const = default;
};

/// Object is the parent map's subject joined across sources on a condition.
struct JoinObject {
    std::string parent_id;
    std::vector<JoinPair> condition;
    bool operator==(const JoinObject&) const = default;
};

struct PredicateObjectMap {
    std::string predicate; // constant predicate IRI
    std::variant<SimpleObject, ReferenceObject, JoinObject> object;

    bool operator==(const PredicateObjectMap&) const = default;
};

struct TriplesMap {
    std::string id; // IRI, unique within a mapping set
    LogicalSource logical_source;
    TermMap subject_map; // produces IRIs only
    std::vector<std::string> subject_classes;
    std::vector<PredicateObjectMap> predicate_object_maps;

    bool operator==(const TriplesMap&) const = default;
};

enum class RunMode { Optimized, Naive };

/// A parsed, fully resolved mapping set plus engine-level configuration.
struct DataIntegrationSystem {
    std::map<std::string, std::string> ontology_prefixes;
    std::vector<LogicalSource> sources; // distinct logical sources, document order
    std::vector<TriplesMap> mappings;
    std::string output_path;
    RunMode mode = RunMode::Optimized;
    std::string base_dir; // directory of the mapping file; resolves relative sources

    const TriplesMap* find_map(std::string_view id) const;
};

enum class OperatorKind { Som, Orm, Ojm };

std::string_view to_string(OperatorKind kind);
std::optional<OperatorKind> operator_kind_from_string(std::string_view s);

/// Decide which physical operator executes a predicate-object map.
/// `parent` must be supplied iff the object references another map.
/// Throws ClassifyError for a ReferenceObject whose parent reads a
/// different logical source.
OperatorKind classify_pom(const PredicateObjectMap& pom, const TriplesMap& child,
                          const TriplesMap* parent);

/// Percent-encode every character outside the RFC 3987 iunreserved set.
/// Operates on UTF-8 input; invalid bytes are encoded as single %XX octets.
std::string iri_safe_encode(std::string_view value);

/// True when the code point may appear raw in an IRI path segment.
bool is_iunreserved(char32_t cp);

/// Expand a template-kind term map over a record. Each `{attr}` placeholder is
/// replaced by the record value, percent-encoded when the term is an IRI.
/// Returns nullopt when any referenced attribute is absent or empty.
std::optional<std::string> expand_template(const TermMap& term, const Record& record);

/// Evaluate any term map over a record (constant, reference or template),
/// with the same nullopt-on-missing policy.
std::optional<std::string> expand_term(const TermMap& term, const Record& record);

/// Validate a template string: balanced braces, non-empty attribute names.
/// Returns an error description, or empty string when valid.
std::string validate_template(std::string_view tmpl);

/// Attribute names referenced by a template, in order of appearance.
std::vector<std::string> template_attributes(std::string_view tmpl);

/// Serialize a mapping set back to the supported Turtle subset. Re-parsing the
/// result yields a structurally identical mapping set.
std::string serialize_mapping(const DataIntegrationSystem& dis);

} // namespace rdfmat
