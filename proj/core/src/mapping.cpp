#include "rdfmat/mapping.hpp"

#include "rdfmat/errors.hpp"

namespace rdfmat {

const TriplesMap* DataIntegrationSystem::find_map(std::string_view id) const {
    for (const auto& m : mappings) {
        if (m.id == id) return &m;
    }
    return nullptr;
}

std::string_view to_string(OperatorKind kind) {
    switch (kind) {
    case OperatorKind::Som: return "SOM";
    case OperatorKind::Orm: return "ORM";
    case OperatorKind::Ojm: return "OJM";
    }
    return "SOM";
}

std::optional<OperatorKind> operator_kind_from_string(std::string_view s) {
    if (s == "SOM" || s == "som") return OperatorKind::Som;
    if (s == "ORM" || s == "orm") return OperatorKind::Orm;
    if (s == "OJM" || s == "ojm") return OperatorKind::Ojm;
    return std::nullopt;
}

OperatorKind classify_pom(const PredicateObjectMap& pom, const TriplesMap& child,
                          const TriplesMap* parent) {
    if (std::holds_alternative<SimpleObject>(pom.object)) {
        return OperatorKind::Som;
    }
    if (std::holds_alternative<JoinObject>(pom.object)) {
        if (parent == nullptr) {
            throw ClassifyError("join object map in <" + child.id + "> has no resolved parent");
        }
        return OperatorKind::Ojm;
    }
    const auto& ref = std::get<ReferenceObject>(pom.object);
    if (parent == nullptr) {
        throw ClassifyError("reference object map in <" + child.id + "> has no resolved parent");
    }
    if (!(parent->logical_source == child.logical_source)) {
        throw ClassifyError("reference object map in <" + child.id + "> requires parent <" +
                            ref.parent_id + "> to read the same logical source (child: " +
                            child.logical_source.source_path + ", parent: " +
                            parent->logical_source.source_path + ")");
    }
    return OperatorKind::Orm;
}

bool is_iunreserved(char32_t cp) {
    if ((cp >= 'A' && cp <= 'Z') || (cp >= 'a' && cp <= 'z') || (cp >= '0' && cp <= '9')) {
        return true;
    }
    if (cp == '-' || cp == '.' || cp == '_' || cp == '~') return true;
    // ucschar ranges
    if (cp >= 0xA0 && cp <= 0xD7FF) return true;
    if (cp >= 0xF900 && cp <= 0xFDCF) return true;
    if (cp >= 0xFDF0 && cp <= 0xFFEF) return true;
    if (cp >= 0x10000 && cp <= 0xEFFFD) {
        // planes 1..14, each ending at FFFD, with a gap at E0000-E0FFF
        if ((cp & 0xFFFF) > 0xFFFD) return false;
        if (cp >= 0xE0000 && cp <= 0xE0FFF) return false;
        return true;
    }
    return false;
}

namespace {

void percent_encode_byte(unsigned char b, std::string& out) {
    static const char hex[] = "0123456789ABCDEF";
    out += '%';
    out += hex[b >> 4];
    out += hex[b & 0xF];
}

// Decode one UTF-8 code point starting at i; returns the number of bytes
// consumed, or 0 for an invalid sequence.
size_t utf8_decode(std::string_view s, size_t i, char32_t& cp) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (c < 0x80) {
        cp = c;
        return 1;
    }
    size_t len = 0;
    char32_t v = 0;
    if ((c & 0xE0) == 0xC0) {
        len = 2;
        v = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
        len = 3;
        v = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
        len = 4;
        v = c & 0x07;
    } else {
        return 0;
    }
    if (i + len > s.size()) return 0;
    for (size_t k = 1; k < len; ++k) {
        unsigned char cc = static_cast<unsigned char>(s[i + k]);
        if ((cc & 0xC0) != 0x80) return 0;
        v = (v << 6) | (cc & 0x3F);
    }
    // reject overlong encodings and surrogates
    if (len == 2 && v < 0x80) return 0;
    if (len == 3 && v < 0x800) return 0;
    if (len == 4 && v < 0x10000) return 0;
    if (v >= 0xD800 && v <= 0xDFFF) return 0;
    if (v > 0x10FFFF) return 0;
    cp = v;
    return len;
}

} // namespace

std::string iri_safe_encode(std::string_view value) {
    std::string out;
    out.reserve(value.size());
    size_t i = 0;
    while (i < value.size()) {
        char32_t cp = 0;
        size_t len = utf8_decode(value, i, cp);
        if (len == 0) {
            percent_encode_byte(static_cast<unsigned char>(value[i]), out);
            ++i;
            continue;
        }
        if (is_iunreserved(cp)) {
            out.append(value.substr(i, len));
        } else {
            for (size_t k = 0; k < len; ++k) {
                percent_encode_byte(static_cast<unsigned char>(value[i + k]), out);
            }
        }
        i += len;
    }
    return out;
}

std::string validate_template(std::string_view tmpl) {
    bool open = false;
    size_t start = 0;
    bool any = false;
    for (size_t i = 0; i < tmpl.size(); ++i) {
        char c = tmpl[i];
        if (c == '{') {
            if (open) return "nested '{' in template";
            open = true;
            start = i + 1;
        } else if (c == '}') {
            if (!open) return "unmatched '}' in template";
            if (i == start) return "empty attribute name in template";
            open = false;
            any = true;
        }
    }
    if (open) return "unterminated '{' in template";
    if (!any) return "template contains no {attribute} placeholder";
    return {};
}

std::vector<std::string> template_attributes(std::string_view tmpl) {
    std::vector<std::string> attrs;
    size_t i = 0;
    while (i < tmpl.size()) {
        if (tmpl[i] == '{') {
            size_t end = tmpl.find('}', i + 1);
            if (end == std::string_view::npos) break;
            attrs.emplace_back(tmpl.substr(i + 1, end - i - 1));
            i = end + 1;
        } else {
            ++i;
        }
    }
    return attrs;
}

std::optional<std::string> expand_template(const TermMap& term, const Record& record) {
    std::string out;
    out.reserve(term.value.size() + 16);
    std::string_view tmpl = term.value;
    size_t i = 0;
    while (i < tmpl.size()) {
        char c = tmpl[i];
        if (c != '{') {
            out += c;
            ++i;
            continue;
        }
        size_t end = tmpl.find('}', i + 1);
        if (end == std::string_view::npos) {
            // validated at parse time; treat a stray '{' literally
            out += c;
            ++i;
            continue;
        }
        std::string_view attr = tmpl.substr(i + 1, end - i - 1);
        const std::string* value = record.find(attr);
        if (value == nullptr || value->empty()) {
            return std::nullopt;
        }
        if (term.term_type == TermType::Iri) {
            out += iri_safe_encode(*value);
        } else {
            out += *value;
        }
        i = end + 1;
    }
    return out;
}

std::optional<std::string> expand_term(const TermMap& term, const Record& record) {
    switch (term.kind) {
    case TermMapKind::Constant:
        return term.value;
    case TermMapKind::Reference: {
        const std::string* value = record.find(term.value);
        if (value == nullptr || value->empty()) return std::nullopt;
        if (term.term_type == TermType::Iri) return iri_safe_encode(*value);
        return *value;
    }
    case TermMapKind::Template:
        return expand_template(term, record);
    }
    return std::nullopt;
}

std::optional<std::vector<std::string>> project_attributes(const Record& record,
                                                           const std::vector<std::string>& attrs) {
    std::vector<std::string> out;
    out.reserve(attrs.size());
    for (const auto& a : attrs) {
        const std::string* value = record.find(a);
        if (value == nullptr || value->empty()) return std::nullopt;
        out.push_back(*value);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Round-trip serialization of the mapping model. Terms are written as full
// IRIs so the output never depends on which prefixes the source document
// declared; the prefix table itself is preserved verbatim.
// ---------------------------------------------------------------------------

namespace {

std::string turtle_string(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default: out += c;
        }
    }
    out += '"';
    return out;
}

std::string iri_ref(std::string_view iri) {
    return "<" + std::string(iri) + ">";
}

} // namespace

std::string serialize_mapping(const DataIntegrationSystem& dis) {
    std::string out;
    for (const auto& [name, iri] : dis.ontology_prefixes) {
        out += "@prefix " + name + ": " + iri_ref(iri) + " .\n";
    }
    if (!dis.ontology_prefixes.empty()) out += "\n";
    // rml/rr/ql terms below are written as full IRIs on purpose
    static const std::string RML = "http://semweb.mmlab.be/ns/rml#";
    static const std::string RR = "http://www.w3.org/ns/r2rml#";
    static const std::string QL = "http://semweb.mmlab.be/ns/ql#";

    std::string body;
    for (const auto& m : dis.mappings) {
        body += iri_ref(m.id) + "\n";
        body += "  " + iri_ref(RML + "logicalSource") + " [ ";
        body += iri_ref(RML + "source") + " " + turtle_string(m.logical_source.source_path);
        body += " ; " + iri_ref(RML + "referenceFormulation") + " ";
        body += iri_ref(m.logical_source.formulation == ReferenceFormulation::Csv ? QL + "CSV"
                                                                                  : QL + "JSONPath");
        if (!m.logical_source.iterator.empty()) {
            body += " ; " + iri_ref(RML + "iterator") + " " + turtle_string(m.logical_source.iterator);
        }
        body += " ] ;\n";

        body += "  " + iri_ref(RR + "subjectMap") + " [ ";
        {
            std::string sm;
            TermMap subject = m.subject_map;
            // subject maps never carry datatypes; serialize the bare map
            if (subject.kind == TermMapKind::Template) {
                sm = iri_ref(RR + "template") + " " + turtle_string(subject.value);
            } else if (subject.kind == TermMapKind::Reference) {
                sm = iri_ref(RML + "reference") + " " + turtle_string(subject.value);
            } else {
                sm = iri_ref(RR + "constant") + " " + iri_ref(subject.value);
            }
            body += sm;
        }
        for (const auto& cls : m.subject_classes) {
            body += " ; " + iri_ref(RR + "class") + " " + iri_ref(cls);
        }
        body += " ]";

        for (const auto& pom : m.predicate_object_maps) {
            body += " ;\n  " + iri_ref(RR + "predicateObjectMap") + " [\n";
            body += "    " + iri_ref(RR + "predicate") + " " + iri_ref(pom.predicate) + " ;\n";
            body += "    " + iri_ref(RR + "objectMap") + " [ ";
            if (const auto* simple = std::get_if<SimpleObject>(&pom.object)) {
                const TermMap& tm = simple->term;
                if (tm.kind == TermMapKind::Template) {
                    body += iri_ref(RR + "template") + " " + turtle_string(tm.value);
                } else if (tm.kind == TermMapKind::Reference) {
                    body += iri_ref(RML + "reference") + " " + turtle_string(tm.value);
                } else {
                    body += iri_ref(RR + "constant") + " ";
                    body += (tm.term_type == TermType::Iri) ? iri_ref(tm.value)
                                                            : turtle_string(tm.value);
                }
                if (!tm.datatype.empty()) {
                    body += " ; " + iri_ref(RR + "datatype") + " " + iri_ref(tm.datatype);
                }
            } else if (const auto* ref = std::get_if<ReferenceObject>(&pom.object)) {
                body += iri_ref(RR + "parentTriplesMap") + " " + iri_ref(ref->parent_id);
            } else {
                const auto& join = std::get<JoinObject>(pom.object);
                body += iri_ref(RR + "parentTriplesMap") + " " + iri_ref(join.parent_id);
                for (const auto& jc : join.condition) {
                    body += " ; " + iri_ref(RR + "joinCondition") + " [ ";
                    body += iri_ref(RR + "child") + " " + turtle_string(jc.child_attr) + " ; ";
                    body += iri_ref(RR + "parent") + " " + turtle_string(jc.parent_attr) + " ]";
                }
            }
            body += " ]\n  ]";
        }
        body += " .\n\n";
    }
    return out + body;
}

} // namespace rdfmat
