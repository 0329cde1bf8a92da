#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "rdfmat/errors.hpp"
#include "rdfmat/mapping.hpp"
#include "rdfmat/turtle.hpp"
#include "test_util.hpp"

using namespace rdfmat;

namespace {

const std::string IASIS = "http://project-iasis.eu/vocab/";

DataIntegrationSystem parse_biomed() {
    return parse_mapping(testutil::kBiomedMapping, "mapping.ttl");
}

} // namespace

TEST_CASE("biomed mapping document parses into three resolved maps") {
    DataIntegrationSystem dis = parse_biomed();
    REQUIRE(dis.mappings.size() == 3);

    const TriplesMap& m1 = dis.mappings[0];
    CHECK(m1.id == "#TripleMap1");
    CHECK(m1.logical_source.source_path == "dataSource1.csv");
    CHECK(m1.logical_source.formulation == ReferenceFormulation::Csv);
    CHECK(m1.subject_map.kind == TermMapKind::Template);
    CHECK(m1.subject_map.value == "http://iasis.eu/{uniprot}_{enst}");
    REQUIRE(m1.subject_classes.size() == 1);
    CHECK(m1.subject_classes[0] == IASIS + "RBP_RNA_PhysicalInteraction");
    REQUIRE(m1.predicate_object_maps.size() == 2);

    // one simple, one reference, one join map across the document
    int simple = 0, reference = 0, join = 0;
    for (const auto& m : dis.mappings) {
        for (const auto& pom : m.predicate_object_maps) {
            if (std::holds_alternative<SimpleObject>(pom.object)) ++simple;
            if (std::holds_alternative<ReferenceObject>(pom.object)) ++reference;
            if (std::holds_alternative<JoinObject>(pom.object)) ++join;
        }
    }
    CHECK(simple == 1);
    CHECK(reference == 1);
    CHECK(join == 1);

    const auto& join_pom = dis.mappings[1].predicate_object_maps[0];
    const auto& join_obj = std::get<JoinObject>(join_pom.object);
    CHECK(join_obj.parent_id == "#TripleMap3");
    REQUIRE(join_obj.condition.size() == 1);
    CHECK(join_obj.condition[0].child_attr == "enst");
    CHECK(join_obj.condition[0].parent_attr == "enst");

    // distinct sources collected in document order
    REQUIRE(dis.sources.size() == 2);
    CHECK(dis.sources[0].source_path == "dataSource1.csv");
    CHECK(dis.sources[1].source_path == "dataSource2.csv");
}

TEST_CASE("document with zero triples maps parses to an empty mapping set") {
    DataIntegrationSystem dis = parse_mapping("@prefix ex: <http://example.org/> .\n");
    CHECK(dis.mappings.empty());
    CHECK(parse_mapping("").mappings.empty());
    CHECK(parse_mapping("# just a comment\n").mappings.empty());
}

TEST_CASE("dangling parentTriplesMap is an error naming the missing id") {
    std::string doc = R"(@prefix rr: <http://www.w3.org/ns/r2rml#> .
@prefix rml: <http://semweb.mmlab.be/ns/rml#> .
@prefix ql: <http://semweb.mmlab.be/ns/ql#> .
@prefix ex: <http://example.org/> .
<#M> rml:logicalSource [ rml:source "a.csv" ; rml:referenceFormulation ql:CSV ] ;
  rr:subjectMap [ rr:template "http://x/{id}" ] ;
  rr:predicateObjectMap [ rr:predicate ex:p ; rr:objectMap [ rr:parentTriplesMap <#Missing> ] ] .
)";
    CHECK_THROWS_WITH_AS(parse_mapping(doc), doctest::Contains("#Missing"), MappingParseError);
}

TEST_CASE("classification dispatches on the object map shape") {
    DataIntegrationSystem dis = parse_biomed();
    const TriplesMap& m1 = dis.mappings[0];
    const TriplesMap& m2 = dis.mappings[1];
    const TriplesMap& m3 = dis.mappings[2];

    CHECK(classify_pom(m1.predicate_object_maps[0], m1, nullptr) == OperatorKind::Som);
    CHECK(classify_pom(m1.predicate_object_maps[1], m1, &m2) == OperatorKind::Orm);
    CHECK(classify_pom(m2.predicate_object_maps[0], m2, &m3) == OperatorKind::Ojm);

    // deterministic over repeated calls
    for (int i = 0; i < 3; ++i) {
        CHECK(classify_pom(m1.predicate_object_maps[0], m1, nullptr) == OperatorKind::Som);
    }
}

TEST_CASE("reference object maps require an identical logical source") {
    DataIntegrationSystem dis = parse_biomed();
    const TriplesMap& m1 = dis.mappings[0];
    const TriplesMap& m3 = dis.mappings[2]; // reads dataSource2.csv
    CHECK_THROWS_AS(classify_pom(m1.predicate_object_maps[1], m1, &m3), ClassifyError);

    // same path but different formulation is a different source
    TriplesMap json_twin = m1;
    json_twin.logical_source.formulation = ReferenceFormulation::JsonPath;
    json_twin.logical_source.iterator = "$.rows[*]";
    CHECK_THROWS_AS(classify_pom(m1.predicate_object_maps[1], m1, &json_twin), ClassifyError);
}

TEST_CASE("template expansion substitutes record values") {
    TermMap tmpl{TermMapKind::Template, "http://iasis.eu/{uniprot}_{enst}", TermType::Iri, ""};
    auto rec = testutil::make_record({{"uniprot", "Q8WU90"}, {"enst", "ENST00000415827"}});
    auto out = expand_template(tmpl, rec);
    REQUIRE(out.has_value());
    CHECK(*out == "http://iasis.eu/Q8WU90_ENST00000415827");
}

TEST_CASE("expansion returns nothing when a referenced attribute is empty or absent") {
    TermMap tmpl{TermMapKind::Template, "{a}", TermType::Iri, ""};
    CHECK_FALSE(expand_template(tmpl, testutil::make_record({{"a", ""}})).has_value());
    CHECK_FALSE(expand_template(tmpl, testutil::make_record({{"b", "x"}})).has_value());
    CHECK(expand_template(tmpl, testutil::make_record({{"a", "x"}})).has_value());
}

TEST_CASE("substituted IRI values are percent-encoded, template text is not") {
    TermMap tmpl{TermMapKind::Template, "ex:{a} {b}", TermType::Iri, ""};
    auto rec = testutil::make_record({{"a", "x y"}, {"b", "z"}});
    auto out = expand_template(tmpl, rec);
    REQUIRE(out.has_value());
    CHECK(*out == "ex:x%20y z");
    CHECK(out->find("x%20y") != std::string::npos);
    CHECK(oracle::iri_encode("x y") == "x%20y");
}

TEST_CASE("iri_safe_encode matches the table-driven reference encoder") {
    // targeted cases first
    for (const std::string s : {"", "abc", "A-Z_0.9~", "x y", "a/b?c#d", "100%", "köln",
                                "日本語", "a\tb", "\xff\xfe", "q\x80w", "emoji \xF0\x9F\x98\x80"}) {
        CAPTURE(s);
        CHECK(iri_safe_encode(s) == oracle::iri_encode(s));
    }

    std::mt19937 gen(7);
    for (int iter = 0; iter < 2000; ++iter) {
        size_t len = gen() % 24;
        std::string s;
        for (size_t i = 0; i < len; ++i) {
            s += static_cast<char>(gen() % 256);
        }
        CAPTURE(s);
        CHECK(iri_safe_encode(s) == oracle::iri_encode(s));
    }
}

TEST_CASE("literal-typed templates substitute raw values") {
    TermMap tmpl{TermMapKind::Template, "{a} {b}", TermType::Literal, ""};
    auto rec = testutil::make_record({{"a", "x y"}, {"b", "z"}});
    CHECK(*expand_template(tmpl, rec) == "x y z");
}

TEST_CASE("template validation rejects malformed placeholder syntax") {
    CHECK(validate_template("http://x/{id}").empty());
    CHECK_FALSE(validate_template("http://x/{id").empty());
    CHECK_FALSE(validate_template("http://x/{}").empty());
    CHECK_FALSE(validate_template("http://x/}{").empty());
    CHECK_FALSE(validate_template("http://x/{a{b}}").empty());
    CHECK_FALSE(validate_template("no placeholders").empty());
    CHECK(template_attributes("{a}-{b}/{a}") == std::vector<std::string>{"a", "b", "a"});
}

TEST_CASE("unsupported constructs are rejected with positioned errors") {
    auto expect_error = [](const std::string& doc, const std::string& needle) {
        CAPTURE(doc);
        CAPTURE(needle);
        try {
            parse_mapping(doc, "t.ttl");
            FAIL_CHECK("expected a parse error containing: " << needle);
        } catch (const MappingParseError& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
            CHECK(e.line() >= 1);
            CHECK(e.file() == "t.ttl");
        }
    };

    const std::string prelude = "@prefix rr: <http://www.w3.org/ns/r2rml#> .\n"
                                "@prefix rml: <http://semweb.mmlab.be/ns/rml#> .\n"
                                "@prefix ql: <http://semweb.mmlab.be/ns/ql#> .\n"
                                "@prefix ex: <http://example.org/> .\n";

    // unknown vocabulary term
    expect_error(prelude + "<#M> rml:logicalSource [ rml:source \"a.csv\" ; "
                           "rml:referenceFormulation ql:CSV ] ;\n"
                           "rr:subjectMap [ rr:template \"http://x/{i}\" ] ;\n"
                           "rr:graphMap ex:g .\n",
                 "unsupported vocabulary term");
    // named graphs inside a pom
    expect_error(prelude + "<#M> rml:logicalSource [ rml:source \"a.csv\" ; "
                           "rml:referenceFormulation ql:CSV ] ;\n"
                           "rr:subjectMap [ rr:template \"http://x/{i}\" ] ;\n"
                           "rr:predicateObjectMap [ rr:predicate ex:p ; rr:graph ex:g ;"
                           " rr:objectMap [ rml:reference \"v\" ] ] .\n",
                 "unsupported vocabulary term");
    // XML sources are out
    expect_error(prelude + "<#M> rml:logicalSource [ rml:source \"a.xml\" ; "
                           "rml:referenceFormulation ql:XPath ; rml:iterator \"/r\" ] ;\n"
                           "rr:subjectMap [ rr:template \"http://x/{i}\" ] .\n",
                 "unsupported reference formulation");
    // undeclared prefix
    expect_error("<#M> foo:bar \"x\" .\n", "undeclared prefix");
    // collections
    expect_error(prelude + "<#M> rr:subjectMap ( ex:a ex:b ) .\n", "collections");
    // multiline literal
    expect_error(prelude + "<#M> rr:subjectMap \"\"\"x\"\"\" .\n", "multiline");
    // @base
    expect_error("@base <http://example.org/> .\n", "@base");
    // language tags
    expect_error(prelude + "<#M> rr:subjectMap \"x\"@en .\n", "language tags");
    // numeric literal
    expect_error(prelude + "<#M> rr:subjectMap 42 .\n", "numeric literals");
    // CSV with an iterator
    expect_error(prelude + "<#M> rml:logicalSource [ rml:source \"a.csv\" ; "
                           "rml:referenceFormulation ql:CSV ; rml:iterator \"$.x\" ] ;\n"
                           "rr:subjectMap [ rr:template \"http://x/{i}\" ] .\n",
                 "do not take an rml:iterator");
    // JSON without an iterator
    expect_error(prelude + "<#M> rml:logicalSource [ rml:source \"a.json\" ; "
                           "rml:referenceFormulation ql:JSONPath ] ;\n"
                           "rr:subjectMap [ rr:template \"http://x/{i}\" ] .\n",
                 "require an rml:iterator");
    // broken template
    expect_error(prelude + "<#M> rml:logicalSource [ rml:source \"a.csv\" ; "
                           "rml:referenceFormulation ql:CSV ] ;\n"
                           "rr:subjectMap [ rr:template \"http://x/{id\" ] .\n",
                 "unterminated");
    // literal subject constants
    expect_error(prelude + "<#M> rml:logicalSource [ rml:source \"a.csv\" ; "
                           "rml:referenceFormulation ql:CSV ] ;\n"
                           "rr:subjectMap [ rr:constant \"notaniri\" ] .\n",
                 "subject map constants must be IRIs");
    // duplicate ids
    expect_error(prelude +
                     "<#M> rml:logicalSource [ rml:source \"a.csv\" ; "
                     "rml:referenceFormulation ql:CSV ] ; rr:subjectMap [ rr:template "
                     "\"http://x/{i}\" ] .\n"
                     "<#M> rml:logicalSource [ rml:source \"a.csv\" ; "
                     "rml:referenceFormulation ql:CSV ] ; rr:subjectMap [ rr:template "
                     "\"http://x/{i}\" ] .\n",
                 "duplicate triples map id");
    // rdf:type with a foreign class
    expect_error(prelude + "<#M> a ex:Thing ; rml:logicalSource [ rml:source \"a.csv\" ; "
                           "rml:referenceFormulation ql:CSV ] ;"
                           " rr:subjectMap [ rr:template \"http://x/{i}\" ] .\n",
                 "rr:TriplesMap");
}

TEST_CASE("a rr:TriplesMap type assertion is accepted") {
    std::string doc = "@prefix rr: <http://www.w3.org/ns/r2rml#> .\n"
                      "@prefix rml: <http://semweb.mmlab.be/ns/rml#> .\n"
                      "@prefix ql: <http://semweb.mmlab.be/ns/ql#> .\n"
                      "<#M> a rr:TriplesMap ;\n"
                      "  rml:logicalSource [ rml:source \"a.csv\" ; rml:referenceFormulation "
                      "ql:CSV ] ;\n"
                      "  rr:subjectMap [ rr:template \"http://x/{id}\" ] .\n";
    DataIntegrationSystem dis = parse_mapping(doc);
    CHECK(dis.mappings.size() == 1);
}

TEST_CASE("mapping sets round-trip through serialization") {
    DataIntegrationSystem dis = parse_biomed();
    std::string text = serialize_mapping(dis);
    DataIntegrationSystem again = parse_mapping(text, "roundtrip.ttl");
    CHECK(again.ontology_prefixes == dis.ontology_prefixes);
    CHECK(again.mappings == dis.mappings);
}

TEST_CASE("randomized mapping sets round-trip through serialization") {
    std::mt19937 gen(11);
    auto pick = [&](std::initializer_list<const char*> xs) {
        auto it = xs.begin();
        std::advance(it, gen() % xs.size());
        return std::string(*it);
    };

    for (int iter = 0; iter < 50; ++iter) {
        DataIntegrationSystem dis;
        dis.ontology_prefixes["ex"] = "http://example.org/";
        dis.ontology_prefixes["v"] = "http://v.org/ns#";
        size_t map_count = 1 + gen() % 3;
        for (size_t mi = 0; mi < map_count; ++mi) {
            TriplesMap m;
            m.id = "http://example.org/map/" + std::to_string(mi);
            m.logical_source.source_path = pick({"a.csv", "b.csv", "deep/c.csv"});
            if (gen() % 4 == 0) {
                m.logical_source.formulation = ReferenceFormulation::JsonPath;
                m.logical_source.iterator = "$.rows[*]";
            }
            m.subject_map = TermMap{TermMapKind::Template,
                                    "http://example.org/r/{" + pick({"id", "key"}) + "}",
                                    TermType::Iri, ""};
            if (gen() % 2) m.subject_classes.push_back("http://example.org/C" +
                                                       std::to_string(gen() % 3));
            size_t poms = gen() % 3;
            for (size_t pi = 0; pi < poms; ++pi) {
                PredicateObjectMap pom;
                pom.predicate = "http://example.org/p" + std::to_string(pi);
                switch (gen() % 3) {
                case 0: {
                    TermMap tm;
                    tm.kind = TermMapKind::Reference;
                    tm.value = pick({"v1", "v2"});
                    tm.term_type = TermType::Literal;
                    if (gen() % 2) tm.datatype = "http://www.w3.org/2001/XMLSchema#string";
                    pom.object = SimpleObject{tm};
                    break;
                }
                case 1:
                    pom.object = ReferenceObject{dis.mappings.empty() ? m.id
                                                                      : dis.mappings[0].id};
                    break;
                default:
                    pom.object = JoinObject{dis.mappings.empty() ? m.id : dis.mappings[0].id,
                                            {{pick({"k1", "k2"}), pick({"k1", "k2"})}}};
                }
                m.predicate_object_maps.push_back(std::move(pom));
            }
            dis.mappings.push_back(std::move(m));
        }
        // self-references keep every parent id resolvable
        std::string text = serialize_mapping(dis);
        CAPTURE(text);
        DataIntegrationSystem again = parse_mapping(text);
        CHECK(again.ontology_prefixes == dis.ontology_prefixes);
        CHECK(again.mappings == dis.mappings);
    }
}

TEST_CASE("parse_mapping_file resolves the base directory") {
    testutil::TempDir dir;
    auto mapping = testutil::write_biomed_fixture(dir.path());
    DataIntegrationSystem dis = parse_mapping_file(mapping);
    CHECK(dis.base_dir == dir.path().string());
    CHECK(dis.mappings.size() == 3);
}
