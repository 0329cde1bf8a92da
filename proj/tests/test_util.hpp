#pragma once

// Shared helpers for the test suites: temp directories, in-memory record
// streams, file fixtures shaped like the biomedical integration scenario.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rdfmat/record.hpp"
#include "rdfmat/source.hpp"

namespace testutil {

class TempDir {
public:
    TempDir() {
        auto base = std::filesystem::temp_directory_path() / "rdfmat-test-XXXXXX";
        std::string tmpl = base.string();
        if (mkdtemp(tmpl.data()) == nullptr) {
            throw std::runtime_error("mkdtemp failed");
        }
        path_ = tmpl;
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path file(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out.good()) throw std::runtime_error("failed to write " + path.string());
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

inline rdfmat::Record make_record(std::vector<std::pair<std::string, std::string>> bindings,
                                  uint64_t ordinal = 0) {
    auto names = std::make_shared<std::vector<std::string>>();
    std::vector<std::string> values;
    for (auto& [n, v] : bindings) {
        names->push_back(n);
        values.push_back(v);
    }
    return rdfmat::Record(std::move(names), std::move(values), ordinal);
}

/// Pull stream over a fixed record list.
class VectorStream final : public rdfmat::RecordStream {
public:
    explicit VectorStream(std::vector<rdfmat::Record> records) : records_(std::move(records)) {}

    std::optional<rdfmat::Record> next() override {
        if (pos_ >= records_.size()) return std::nullopt;
        return records_[pos_++];
    }

private:
    std::vector<rdfmat::Record> records_;
    size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Integration-scenario fixture: two biomedical-style sources and a mapping
// document with one simple, one reference and one join predicate-object map.
// ---------------------------------------------------------------------------

inline const char* kBiomedMapping = R"(@prefix rr: <http://www.w3.org/ns/r2rml#> .
@prefix rml: <http://semweb.mmlab.be/ns/rml#> .
@prefix ql: <http://semweb.mmlab.be/ns/ql#> .
@prefix iasis: <http://project-iasis.eu/vocab/> .

<#TripleMap1>
  rml:logicalSource [ rml:source "dataSource1.csv" ; rml:referenceFormulation ql:CSV ] ;
  rr:subjectMap [
    rr:template "http://iasis.eu/{uniprot}_{enst}" ;
    rr:class iasis:RBP_RNA_PhysicalInteraction
  ] ;
  rr:predicateObjectMap [
    rr:predicate iasis:interactionScore ;
    rr:objectMap [ rml:reference "omixcore" ]
  ] ;
  rr:predicateObjectMap [
    rr:predicate iasis:interactsWith ;
    rr:objectMap [ rr:parentTriplesMap <#TripleMap2> ]
  ] .

<#TripleMap2>
  rml:logicalSource [ rml:source "dataSource1.csv" ; rml:referenceFormulation ql:CSV ] ;
  rr:subjectMap [ rr:template "http://iasis.eu/transcript/{enst}" ] ;
  rr:predicateObjectMap [
    rr:predicate iasis:hasExon ;
    rr:objectMap [
      rr:parentTriplesMap <#TripleMap3> ;
      rr:joinCondition [ rr:child "enst" ; rr:parent "enst" ]
    ]
  ] .

<#TripleMap3>
  rml:logicalSource [ rml:source "dataSource2.csv" ; rml:referenceFormulation ql:CSV ] ;
  rr:subjectMap [ rr:template "http://iasis.eu/exon/{ense}" ; rr:class iasis:Exon ] .
)";

inline const char* kBiomedSource1 = "uniprot,enst,omixcore\n"
                                    "Q8WU90,ENST00000415827,0.665\n"
                                    "Q8WU90,ENST00000415827,0.665\n"
                                    "P12345,ENST00000000001,0.5\n";

inline const char* kBiomedSource2 = "enst,ense\n"
                                    "ENST00000415827,ENSE00003628092\n"
                                    "ENST00000415827,ENSE00003642731\n"
                                    "ENST00000000001,ENSE00000000001\n";

/// Write the biomedical fixture into `dir` and return the mapping path.
inline std::filesystem::path write_biomed_fixture(const std::filesystem::path& dir) {
    write_file(dir / "dataSource1.csv", kBiomedSource1);
    write_file(dir / "dataSource2.csv", kBiomedSource2);
    auto mapping = dir / "mapping.ttl";
    write_file(mapping, kBiomedMapping);
    return mapping;
}

} // namespace testutil
