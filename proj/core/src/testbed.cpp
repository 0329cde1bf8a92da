// Synthetic workload generator. Duplicate rows are exact copies of whole
// tuples (ids included), so for the generated mappings the distinct-triple
// count per predicate equals the distinct-tuple count of the file. All
// randomness flows through one seeded mt19937_64 with hand-rolled reductions,
// which keeps a given (spec, seed) byte-identical across platforms.

#include "rdfmat/testbed.hpp"

#include <cmath>
#include <fstream>
#include <random>

#include "rdfmat/errors.hpp"

namespace rdfmat {

namespace {

class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    uint64_t below(uint64_t n) { return n == 0 ? 0 : gen_() % n; }

    double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    std::string token(size_t len) {
        static const char alphabet[] = "abcdefghijklmnopqrstuvwxyz0123456789";
        std::string out;
        out.reserve(len);
        for (size_t i = 0; i < len; ++i) {
            out += alphabet[below(sizeof(alphabet) - 1)];
        }
        return out;
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[below(i)]);
        }
    }

private:
    std::mt19937_64 gen_;
};

struct DupPlan {
    uint64_t groups = 0;     // distinct tuples that repeat
    uint64_t unique_rows = 0;
    bool adjusted = false;
};

DupPlan plan_duplicates(uint64_t rows, double rate, uint32_t repeat) {
    if (rate < 0.0 || rate > 1.0) {
        throw Error("duplicate rate must lie in [0, 1]");
    }
    if (repeat < 2) {
        throw Error("repeat factor must be at least 2");
    }
    DupPlan plan;
    auto dup_target = static_cast<uint64_t>(std::llround(rate * static_cast<double>(rows)));
    if (dup_target > rows) dup_target = rows;
    plan.groups = dup_target / repeat;
    plan.adjusted = plan.groups * repeat != dup_target;
    plan.unique_rows = rows - plan.groups * repeat;
    return plan;
}

// Rows are rendered once per distinct tuple; the row list is a permutation
// of tuple indices.
void write_rows(const std::filesystem::path& path, const std::string& header,
                const std::vector<std::string>& tuples, const DupPlan& plan, uint32_t repeat,
                Rng& rng) {
    std::vector<uint32_t> order;
    order.reserve(plan.groups * repeat + plan.unique_rows);
    for (uint64_t g = 0; g < plan.groups; ++g) {
        for (uint32_t r = 0; r < repeat; ++r) order.push_back(static_cast<uint32_t>(g));
    }
    for (uint64_t u = plan.groups; u < tuples.size(); ++u) {
        order.push_back(static_cast<uint32_t>(u));
    }
    rng.shuffle(order);

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write dataset file: " + path.string());
    }
    out << header << '\n';
    for (uint32_t idx : order) {
        out << tuples[idx] << '\n';
    }
    out.flush();
    if (!out.good()) {
        throw IoError("failed writing dataset file: " + path.string());
    }
}

} // namespace

uint64_t expected_distinct_tuples(uint64_t rows, double duplicate_rate, uint32_t repeat_factor) {
    DupPlan plan = plan_duplicates(rows, duplicate_rate, repeat_factor);
    return plan.groups + plan.unique_rows;
}

GeneratedDataset generate_dataset(const TestbedSpec& spec, const std::filesystem::path& out_dir) {
    if (spec.pom_count < 1 || spec.pom_count > 5) {
        throw Error("pom_count must lie in 1..5");
    }
    if (spec.match_rate < 0.0 || spec.match_rate > 1.0) {
        throw Error("match rate must lie in [0, 1]");
    }
    std::filesystem::create_directories(out_dir);
    Rng rng(spec.seed);
    GeneratedDataset out;

    uint64_t parent_distinct = 0;
    if (spec.pom_kind == OperatorKind::Ojm) {
        uint64_t prows = spec.effective_parent_rows();
        DupPlan plan = plan_duplicates(prows, spec.duplicate_rate, spec.repeat_factor);
        parent_distinct = plan.groups + plan.unique_rows;
        std::vector<std::string> tuples;
        tuples.reserve(parent_distinct);
        for (uint64_t j = 0; j < parent_distinct; ++j) {
            tuples.push_back("P" + std::to_string(j) + ",K" + std::to_string(j) + "," +
                             rng.token(8));
        }
        out.parent_csv = out_dir / "parent.csv";
        write_rows(out.parent_csv, "pid,key,w1", tuples, plan, spec.repeat_factor, rng);
        out.parent_distinct = parent_distinct;
        out.rate_adjusted = out.rate_adjusted || plan.adjusted;
    }

    DupPlan plan = plan_duplicates(spec.rows, spec.duplicate_rate, spec.repeat_factor);
    uint64_t distinct = plan.groups + plan.unique_rows;
    std::vector<std::string> tuples;
    tuples.reserve(distinct);
    for (uint64_t i = 0; i < distinct; ++i) {
        std::string key;
        if (spec.pom_kind == OperatorKind::Ojm) {
            bool matched = parent_distinct > 0 && rng.unit() < spec.match_rate;
            key = matched ? "K" + std::to_string(rng.below(parent_distinct))
                          : "X" + std::to_string(i);
        } else {
            key = "K" + std::to_string(i);
        }
        std::string row = "R" + std::to_string(i) + "," + key;
        for (int v = 0; v < 3; ++v) {
            row += "," + rng.token(8);
        }
        tuples.push_back(std::move(row));
    }
    out.child_csv = out_dir / "child.csv";
    write_rows(out.child_csv, "id,key,v1,v2,v3", tuples, plan, spec.repeat_factor, rng);
    out.child_distinct = distinct;
    out.rate_adjusted = out.rate_adjusted || plan.adjusted;
    return out;
}

std::string generate_mappings(OperatorKind kind, uint32_t pom_count, std::string_view child_source,
                              std::string_view parent_source) {
    if (pom_count < 1 || pom_count > 5) {
        throw Error("pom_count must lie in 1..5");
    }
    std::string doc;
    doc += "@prefix rr: <http://www.w3.org/ns/r2rml#> .\n";
    doc += "@prefix rml: <http://semweb.mmlab.be/ns/rml#> .\n";
    doc += "@prefix ql: <http://semweb.mmlab.be/ns/ql#> .\n";
    doc += "@prefix ex: <http://example.org/tb/> .\n\n";

    auto logical_source = [](std::string_view file) {
        return std::string("  rml:logicalSource [ rml:source \"") + std::string(file) +
               "\" ; rml:referenceFormulation ql:CSV ] ;\n";
    };

    doc += "<http://example.org/tb/map/Rows>\n";
    doc += logical_source(child_source);
    doc += "  rr:subjectMap [ rr:template \"http://example.org/tb/r/{id}\" ]";
    for (uint32_t i = 1; i <= pom_count; ++i) {
        doc += " ;\n  rr:predicateObjectMap [\n";
        doc += "    rr:predicate ex:p" + std::to_string(i) + " ;\n";
        switch (kind) {
        case OperatorKind::Som:
            doc += "    rr:objectMap [ rml:reference \"v" + std::to_string((i - 1) % 3 + 1) +
                   "\" ]\n";
            break;
        case OperatorKind::Orm:
            doc += "    rr:objectMap [ rr:parentTriplesMap <http://example.org/tb/map/Keys> ]\n";
            break;
        case OperatorKind::Ojm:
            doc += "    rr:objectMap [\n"
                   "      rr:parentTriplesMap <http://example.org/tb/map/Parents> ;\n"
                   "      rr:joinCondition [ rr:child \"key\" ; rr:parent \"key\" ]\n"
                   "    ]\n";
            break;
        }
        doc += "  ]";
    }
    doc += " .\n\n";

    if (kind == OperatorKind::Orm) {
        doc += "<http://example.org/tb/map/Keys>\n";
        doc += logical_source(child_source);
        doc += "  rr:subjectMap [ rr:template \"http://example.org/tb/k/{key}\" ] .\n";
    } else if (kind == OperatorKind::Ojm) {
        doc += "<http://example.org/tb/map/Parents>\n";
        doc += logical_source(parent_source);
        doc += "  rr:subjectMap [ rr:template \"http://example.org/tb/p/{pid}\" ] .\n";
    }
    return doc;
}

} // namespace rdfmat
