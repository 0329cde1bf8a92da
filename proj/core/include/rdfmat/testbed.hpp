#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "rdfmat/mapping.hpp"

namespace rdfmat {

/// Shape of one synthetic workload: `duplicate_rate * rows` rows are drawn
/// from (duplicate_rate * rows / repeat_factor) distinct tuples, each
/// repeated `repeat_factor` times; the remaining rows are unique. Rows are
/// shuffled deterministically by `seed`.
struct TestbedSpec {
    uint64_t rows = 10000;
    double duplicate_rate = 0.25;
    uint32_t repeat_factor = 20;
    OperatorKind pom_kind = OperatorKind::Som;
    uint32_t pom_count = 1;
    uint64_t seed = 1;
    uint64_t parent_rows = 0; // Ojm only; 0 means same as rows
    double match_rate = 1.0;  // fraction of child join keys present in the parent

    uint64_t effective_parent_rows() const { return parent_rows ? parent_rows : rows; }
};

struct GeneratedDataset {
    std::filesystem::path child_csv;
    std::filesystem::path parent_csv; // empty unless Ojm
    uint64_t child_distinct = 0;      // distinct tuples in the child file
    uint64_t parent_distinct = 0;
    bool rate_adjusted = false; // duplicate row count was rounded down to a
                                // multiple of repeat_factor
};

/// Write child.csv (and parent.csv for join workloads) under `out_dir`.
/// Same spec and seed produce byte-identical files.
GeneratedDataset generate_dataset(const TestbedSpec& spec, const std::filesystem::path& out_dir);

/// A mapping document with `pom_count` predicate-object maps of the given
/// kind over the generated dataset columns. Reference and join kinds emit the
/// required parent triples map.
std::string generate_mappings(OperatorKind kind, uint32_t pom_count,
                              std::string_view child_source = "child.csv",
                              std::string_view parent_source = "parent.csv");

/// Distinct-tuple count the generator produces for (rows, rate, repeat).
uint64_t expected_distinct_tuples(uint64_t rows, double duplicate_rate, uint32_t repeat_factor);

} // namespace rdfmat
