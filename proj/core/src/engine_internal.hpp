#pragma once

// Shared internals of the execution engine (not installed).

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rdfmat/mapping.hpp"
#include "rdfmat/record.hpp"
#include "rdfmat/source.hpp"
#include "rdfmat/tables.hpp"

namespace rdfmat::detail {

struct Deadline {
    std::optional<std::chrono::steady_clock::time_point> at;

    bool armed() const { return at.has_value(); }
    void check(const char* stage) const;

    /// Cheap periodic poll: checks the clock every `mask + 1` ticks.
    void poll(uint64_t tick, const char* stage) const {
        if (armed() && (tick & 1023) == 0) check(stage);
    }
};

/// Expanded subject rendered as an IRI token, or nullopt on missing values.
std::optional<std::string> render_subject_token(const TermMap& subject_map, const Record& record);

/// Expanded object rendered as an IRI or literal token per the term map.
std::optional<std::string> render_object_token(const TermMap& object_map, const Record& record);

/// Bottom-up merge sort counting every element comparison. Returns the count.
uint64_t counted_merge_sort(std::vector<std::string>& v);

/// Remove adjacent duplicates from a sorted vector, counting one comparison
/// per adjacent pair. Returns the comparison count.
uint64_t dedup_sorted(std::vector<std::string>& v);

/// Materialize every triple of a simple/reference-object pass (no dedup).
void naive_materialize_simple(const TermMap& subject_map, const std::string& predicate_term,
                              const TermMap& object_map, RecordStream& stream,
                              std::vector<std::string>& out, CostCounters& counters,
                              const Deadline& deadline, uint64_t max_triples);

/// Materialize a nested-loop join pass: every (child, parent) pair costs one
/// pairwise comparison; matches produce (child subject, p, parent subject).
void naive_materialize_join(const TermMap& child_subject_map, const std::string& predicate_term,
                            const TermMap& parent_subject_map,
                            const std::vector<std::string>& child_attrs,
                            const std::vector<std::string>& parent_attrs, RecordStream& child,
                            RecordStream& parent, std::vector<std::string>& out,
                            CostCounters& counters, const Deadline& deadline, uint64_t max_triples,
                            uint64_t* parent_rows_out, uint64_t* child_rows_out);

} // namespace rdfmat::detail
