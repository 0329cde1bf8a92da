#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rdfmat/mapping.hpp"
#include "rdfmat/source.hpp"
#include "rdfmat/tables.hpp"
#include "rdfmat/writer.hpp"

namespace rdfmat {

/// One executable predicate-object map, bound to its operator.
struct OperatorPlan {
    OperatorKind kind = OperatorKind::Som;
    const TriplesMap* child = nullptr;
    const PredicateObjectMap* pom = nullptr;
    const TriplesMap* parent = nullptr; // present iff kind is Orm or Ojm
    RunMode mode = RunMode::Optimized;
};

/// Execute a simple object map over a record stream: expand subject and
/// object per record, skip on missing values, deduplicate through the PTT
/// and emit new triples. Returns the number of triples emitted.
uint64_t exec_som(const OperatorPlan& plan, RecordStream& stream, PredicateTupleTable& ptt,
                  IncrementalWriter& writer, CostCounters& counters);

/// Object reference map: the object is the parent map's subject expanded
/// over the same record (self-join over the shared source).
uint64_t exec_orm(const OperatorPlan& plan, RecordStream& stream, PredicateTupleTable& ptt,
                  IncrementalWriter& writer, CostCounters& counters);

/// Build the join index for (parent, B): one read and one insertion per
/// parent record. Records with missing join values or subjects are skipped
/// and tallied.
PredicateJoinTupleTable pjtt_build(const TriplesMap& parent, RecordStream& stream,
                                   const std::vector<std::string>& join_attrs,
                                   CostCounters& counters);

/// Object join map over a prebuilt PJTT: per child record, probe with the
/// child-side join values and emit one triple per returned parent subject.
uint64_t exec_ojm(const OperatorPlan& plan, RecordStream& child_stream,
                  const PredicateJoinTupleTable& pjtt, PredicateTupleTable& ptt,
                  IncrementalWriter& writer, CostCounters& counters);

/// Naive execution: materialize every generated triple, then eliminate
/// duplicates with a comparison-counted merge sort. Join maps run a full
/// nested loop over both sources. Returns the deduplicated, sorted lines.
std::vector<std::string> naive_execute(const OperatorPlan& plan, RecordStream& child_stream,
                                       RecordStream* parent_stream, CostCounters& counters);

/// Predicted operation count from the cost expressions: exact for optimized
/// mode, a [lo, hi] band for naive mode (merge-sort term).
struct PredictedOps {
    bool is_band = false;
    uint64_t exact = 0;
    uint64_t lo = 0;
    uint64_t hi = 0;
};

PredictedOps predicted_ops(OperatorKind kind, RunMode mode, uint64_t n_p, uint64_t s_p,
                           std::optional<uint64_t> n_parent = std::nullopt,
                           std::optional<uint64_t> n_child = std::nullopt);

/// Comparison band [lo, hi] the counted merge-sort dedup of n elements must
/// fall into: [n*log2(n)/2, n*log2(n) + n].
std::pair<uint64_t, uint64_t> merge_sort_band(uint64_t n);

struct PredicateStats {
    uint64_t generated = 0;
    uint64_t emitted = 0;
};

struct PomStats {
    std::string map_id;
    std::string predicate;
    OperatorKind kind = OperatorKind::Som;
    uint64_t generated = 0; // triples generated by this map entry
    uint64_t emitted = 0;
    uint64_t parent_rows = 0; // Ojm only
    uint64_t child_rows = 0;  // Ojm only
};

struct MapError {
    std::string map_id;
    std::string message;
};

struct RunReport {
    RunMode mode = RunMode::Optimized;
    double wall_ms = 0.0;
    uint64_t peak_rss_kb = 0;
    bool timed_out = false;
    bool partial = false; // some maps failed; output covers the rest
    std::vector<MapError> map_errors;
    std::map<std::string, PredicateStats> predicates;
    CostCounters counters;
    PredictedOps predicted; // run-level total per the cost expressions
    std::vector<PomStats> pom_stats;
    uint64_t pjtt_builds = 0;
    uint64_t triples_emitted = 0;
    std::string output_path;

    /// Internal consistency of the counters for the mode that ran.
    bool counter_law_holds() const;

    std::string to_json() const;
};

struct EngineOptions {
    RunMode mode = RunMode::Optimized;
    std::string output_path;                // overrides dis.output_path when set
    std::optional<double> timeout_seconds;  // engine aborts with TimeoutError
    uint64_t drain_batch_records = 8192;    // PTT drain cadence
    uint64_t naive_max_triples = 0;         // 0 = unlimited; else ResourceError
};

/// Execute every triples map of the system in document order and produce the
/// knowledge graph plus a run report. PJTTs are built once per distinct
/// (parent map, join condition) and reused across referencing maps.
RunReport run_system(const DataIntegrationSystem& dis, const EngineOptions& options = {});

/// Peak resident set size of this process in KiB (0 when unavailable).
uint64_t current_peak_rss_kb();

} // namespace rdfmat
