#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace rdfmat {

class TriplesMap;
class RecordStream;

/// Main-memory operation tallies. One "operation" is one structure read,
/// one structure insert, or one graph emission.
struct CostCounters {
    uint64_t ptt_lookups = 0;
    uint64_t ptt_insertions = 0;
    uint64_t kg_emissions = 0;
    uint64_t pjtt_insertions = 0;
    uint64_t pjtt_reads = 0;
    uint64_t pjtt_probes = 0;
    uint64_t pairwise_comparisons = 0; // naive nested-loop join condition checks
    uint64_t sort_comparisons = 0;     // naive merge-sort dedup comparisons
    uint64_t triples_generated = 0;
    uint64_t skipped_none = 0; // skipped generation opportunities (missing/empty values)

    /// Sum of the structure/emission operations the optimized-mode cost
    /// expressions account for.
    uint64_t optimized_total() const {
        return ptt_lookups + ptt_insertions + kg_emissions + pjtt_insertions + pjtt_reads +
               pjtt_probes;
    }

    CostCounters& operator+=(const CostCounters& o) {
        ptt_lookups += o.ptt_lookups;
        ptt_insertions += o.ptt_insertions;
        kg_emissions += o.kg_emissions;
        pjtt_insertions += o.pjtt_insertions;
        pjtt_reads += o.pjtt_reads;
        pjtt_probes += o.pjtt_probes;
        pairwise_comparisons += o.pairwise_comparisons;
        sort_comparisons += o.sort_comparisons;
        triples_generated += o.triples_generated;
        skipped_none += o.skipped_none;
        return *this;
    }

    bool operator==(const CostCounters&) const = default;
};

/// Injective encoding of a value tuple into a single hash key. Each part is
/// length-prefixed, so no separator collision is possible.
std::string encode_key(std::span<const std::string_view> parts);
std::string encode_key(std::string_view a, std::string_view b);
std::string encode_key(const std::vector<std::string>& parts);

enum class InsertResult { New, Duplicate };

/// Per-predicate hash set of emitted (subject, object) term pairs, plus an
/// append-only insertion log consumed by the incremental writer.
class PredicateTupleTable {
public:
    struct LogEntry {
        uint64_t timestamp; // strictly increasing, starts at 1
        std::string subject;
        std::string object;
    };

    explicit PredicateTupleTable(std::string predicate_iri)
        : predicate_iri_(std::move(predicate_iri)) {}

    const std::string& predicate() const { return predicate_iri_; }

    /// Look up the (subject, object) pair; insert and log it when new.
    /// Counts one lookup always and one insertion on New.
    InsertResult check_insert(std::string_view subject_term, std::string_view object_term,
                              CostCounters& counters);

    size_t size() const { return entries_.size(); }
    const std::vector<LogEntry>& log() const { return log_; }

private:
    std::string predicate_iri_;
    std::unordered_set<std::string> entries_;
    std::vector<LogEntry> log_;
    uint64_t next_timestamp_ = 1;
};

/// Hash index from join-key values to the set of parent subjects, keyed by
/// (parent triples map, join condition attributes). Enables index joins and
/// correct N-M join results.
class PredicateJoinTupleTable {
public:
    PredicateJoinTupleTable(std::string parent_map_id, std::vector<std::string> join_condition)
        : parent_map_id_(std::move(parent_map_id)), join_condition_(std::move(join_condition)) {}

    const std::string& parent_map_id() const { return parent_map_id_; }
    const std::vector<std::string>& join_condition() const { return join_condition_; }

    /// "<parent id>_<attr>_<attr>..." table identifier.
    std::string name() const;

    /// Add one parent subject under the encoded key; the per-key subject
    /// set stays duplicate-free.
    void add(const std::vector<std::string>& key_values, std::string_view subject_term);

    /// Exact-match lookup; counts one probe. Returns empty when absent.
    const std::vector<std::string>& probe(const std::vector<std::string>& key_values,
                                          CostCounters& counters) const;

    size_t key_count() const { return index_.size(); }

private:
    std::string parent_map_id_;
    std::vector<std::string> join_condition_;
    // Subject lists are small (one entry per distinct parent subject sharing
    // the key); duplicates are rejected with a linear scan.
    std::unordered_map<std::string, std::vector<std::string>> index_;
    static const std::vector<std::string> empty_;
};

} // namespace rdfmat
