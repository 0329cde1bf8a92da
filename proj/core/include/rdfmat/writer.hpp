#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <unordered_map>

#include "rdfmat/tables.hpp"

namespace rdfmat {

/// Per-PTT high-water mark of emitted log timestamps. Never decreases and is
/// advanced only after the corresponding lines were durably written.
struct EmissionCursor {
    uint64_t last_emitted = 0;
};

/// Append every PTT log entry newer than the cursor to `sink`, in timestamp
/// order, then advance the cursor. Returns the number of lines appended.
/// An I/O failure throws IoError and leaves the cursor unadvanced.
uint64_t emit_incremental(const PredicateTupleTable& ptt, EmissionCursor& cursor,
                          std::ostream& sink, CostCounters* counters = nullptr);

/// Incremental N-Triples writer: one cursor per PTT, one output file, each
/// accepted triple written exactly once.
class IncrementalWriter {
public:
    explicit IncrementalWriter(std::ostream& sink, CostCounters* counters = nullptr)
        : sink_(&sink), counters_(counters) {}

    /// Opens (truncates) `path` for writing.
    explicit IncrementalWriter(const std::filesystem::path& path, CostCounters* counters = nullptr);

    /// Drain the PTT's log from this writer's cursor.
    uint64_t drain(const PredicateTupleTable& ptt);

    /// Write one already-serialized line (naive mode path).
    void write_line(std::string_view line);

    void flush();

    uint64_t lines_written() const { return lines_written_; }

private:
    std::ofstream owned_;
    std::ostream* sink_ = nullptr;
    CostCounters* counters_ = nullptr;
    std::unordered_map<const PredicateTupleTable*, EmissionCursor> cursors_;
    uint64_t lines_written_ = 0;
};

} // namespace rdfmat
