#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rdfmat/engine.hpp"
#include "rdfmat/testbed.hpp"

namespace rdfmat {

enum class CellStatus { Ok, Timeout, Error };

std::string_view to_string(CellStatus s);

/// Result of one (spec, mode) cell, averaged over repetitions.
struct BenchCell {
    TestbedSpec spec;
    RunMode mode = RunMode::Optimized;
    CellStatus status = CellStatus::Ok;
    uint32_t repetitions = 0;
    double avg_wall_ms = 0.0;
    double avg_peak_rss_kb = 0.0;
    uint64_t triples_emitted = 0;
    uint64_t triples_generated = 0;
    CostCounters counters; // from the last completed repetition
    PredictedOps predicted;
    bool counter_law_ok = false;
    std::string error;
};

struct BenchReport {
    uint64_t seed = 0;
    uint32_t repetitions = 0;
    double timeout_seconds = 0.0;
    std::vector<BenchCell> cells;

    std::string to_json() const;
    std::string to_csv() const;
};

struct BenchOptions {
    std::vector<RunMode> modes = {RunMode::Optimized, RunMode::Naive};
    uint32_t repetitions = 5;
    double timeout_seconds = 300.0;
    std::filesystem::path work_dir = "bench-out";
    std::filesystem::path engine_binary; // empty: this executable (/proc/self/exe)
    bool keep_outputs = false;           // keep per-cell .nt files
};

/// Run every grid cell in every mode as a child engine process with a
/// timeout, validate the counter laws against the cost expressions, and
/// write bench_report.json and bench_report.csv under work_dir.
BenchReport run_benchmark(const std::vector<TestbedSpec>& grid, const BenchOptions& options);

} // namespace rdfmat
