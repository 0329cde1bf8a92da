// Benchmark harness. Each grid cell runs the engine as a child process with
// a timeout (a timed-out cell is a result, not a harness failure), collects
// the child's JSON run report, validates the counter laws against the cost
// expressions, and writes JSON + CSV reports.

#include "rdfmat/bench.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "rdfmat/errors.hpp"

namespace rdfmat {

std::string_view to_string(CellStatus s) {
    switch (s) {
    case CellStatus::Ok: return "OK";
    case CellStatus::Timeout: return "TIMEOUT";
    case CellStatus::Error: return "ERROR";
    }
    return "ERROR";
}

namespace {

std::string format_rate(double rate) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", rate);
    return buf;
}

std::string spec_data_key(const TestbedSpec& spec) {
    std::string key = std::string(to_string(spec.pom_kind));
    key += "_r" + std::to_string(spec.rows);
    key += "_d" + format_rate(spec.duplicate_rate);
    key += "_f" + std::to_string(spec.repeat_factor);
    key += "_s" + std::to_string(spec.seed);
    if (spec.pom_kind == OperatorKind::Ojm) {
        key += "_p" + std::to_string(spec.effective_parent_rows());
        key += "_m" + format_rate(spec.match_rate);
    }
    return key;
}

struct ChildResult {
    int exit_code = -1;
    bool timed_out = false;
    double wall_ms = 0.0;
};

ChildResult run_child(const std::vector<std::string>& args, const std::filesystem::path& log_path,
                      double timeout_seconds) {
    std::vector<char*> argv;
    argv.reserve(args.size() + 1);
    for (const auto& a : args) argv.push_back(const_cast<char*>(a.c_str()));
    argv.push_back(nullptr);

    auto start = std::chrono::steady_clock::now();
    pid_t pid = fork();
    if (pid < 0) {
        throw Error("fork failed for benchmark child process");
    }
    if (pid == 0) {
        int fd = ::open(log_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
        if (fd >= 0) {
            dup2(fd, STDOUT_FILENO);
            dup2(fd, STDERR_FILENO);
            if (fd > STDERR_FILENO) ::close(fd);
        }
        execv(argv[0], argv.data());
        _exit(127);
    }

    // the child enforces the timeout itself; the kill below is a backstop
    auto hard_deadline =
        start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                    std::chrono::duration<double>(timeout_seconds * 1.5 + 5.0));
    ChildResult result;
    int status = 0;
    while (true) {
        pid_t r = waitpid(pid, &status, WNOHANG);
        if (r == pid) break;
        if (r < 0) {
            throw Error("waitpid failed for benchmark child process");
        }
        if (std::chrono::steady_clock::now() >= hard_deadline) {
            kill(pid, SIGKILL);
            waitpid(pid, &status, 0);
            result.timed_out = true;
            break;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(2));
    }
    result.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if (!result.timed_out) {
        result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }
    return result;
}

struct ParsedReport {
    bool ok = false;
    bool timed_out = false;
    double wall_ms = 0.0;
    double peak_rss_kb = 0.0;
    uint64_t triples_emitted = 0;
    uint64_t triples_generated = 0;
    CostCounters counters;
    std::map<std::string, PredicateStats> predicates;
    uint64_t pjtt_builds = 0;
};

ParsedReport parse_report(const std::filesystem::path& path) {
    ParsedReport out;
    std::ifstream in(path);
    if (!in) return out;
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception&) {
        return out;
    }
    try {
        out.timed_out = j.value("timed_out", false);
        out.wall_ms = j.value("wall_ms", 0.0);
        out.peak_rss_kb = j.value("peak_rss_kb", 0.0);
        out.triples_emitted = j.value("triples_emitted", 0ULL);
        out.pjtt_builds = j.value("pjtt_builds", 0ULL);
        const auto& c = j.at("counters");
        out.counters.ptt_lookups = c.value("ptt_lookups", 0ULL);
        out.counters.ptt_insertions = c.value("ptt_insertions", 0ULL);
        out.counters.kg_emissions = c.value("kg_emissions", 0ULL);
        out.counters.pjtt_insertions = c.value("pjtt_insertions", 0ULL);
        out.counters.pjtt_reads = c.value("pjtt_reads", 0ULL);
        out.counters.pjtt_probes = c.value("pjtt_probes", 0ULL);
        out.counters.pairwise_comparisons = c.value("pairwise_comparisons", 0ULL);
        out.counters.sort_comparisons = c.value("sort_comparisons", 0ULL);
        out.counters.triples_generated = c.value("triples_generated", 0ULL);
        out.counters.skipped_none = c.value("skipped_none", 0ULL);
        out.triples_generated = out.counters.triples_generated;
        if (j.contains("predicates")) {
            for (const auto& [iri, ps] : j.at("predicates").items()) {
                out.predicates[iri] = PredicateStats{ps.value("generated", 0ULL),
                                                     ps.value("emitted", 0ULL)};
            }
        }
        out.ok = true;
    } catch (const nlohmann::json::exception&) {
        out.ok = false;
    }
    return out;
}

// Validate the §-free way: parent/child cardinalities come from the spec the
// harness itself generated, generated/distinct tallies from the report.
bool validate_counters(const TestbedSpec& spec, RunMode mode, const ParsedReport& rep,
                       PredictedOps& predicted_out) {
    const uint64_t n_child = spec.rows;
    const uint64_t n_parent = spec.effective_parent_rows();
    const uint64_t k = spec.pom_count;
    const CostCounters& c = rep.counters;

    if (mode == RunMode::Optimized) {
        uint64_t expected = c.triples_generated + 2 * c.ptt_insertions;
        if (spec.pom_kind == OperatorKind::Ojm) {
            expected += 2 * n_parent + k * n_child;
            if (rep.pjtt_builds != 1) return false;
            if (c.pjtt_reads != n_parent || c.pjtt_insertions != n_parent) return false;
            if (c.pjtt_probes != k * n_child) return false;
        } else {
            if (c.pjtt_reads != 0 || c.pjtt_probes != 0) return false;
        }
        predicted_out.is_band = false;
        predicted_out.exact = predicted_out.lo = predicted_out.hi = expected;
        if (c.kg_emissions != c.ptt_insertions) return false;
        if (c.ptt_lookups != c.triples_generated) return false;
        return c.optimized_total() == expected;
    }

    // naive: nested-loop pair count is exact, merge-sort falls in the band
    uint64_t expected_pairs =
        spec.pom_kind == OperatorKind::Ojm ? k * n_parent * n_child : 0;
    if (c.pairwise_comparisons != expected_pairs) return false;
    uint64_t lo = 0, hi = 0;
    for (const auto& [iri, ps] : rep.predicates) {
        auto [blo, bhi] = merge_sort_band(ps.generated);
        lo += blo;
        hi += bhi;
    }
    predicted_out.is_band = true;
    predicted_out.lo = c.triples_generated + c.kg_emissions + lo + expected_pairs;
    predicted_out.hi = c.triples_generated + c.kg_emissions + hi + expected_pairs;
    return c.sort_comparisons >= lo && c.sort_comparisons <= hi;
}

std::string own_binary_path() {
    char buf[4096];
    ssize_t n = ::readlink("/proc/self/exe", buf, sizeof(buf) - 1);
    if (n <= 0) {
        throw Error("cannot resolve /proc/self/exe; pass the engine binary explicitly");
    }
    buf[n] = '\0';
    return buf;
}

} // namespace

BenchReport run_benchmark(const std::vector<TestbedSpec>& grid, const BenchOptions& options) {
    BenchReport report;
    report.repetitions = options.repetitions < 1 ? 1 : options.repetitions;
    report.timeout_seconds = options.timeout_seconds;
    if (!grid.empty()) report.seed = grid.front().seed;

    std::string engine = options.engine_binary.empty() ? own_binary_path()
                                                       : options.engine_binary.string();
    std::filesystem::create_directories(options.work_dir / "cells");

    for (const auto& spec : grid) {
        std::string data_key = spec_data_key(spec);
        std::filesystem::path data_dir = options.work_dir / "data" / data_key;
        if (!std::filesystem::exists(data_dir / "child.csv")) {
            generate_dataset(spec, data_dir);
        }
        std::string mapping_name =
            "mapping_" + std::string(to_string(spec.pom_kind)) + "_k" +
            std::to_string(spec.pom_count) + ".ttl";
        std::filesystem::path mapping_path = data_dir / mapping_name;
        if (!std::filesystem::exists(mapping_path)) {
            std::ofstream m(mapping_path);
            m << generate_mappings(spec.pom_kind, spec.pom_count);
        }

        for (RunMode mode : options.modes) {
            BenchCell cell;
            cell.spec = spec;
            cell.mode = mode;
            std::string cell_name = data_key + "_k" + std::to_string(spec.pom_count) + "_" +
                                    (mode == RunMode::Optimized ? "opt" : "naive");
            std::filesystem::path cell_dir = options.work_dir / "cells" / cell_name;
            std::filesystem::create_directories(cell_dir);

            double wall_sum = 0.0, rss_sum = 0.0;
            uint32_t completed = 0;
            for (uint32_t rep = 0; rep < report.repetitions; ++rep) {
                std::filesystem::path out_nt = cell_dir / ("rep" + std::to_string(rep) + ".nt");
                std::filesystem::path rep_json =
                    cell_dir / ("rep" + std::to_string(rep) + ".json");
                std::vector<std::string> args = {engine,
                                                 "run",
                                                 "--mapping",
                                                 mapping_path.string(),
                                                 "--output",
                                                 out_nt.string(),
                                                 "--mode",
                                                 mode == RunMode::Optimized ? "optimized" : "naive",
                                                 "--report",
                                                 rep_json.string(),
                                                 "--timeout",
                                                 std::to_string(options.timeout_seconds)};
                ChildResult child =
                    run_child(args, cell_dir / ("rep" + std::to_string(rep) + ".log"),
                              options.timeout_seconds);
                ParsedReport rep_report = parse_report(rep_json);

                if (child.timed_out || child.exit_code == 124 ||
                    (rep_report.ok && rep_report.timed_out)) {
                    cell.status = CellStatus::Timeout;
                    cell.error = "timed out after " + std::to_string(options.timeout_seconds) + "s";
                    break;
                }
                if (child.exit_code != 0 || !rep_report.ok) {
                    cell.status = CellStatus::Error;
                    cell.error = "engine exited with code " + std::to_string(child.exit_code);
                    break;
                }
                wall_sum += rep_report.wall_ms;
                rss_sum += rep_report.peak_rss_kb;
                ++completed;
                if (rep + 1 == report.repetitions) {
                    cell.triples_emitted = rep_report.triples_emitted;
                    cell.triples_generated = rep_report.triples_generated;
                    cell.counters = rep_report.counters;
                    cell.counter_law_ok =
                        validate_counters(spec, mode, rep_report, cell.predicted);
                }
                if (!options.keep_outputs) {
                    std::error_code ec;
                    std::filesystem::remove(out_nt, ec);
                }
            }
            cell.repetitions = completed;
            if (completed > 0) {
                cell.avg_wall_ms = wall_sum / completed;
                cell.avg_peak_rss_kb = rss_sum / completed;
            }
            report.cells.push_back(std::move(cell));
        }
    }

    std::ofstream js(options.work_dir / "bench_report.json");
    js << report.to_json();
    std::ofstream cs(options.work_dir / "bench_report.csv");
    cs << report.to_csv();
    return report;
}

std::string BenchReport::to_json() const {
    nlohmann::ordered_json j;
    j["repetitions"] = repetitions;
    j["timeout_seconds"] = timeout_seconds;
    j["seed"] = seed;
    nlohmann::ordered_json cells_json = nlohmann::ordered_json::array();
    for (const auto& c : cells) {
        nlohmann::ordered_json cj;
        cj["kind"] = std::string(to_string(c.spec.pom_kind));
        cj["pom_count"] = c.spec.pom_count;
        cj["rows"] = c.spec.rows;
        cj["duplicate_rate"] = c.spec.duplicate_rate;
        cj["repeat_factor"] = c.spec.repeat_factor;
        cj["seed"] = c.spec.seed;
        cj["parent_rows"] = c.spec.effective_parent_rows();
        cj["mode"] = c.mode == RunMode::Optimized ? "optimized" : "naive";
        cj["status"] = std::string(to_string(c.status));
        cj["repetitions"] = c.repetitions;
        cj["avg_wall_ms"] = c.avg_wall_ms;
        cj["avg_peak_rss_kb"] = c.avg_peak_rss_kb;
        cj["triples_generated"] = c.triples_generated;
        cj["triples_emitted"] = c.triples_emitted;
        cj["counter_law_ok"] = c.counter_law_ok;
        cj["predicted"] = {{"band", c.predicted.is_band},
                           {"exact", c.predicted.exact},
                           {"lo", c.predicted.lo},
                           {"hi", c.predicted.hi}};
        cj["counters"] = {{"ptt_lookups", c.counters.ptt_lookups},
                          {"ptt_insertions", c.counters.ptt_insertions},
                          {"kg_emissions", c.counters.kg_emissions},
                          {"pjtt_insertions", c.counters.pjtt_insertions},
                          {"pjtt_reads", c.counters.pjtt_reads},
                          {"pjtt_probes", c.counters.pjtt_probes},
                          {"pairwise_comparisons", c.counters.pairwise_comparisons},
                          {"sort_comparisons", c.counters.sort_comparisons},
                          {"triples_generated", c.counters.triples_generated},
                          {"skipped_none", c.counters.skipped_none}};
        if (!c.error.empty()) cj["error"] = c.error;
        cells_json.push_back(std::move(cj));
    }
    j["cells"] = std::move(cells_json);
    return j.dump(2);
}

std::string BenchReport::to_csv() const {
    std::ostringstream out;
    out << "kind,pom_count,rows,duplicate_rate,repeat_factor,parent_rows,seed,mode,status,"
           "repetitions,avg_wall_ms,avg_peak_rss_kb,triples_generated,triples_emitted,"
           "counter_law_ok,predicted_lo,predicted_hi,measured_total\n";
    for (const auto& c : cells) {
        uint64_t measured = c.mode == RunMode::Optimized
                                ? c.counters.optimized_total()
                                : c.counters.triples_generated + c.counters.kg_emissions +
                                      c.counters.sort_comparisons +
                                      c.counters.pairwise_comparisons;
        out << to_string(c.spec.pom_kind) << ',' << c.spec.pom_count << ',' << c.spec.rows << ','
            << format_rate(c.spec.duplicate_rate) << ',' << c.spec.repeat_factor << ','
            << c.spec.effective_parent_rows() << ',' << c.spec.seed << ','
            << (c.mode == RunMode::Optimized ? "optimized" : "naive") << ',' << to_string(c.status)
            << ',' << c.repetitions << ',' << c.avg_wall_ms << ',' << c.avg_peak_rss_kb << ','
            << c.triples_generated << ',' << c.triples_emitted << ','
            << (c.counter_law_ok ? 1 : 0) << ',' << c.predicted.lo << ',' << c.predicted.hi << ','
            << measured << '\n';
    }
    return out.str();
}

} // namespace rdfmat
