// rdfmat command-line interface.
//
// Subcommands:
//   run          execute a mapping document and materialize N-Triples
//   gen-data     generate a synthetic CSV testbed with a controlled duplicate rate
//   gen-mapping  generate a mapping document for the synthetic testbed
//   bench        run a benchmark grid (child process per cell, with timeout)
//
// Exit codes: 0 success, 2 usage/config, 3 mapping error, 4 source/data
// error, 5 output I/O, 6 resource limit, 124 timeout, 1 internal.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rdfmat/bench.hpp"
#include "rdfmat/engine.hpp"
#include "rdfmat/errors.hpp"
#include "rdfmat/testbed.hpp"
#include "rdfmat/turtle.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitMapping = 3;
constexpr int kExitSource = 4;
constexpr int kExitIo = 5;
constexpr int kExitResource = 6;
constexpr int kExitTimeout = 124;

rdfmat::OperatorKind parse_kind(const std::string& s) {
    auto kind = rdfmat::operator_kind_from_string(s);
    if (!kind) {
        throw CLI::ValidationError("--kind", "expected SOM, ORM or OJM");
    }
    return *kind;
}

rdfmat::RunMode parse_mode(const std::string& s) {
    if (s == "optimized") return rdfmat::RunMode::Optimized;
    if (s == "naive") return rdfmat::RunMode::Naive;
    throw CLI::ValidationError("--mode", "expected 'optimized' or 'naive'");
}

int cmd_run(const std::string& mapping, const std::string& output, const std::string& mode,
            const std::string& report_path, double timeout, uint64_t naive_cap) {
    rdfmat::DataIntegrationSystem dis = rdfmat::parse_mapping_file(mapping);
    rdfmat::EngineOptions options;
    options.mode = parse_mode(mode);
    options.output_path = output;
    options.naive_max_triples = naive_cap;
    if (timeout > 0) options.timeout_seconds = timeout;

    rdfmat::RunReport report = rdfmat::run_system(dis, options);

    if (!report_path.empty()) {
        std::ofstream out(report_path);
        out << report.to_json() << "\n";
        if (!out.good()) {
            throw rdfmat::IoError("cannot write report: " + report_path);
        }
    }
    std::cout << "triples: " << report.triples_emitted << "  generated: "
              << report.counters.triples_generated << "  wall_ms: " << report.wall_ms
              << "  peak_rss_kb: " << report.peak_rss_kb
              << (report.timed_out ? "  [TIMEOUT]" : "") << (report.partial ? "  [PARTIAL]" : "")
              << "\n";
    for (const auto& e : report.map_errors) {
        std::cerr << "map <" << e.map_id << "> failed: " << e.message << "\n";
    }
    if (report.timed_out) return kExitTimeout;
    if (report.partial) return kExitSource;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"RML knowledge-graph materializer with duplicate-free physical operators"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key=value config file (sections per subcommand)");

    // --- run ---------------------------------------------------------------
    auto* run = app.add_subcommand("run", "execute a mapping document");
    std::string mapping, output, mode = "optimized", report_path;
    double timeout = 0.0;
    uint64_t naive_cap = 0;
    run->add_option("--mapping", mapping, "mapping document (.ttl)")->required();
    run->add_option("--output", output, "output N-Triples file (.nt)")->required();
    run->add_option("--mode", mode, "optimized|naive")->capture_default_str();
    run->add_option("--report", report_path, "write a JSON run report to this path");
    run->add_option("--timeout", timeout, "abort the run after this many seconds");
    run->add_option("--naive-cap", naive_cap,
                    "abort naive materialization beyond this many triples (0 = unlimited)");

    // --- gen-data ----------------------------------------------------------
    auto* gen_data = app.add_subcommand("gen-data", "generate a synthetic CSV testbed");
    rdfmat::TestbedSpec spec;
    std::string kind_str = "SOM";
    std::string out_dir = ".";
    gen_data->add_option("--rows", spec.rows, "row count")->capture_default_str();
    gen_data->add_option("--dup-rate", spec.duplicate_rate, "duplicate fraction in [0,1]")
        ->capture_default_str();
    gen_data->add_option("--repeat-factor", spec.repeat_factor, "copies per duplicated tuple")
        ->capture_default_str();
    gen_data->add_option("--kind", kind_str, "SOM|ORM|OJM")->capture_default_str();
    gen_data->add_option("--seed", spec.seed, "generator seed")->capture_default_str();
    gen_data->add_option("--parent-rows", spec.parent_rows, "parent row count (OJM; 0 = rows)");
    gen_data->add_option("--match-rate", spec.match_rate,
                         "fraction of child keys present in the parent (OJM)")
        ->capture_default_str();
    gen_data->add_option("--out-dir", out_dir, "output directory")->capture_default_str();

    // --- gen-mapping -------------------------------------------------------
    auto* gen_map = app.add_subcommand("gen-mapping", "generate a testbed mapping document");
    std::string gm_kind = "SOM", gm_out = "-", gm_child = "child.csv", gm_parent = "parent.csv";
    uint32_t gm_poms = 1;
    gen_map->add_option("--kind", gm_kind, "SOM|ORM|OJM")->capture_default_str();
    gen_map->add_option("--pom-count", gm_poms, "predicate-object maps (1..5)")
        ->capture_default_str();
    gen_map->add_option("--child", gm_child, "child source path written into the document")
        ->capture_default_str();
    gen_map->add_option("--parent", gm_parent, "parent source path (OJM)")->capture_default_str();
    gen_map->add_option("--out", gm_out, "output file ('-' = stdout)")->capture_default_str();

    // --- bench -------------------------------------------------------------
    auto* bench = app.add_subcommand("bench", "run a benchmark grid");
    std::vector<uint64_t> b_rows = {10000};
    std::vector<double> b_rates = {0.25, 0.75};
    std::vector<std::string> b_kinds = {"SOM"};
    std::vector<uint32_t> b_poms = {1};
    std::vector<std::string> b_modes = {"optimized", "naive"};
    uint32_t b_reps = 5;
    double b_timeout = 300.0;
    uint64_t b_seed = 1;
    uint64_t b_parent_rows = 0;
    double b_match = 1.0;
    std::string b_out = "bench-out";
    std::string b_engine;
    bool b_keep = false;
    bench->add_option("--rows", b_rows, "row counts (repeatable)")->capture_default_str();
    bench->add_option("--dup-rate", b_rates, "duplicate rates (repeatable)")
        ->capture_default_str();
    bench->add_option("--kind", b_kinds, "operator kinds (repeatable)")->capture_default_str();
    bench->add_option("--pom-count", b_poms, "POM counts 1..5 (repeatable)")
        ->capture_default_str();
    bench->add_option("--mode", b_modes, "modes (repeatable)")->capture_default_str();
    bench->add_option("--reps", b_reps, "repetitions per cell")->capture_default_str();
    bench->add_option("--timeout", b_timeout, "per-run timeout in seconds")
        ->capture_default_str();
    bench->add_option("--seed", b_seed, "generator seed")->capture_default_str();
    bench->add_option("--parent-rows", b_parent_rows, "parent rows (OJM; 0 = rows)");
    bench->add_option("--match-rate", b_match, "child/parent key match rate (OJM)")
        ->capture_default_str();
    bench->add_option("--out-dir", b_out, "work/report directory")->capture_default_str();
    bench->add_option("--engine", b_engine, "engine binary (default: this executable)");
    bench->add_flag("--keep-outputs", b_keep, "keep per-repetition .nt outputs");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            return cmd_run(mapping, output, mode, report_path, timeout, naive_cap);
        }
        if (gen_data->parsed()) {
            spec.pom_kind = parse_kind(kind_str);
            rdfmat::GeneratedDataset ds = rdfmat::generate_dataset(spec, out_dir);
            if (ds.rate_adjusted) {
                std::cerr << "warning: duplicate row count rounded down to a multiple of "
                          << spec.repeat_factor << "\n";
            }
            std::cout << "child: " << ds.child_csv.string() << "  distinct: " << ds.child_distinct
                      << "\n";
            if (!ds.parent_csv.empty()) {
                std::cout << "parent: " << ds.parent_csv.string()
                          << "  distinct: " << ds.parent_distinct << "\n";
            }
            return 0;
        }
        if (gen_map->parsed()) {
            std::string doc = rdfmat::generate_mappings(parse_kind(gm_kind), gm_poms, gm_child,
                                                        gm_parent);
            if (gm_out == "-") {
                std::cout << doc;
            } else {
                std::ofstream out(gm_out);
                out << doc;
                if (!out.good()) throw rdfmat::IoError("cannot write mapping: " + gm_out);
            }
            return 0;
        }
        if (bench->parsed()) {
            std::vector<rdfmat::TestbedSpec> grid;
            for (const auto& kind : b_kinds) {
                for (uint64_t rows : b_rows) {
                    for (double rate : b_rates) {
                        for (uint32_t poms : b_poms) {
                            rdfmat::TestbedSpec s;
                            s.rows = rows;
                            s.duplicate_rate = rate;
                            s.pom_kind = parse_kind(kind);
                            s.pom_count = poms;
                            s.seed = b_seed;
                            s.parent_rows = b_parent_rows;
                            s.match_rate = b_match;
                            grid.push_back(s);
                        }
                    }
                }
            }
            rdfmat::BenchOptions options;
            options.repetitions = b_reps;
            options.timeout_seconds = b_timeout;
            options.work_dir = b_out;
            options.keep_outputs = b_keep;
            std::vector<rdfmat::RunMode> modes;
            for (const auto& m : b_modes) modes.push_back(parse_mode(m));
            options.modes = modes;
            if (!b_engine.empty()) options.engine_binary = b_engine;

            rdfmat::BenchReport report = rdfmat::run_benchmark(grid, options);
            for (const auto& cell : report.cells) {
                std::cout << to_string(cell.spec.pom_kind) << " k=" << cell.spec.pom_count
                          << " rows=" << cell.spec.rows << " dup=" << cell.spec.duplicate_rate
                          << " mode=" << (cell.mode == rdfmat::RunMode::Optimized ? "opt" : "naive")
                          << " status=" << to_string(cell.status)
                          << " wall_ms=" << cell.avg_wall_ms << " law="
                          << (cell.status == rdfmat::CellStatus::Ok
                                  ? (cell.counter_law_ok ? "ok" : "VIOLATION")
                                  : "-")
                          << "\n";
            }
            std::cout << "report: " << (options.work_dir / "bench_report.json").string() << "\n";
            return 0;
        }
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const rdfmat::MappingParseError& e) {
        std::cerr << "mapping error: " << e.what() << "\n";
        return kExitMapping;
    } catch (const rdfmat::ClassifyError& e) {
        std::cerr << "mapping error: " << e.what() << "\n";
        return kExitMapping;
    } catch (const rdfmat::TimeoutError& e) {
        std::cerr << "timeout: " << e.what() << "\n";
        return kExitTimeout;
    } catch (const rdfmat::SourceError& e) {
        std::cerr << "source error: " << e.what() << "\n";
        return kExitSource;
    } catch (const rdfmat::ResourceError& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return kExitResource;
    } catch (const rdfmat::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const rdfmat::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return kExitUsage;
}
