// Execution engine. Optimized mode streams each triples map once, checking
// every generated triple against the per-predicate PTT and probing prebuilt
// PJTTs for joins; the writer drains PTT logs at batch boundaries so emission
// is incremental and exactly-once. Naive mode materializes everything and
// sort-deduplicates per predicate.

#include "rdfmat/engine.hpp"

#include <sys/resource.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <ostream>
#include <unordered_map>

#include <json.hpp>

#include "engine_internal.hpp"
#include "rdfmat/errors.hpp"
#include "rdfmat/ntriples.hpp"

namespace rdfmat {

namespace detail {

void Deadline::check(const char* stage) const {
    if (armed() && std::chrono::steady_clock::now() >= *at) {
        throw TimeoutError(std::string("run timed out during ") + stage);
    }
}

std::optional<std::string> render_subject_token(const TermMap& subject_map, const Record& record) {
    auto value = expand_term(subject_map, record);
    if (!value) return std::nullopt;
    return render_iri(*value);
}

std::optional<std::string> render_object_token(const TermMap& object_map, const Record& record) {
    auto value = expand_term(object_map, record);
    if (!value) return std::nullopt;
    if (object_map.term_type == TermType::Iri) return render_iri(*value);
    return render_literal(*value, object_map.datatype);
}

} // namespace detail

uint64_t current_peak_rss_kb() {
    struct rusage ru{};
    if (getrusage(RUSAGE_SELF, &ru) != 0) return 0;
    return static_cast<uint64_t>(ru.ru_maxrss); // KiB on Linux
}

std::pair<uint64_t, uint64_t> merge_sort_band(uint64_t n) {
    if (n < 2) return {0, n};
    long double nlogn = static_cast<long double>(n) * std::log2(static_cast<long double>(n));
    auto lo = static_cast<uint64_t>(std::ceil(nlogn / 2.0L));
    auto hi = static_cast<uint64_t>(std::floor(nlogn)) + n;
    return {lo, hi};
}

PredictedOps predicted_ops(OperatorKind kind, RunMode mode, uint64_t n_p, uint64_t s_p,
                           std::optional<uint64_t> n_parent, std::optional<uint64_t> n_child) {
    if (kind == OperatorKind::Ojm && (!n_parent.has_value() || !n_child.has_value())) {
        throw Error("join cardinalities are required to predict join-map operations");
    }
    PredictedOps out;
    if (mode == RunMode::Optimized) {
        out.exact = n_p + 2 * s_p;
        if (kind == OperatorKind::Ojm) {
            out.exact += 2 * *n_parent + *n_child;
        }
        out.lo = out.hi = out.exact;
        return out;
    }
    auto [band_lo, band_hi] = merge_sort_band(n_p);
    out.is_band = true;
    out.lo = n_p + s_p + band_lo;
    out.hi = n_p + s_p + band_hi;
    if (kind == OperatorKind::Ojm) {
        uint64_t pairs = *n_parent * *n_child;
        out.lo += pairs;
        out.hi += pairs;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Operator passes
// ---------------------------------------------------------------------------

namespace {

uint64_t simple_pass(const TermMap& subject_map, const TermMap& object_map, RecordStream& stream,
                     PredicateTupleTable& ptt, IncrementalWriter& writer, CostCounters& counters) {
    uint64_t emitted = 0;
    while (auto rec = stream.next()) {
        auto subject = detail::render_subject_token(subject_map, *rec);
        if (!subject) {
            ++counters.skipped_none;
            continue;
        }
        auto object = detail::render_object_token(object_map, *rec);
        if (!object) {
            ++counters.skipped_none;
            continue;
        }
        ++counters.triples_generated;
        if (ptt.check_insert(*subject, *object, counters) == InsertResult::New) {
            ++emitted;
        }
    }
    writer.drain(ptt);
    return emitted;
}

} // namespace

uint64_t exec_som(const OperatorPlan& plan, RecordStream& stream, PredicateTupleTable& ptt,
                  IncrementalWriter& writer, CostCounters& counters) {
    if (plan.kind != OperatorKind::Som) throw Error("exec_som requires a SOM plan");
    const auto& simple = std::get<SimpleObject>(plan.pom->object);
    return simple_pass(plan.child->subject_map, simple.term, stream, ptt, writer, counters);
}

uint64_t exec_orm(const OperatorPlan& plan, RecordStream& stream, PredicateTupleTable& ptt,
                  IncrementalWriter& writer, CostCounters& counters) {
    if (plan.kind != OperatorKind::Orm) throw Error("exec_orm requires an ORM plan");
    if (plan.parent == nullptr) throw Error("reference object plan has no parent map");
    // object values come from the parent's subject map over the same record
    return simple_pass(plan.child->subject_map, plan.parent->subject_map, stream, ptt, writer,
                       counters);
}

PredicateJoinTupleTable pjtt_build(const TriplesMap& parent, RecordStream& stream,
                                   const std::vector<std::string>& join_attrs,
                                   CostCounters& counters) {
    PredicateJoinTupleTable pjtt(parent.id, join_attrs);
    while (auto rec = stream.next()) {
        ++counters.pjtt_reads;
        auto key = project_attributes(*rec, join_attrs);
        auto subject = detail::render_subject_token(parent.subject_map, *rec);
        if (!key || !subject) {
            ++counters.skipped_none;
            continue;
        }
        pjtt.add(*key, *subject);
        ++counters.pjtt_insertions;
    }
    return pjtt;
}

uint64_t exec_ojm(const OperatorPlan& plan, RecordStream& child_stream,
                  const PredicateJoinTupleTable& pjtt, PredicateTupleTable& ptt,
                  IncrementalWriter& writer, CostCounters& counters) {
    if (plan.kind != OperatorKind::Ojm) throw Error("exec_ojm requires an OJM plan");
    const auto& join = std::get<JoinObject>(plan.pom->object);
    std::vector<std::string> child_attrs;
    for (const auto& jc : join.condition) child_attrs.push_back(jc.child_attr);

    uint64_t emitted = 0;
    while (auto rec = child_stream.next()) {
        auto subject = detail::render_subject_token(plan.child->subject_map, *rec);
        if (!subject) {
            ++counters.skipped_none;
            continue;
        }
        auto key = project_attributes(*rec, child_attrs);
        if (!key) {
            ++counters.skipped_none;
            continue;
        }
        for (const auto& parent_subject : pjtt.probe(*key, counters)) {
            ++counters.triples_generated;
            if (ptt.check_insert(*subject, parent_subject, counters) == InsertResult::New) {
                ++emitted;
            }
        }
    }
    writer.drain(ptt);
    return emitted;
}

// ---------------------------------------------------------------------------
// Whole-system execution
// ---------------------------------------------------------------------------

namespace {

const std::string kRdfType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

struct NullBuf final : std::streambuf {
    int overflow(int c) override { return c == EOF ? 0 : c; }
    std::streamsize xsputn(const char*, std::streamsize n) override { return n; }
};

/// Predicate tuple tables in creation order (drain order must be stable).
class PttRegistry {
public:
    PredicateTupleTable& get(const std::string& predicate) {
        auto it = index_.find(predicate);
        if (it != index_.end()) return *tables_[it->second];
        index_.emplace(predicate, tables_.size());
        tables_.push_back(std::make_unique<PredicateTupleTable>(predicate));
        return *tables_.back();
    }

    const std::vector<std::unique_ptr<PredicateTupleTable>>& tables() const { return tables_; }

private:
    std::unordered_map<std::string, size_t> index_;
    std::vector<std::unique_ptr<PredicateTupleTable>> tables_;
};

struct BuiltPjtt {
    PredicateJoinTupleTable table;
    uint64_t parent_rows = 0;
};

struct BoundPom {
    OperatorKind kind = OperatorKind::Som;
    const PredicateObjectMap* pom = nullptr;
    const TriplesMap* parent = nullptr;
    const TermMap* object_map = nullptr; // Som: object term; Orm: parent subject map
    std::vector<std::string> child_attrs;
    std::vector<std::string> parent_attrs;
    const BuiltPjtt* pjtt = nullptr; // Ojm only
    PredicateTupleTable* ptt = nullptr;
    size_t stats_index = 0;
};

struct RunContext {
    const DataIntegrationSystem& dis;
    const EngineOptions& opts;
    RunReport& report;
    IncrementalWriter& writer;
    detail::Deadline deadline;

    std::map<std::string, uint64_t> generated_per_predicate;

    const TriplesMap* resolve_parent(const TriplesMap& child, const PredicateObjectMap& pom) const {
        const std::string* parent_id = nullptr;
        if (const auto* ref = std::get_if<ReferenceObject>(&pom.object)) {
            parent_id = &ref->parent_id;
        } else if (const auto* join = std::get_if<JoinObject>(&pom.object)) {
            parent_id = &join->parent_id;
        }
        if (parent_id == nullptr) return nullptr;
        const TriplesMap* parent = dis.find_map(*parent_id);
        if (parent == nullptr) {
            throw ClassifyError("map <" + child.id + "> references unknown parent <" + *parent_id +
                                ">");
        }
        return parent;
    }

    static bool is_noop(const TriplesMap& map) {
        // a map with no predicate-object maps and no classes can never
        // produce a triple; its pass is skipped
        return map.predicate_object_maps.empty() && map.subject_classes.empty();
    }
};

class OptimizedRun {
public:
    OptimizedRun(RunContext& ctx) : ctx_(ctx) {}

    void execute() {
        for (const auto& map : ctx_.dis.mappings) {
            if (RunContext::is_noop(map)) continue;
            try {
                run_map(map);
            } catch (const TimeoutError& e) {
                ctx_.report.map_errors.push_back({map.id, e.what()});
                ctx_.report.timed_out = true;
                ctx_.report.partial = true;
                break;
            } catch (const Error& e) {
                ctx_.report.map_errors.push_back({map.id, e.what()});
                ctx_.report.partial = true;
            }
        }
        drain_all();
        ctx_.writer.flush();
        finish_report();
    }

private:
    RunContext& ctx_;
    PttRegistry ptts_;
    std::map<std::string, BuiltPjtt> pjtts_; // key: parent id + join attrs

    void drain_all() {
        for (const auto& ptt : ptts_.tables()) {
            ctx_.writer.drain(*ptt);
        }
    }

    const BuiltPjtt& ensure_pjtt(const TriplesMap& parent, const std::vector<std::string>& attrs) {
        std::string key = parent.id + '\x1f' + encode_key(attrs);
        auto it = pjtts_.find(key);
        if (it != pjtts_.end()) return it->second;

        CostCounters& counters = ctx_.report.counters;
        uint64_t reads_before = counters.pjtt_reads;
        auto stream = open_source(parent.logical_source, ctx_.dis.base_dir);
        BuiltPjtt built{pjtt_build(parent, *stream, attrs, counters), 0};
        built.parent_rows = counters.pjtt_reads - reads_before;
        ++ctx_.report.pjtt_builds;
        return pjtts_.emplace(std::move(key), std::move(built)).first->second;
    }

    std::vector<BoundPom> bind_poms(const TriplesMap& map) {
        std::vector<BoundPom> bound;
        for (const auto& pom : map.predicate_object_maps) {
            BoundPom b;
            b.pom = &pom;
            b.parent = ctx_.resolve_parent(map, pom);
            b.kind = classify_pom(pom, map, b.parent);
            b.ptt = &ptts_.get(pom.predicate);
            switch (b.kind) {
            case OperatorKind::Som:
                b.object_map = &std::get<SimpleObject>(pom.object).term;
                break;
            case OperatorKind::Orm:
                b.object_map = &b.parent->subject_map;
                break;
            case OperatorKind::Ojm: {
                const auto& join = std::get<JoinObject>(pom.object);
                for (const auto& jc : join.condition) {
                    b.child_attrs.push_back(jc.child_attr);
                    b.parent_attrs.push_back(jc.parent_attr);
                }
                b.pjtt = &ensure_pjtt(*b.parent, b.parent_attrs);
                break;
            }
            }
            PomStats stats;
            stats.map_id = map.id;
            stats.predicate = pom.predicate;
            stats.kind = b.kind;
            if (b.kind == OperatorKind::Ojm) stats.parent_rows = b.pjtt->parent_rows;
            b.stats_index = ctx_.report.pom_stats.size();
            ctx_.report.pom_stats.push_back(std::move(stats));
            bound.push_back(std::move(b));
        }
        return bound;
    }

    void run_map(const TriplesMap& map) {
        std::vector<BoundPom> bound = bind_poms(map);
        std::vector<std::string> class_terms;
        PredicateTupleTable* type_ptt = nullptr;
        if (!map.subject_classes.empty()) {
            type_ptt = &ptts_.get(kRdfType);
            for (const auto& cls : map.subject_classes) {
                class_terms.push_back(render_iri(cls));
            }
        }

        CostCounters& counters = ctx_.report.counters;
        auto stream = open_source(map.logical_source, ctx_.dis.base_dir);
        uint64_t rows = 0;
        while (auto rec = stream->next()) {
            ++rows;
            ctx_.deadline.poll(rows, "triples map execution");
            auto subject = detail::render_subject_token(map.subject_map, *rec);
            if (!subject) {
                ++counters.skipped_none;
                continue;
            }
            for (const auto& cls : class_terms) {
                ++counters.triples_generated;
                ++ctx_.generated_per_predicate[kRdfType];
                type_ptt->check_insert(*subject, cls, counters);
            }
            for (auto& b : bound) {
                PomStats& stats = ctx_.report.pom_stats[b.stats_index];
                if (b.kind == OperatorKind::Ojm) {
                    auto key = project_attributes(*rec, b.child_attrs);
                    if (!key) {
                        ++counters.skipped_none;
                        continue;
                    }
                    for (const auto& parent_subject : b.pjtt->table.probe(*key, counters)) {
                        ++counters.triples_generated;
                        ++stats.generated;
                        ++ctx_.generated_per_predicate[b.pom->predicate];
                        if (b.ptt->check_insert(*subject, parent_subject, counters) ==
                            InsertResult::New) {
                            ++stats.emitted;
                        }
                    }
                } else {
                    auto object = detail::render_object_token(*b.object_map, *rec);
                    if (!object) {
                        ++counters.skipped_none;
                        continue;
                    }
                    ++counters.triples_generated;
                    ++stats.generated;
                    ++ctx_.generated_per_predicate[b.pom->predicate];
                    if (b.ptt->check_insert(*subject, *object, counters) == InsertResult::New) {
                        ++stats.emitted;
                    }
                }
            }
            if (rows % ctx_.opts.drain_batch_records == 0) {
                drain_all();
            }
        }
        for (auto& b : bound) {
            ctx_.report.pom_stats[b.stats_index].child_rows = rows;
        }
    }

    void finish_report() {
        RunReport& report = ctx_.report;
        for (const auto& ptt : ptts_.tables()) {
            PredicateStats ps;
            ps.generated = ctx_.generated_per_predicate[ptt->predicate()];
            ps.emitted = ptt->size();
            report.predicates[ptt->predicate()] = ps;
        }
        uint64_t build_ops = 0;
        for (const auto& [key, built] : pjtts_) {
            build_ops += 2 * built.parent_rows;
        }
        uint64_t probe_ops = 0;
        for (const auto& ps : report.pom_stats) {
            if (ps.kind == OperatorKind::Ojm) probe_ops += ps.child_rows;
        }
        report.predicted.is_band = false;
        report.predicted.exact = report.counters.triples_generated +
                                 2 * report.counters.ptt_insertions + build_ops + probe_ops;
        report.predicted.lo = report.predicted.hi = report.predicted.exact;
        report.triples_emitted = report.counters.kg_emissions;
    }
};

class NaiveRun {
public:
    NaiveRun(RunContext& ctx) : ctx_(ctx) {}

    void execute() {
        try {
            for (const auto& map : ctx_.dis.mappings) {
                if (RunContext::is_noop(map)) continue;
                try {
                    run_map(map);
                } catch (const TimeoutError& e) {
                    ctx_.report.map_errors.push_back({map.id, e.what()});
                    ctx_.report.timed_out = true;
                    ctx_.report.partial = true;
                    break;
                } catch (const Error& e) {
                    ctx_.report.map_errors.push_back({map.id, e.what()});
                    ctx_.report.partial = true;
                }
            }
            dedup_and_write();
        } catch (const std::bad_alloc&) {
            throw ResourceError("naive materialization exhausted memory after " +
                                std::to_string(ctx_.report.counters.triples_generated) +
                                " triples");
        }
        finish_report();
    }

private:
    RunContext& ctx_;
    std::vector<std::pair<std::string, std::vector<std::string>>> buckets_; // first-seen order
    std::unordered_map<std::string, size_t> bucket_index_;
    std::map<std::string, uint64_t> emitted_per_predicate_;

    std::vector<std::string>& bucket(const std::string& predicate) {
        auto it = bucket_index_.find(predicate);
        if (it != bucket_index_.end()) return buckets_[it->second].second;
        bucket_index_.emplace(predicate, buckets_.size());
        buckets_.emplace_back(predicate, std::vector<std::string>{});
        return buckets_.back().second;
    }

    void run_map(const TriplesMap& map) {
        CostCounters& counters = ctx_.report.counters;

        if (!map.subject_classes.empty()) {
            std::vector<std::string> class_terms;
            for (const auto& cls : map.subject_classes) class_terms.push_back(render_iri(cls));
            auto& lines = bucket(kRdfType);
            auto stream = open_source(map.logical_source, ctx_.dis.base_dir);
            const std::string type_term = render_iri(kRdfType);
            uint64_t tick = 0;
            while (auto rec = stream->next()) {
                ctx_.deadline.poll(++tick, "naive class pass");
                auto subject = detail::render_subject_token(map.subject_map, *rec);
                if (!subject) {
                    ++counters.skipped_none;
                    continue;
                }
                for (const auto& cls : class_terms) {
                    lines.push_back(ntriples_line(*subject, type_term, cls));
                    ++counters.triples_generated;
                    ++ctx_.generated_per_predicate[kRdfType];
                }
            }
        }

        for (const auto& pom : map.predicate_object_maps) {
            const TriplesMap* parent = ctx_.resolve_parent(map, pom);
            OperatorKind kind = classify_pom(pom, map, parent);
            const std::string predicate_term = render_iri(pom.predicate);
            auto& lines = bucket(pom.predicate);
            uint64_t generated_before = ctx_.report.counters.triples_generated;

            PomStats stats;
            stats.map_id = map.id;
            stats.predicate = pom.predicate;
            stats.kind = kind;

            if (kind == OperatorKind::Ojm) {
                const auto& join = std::get<JoinObject>(pom.object);
                std::vector<std::string> child_attrs, parent_attrs;
                for (const auto& jc : join.condition) {
                    child_attrs.push_back(jc.child_attr);
                    parent_attrs.push_back(jc.parent_attr);
                }
                auto child_stream = open_source(map.logical_source, ctx_.dis.base_dir);
                auto parent_stream = open_source(parent->logical_source, ctx_.dis.base_dir);
                detail::naive_materialize_join(map.subject_map, predicate_term,
                                               parent->subject_map, child_attrs, parent_attrs,
                                               *child_stream, *parent_stream, lines,
                                               ctx_.report.counters, ctx_.deadline,
                                               ctx_.opts.naive_max_triples, &stats.parent_rows,
                                               &stats.child_rows);
            } else {
                const TermMap& object_map = (kind == OperatorKind::Som)
                                                ? std::get<SimpleObject>(pom.object).term
                                                : parent->subject_map;
                auto stream = open_source(map.logical_source, ctx_.dis.base_dir);
                detail::naive_materialize_simple(map.subject_map, predicate_term, object_map,
                                                 *stream, lines, ctx_.report.counters,
                                                 ctx_.deadline, ctx_.opts.naive_max_triples);
            }
            uint64_t generated = ctx_.report.counters.triples_generated - generated_before;
            stats.generated = generated;
            ctx_.generated_per_predicate[pom.predicate] += generated;
            ctx_.report.pom_stats.push_back(std::move(stats));
        }
    }

    void dedup_and_write() {
        CostCounters& counters = ctx_.report.counters;
        for (auto& [predicate, lines] : buckets_) {
            counters.sort_comparisons += detail::counted_merge_sort(lines);
            counters.sort_comparisons += detail::dedup_sorted(lines);
            for (const auto& line : lines) {
                ctx_.writer.write_line(line);
            }
            emitted_per_predicate_[predicate] = lines.size();
            lines.clear();
            lines.shrink_to_fit();
        }
        ctx_.writer.flush();
    }

    void finish_report() {
        RunReport& report = ctx_.report;
        for (const auto& [predicate, generated] : ctx_.generated_per_predicate) {
            PredicateStats ps;
            ps.generated = generated;
            ps.emitted = emitted_per_predicate_[predicate];
            report.predicates[predicate] = ps;
        }
        // band prediction: per-predicate merge-sort term plus the exact
        // nested-loop pair count
        uint64_t lo = report.counters.triples_generated + report.counters.kg_emissions;
        uint64_t hi = lo;
        for (const auto& [predicate, ps] : report.predicates) {
            auto [blo, bhi] = merge_sort_band(ps.generated);
            lo += blo;
            hi += bhi;
        }
        for (const auto& ps : report.pom_stats) {
            if (ps.kind == OperatorKind::Ojm) {
                lo += ps.parent_rows * ps.child_rows;
                hi += ps.parent_rows * ps.child_rows;
            }
        }
        report.predicted.is_band = true;
        report.predicted.lo = lo;
        report.predicted.hi = hi;
        report.triples_emitted = report.counters.kg_emissions;
    }
};

} // namespace

bool RunReport::counter_law_holds() const {
    if (mode == RunMode::Optimized) {
        return counters.kg_emissions == counters.ptt_insertions &&
               counters.ptt_lookups == counters.triples_generated &&
               counters.ptt_insertions <= counters.ptt_lookups &&
               counters.optimized_total() == predicted.exact;
    }
    uint64_t naive_total = counters.triples_generated + counters.kg_emissions +
                           counters.sort_comparisons + counters.pairwise_comparisons;
    return naive_total >= predicted.lo && naive_total <= predicted.hi;
}

RunReport run_system(const DataIntegrationSystem& dis, const EngineOptions& options) {
    RunReport report;
    report.mode = options.mode;
    report.output_path = options.output_path.empty() ? dis.output_path : options.output_path;

    auto start = std::chrono::steady_clock::now();

    NullBuf null_buf;
    std::ostream null_stream(&null_buf);
    std::unique_ptr<IncrementalWriter> writer;
    if (report.output_path.empty()) {
        writer = std::make_unique<IncrementalWriter>(null_stream, &report.counters);
    } else {
        writer = std::make_unique<IncrementalWriter>(std::filesystem::path(report.output_path),
                                                     &report.counters);
    }

    RunContext ctx{dis, options, report, *writer, {}, {}};
    if (options.timeout_seconds) {
        ctx.deadline.at = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                      std::chrono::duration<double>(*options.timeout_seconds));
    }

    if (options.mode == RunMode::Optimized) {
        OptimizedRun(ctx).execute();
    } else {
        NaiveRun(ctx).execute();
    }

    report.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                               start)
                         .count();
    report.peak_rss_kb = current_peak_rss_kb();
    return report;
}

// ---------------------------------------------------------------------------
// Report serialization
// ---------------------------------------------------------------------------

std::string RunReport::to_json() const {
    nlohmann::ordered_json j;
    j["mode"] = mode == RunMode::Optimized ? "optimized" : "naive";
    j["wall_ms"] = wall_ms;
    j["peak_rss_kb"] = peak_rss_kb;
    j["timed_out"] = timed_out;
    j["partial"] = partial;
    j["triples_emitted"] = triples_emitted;
    j["pjtt_builds"] = pjtt_builds;
    j["output_path"] = output_path;

    nlohmann::ordered_json errors = nlohmann::ordered_json::array();
    for (const auto& e : map_errors) {
        errors.push_back({{"map", e.map_id}, {"error", e.message}});
    }
    j["map_errors"] = std::move(errors);

    nlohmann::ordered_json preds = nlohmann::ordered_json::object();
    for (const auto& [iri, ps] : predicates) {
        preds[iri] = {{"generated", ps.generated}, {"emitted", ps.emitted}};
    }
    j["predicates"] = std::move(preds);

    j["counters"] = {{"ptt_lookups", counters.ptt_lookups},
                     {"ptt_insertions", counters.ptt_insertions},
                     {"kg_emissions", counters.kg_emissions},
                     {"pjtt_insertions", counters.pjtt_insertions},
                     {"pjtt_reads", counters.pjtt_reads},
                     {"pjtt_probes", counters.pjtt_probes},
                     {"pairwise_comparisons", counters.pairwise_comparisons},
                     {"sort_comparisons", counters.sort_comparisons},
                     {"triples_generated", counters.triples_generated},
                     {"skipped_none", counters.skipped_none}};

    j["predicted"] = {{"band", predicted.is_band},
                      {"exact", predicted.exact},
                      {"lo", predicted.lo},
                      {"hi", predicted.hi}};

    nlohmann::ordered_json poms = nlohmann::ordered_json::array();
    for (const auto& ps : pom_stats) {
        poms.push_back({{"map", ps.map_id},
                        {"predicate", ps.predicate},
                        {"kind", std::string(to_string(ps.kind))},
                        {"generated", ps.generated},
                        {"emitted", ps.emitted},
                        {"parent_rows", ps.parent_rows},
                        {"child_rows", ps.child_rows}});
    }
    j["pom_stats"] = std::move(poms);
    j["counter_law_ok"] = counter_law_holds();
    return j.dump(2);
}

} // namespace rdfmat
