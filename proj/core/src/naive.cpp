// Naive-mode execution: generate every triple (duplicates included), then
// eliminate duplicates with a comparison-counted merge sort. Join maps run a
// full nested loop over both sources instead of probing a join index.

#include <algorithm>

#include "engine_internal.hpp"
#include "rdfmat/engine.hpp"
#include "rdfmat/errors.hpp"
#include "rdfmat/ntriples.hpp"

namespace rdfmat {

namespace detail {

uint64_t counted_merge_sort(std::vector<std::string>& v) {
    const size_t n = v.size();
    if (n < 2) return 0;
    uint64_t comparisons = 0;
    std::vector<std::string> buf(n);
    std::vector<std::string>* src = &v;
    std::vector<std::string>* dst = &buf;
    for (size_t width = 1; width < n; width *= 2) {
        for (size_t lo = 0; lo < n; lo += 2 * width) {
            size_t mid = std::min(lo + width, n);
            size_t hi = std::min(lo + 2 * width, n);
            size_t a = lo, b = mid, o = lo;
            while (a < mid && b < hi) {
                ++comparisons;
                if ((*src)[b] < (*src)[a]) {
                    (*dst)[o++] = std::move((*src)[b++]);
                } else {
                    (*dst)[o++] = std::move((*src)[a++]);
                }
            }
            while (a < mid) (*dst)[o++] = std::move((*src)[a++]);
            while (b < hi) (*dst)[o++] = std::move((*src)[b++]);
        }
        std::swap(src, dst);
    }
    if (src != &v) {
        v = std::move(*src);
    }
    return comparisons;
}

uint64_t dedup_sorted(std::vector<std::string>& v) {
    if (v.size() < 2) return 0;
    uint64_t comparisons = 0;
    size_t out = 1;
    for (size_t i = 1; i < v.size(); ++i) {
        ++comparisons;
        if (v[i] != v[out - 1]) {
            if (out != i) v[out] = std::move(v[i]);
            ++out;
        }
    }
    v.resize(out);
    return comparisons;
}

namespace {

void check_cap(uint64_t produced, uint64_t max_triples) {
    if (max_triples != 0 && produced > max_triples) {
        throw ResourceError("naive materialization exceeded the configured limit after " +
                            std::to_string(produced) + " triples");
    }
}

struct LoadedRecords {
    std::vector<Record> records;
};

LoadedRecords load_all(RecordStream& stream, const Deadline& deadline, const char* stage) {
    LoadedRecords out;
    uint64_t tick = 0;
    while (auto rec = stream.next()) {
        out.records.push_back(std::move(*rec));
        deadline.poll(++tick, stage);
    }
    return out;
}

} // namespace

void naive_materialize_simple(const TermMap& subject_map, const std::string& predicate_term,
                              const TermMap& object_map, RecordStream& stream,
                              std::vector<std::string>& out, CostCounters& counters,
                              const Deadline& deadline, uint64_t max_triples) {
    uint64_t tick = 0;
    while (auto rec = stream.next()) {
        deadline.poll(++tick, "naive generation");
        auto subject = render_subject_token(subject_map, *rec);
        if (!subject) {
            ++counters.skipped_none;
            continue;
        }
        auto object = render_object_token(object_map, *rec);
        if (!object) {
            ++counters.skipped_none;
            continue;
        }
        out.push_back(ntriples_line(*subject, predicate_term, *object));
        ++counters.triples_generated;
        check_cap(out.size(), max_triples);
    }
}

void naive_materialize_join(const TermMap& child_subject_map, const std::string& predicate_term,
                            const TermMap& parent_subject_map,
                            const std::vector<std::string>& child_attrs,
                            const std::vector<std::string>& parent_attrs, RecordStream& child,
                            RecordStream& parent, std::vector<std::string>& out,
                            CostCounters& counters, const Deadline& deadline, uint64_t max_triples,
                            uint64_t* parent_rows_out, uint64_t* child_rows_out) {
    LoadedRecords parents = load_all(parent, deadline, "naive join (parent load)");
    LoadedRecords children = load_all(child, deadline, "naive join (child load)");
    if (parent_rows_out) *parent_rows_out = parents.records.size();
    if (child_rows_out) *child_rows_out = children.records.size();

    // Precompute per-record join keys and terms once; the quadratic pair loop
    // still performs (and counts) one comparison per pair.
    std::vector<std::optional<std::vector<std::string>>> child_keys;
    std::vector<std::optional<std::string>> child_subjects;
    child_keys.reserve(children.records.size());
    child_subjects.reserve(children.records.size());
    for (const auto& r : children.records) {
        child_keys.push_back(project_attributes(r, child_attrs));
        child_subjects.push_back(render_subject_token(child_subject_map, r));
    }
    std::vector<std::optional<std::vector<std::string>>> parent_keys;
    std::vector<std::optional<std::string>> parent_subjects;
    parent_keys.reserve(parents.records.size());
    parent_subjects.reserve(parents.records.size());
    for (const auto& r : parents.records) {
        parent_keys.push_back(project_attributes(r, parent_attrs));
        parent_subjects.push_back(render_subject_token(parent_subject_map, r));
    }

    uint64_t tick = 0;
    for (size_t ci = 0; ci < children.records.size(); ++ci) {
        for (size_t pi = 0; pi < parents.records.size(); ++pi) {
            ++counters.pairwise_comparisons;
            deadline.poll(++tick, "naive nested-loop join");
            if (!child_keys[ci] || !parent_keys[pi] || *child_keys[ci] != *parent_keys[pi]) {
                continue;
            }
            if (!child_subjects[ci] || !parent_subjects[pi]) {
                ++counters.skipped_none;
                continue;
            }
            out.push_back(ntriples_line(*child_subjects[ci], predicate_term, *parent_subjects[pi]));
            ++counters.triples_generated;
            check_cap(out.size(), max_triples);
        }
    }
}

} // namespace detail

std::vector<std::string> naive_execute(const OperatorPlan& plan, RecordStream& child_stream,
                                       RecordStream* parent_stream, CostCounters& counters) {
    if (plan.mode != RunMode::Naive) {
        throw Error("naive_execute requires a naive-mode plan");
    }
    detail::Deadline deadline;
    std::vector<std::string> lines;
    const std::string predicate_term = render_iri(plan.pom->predicate);

    try {
        switch (plan.kind) {
        case OperatorKind::Som: {
            const auto& simple = std::get<SimpleObject>(plan.pom->object);
            detail::naive_materialize_simple(plan.child->subject_map, predicate_term, simple.term,
                                             child_stream, lines, counters, deadline, 0);
            break;
        }
        case OperatorKind::Orm: {
            if (plan.parent == nullptr) throw Error("reference object plan has no parent map");
            detail::naive_materialize_simple(plan.child->subject_map, predicate_term,
                                             plan.parent->subject_map, child_stream, lines,
                                             counters, deadline, 0);
            break;
        }
        case OperatorKind::Ojm: {
            if (parent_stream == nullptr) {
                throw Error("naive join execution needs a parent stream");
            }
            const auto& join = std::get<JoinObject>(plan.pom->object);
            std::vector<std::string> child_attrs, parent_attrs;
            for (const auto& jc : join.condition) {
                child_attrs.push_back(jc.child_attr);
                parent_attrs.push_back(jc.parent_attr);
            }
            detail::naive_materialize_join(plan.child->subject_map, predicate_term,
                                           plan.parent->subject_map, child_attrs, parent_attrs,
                                           child_stream, *parent_stream, lines, counters, deadline,
                                           0, nullptr, nullptr);
            break;
        }
        }
    } catch (const std::bad_alloc&) {
        throw ResourceError("naive materialization exhausted memory after " +
                            std::to_string(lines.size()) + " triples");
    }

    counters.sort_comparisons += detail::counted_merge_sort(lines);
    counters.sort_comparisons += detail::dedup_sorted(lines);
    return lines;
}

} // namespace rdfmat
