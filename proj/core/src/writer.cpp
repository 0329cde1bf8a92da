#include "rdfmat/writer.hpp"

#include "rdfmat/errors.hpp"
#include "rdfmat/ntriples.hpp"

namespace rdfmat {

uint64_t emit_incremental(const PredicateTupleTable& ptt, EmissionCursor& cursor,
                          std::ostream& sink, CostCounters* counters) {
    const auto& log = ptt.log();
    if (log.empty() || log.back().timestamp <= cursor.last_emitted) {
        return 0;
    }
    // Timestamps are dense and start at 1, so the first pending entry sits at
    // index last_emitted.
    size_t first = static_cast<size_t>(cursor.last_emitted);
    std::string batch;
    std::string predicate_term = render_iri(ptt.predicate());
    for (size_t i = first; i < log.size(); ++i) {
        batch += ntriples_line(log[i].subject, predicate_term, log[i].object);
    }
    sink.write(batch.data(), static_cast<std::streamsize>(batch.size()));
    sink.flush();
    if (!sink.good()) {
        throw IoError("failed to append " + std::to_string(log.size() - first) +
                      " triples for predicate <" + ptt.predicate() + ">");
    }
    uint64_t appended = log.size() - first;
    cursor.last_emitted = log.back().timestamp;
    if (counters) counters->kg_emissions += appended;
    return appended;
}

IncrementalWriter::IncrementalWriter(const std::filesystem::path& path, CostCounters* counters)
    : counters_(counters) {
    owned_.open(path, std::ios::binary | std::ios::trunc);
    if (!owned_) {
        throw IoError("cannot open output file: " + path.string());
    }
    sink_ = &owned_;
}

uint64_t IncrementalWriter::drain(const PredicateTupleTable& ptt) {
    uint64_t n = emit_incremental(ptt, cursors_[&ptt], *sink_, counters_);
    lines_written_ += n;
    return n;
}

void IncrementalWriter::write_line(std::string_view line) {
    sink_->write(line.data(), static_cast<std::streamsize>(line.size()));
    if (!sink_->good()) {
        throw IoError("failed to write output line");
    }
    ++lines_written_;
    if (counters_) ++counters_->kg_emissions;
}

void IncrementalWriter::flush() {
    sink_->flush();
    if (!sink_->good()) {
        throw IoError("failed to flush output");
    }
}

} // namespace rdfmat
