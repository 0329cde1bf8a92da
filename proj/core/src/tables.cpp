#include "rdfmat/tables.hpp"

#include <algorithm>
#include <array>

namespace rdfmat {

std::string encode_key(std::span<const std::string_view> parts) {
    size_t total = 0;
    for (const auto& p : parts) total += p.size() + 12;
    std::string out;
    out.reserve(total);
    for (const auto& p : parts) {
        out += std::to_string(p.size());
        out += ':';
        out += p;
    }
    return out;
}

std::string encode_key(std::string_view a, std::string_view b) {
    std::array<std::string_view, 2> parts{a, b};
    return encode_key(std::span<const std::string_view>(parts));
}

std::string encode_key(const std::vector<std::string>& parts) {
    std::vector<std::string_view> views(parts.begin(), parts.end());
    return encode_key(std::span<const std::string_view>(views));
}

InsertResult PredicateTupleTable::check_insert(std::string_view subject_term,
                                               std::string_view object_term,
                                               CostCounters& counters) {
    ++counters.ptt_lookups;
    std::string key = encode_key(subject_term, object_term);
    auto [it, inserted] = entries_.insert(std::move(key));
    if (!inserted) {
        return InsertResult::Duplicate;
    }
    ++counters.ptt_insertions;
    log_.push_back(LogEntry{next_timestamp_++, std::string(subject_term), std::string(object_term)});
    return InsertResult::New;
}

const std::vector<std::string> PredicateJoinTupleTable::empty_{};

std::string PredicateJoinTupleTable::name() const {
    std::string n = parent_map_id_;
    for (const auto& a : join_condition_) {
        n += '_';
        n += a;
    }
    return n;
}

void PredicateJoinTupleTable::add(const std::vector<std::string>& key_values,
                                  std::string_view subject_term) {
    auto& subjects = index_[encode_key(key_values)];
    if (std::find(subjects.begin(), subjects.end(), subject_term) == subjects.end()) {
        subjects.emplace_back(subject_term);
    }
}

const std::vector<std::string>& PredicateJoinTupleTable::probe(
    const std::vector<std::string>& key_values, CostCounters& counters) const {
    ++counters.pjtt_probes;
    auto it = index_.find(encode_key(key_values));
    return it == index_.end() ? empty_ : it->second;
}

} // namespace rdfmat
