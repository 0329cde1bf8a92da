#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rdfmat {

/// One row/object from a logical source: ordered attribute -> raw string value.
/// Attribute names are shared between records of the same CSV source.
class Record {
public:
    Record() : names_(std::make_shared<std::vector<std::string>>()) {}
    Record(std::shared_ptr<const std::vector<std::string>> names,
           std::vector<std::string> values, uint64_t ordinal)
        : names_(std::move(names)), values_(std::move(values)), ordinal_(ordinal) {}

    const std::vector<std::string>& names() const { return *names_; }
    const std::vector<std::string>& values() const { return values_; }
    uint64_t ordinal() const { return ordinal_; }
    size_t size() const { return values_.size(); }

    /// Value of an attribute, or nullptr when the attribute is absent.
    const std::string* find(std::string_view name) const {
        const auto& ns = *names_;
        for (size_t i = 0; i < ns.size(); ++i) {
            if (ns[i] == name) return &values_[i];
        }
        return nullptr;
    }

private:
    std::shared_ptr<const std::vector<std::string>> names_;
    std::vector<std::string> values_;
    uint64_t ordinal_ = 0;
};

/// Values of `attrs` in order, or nullopt when any attribute is absent or
/// empty (the same skip policy template expansion uses).
std::optional<std::vector<std::string>> project_attributes(
    const Record& record, const std::vector<std::string>& attrs);

} // namespace rdfmat
