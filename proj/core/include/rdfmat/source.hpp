#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "rdfmat/mapping.hpp"
#include "rdfmat/record.hpp"

namespace rdfmat {

/// Single-consumer pull stream of records. Implementations read the
/// underlying file incrementally; per-record memory does not grow with
/// file size.
class RecordStream {
public:
    virtual ~RecordStream() = default;

    /// Next record in file order, or nullopt at end of input.
    virtual std::optional<Record> next() = 0;

    /// Largest number of bytes buffered for a single record so far.
    virtual uint64_t peak_record_bytes() const { return 0; }
};

/// RFC 4180 CSV reader. The header row defines the attribute names.
std::unique_ptr<RecordStream> open_csv(const std::filesystem::path& path);

/// Streaming JSON reader. `iterator` is a JSONPath child/wildcard expression
/// ("$.a.b[*]") selecting an array whose objects become records. Scalar
/// fields only; nested objects are flattened with dotted paths.
std::unique_ptr<RecordStream> open_json(const std::filesystem::path& path,
                                        std::string_view iterator);

/// Open a logical source, resolving a relative path against `base_dir`.
std::unique_ptr<RecordStream> open_source(const LogicalSource& ls,
                                          const std::filesystem::path& base_dir = {});

/// Resolve a source path against the mapping file's directory.
std::filesystem::path resolve_source_path(const LogicalSource& ls,
                                          const std::filesystem::path& base_dir);

} // namespace rdfmat
