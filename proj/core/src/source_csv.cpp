// RFC 4180 CSV record stream: quoted fields, embedded commas/newlines and
// doubled quotes. Reads through the stream buffer one character at a time,
// so memory use is bounded by the largest single record.

#include <fstream>
#include <set>

#include "rdfmat/errors.hpp"
#include "rdfmat/source.hpp"

namespace rdfmat {

namespace {

class CsvStream final : public RecordStream {
public:
    explicit CsvStream(const std::filesystem::path& path) : path_(path.string()), in_(path, std::ios::binary) {
        if (!in_) {
            throw SourceError("cannot open CSV source: " + path_);
        }
        std::vector<std::string> header;
        if (!read_row(header)) {
            throw SourceError(path_ + ": missing CSV header row");
        }
        std::set<std::string_view> seen;
        for (const auto& name : header) {
            if (name.empty()) {
                throw SourceError(path_ + ": empty attribute name in CSV header");
            }
            if (!seen.insert(name).second) {
                throw SourceError(path_ + ": duplicate attribute '" + name + "' in CSV header");
            }
        }
        names_ = std::make_shared<const std::vector<std::string>>(std::move(header));
    }

    std::optional<Record> next() override {
        std::vector<std::string> values;
        if (!read_row(values)) {
            return std::nullopt;
        }
        if (values.size() != names_->size()) {
            throw SourceError(path_ + ": row " + std::to_string(row_number_) + " has " +
                              std::to_string(values.size()) + " fields, header has " +
                              std::to_string(names_->size()));
        }
        return Record(names_, std::move(values), ordinal_++);
    }

    uint64_t peak_record_bytes() const override { return peak_record_bytes_; }

private:
    std::string path_;
    std::ifstream in_;
    std::shared_ptr<const std::vector<std::string>> names_;
    uint64_t ordinal_ = 0;
    uint64_t row_number_ = 0; // 1-based physical row counter (header = 1)
    bool eof_ = false;
    uint64_t peak_record_bytes_ = 0;

    int get() { return in_.rdbuf()->sbumpc(); }

    // Reads one logical CSV row into `out`. Returns false at end of input.
    bool read_row(std::vector<std::string>& out) {
        if (eof_) return false;
        int c = get();
        if (c == EOF) {
            eof_ = true;
            return false;
        }
        ++row_number_;
        out.clear();
        std::string field;
        uint64_t row_bytes = 0;
        bool quoted = false;
        bool quote_closed = false;

        auto end_field = [&] {
            row_bytes += field.size();
            out.push_back(std::move(field));
            field.clear();
            quote_closed = false;
        };

        while (true) {
            if (quoted) {
                if (c == EOF) {
                    throw SourceError(path_ + ": row " + std::to_string(row_number_) +
                                      ": unterminated quoted field");
                }
                if (c == '"') {
                    int n = get();
                    if (n == '"') {
                        field += '"';
                    } else {
                        quoted = false;
                        quote_closed = true;
                        c = n;
                        continue; // reprocess the character after the closing quote
                    }
                } else {
                    field += static_cast<char>(c);
                }
                c = get();
                continue;
            }
            if (c == EOF) {
                eof_ = true;
                end_field();
                break;
            }
            if (c == ',') {
                end_field();
                c = get();
                continue;
            }
            if (c == '\r') {
                int n = get();
                if (n != '\n') {
                    throw SourceError(path_ + ": row " + std::to_string(row_number_) +
                                      ": bare carriage return");
                }
                end_field();
                break;
            }
            if (c == '\n') {
                end_field();
                break;
            }
            if (quote_closed) {
                throw SourceError(path_ + ": row " + std::to_string(row_number_) +
                                  ": data after closing quote");
            }
            if (c == '"') {
                if (!field.empty()) {
                    throw SourceError(path_ + ": row " + std::to_string(row_number_) +
                                      ": quote inside unquoted field");
                }
                quoted = true;
                c = get();
                continue;
            }
            field += static_cast<char>(c);
            c = get();
        }

        if (row_bytes > peak_record_bytes_) peak_record_bytes_ = row_bytes;
        return true;
    }
};

} // namespace

std::unique_ptr<RecordStream> open_csv(const std::filesystem::path& path) {
    return std::make_unique<CsvStream>(path);
}

std::filesystem::path resolve_source_path(const LogicalSource& ls,
                                          const std::filesystem::path& base_dir) {
    std::filesystem::path p(ls.source_path);
    if (p.is_absolute() || base_dir.empty()) return p;
    return base_dir / p;
}

std::unique_ptr<RecordStream> open_source(const LogicalSource& ls,
                                          const std::filesystem::path& base_dir) {
    std::filesystem::path path = resolve_source_path(ls, base_dir);
    if (ls.formulation == ReferenceFormulation::Csv) {
        return open_csv(path);
    }
    return open_json(path, ls.iterator);
}

} // namespace rdfmat
