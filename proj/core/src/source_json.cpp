// Streaming JSON record source. Follows a JSONPath child/wildcard iterator
// ("$.a.b[*]") to the target array, then materializes one element object at a
// time: scalar fields become string bindings (numbers keep their source
// lexeme), nested objects flatten to dotted paths, arrays and nulls are not
// bound. Only the bytes of the current record are held in memory.

#include <fstream>

#include "rdfmat/errors.hpp"
#include "rdfmat/source.hpp"

namespace rdfmat {

namespace {

std::vector<std::string> parse_iterator_path(std::string_view it, const std::string& path_name) {
    std::vector<std::string> steps;
    size_t i = 0;
    if (i < it.size() && it[i] == '$') ++i;
    while (i < it.size()) {
        if (it[i] == '.') {
            ++i;
            size_t start = i;
            while (i < it.size() && it[i] != '.' && it[i] != '[') ++i;
            if (i == start) {
                throw SourceError(path_name + ": empty step in iterator '" + std::string(it) + "'");
            }
            steps.emplace_back(it.substr(start, i - start));
        } else if (it.substr(i) == "[*]") {
            i += 3;
            if (i != it.size()) {
                throw SourceError(path_name + ": '[*]' is only supported at the end of the iterator");
            }
        } else {
            throw SourceError(path_name + ": unsupported iterator syntax '" + std::string(it) +
                              "' (child steps and a trailing [*] only)");
        }
    }
    return steps;
}

class JsonStream final : public RecordStream {
public:
    JsonStream(const std::filesystem::path& path, std::string_view iterator)
        : path_(path.string()), in_(path, std::ios::binary) {
        if (!in_) {
            throw SourceError("cannot open JSON source: " + path_);
        }
        navigate(parse_iterator_path(iterator, path_));
    }

    std::optional<Record> next() override {
        if (done_) return std::nullopt;
        skip_ws();
        int c = peek();
        if (c == ']') {
            get();
            done_ = true;
            return std::nullopt;
        }
        if (!first_) {
            if (c != ',') fail("expected ',' or ']' in record array");
            get();
            skip_ws();
        }
        first_ = false;
        skip_ws();
        if (peek() == ']' ) {
            // trailing comma is not JSON
            fail("unexpected ']' after ','");
        }
        if (peek() != '{') fail("array element is not an object");

        auto names = std::make_shared<std::vector<std::string>>();
        std::vector<std::string> values;
        uint64_t bytes = 0;
        parse_object_into("", *names, values, bytes, 0);
        if (bytes > peak_record_bytes_) peak_record_bytes_ = bytes;
        return Record(std::shared_ptr<const std::vector<std::string>>(std::move(names)),
                      std::move(values), ordinal_++);
    }

    uint64_t peak_record_bytes() const override { return peak_record_bytes_; }

private:
    std::string path_;
    std::ifstream in_;
    bool done_ = false;
    bool first_ = true;
    uint64_t ordinal_ = 0;
    uint64_t peak_record_bytes_ = 0;

    static constexpr int kMaxDepth = 256;

    [[noreturn]] void fail(const std::string& message) const {
        throw SourceError(path_ + ": " + message);
    }

    int peek() { return in_.rdbuf()->sgetc(); }
    int get() { return in_.rdbuf()->sbumpc(); }

    void skip_ws() {
        int c = peek();
        while (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            get();
            c = peek();
        }
    }

    void expect(char c) {
        skip_ws();
        if (get() != c) fail(std::string("expected '") + c + "'");
    }

    // Position the stream right after the '[' of the target array.
    void navigate(const std::vector<std::string>& steps) {
        for (const auto& step : steps) {
            skip_ws();
            if (peek() != '{') {
                fail("iterator step '" + step + "' applied to a non-object value");
            }
            get();
            bool found = false;
            while (true) {
                skip_ws();
                int c = peek();
                if (c == '}') fail("iterator step '" + step + "' not found in document");
                std::string key = parse_string();
                expect(':');
                skip_ws();
                if (key == step) {
                    found = true;
                    break;
                }
                skip_value(0);
                skip_ws();
                c = get();
                if (c == '}') fail("iterator step '" + step + "' not found in document");
                if (c != ',') fail("expected ',' or '}' in object");
            }
            if (!found) fail("iterator step '" + step + "' not found");
        }
        skip_ws();
        if (peek() != '[') {
            fail("iterator does not select an array");
        }
        get();
    }

    std::string parse_string() {
        skip_ws();
        if (get() != '"') fail("expected a string");
        std::string out;
        while (true) {
            int c = get();
            if (c == EOF) fail("unterminated string");
            if (c == '"') break;
            if (c != '\\') {
                out += static_cast<char>(c);
                continue;
            }
            int e = get();
            switch (e) {
            case '"': out += '"'; break;
            case '\\': out += '\\'; break;
            case '/': out += '/'; break;
            case 'b': out += '\b'; break;
            case 'f': out += '\f'; break;
            case 'n': out += '\n'; break;
            case 'r': out += '\r'; break;
            case 't': out += '\t'; break;
            case 'u': append_codepoint(out); break;
            default: fail("invalid string escape");
            }
        }
        return out;
    }

    uint32_t parse_hex4() {
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) {
            int c = get();
            v <<= 4;
            if (c >= '0' && c <= '9') v |= static_cast<uint32_t>(c - '0');
            else if (c >= 'a' && c <= 'f') v |= static_cast<uint32_t>(c - 'a' + 10);
            else if (c >= 'A' && c <= 'F') v |= static_cast<uint32_t>(c - 'A' + 10);
            else fail("invalid \\u escape");
        }
        return v;
    }

    void append_codepoint(std::string& out) {
        uint32_t cp = parse_hex4();
        if (cp >= 0xD800 && cp <= 0xDBFF) {
            if (get() != '\\' || get() != 'u') fail("unpaired surrogate in \\u escape");
            uint32_t low = parse_hex4();
            if (low < 0xDC00 || low > 0xDFFF) fail("invalid low surrogate in \\u escape");
            cp = 0x10000 + ((cp - 0xD800) << 10) + (low - 0xDC00);
        } else if (cp >= 0xDC00 && cp <= 0xDFFF) {
            fail("unpaired low surrogate in \\u escape");
        }
        if (cp < 0x80) {
            out += static_cast<char>(cp);
        } else if (cp < 0x800) {
            out += static_cast<char>(0xC0 | (cp >> 6));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        } else if (cp < 0x10000) {
            out += static_cast<char>(0xE0 | (cp >> 12));
            out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        } else {
            out += static_cast<char>(0xF0 | (cp >> 18));
            out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
            out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        }
    }

    std::string parse_number_lexeme() {
        std::string out;
        int c = peek();
        if (c == '-') {
            out += static_cast<char>(get());
            c = peek();
        }
        while ((c >= '0' && c <= '9') || c == '.' || c == 'e' || c == 'E' || c == '+' || c == '-') {
            out += static_cast<char>(get());
            c = peek();
        }
        if (out.empty() || out == "-") fail("invalid number");
        return out;
    }

    void expect_word(const char* word) {
        for (const char* p = word; *p; ++p) {
            if (get() != *p) fail(std::string("invalid literal (expected '") + word + "')");
        }
    }

    // Parse one object into flat bindings; nested objects get dotted names.
    void parse_object_into(const std::string& prefix, std::vector<std::string>& names,
                           std::vector<std::string>& values, uint64_t& bytes, int depth) {
        if (depth > kMaxDepth) fail("object nesting too deep");
        expect('{');
        skip_ws();
        if (peek() == '}') {
            get();
            return;
        }
        while (true) {
            std::string key = parse_string();
            expect(':');
            skip_ws();
            std::string name = prefix.empty() ? key : prefix + "." + key;
            int c = peek();
            if (c == '{') {
                parse_object_into(name, names, values, bytes, depth + 1);
            } else if (c == '[') {
                skip_value(depth + 1); // arrays inside records are not bound
            } else if (c == '"') {
                bind(names, values, bytes, std::move(name), parse_string());
            } else if (c == 't') {
                expect_word("true");
                bind(names, values, bytes, std::move(name), "true");
            } else if (c == 'f') {
                expect_word("false");
                bind(names, values, bytes, std::move(name), "false");
            } else if (c == 'n') {
                expect_word("null"); // null means "absent"
            } else {
                bind(names, values, bytes, std::move(name), parse_number_lexeme());
            }
            skip_ws();
            c = get();
            if (c == '}') break;
            if (c != ',') fail("expected ',' or '}' in object");
            skip_ws();
        }
    }

    void bind(std::vector<std::string>& names, std::vector<std::string>& values, uint64_t& bytes,
              std::string name, std::string value) {
        for (const auto& existing : names) {
            if (existing == name) {
                fail("duplicate attribute '" + name + "' in record");
            }
        }
        bytes += name.size() + value.size();
        names.push_back(std::move(name));
        values.push_back(std::move(value));
    }

    void skip_value(int depth) {
        if (depth > kMaxDepth) fail("value nesting too deep");
        skip_ws();
        int c = peek();
        if (c == '"') {
            parse_string();
        } else if (c == '{') {
            get();
            skip_ws();
            if (peek() == '}') {
                get();
                return;
            }
            while (true) {
                parse_string();
                expect(':');
                skip_value(depth + 1);
                skip_ws();
                c = get();
                if (c == '}') break;
                if (c != ',') fail("expected ',' or '}' in object");
            }
        } else if (c == '[') {
            get();
            skip_ws();
            if (peek() == ']') {
                get();
                return;
            }
            while (true) {
                skip_value(depth + 1);
                skip_ws();
                c = get();
                if (c == ']') break;
                if (c != ',') fail("expected ',' or ']' in array");
            }
        } else if (c == 't') {
            expect_word("true");
        } else if (c == 'f') {
            expect_word("false");
        } else if (c == 'n') {
            expect_word("null");
        } else {
            parse_number_lexeme();
        }
    }
};

} // namespace

std::unique_ptr<RecordStream> open_json(const std::filesystem::path& path,
                                        std::string_view iterator) {
    return std::make_unique<JsonStream>(path, iterator);
}

} // namespace rdfmat
