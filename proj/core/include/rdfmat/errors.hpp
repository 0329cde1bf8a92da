#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rdfmat {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Mapping-document syntax or vocabulary error, carries file/line/column.
class MappingParseError : public Error {
public:
    MappingParseError(std::string file, uint32_t line, uint32_t column, const std::string& message)
        : Error(file + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          file_(std::move(file)), line_(line), column_(column), message_(message) {}

    const std::string& file() const { return file_; }
    uint32_t line() const { return line_; }
    uint32_t column() const { return column_; }
    const std::string& message() const { return message_; }

private:
    std::string file_;
    uint32_t line_;
    uint32_t column_;
    std::string message_;
};

/// Operator classification failure (e.g. reference object across different sources).
class ClassifyError : public Error {
public:
    using Error::Error;
};

/// Data-source problem: missing file, malformed row, bad iterator.
class SourceError : public Error {
public:
    using Error::Error;
};

/// Term cannot be serialized even after escaping.
class SerializeError : public Error {
public:
    using Error::Error;
};

/// Output I/O failure.
class IoError : public Error {
public:
    using Error::Error;
};

/// Memory/materialization limits exceeded (naive mode).
class ResourceError : public Error {
public:
    using Error::Error;
};

/// Deadline exceeded during an engine run.
class TimeoutError : public Error {
public:
    using Error::Error;
};

} // namespace rdfmat
