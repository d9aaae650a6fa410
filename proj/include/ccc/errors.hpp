#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ccc {

// Base for every error raised by the library. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

// Unknown ACT / ACTIVITY token or out-of-vocabulary label.
class VocabularyError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class ConsistencyError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class SimulationError : public Error {
public:
    using Error::Error;
};

class NotFoundError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

// Malformed linear frame text. `offset` is a byte offset into the input.
class ParseError : public Error {
public:
    ParseError(std::size_t offset, std::string expected)
        : Error("parse error at byte " + std::to_string(offset) + ": expected " + expected),
          offset_(offset),
          expected_(std::move(expected)) {}

    std::size_t offset() const { return offset_; }
    const std::string& expected() const { return expected_; }

private:
    std::size_t offset_;
    std::string expected_;
};

// Unreadable annotation document; line and column are 1-based.
class IngestionError : public Error {
public:
    IngestionError(std::size_t line, std::size_t column, const std::string& what)
        : Error("ingestion error at line " + std::to_string(line) + ", column " +
                std::to_string(column) + ": " + what),
          line_(line),
          column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

}  // namespace ccc
