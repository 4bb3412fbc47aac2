#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace rfmseg {

/// Invalid configuration or parameters rejected before any work runs.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Input data could not be read or interpreted.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A malformed CSV row. Line numbers are 1-based and count the header.
class ParseError : public DataError {
public:
    ParseError(std::size_t line, std::string column, const std::string& what)
        : DataError("line " + std::to_string(line) + ", column " + column + ": " + what),
          line_(line),
          column_(std::move(column)) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::string column_;
};

/// A numerical procedure failed (non-convergence, covariance collapse, ...).
class AlgorithmError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace rfmseg
