#pragma once

#include <stdexcept>
#include <string>

namespace hullgsa {

// Error categories double as CLI exit codes.
enum class ErrorCategory : int {
    Config = 2,
    Numeric = 3,
    Io = 4,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

/// Input outside an operation's mathematical domain (bad parameter, xi > 1, ...).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(ErrorCategory::Config, what) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(ErrorCategory::Config, what) {}
};

class NumericError : public Error {
public:
    explicit NumericError(const std::string& what) : Error(ErrorCategory::Numeric, what) {}
};

/// A sensitivity index or correlation measure whose denominator vanishes.
class UndefinedMeasureError : public NumericError {
public:
    explicit UndefinedMeasureError(const std::string& what) : NumericError(what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(ErrorCategory::Io, what) {}
};

} // namespace hullgsa
