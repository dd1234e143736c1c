#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sandlab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class OverflowError : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

/// An enumeration or table would exceed its configured budget.
class BudgetError : public Error {
public:
    using Error::Error;
};

/// A range was requested for a pile holding +inf or -inf.
class CenterInfiniteError : public Error {
public:
    using Error::Error;
};

/// A binary column or pattern contains a 0 directly below a 1.
class ForbiddenPatternError : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Syntax or semantic error in a text format, with a 1-based position.
class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& message)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          line_(line),
          column_(column),
          message_(message) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    const std::string& message() const noexcept { return message_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::string message_;
};

}  // namespace sandlab
