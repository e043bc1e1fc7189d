#pragma once

#include <stdexcept>
#include <string>

namespace vtcp {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operand orders or dimensions do not fit together.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A value lies outside the real domain of an operation (e.g. an even root
/// of a negative number).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A documented precondition of an algorithm does not hold.
class PreconditionFailed : public Error {
public:
    using Error::Error;
};

/// Brute-force routines refuse problems above their cost guard.
class DimensionTooLarge : public Error {
public:
    using Error::Error;
};

/// An argument is malformed: unknown class names, registry ids, generator
/// kinds, negative diagonal weights and the like.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Instance or report file problems. `field()` names the offending JSON field
/// (empty for syntax errors), `line()` is 1-based (0 when unknown).
class FormatError : public Error {
public:
    FormatError(std::string message, std::string field = {}, std::size_t line = 0)
        : Error(std::move(message)), field_(std::move(field)), line_(line) {}

    [[nodiscard]] const std::string& field() const noexcept { return field_; }
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::string field_;
    std::size_t line_;
};

} // namespace vtcp
