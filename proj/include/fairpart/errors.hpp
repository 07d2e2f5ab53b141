// errors.hpp - exception types shared by the fairpart headers
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fairpart {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input text (edge lists, partition files, configs).
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

// An operation declined to run: a precondition failed or the instance is too
// large for an exhaustive method. Callers are expected to recover.
class Refusal : public Error {
public:
    using Error::Error;
};

// Something that must hold by construction did not. Always a bug or a
// falsified theorem, never bad luck.
class InvariantViolation : public Error {
public:
    using Error::Error;
};

}  // namespace fairpart
