#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cdq {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed circuit text. `line()` is 1-based.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// A phase table that no CNOT-dihedral circuit realizes.
class NotDihedral : public Error {
public:
    using Error::Error;
};

class CapExceeded : public Error {
public:
    using Error::Error;
};

class StaleMatch : public Error {
public:
    using Error::Error;
};

} // namespace cdq
