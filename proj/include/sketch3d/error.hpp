#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sketch3d {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text. `line()` is 1-based, 0 when not line-oriented.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Input violates a precondition (empty cloud, zero-area mesh, size mismatch...).
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// A bounded sampling loop ran out of retries.
class SamplingError : public Error {
public:
    using Error::Error;
};

}  // namespace sketch3d
