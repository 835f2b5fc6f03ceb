#pragma once

#include <stdexcept>
#include <string>

namespace haarfht {

/// Malformed input text (edge lists, CSV, JSON documents).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Well-formed input that violates a precondition or invariant.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A fast path disagreed with its reference beyond tolerance.
class NumericalCheckError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace haarfht
