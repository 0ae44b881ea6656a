#pragma once

#include <stdexcept>
#include <string>

namespace filtercast {

/// Base class for all filtercast errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A scheme or operation parameter is outside its admissible range.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// A record falls outside the requested day range (and clipping was not requested).
class RangeError : public Error {
public:
    using Error::Error;
};

/// A value violates a domain invariant (score bounds, negative counts, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Malformed input file. Carries the 1-based line number of the offending row.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t line)
        : Error(message + " (line " + std::to_string(line) + ")"), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// The series is constant (zero variance) or otherwise statistically trivial.
class DegenerateSeriesError : public Error {
public:
    using Error::Error;
};

/// The series is too short for the requested operation.
class LengthError : public Error {
public:
    using Error::Error;
};

/// Two series that must share length/origin do not.
class AlignmentError : public Error {
public:
    using Error::Error;
};

/// A tensor does not have the shape the model expects.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Training produced a non-finite loss.
class DivergenceError : public Error {
public:
    using Error::Error;
};

/// A forecast consulted a value beyond the allowed history horizon.
class LookAheadError : public Error {
public:
    using Error::Error;
};

}  // namespace filtercast
