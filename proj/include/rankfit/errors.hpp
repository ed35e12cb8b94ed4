#pragma once

#include <stdexcept>
#include <string>

namespace rankfit {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid inputs: dimension mismatches, bad permutations, malformed files.
/// Maps to CLI exit code 2.
class ValidationError : public Error {
public:
    using Error::Error;
};

class DimensionError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class EmptyInputError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// A request exceeded a hard capacity limit (e.g. exact search too large).
class CapacityError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Data admits no finite maximum-likelihood estimate. Carries the index of
/// an alternative witnessing the degeneracy.
class DegenerateDataError : public ValidationError {
public:
    DegenerateDataError(const std::string& msg, int alternative)
        : ValidationError(msg), alternative_(alternative) {}
    int alternative() const { return alternative_; }

private:
    int alternative_;
};

/// Malformed input file; line() is 1-based, 0 when no line applies.
class ParseError : public ValidationError {
public:
    explicit ParseError(const std::string& msg, int line = 0)
        : ValidationError(
              line > 0 ? msg + " (line " + std::to_string(line) + ")" : msg),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

class IntervalError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Numerical breakdown (non-finite intermediate, failed convergence).
/// Maps to CLI exit code 3.
class NumericalError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace rankfit
