#pragma once

#include <stdexcept>
#include <string>

namespace hybrid {

/// Base class for all errors caused by bad input data (as opposed to bugs).
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text: bad JSON, non-numeric fields, truncated binary files.
class ParseError : public Error {
  public:
    using Error::Error;
};

/// Well-formed input that violates a domain invariant (duplicate ids,
/// dimension mismatch, unsorted run, invalid parameters).
class ValidationError : public Error {
  public:
    using Error::Error;
};

/// File cannot be opened, read or written.
class IoError : public Error {
  public:
    using Error::Error;
};

}  // namespace hybrid
