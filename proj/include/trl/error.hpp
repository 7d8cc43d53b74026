#pragma once

#include <stdexcept>
#include <string>

namespace trl {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed text input (CSV cells, couples strings, config lines).
class ParseError : public Error {
public:
    using Error::Error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Lookup of an item or dataset that does not exist.
class NotFoundError : public Error {
public:
    using Error::Error;
};

/// A rank fell beyond the last boundary of a binning scheme.
class SchemeCoverageError : public Error {
public:
    using Error::Error;
};

} // namespace trl
