#pragma once

#include <stdexcept>
#include <string>

namespace pir {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two objects with incompatible widths/sizes were combined.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A part, column, or cell index was outside its valid range.
class IndexError : public Error {
public:
    using Error::Error;
};

/// An input document (JSON, rational literal, CSV) was malformed.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Parameters outside the domain a routine supports (e.g. a Steiner
/// system order with no known construction).
class UnsupportedParameters : public Error {
public:
    using Error::Error;
};

/// An internal invariant failed.  Seeing this means a bug: for example a
/// recovery graph that should be regular by construction fails Hall's
/// condition.
class InternalCheckError : public Error {
public:
    using Error::Error;
};

} // namespace pir
