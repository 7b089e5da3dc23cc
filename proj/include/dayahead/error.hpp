#pragma once

#include <stdexcept>
#include <string>

namespace dayahead {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameter or mismatched configuration (dimension counts, k, fractions).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A day or series whose geometry (h, p) does not match what the model expects.
class GeometryError : public Error {
public:
    using Error::Error;
};

/// Not enough data to perform the requested step.
class InsufficientDataError : public Error {
public:
    using Error::Error;
};

/// Malformed input data (CSV parsing, missing cells, irregular timestamps).
class DataError : public Error {
public:
    using Error::Error;
};

} // namespace dayahead
