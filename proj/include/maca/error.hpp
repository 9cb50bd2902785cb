#pragma once

#include <stdexcept>
#include <string>

namespace maca {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad parameters, missing files, inconsistent options. CLI exit code 2.
struct ConfigError : Error {
    using Error::Error;
};

/// Malformed or inconsistent input data. CLI exit code 3.
struct DataError : Error {
    using Error::Error;
};

/// Non-finite values, zero norms, numeric breakdown. CLI exit code 4.
struct NumericError : Error {
    using Error::Error;
};

} // namespace maca
