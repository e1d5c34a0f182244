#pragma once

#include <stdexcept>
#include <string>

namespace ulab {

// Error taxonomy. Configuration errors are caller-fixable (grid shapes,
// bands, unsupported parameter combinations); data errors mean bad samples
// (NaN/Inf); precondition errors are contract violations by the caller;
// precision errors carry the partial result that could not be certified.

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class PreconditionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnsupportedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Theoretically impossible states (e.g. a negative determinant where a
// square is expected). Hitting one means a bug, not a bad input.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class PrecisionError : public std::runtime_error {
public:
    PrecisionError(const std::string& msg, double partial, double err)
        : std::runtime_error(msg), partial_value(partial), error_estimate(err) {}

    double partial_value;
    double error_estimate;
};

} // namespace ulab
