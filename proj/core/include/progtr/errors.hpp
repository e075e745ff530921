#pragma once

#include <stdexcept>
#include <string>

namespace progtr {

/// Shape or size disagreement between tensors / operands.
class DimensionError : public std::runtime_error {
public:
    explicit DimensionError(const std::string& what) : std::runtime_error(what) {}
};

/// NaN/Inf encountered in a forward value or a gradient.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// Bad config file, unknown keys, malformed values.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Requested operation does not fit the model/scheme (e.g. BER on a
/// continuous-input model, mixing systems with different T).
class IncompatibilityError : public std::runtime_error {
public:
    explicit IncompatibilityError(const std::string& what) : std::runtime_error(what) {}
};

/// Unreadable, truncated or wrong-version checkpoint.
class CheckpointError : public std::runtime_error {
public:
    explicit CheckpointError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace progtr
