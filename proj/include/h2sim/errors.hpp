#pragma once

#include <stdexcept>
#include <string>

namespace h2sim {

/// Base for numerical failures raised by the models and the engine.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// No single-diode parameter set reproduces the requested anchors.
/// `anchor()` names the anchor that could not be met.
class CalibrationError : public NumericalError {
public:
    CalibrationError(std::string anchor, const std::string& what)
        : NumericalError(what), anchor_(std::move(anchor)) {}

    [[nodiscard]] const std::string& anchor() const noexcept { return anchor_; }

private:
    std::string anchor_;
};

/// Explicit Euler step exceeds the cell stability limit (dt > tau/10).
class StepSizeError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// A metric was requested where it is undefined (e.g. zero elapsed time).
class MetricError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Invalid configuration. `key()` is the dotted path of the offending entry.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& what)
        : std::runtime_error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}

    [[nodiscard]] const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

}  // namespace h2sim
