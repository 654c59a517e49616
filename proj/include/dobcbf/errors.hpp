#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dobcbf {

/// Invalid parameter or precondition violation in a library call.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Controller cannot be evaluated (L_g h = 0 or a required bound is unset).
class ControllerError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed timeseries or config input. `line` is 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Scenario config failed validation; `field` names the offending key path.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& what)
        : std::runtime_error(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Integration produced a non-finite state.
class SimulationAbort : public std::runtime_error {
public:
    SimulationAbort(double t, const std::string& what)
        : std::runtime_error("t=" + std::to_string(t) + ": " + what), time_(t) {}

    double time() const noexcept { return time_; }

private:
    double time_;
};

}  // namespace dobcbf
