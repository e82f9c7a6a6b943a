#pragma once

#include <stdexcept>
#include <string>

namespace laxhvac {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A documented precondition of an operation was violated by the caller.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// The time-to-target operator has no real solution: the HVAC unit cannot
/// drive the zone to the requested temperature at this outdoor temperature.
class ZetaDomainError : public Error {
public:
    ZetaDomainError(const std::string& what, double from, double to, double power, double x_out)
        : Error(what), from_(from), to_(to), power_(power), x_out_(x_out) {}

    double from() const noexcept { return from_; }
    double to() const noexcept { return to_; }
    double power() const noexcept { return power_; }
    double x_out() const noexcept { return x_out_; }

private:
    double from_;
    double to_;
    double power_;
    double x_out_;
};

/// Malformed or inconsistent configuration. The message names the field path.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Exogenous data that failed to parse or validate. The message names the row.
class DataError : public Error {
public:
    using Error::Error;
};

/// A simulation reached a state the model cannot handle (for example a unit
/// that cannot reach its target at full power). Names the unit and step.
class ScenarioError : public Error {
public:
    ScenarioError(const std::string& what, int unit, int step)
        : Error(what), unit_(unit), step_(step) {}

    int unit() const noexcept { return unit_; }
    int step() const noexcept { return step_; }

private:
    int unit_;
    int step_;
};

}  // namespace laxhvac
