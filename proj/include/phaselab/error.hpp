#pragma once

#include <stdexcept>
#include <string>

namespace phaselab {

/// Bad input: malformed grid, potential, config or data file. Maps to CLI exit code 2.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A solver refused or failed to advance. Maps to CLI exit code 3.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Step rejected by a stability guard; carries a time step that would pass.
class StepRejected : public SolverError {
public:
    StepRejected(const std::string& what, double suggested_dt)
        : SolverError(what), suggested_dt_(suggested_dt) {}
    double suggested_dt() const noexcept { return suggested_dt_; }

private:
    double suggested_dt_;
};

/// Hamilton-Jacobi evolution reached a focal point where S becomes multi-valued.
class CausticError : public SolverError {
public:
    CausticError(const std::string& what, double breakdown_time)
        : SolverError(what), breakdown_time_(breakdown_time) {}
    double breakdown_time() const noexcept { return breakdown_time_; }

private:
    double breakdown_time_;
};

}  // namespace phaselab
