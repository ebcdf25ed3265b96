#pragma once

#include <stdexcept>
#include <string>

namespace fgl {

enum class ErrorKind {
    invalid_argument,   // precondition on user-supplied parameters
    corrupt_state,      // NaN / Inf in a field
    blowup_exceeded,    // closed form evaluated at or past its blow-up time
    singular_substep,   // nonlinear flow has a pole inside the step
    step_underflow,     // ODE integrator could not reach t_end
    non_convergence,    // iterative eigen/singular value estimate
    capacity,           // problem too large for a dense routine
    refused,            // inputs outside the regime where a prediction exists
    unstable,           // grid-stability budget exceeded
};

const char* to_string(ErrorKind kind) noexcept;

/// Base exception for every failure raised by the library.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

    /// True for failures of the numerics rather than of the inputs.
    bool numerical() const noexcept {
        switch (kind_) {
        case ErrorKind::corrupt_state:
        case ErrorKind::step_underflow:
        case ErrorKind::non_convergence:
        case ErrorKind::unstable:
            return true;
        default:
            return false;
        }
    }

private:
    ErrorKind kind_;
};

/// Thrown by the nonlinear sub-flow when (p-1) dt sup|w|^(p-1) >= 1.
class SingularSubstep : public Error {
public:
    SingularSubstep(double max_admissible_dt, const std::string& what)
        : Error(ErrorKind::singular_substep, what), max_dt_(max_admissible_dt) {}

    /// Largest step for which the pointwise flow stays finite.
    double max_admissible_dt() const noexcept { return max_dt_; }

private:
    double max_dt_;
};

}  // namespace fgl
