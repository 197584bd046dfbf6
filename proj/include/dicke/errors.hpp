// errors.hpp — exception types shared across the library
//
// Validation failures (bad parameters, out-of-range indices) use plain
// std::invalid_argument. The types below carry domain- or solver-specific
// context that callers (notably the CLI) translate into exit codes.

#pragma once

#include <stdexcept>
#include <string>

namespace dicke {

// An iterative procedure ran out of budget. `achieved` holds the best
// residual / delta reached so the failure is diagnosable.
struct ConvergenceError : std::runtime_error {
    double achieved;
    explicit ConvergenceError(const std::string& what, double achieved_ = 0.0)
        : std::runtime_error(what), achieved(achieved_) {}
};

// Requested a Husimi-zero quantity in the normal phase, where the
// distribution has no zeros.
struct NoZerosError : std::domain_error {
    explicit NoZerosError(const std::string& what) : std::domain_error(what) {}
};

// Input sits on (or numerically at) a singular point, e.g. a log branch
// point of the zero-surface map.
struct SingularInputError : std::domain_error {
    explicit SingularInputError(const std::string& what) : std::domain_error(what) {}
};

// A state that exists only formally, e.g. the odd cat at the origin whose
// normalization vanishes.
struct DegenerateStateError : std::domain_error {
    explicit DegenerateStateError(const std::string& what) : std::domain_error(what) {}
};

} // namespace dicke
