#ifndef DHOA_CORE_ERRORS_HPP
#define DHOA_CORE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dhoa {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad construction parameters (nonpositive weights, inverted intervals, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// Evaluation requested outside the admissible set (x outside the interval,
// rho below the convergence abscissa and past the edge, z outside the
// coherent-state ring, integer index outside the spectrum).
class DomainError : public Error {
public:
    using Error::Error;
};

// The improper integral does not converge at the requested point. This is an
// expected outcome for rho at or below the abscissa; callers that probe the
// convergence boundary catch it.
class DivergentIntegral : public Error {
public:
    using Error::Error;
};

// An adaptive scheme ran out of budget or an extrapolation misbehaved. Carries
// the best estimate reached and a bound on its error so callers can decide
// whether the partial answer is still usable.
class NumericalFailure : public Error {
public:
    NumericalFailure(const std::string& what, double best_estimate, double error_bound)
        : Error(what), best_estimate_(best_estimate), error_bound_(error_bound) {}

    double best_estimate() const { return best_estimate_; }
    double error_bound() const { return error_bound_; }

private:
    double best_estimate_;
    double error_bound_;
};

// Malformed run configuration (JSON or flag values).
class ParseError : public Error {
public:
    using Error::Error;
};

} // namespace dhoa

#endif
