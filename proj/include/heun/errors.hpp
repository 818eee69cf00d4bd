#ifndef HEUN_ERRORS_HPP
#define HEUN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace heun {

// Base of everything this library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad inputs: parameters or evaluation points that violate a documented
// precondition. The CLI maps these to exit code 2.
class ValidationError : public Error {
public:
    using Error::Error;
};

// The computation itself gave up: a series or integrator hit its cap
// before reaching the requested accuracy. CLI exit code 3.
class NumericalError : public Error {
public:
    using Error::Error;
};

class FuchsianViolation : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class SingularityCollision : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class PoleEvaluation : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class DegenerateExponents : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class InvalidTermCount : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class InvalidParameters : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class OutsideConvergenceDomain : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class CaseConditionViolation : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class NotAdmissible : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class NonintegrableEndpoint : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class NonconvergentSeries : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class PathThroughSingularity : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ToleranceNotMet : public NumericalError {
public:
    using NumericalError::NumericalError;
};

} // namespace heun

#endif
