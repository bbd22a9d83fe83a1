#ifndef DRIFTCAL_ERRORS_HPP
#define DRIFTCAL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace driftcal {

/// Bad argument values or malformed inputs, detected before any computation.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Fewer samples than the operation needs (e.g. OLS with < 3 points).
class InsufficientDataError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Regression design matrix has no spread in the regressor.
class SingularDesignError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// A calibration window does not contain enough usable samples; the caller
/// may defer to a later cycle.
class CalibrationUnavailableError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Linear algebra failed beyond recovery (Cholesky after full jitter
/// escalation). The message carries a condition-number estimate.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File parsing failure; message includes the offending line number.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace driftcal

#endif  // DRIFTCAL_ERRORS_HPP
