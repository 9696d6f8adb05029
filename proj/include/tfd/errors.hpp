#pragma once

#include <stdexcept>
#include <string>

namespace tfd {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (pole, d < beta, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// An iterative or adaptive route failed to reach its target within budget.
class NumericError : public Error {
public:
    NumericError(const std::string& what, double achieved_error)
        : Error(what), achieved_error_(achieved_error) {}
    double achieved_error() const noexcept { return achieved_error_; }

private:
    double achieved_error_;
};

/// Grid too coarse for the requested configuration.
class ResolutionError : public Error {
public:
    using Error::Error;
};

/// Mellin-Barnes contour does not separate the pole families.
class ContourError : public Error {
public:
    using Error::Error;
};

/// Contour integrand has not decayed at the truncation height.
class TruncationError : public Error {
public:
    TruncationError(const std::string& what, double tail_estimate)
        : Error(what), tail_estimate_(tail_estimate) {}
    double tail_estimate() const noexcept { return tail_estimate_; }

private:
    double tail_estimate_;
};

/// Solver output undershoots below the ringing floor.
class AliasingError : public Error {
public:
    using Error::Error;
};

/// Harnack potential ratio with a vanishing denominator.
class DegenerateDataError : public Error {
public:
    using Error::Error;
};

/// Harnack tuple outside the admissible time window.
class AdmissibilityError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace tfd
