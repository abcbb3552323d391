#pragma once

#include <stdexcept>
#include <string>

namespace openavg {

/// Raised when an adaptive quadrature cannot reach the requested tolerance.
/// Carries the best estimate obtained so far and its error bound.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double achieved_value, double achieved_error)
        : std::runtime_error(what),
          achieved_value_(achieved_value),
          achieved_error_(achieved_error) {}

    double achieved_value() const noexcept { return achieved_value_; }
    double achieved_error() const noexcept { return achieved_error_; }

private:
    double achieved_value_;
    double achieved_error_;
};

/// Raised when the adaptive ODE integrator cannot hold its tolerance
/// (step underflow or step budget exhausted).
class OdeError : public std::runtime_error {
public:
    OdeError(const std::string& what, double achieved_error)
        : std::runtime_error(what), achieved_error_(achieved_error) {}

    double achieved_error() const noexcept { return achieved_error_; }

private:
    double achieved_error_;
};

}  // namespace openavg
