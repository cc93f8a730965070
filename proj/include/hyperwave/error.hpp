#pragma once

#include <stdexcept>
#include <string>

namespace hyperwave {

/// Invalid input: violated precondition, bad parameter range, malformed config.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical procedure did not reach its tolerance, or an integral diverges.
/// `estimate` carries the offending quantity (achieved error, tail estimate, ...).
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, double estimate)
        : std::runtime_error(what), estimate_(estimate) {}

    double estimate() const noexcept { return estimate_; }

private:
    double estimate_;
};

/// Requested kernel point lies inside the light-cone exclusion band.
class LightConeError : public DomainError {
public:
    using DomainError::DomainError;
};

}  // namespace hyperwave
