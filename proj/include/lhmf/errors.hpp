#pragma once

#include <stdexcept>
#include <string>

namespace lhmf {

/// Invalid parameters (bad discriminant, k < 2, v <= 0, ...).
class config_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The evaluation point is on or too close to the exceptional set E_D.
class near_singular_error : public std::domain_error {
public:
    near_singular_error(const std::string &what, double proximity)
        : std::domain_error(what), proximity_(proximity)
    {
    }

    double proximity() const noexcept { return proximity_; }

private:
    double proximity_;
};

/// A truncated series or quadrature failed to stagnate before its budget ran out.
class convergence_error : public std::runtime_error {
public:
    convergence_error(const std::string &what, long long bound, double tail)
        : std::runtime_error(what), bound_(bound), tail_(tail)
    {
    }

    long long bound() const noexcept { return bound_; }
    double tail() const noexcept { return tail_; }

private:
    long long bound_;
    double tail_;
};

}  // namespace lhmf
