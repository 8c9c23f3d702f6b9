#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "lhmf/errors.hpp"

namespace lhmf {

/// A point u + iv of the upper half-plane.
struct Point {
    double u = 0.0;
    double v = 1.0;

    Point() = default;
    Point(double u_, double v_) : u(u_), v(v_)
    {
        if (!(v_ > 0.0) || !std::isfinite(u_) || !std::isfinite(v_))
            throw config_error("Point: need finite u and v > 0, got v = " + std::to_string(v_));
    }
    explicit Point(std::complex<double> tau) : Point(tau.real(), tau.imag()) {}

    std::complex<double> tau() const { return {u, v}; }

    /// q = e^{2 pi i tau}
    std::complex<double> q() const
    {
        return std::polar(std::exp(-2.0 * std::numbers::pi * v), 2.0 * std::numbers::pi * u);
    }

    friend bool operator==(const Point &, const Point &) = default;
};

/// 2x2 real matrix acting by Moebius transformations.
struct Mat2 {
    double a = 1, b = 0, c = 0, d = 1;

    double det() const { return a * d - b * c; }
    std::complex<double> act(std::complex<double> z) const { return (a * z + b) / (c * z + d); }
};

}  // namespace lhmf
