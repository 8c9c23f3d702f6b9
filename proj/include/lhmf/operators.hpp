#pragma once

// Raising, Bol, shadow, Laplacian and flipping operators acting on jets, plus
// slash actions for jet-valued functions.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

#include "lhmf/errors.hpp"
#include "lhmf/jet.hpp"
#include "lhmf/specfun.hpp"

namespace lhmf {

namespace detail {

template <class Real>
void require_order(const basic_jet<Real> &f, int n, const char *what)
{
    if (f.order() < n)
        throw config_error(std::string(what) + ": jet order " + std::to_string(f.order()) + " < required " + std::to_string(n));
}

template <class Real>
basic_jet<Real> inv_v(Point base, int order)
{
    return basic_jet<Real>::imag_part(base, order).recip();
}

}  // namespace detail

/// R_w f = 2i df/dtau + (w/v) f; lowers the order by one.
template <class Real>
basic_jet<Real> raise(const basic_jet<Real> &f, int w)
{
    using C = std::complex<Real>;
    detail::require_order(f, 1, "raise");
    const int N = f.order() - 1;
    basic_jet<Real> out = f.d_tau() * C(0, 2);
    if (w != 0) out += detail::inv_v<Real>(f.base(), N) * f.truncate(N) * C(Real(w));
    return out;
}

/// R_w^n = R_{w+2(n-1)} o ... o R_w.
template <class Real>
basic_jet<Real> iterate_raise(const basic_jet<Real> &f, int w, int n)
{
    if (n < 0) throw config_error("iterate_raise: n must be >= 0");
    detail::require_order(f, n, "iterate_raise");
    basic_jet<Real> g = f;
    for (int s = 0; s < n; ++s) g = raise(g, w + 2 * s);
    return g;
}

/// D^n f = (2 pi i)^{-n} d^n f / dtau^n at the base point.
template <class Real>
std::complex<Real> bol(const basic_jet<Real> &f, int n)
{
    detail::require_order(f, n, "bol");
    const std::complex<Real> two_pi_i(0, 2 * std::numbers::pi_v<Real>);
    return f(n, 0) * Real(factorial(n)) / std::pow(two_pi_i, n);
}

/// xi_w f = 2i v^w conj(df/dtaubar) at the base point.
template <class Real>
std::complex<Real> xi(const basic_jet<Real> &f, int w)
{
    detail::require_order(f, 1, "xi");
    return std::complex<Real>(0, 2) * std::pow(Real(f.base().v), w) * std::conj(f(0, 1));
}

/// Delta_w = -4 v^2 d_tau d_taubar + 2 i w v d_taubar.
template <class Real>
std::complex<Real> laplacian(const basic_jet<Real> &f, int w)
{
    detail::require_order(f, 2, "laplacian");
    const Real v = f.base().v;
    return Real(-4) * v * v * f(1, 1) + std::complex<Real>(0, 2 * w * v) * f(0, 1);
}

/// F_w f = -(v^n / n!) conj(R_w^n f) with n = -w (w <= 0 even); lowers the order by n.
template <class Real>
basic_jet<Real> flip(const basic_jet<Real> &f, int w)
{
    if (w > 0 || w % 2 != 0) throw config_error("flip: weight must be even and <= 0");
    const int n = -w;
    detail::require_order(f, n, "flip");
    const basic_jet<Real> r = iterate_raise(f, w, n).conj();
    return basic_jet<Real>::imag_part(f.base(), r.order()).pow(n) * r * std::complex<Real>(Real(-1) / Real(factorial(n)));
}

/// sum_r (-1)^r C(n,r) (w+r)_{n-r} v^{r-n} (4 pi)^r D^r f: the closed form of R_w^n f.
template <class Real>
std::complex<Real> rd_closed_form(const basic_jet<Real> &f, int w, int n)
{
    detail::require_order(f, n, "rd_closed_form");
    const Real v = f.base().v;
    std::complex<Real> s{};
    for (int r = 0; r <= n; ++r) {
        const Real c = (r % 2 ? -1 : 1) * Real(binomial(n, r)) * Real(rising_factorial(w + r, n - r)) * std::pow(v, r - n) *
                       std::pow(4 * std::numbers::pi_v<Real>, r);
        s += c * bol(f, r);
    }
    return s;
}

/// A jet-evaluable function: base point and order to jet.
using JetFunction = std::function<Jet(Point, int)>;

/// (f|_w g)(tau) = (c tau + d)^{-w} f(g tau), as a jet-evaluable function.
inline JetFunction slash(JetFunction f, Mat2 g, int w)
{
    if (std::abs(g.det() - 1.0) > 1e-12) throw config_error("slash: matrix must have determinant 1");
    return [f = std::move(f), g, w](Point base, int order) {
        const Jet t = Jet::tau(base, order);
        const Jet denom = t * std::complex<double>(g.c) + std::complex<double>(g.d);
        const Jet image = (t * std::complex<double>(g.a) + std::complex<double>(g.b)) * denom.recip();
        const Point image_base(image.value());
        Jet h = image;
        h(0, 0) = 0;
        Jet composed = f(image_base, order).substitute(h);
        if (w != 0) composed = composed * denom.pow(-w);
        return composed;
    };
}

}  // namespace lhmf
