#pragma once

// Truncated bivariate Taylor expansions in the Wirtinger variables (tau, tau-bar).
//
// c(i, j) = d_tau^i d_taubar^j f(base) / (i! j!), for i + j <= order. Storage is
// triangular by total degree, so multiplication is a plain truncated Cauchy product.

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lhmf/errors.hpp"
#include "lhmf/point.hpp"
#include "lhmf/specfun.hpp"

namespace lhmf {

template <class Real = double>
class basic_jet {
public:
    using real_type = Real;
    using complex_type = std::complex<Real>;

    basic_jet() = default;
    basic_jet(Point base, int order) : base_(base), order_(order), c_(size_for(order))
    {
        if (order < 0) throw config_error("jet: order must be >= 0");
    }

    static basic_jet constant(Point base, int order, complex_type value)
    {
        basic_jet j(base, order);
        j.c_[0] = value;
        return j;
    }
    static basic_jet tau(Point base, int order)
    {
        basic_jet j = constant(base, order, complex_type(base.u, base.v));
        if (order >= 1) j(1, 0) = 1;
        return j;
    }
    static basic_jet tau_bar(Point base, int order) { return tau(base, order).conj(); }
    /// v = (tau - tau_bar) / (2i)
    static basic_jet imag_part(Point base, int order)
    {
        basic_jet j = constant(base, order, complex_type(base.v));
        if (order >= 1) {
            j(1, 0) = complex_type(0, -0.5);
            j(0, 1) = complex_type(0, 0.5);
        }
        return j;
    }
    static basic_jet real_part(Point base, int order)
    {
        basic_jet j = constant(base, order, complex_type(base.u));
        if (order >= 1) j(1, 0) = j(0, 1) = complex_type(0.5);
        return j;
    }

    Point base() const { return base_; }
    int order() const { return order_; }
    complex_type value() const { return c_[0]; }

    complex_type &operator()(int i, int j) { return c_[index(i, j)]; }
    const complex_type &operator()(int i, int j) const { return c_[index(i, j)]; }

    /// Coefficient or zero when (i, j) lies beyond the stored order.
    complex_type coeff(int i, int j) const { return i + j <= order_ ? c_[index(i, j)] : complex_type{}; }

    std::span<const complex_type> raw() const { return c_; }

    /// Same jet with coefficients rounded to another precision.
    template <class Other>
    basic_jet<Other> cast() const
    {
        basic_jet<Other> out(base_, order_);
        for (int d = 0; d <= order_; ++d)
            for (int j = 0; j <= d; ++j) out(d - j, j) = std::complex<Other>((*this)(d - j, j));
        return out;
    }

    /// Jet of conj(f): c'(i, j) = conj(c(j, i)).
    basic_jet conj() const
    {
        basic_jet out(base_, order_);
        for (int d = 0; d <= order_; ++d)
            for (int j = 0; j <= d; ++j) out(d - j, j) = std::conj((*this)(j, d - j));
        return out;
    }

    basic_jet truncate(int order) const
    {
        if (order > order_) throw config_error("jet: cannot truncate to a higher order");
        basic_jet out(base_, order);
        for (std::size_t i = 0; i < out.c_.size(); ++i) out.c_[i] = c_[i];
        return out;
    }

    /// d/dtau, one order lower.
    basic_jet d_tau() const
    {
        require_order(1, "d_tau");
        basic_jet out(base_, order_ - 1);
        for (int d = 0; d < order_; ++d)
            for (int j = 0; j <= d; ++j) out(d - j, j) = Real(d - j + 1) * (*this)(d - j + 1, j);
        return out;
    }

    /// d/dtau-bar, one order lower.
    basic_jet d_tau_bar() const
    {
        require_order(1, "d_tau_bar");
        basic_jet out(base_, order_ - 1);
        for (int d = 0; d < order_; ++d)
            for (int j = 0; j <= d; ++j) out(d - j, j) = Real(j + 1) * (*this)(d - j, j + 1);
        return out;
    }

    basic_jet &operator+=(const basic_jet &o)
    {
        check_compatible(o);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
        return *this;
    }
    basic_jet &operator-=(const basic_jet &o)
    {
        check_compatible(o);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
        return *this;
    }
    basic_jet &operator*=(complex_type s)
    {
        for (auto &x : c_) x *= s;
        return *this;
    }
    basic_jet &operator+=(complex_type s)
    {
        c_[0] += s;
        return *this;
    }

    friend basic_jet operator+(basic_jet a, const basic_jet &b) { return a += b; }
    friend basic_jet operator-(basic_jet a, const basic_jet &b) { return a -= b; }
    friend basic_jet operator-(basic_jet a)
    {
        for (auto &x : a.c_) x = -x;
        return a;
    }
    friend basic_jet operator*(basic_jet a, complex_type s) { return a *= s; }
    friend basic_jet operator*(complex_type s, basic_jet a) { return a *= s; }
    friend basic_jet operator+(basic_jet a, complex_type s) { return a += s; }

    friend basic_jet operator*(const basic_jet &a, const basic_jet &b)
    {
        a.check_compatible(b);
        basic_jet out(a.base_, a.order_);
        const int N = a.order_;
        for (int d1 = 0; d1 <= N; ++d1)
            for (int j1 = 0; j1 <= d1; ++j1) {
                const complex_type x = a(d1 - j1, j1);
                if (x == complex_type{}) continue;
                for (int d2 = 0; d1 + d2 <= N; ++d2)
                    for (int j2 = 0; j2 <= d2; ++j2) out(d1 - j1 + d2 - j2, j1 + j2) += x * b(d2 - j2, j2);
            }
        return out;
    }
    basic_jet &operator*=(const basic_jet &o) { return *this = *this * o; }

    /// 1/f; requires a nonzero constant term.
    basic_jet recip() const
    {
        if (c_[0] == complex_type{}) throw std::domain_error("jet: reciprocal of a jet with zero constant term");
        basic_jet out(base_, order_);
        const complex_type inv = complex_type(1) / c_[0];
        out.c_[0] = inv;
        for (int d = 1; d <= order_; ++d)
            for (int j = 0; j <= d; ++j) {
                const int i = d - j;
                complex_type s{};
                for (int i1 = 0; i1 <= i; ++i1)
                    for (int j1 = 0; j1 <= j; ++j1) {
                        if (i1 == 0 && j1 == 0) continue;
                        s += (*this)(i1, j1) * out(i - i1, j - j1);
                    }
                out(i, j) = -inv * s;
            }
        return out;
    }

    friend basic_jet operator/(const basic_jet &a, const basic_jet &b) { return a * b.recip(); }

    /// Integer power by squaring; negative exponents go through recip().
    basic_jet pow(int n) const
    {
        if (n < 0) return recip().pow(-n);
        basic_jet result = constant(base_, order_, complex_type(1));
        basic_jet x = *this;
        while (n > 0) {
            if (n & 1) result *= x;
            n >>= 1;
            if (n > 0) x *= x;
        }
        return result;
    }

    /// Sum_m t[m] (f - f(base))^m: composition with a univariate function whose
    /// Taylor coefficients at f(base) are t. Horner in the nilpotent part, so
    /// the constant term is exactly t[0].
    basic_jet compose(std::span<const complex_type> t) const
    {
        basic_jet h = *this;
        h.c_[0] = complex_type{};
        const int top = std::min<int>(static_cast<int>(t.size()) - 1, order_);
        basic_jet r = constant(base_, order_, top >= 0 ? t[static_cast<std::size_t>(top)] : complex_type{});
        for (int m = top - 1; m >= 0; --m) {
            r = r * h;
            r.c_[0] += t[static_cast<std::size_t>(m)];
        }
        return r;
    }

    basic_jet compose_real(std::span<const Real> t) const
    {
        std::vector<complex_type> tc(t.begin(), t.end());
        return compose(tc);
    }

    /// f^p for real p, principal branch at the base value.
    basic_jet pow_real(Real p) const
    {
        const complex_type x0 = c_[0];
        if (x0 == complex_type{}) throw std::domain_error("jet: real power of a jet with zero constant term");
        std::vector<complex_type> t(static_cast<std::size_t>(order_) + 1);
        t[0] = std::pow(x0, p);
        for (int m = 1; m <= order_; ++m) t[static_cast<std::size_t>(m)] = t[static_cast<std::size_t>(m) - 1] * (p - (m - 1)) / (Real(m) * x0);
        return compose(t);
    }

    /// Substitution tau -> T(tau) for a holomorphic map T: given this jet of g at
    /// T(base) and the jet `h` of T(tau) - T(base) at base, returns the jet of
    /// g(T(tau), conj T(tau)).
    basic_jet substitute(const basic_jet &h) const
    {
        if (h.order_ != order_) throw config_error("jet: substitute needs equal orders");
        const int N = order_;
        std::vector<basic_jet> hp{constant(h.base_, N, 1)}, hbp{constant(h.base_, N, 1)};
        const basic_jet hb = h.conj();
        for (int m = 1; m <= N; ++m) {
            hp.push_back(hp.back() * h);
            hbp.push_back(hbp.back() * hb);
        }
        basic_jet out(h.base_, N);
        for (int d = 0; d <= N; ++d)
            for (int j = 0; j <= d; ++j) {
                const complex_type c = (*this)(d - j, j);
                if (c == complex_type{}) continue;
                out += (hp[static_cast<std::size_t>(d - j)] * hbp[static_cast<std::size_t>(j)]) * c;
            }
        return out;
    }

private:
    static std::size_t size_for(int order) { return order < 0 ? 0 : static_cast<std::size_t>((order + 1) * (order + 2) / 2); }
    static std::size_t index(int i, int j) { return static_cast<std::size_t>((i + j) * (i + j + 1) / 2 + j); }

    void check_compatible(const basic_jet &o) const
    {
        if (o.order_ != order_) throw config_error("jet: order mismatch");
        if (!(o.base_ == base_)) throw config_error("jet: base point mismatch");
    }
    void require_order(int n, const char *what) const
    {
        if (order_ < n) throw config_error(std::string("jet: ") + what + " needs order >= " + std::to_string(n));
    }

    Point base_{};
    int order_ = 0;
    std::vector<complex_type> c_ = std::vector<complex_type>(1);
};

using Jet = basic_jet<double>;

}  // namespace lhmf
