#pragma once

// Special functions with half-integer / integer parameters, plus Gauss-Legendre
// rules used by the quadrature paths.

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>
#include <vector>

#include "lhmf/errors.hpp"

namespace lhmf {

inline double factorial(int n)
{
    if (n < 0) throw config_error("factorial: negative argument");
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

/// a (a+1) ... (a+n-1); the empty product is 1.
inline double rising_factorial(double a, int n)
{
    if (n < 0) throw config_error("rising_factorial: n must be >= 0");
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= a + i;
    return r;
}

/// Exact binomial coefficient C(n, m) for 0 <= m <= n (fits in 64 bits for n <= 62).
inline std::int64_t binomial(std::int64_t n, std::int64_t m)
{
    if (m < 0 || n < 0 || m > n) throw config_error("binomial: need 0 <= m <= n");
    if (n > 62) throw config_error("binomial: n too large for exact 64-bit result");
    m = std::min(m, n - m);
    std::int64_t r = 1;
    for (std::int64_t i = 1; i <= m; ++i) r = r * (n - m + i) / i;  // exact at every step
    return r;
}

/// Generalised binomial coefficient C(p, j) for real p.
inline double binomial_real(double p, int j)
{
    double r = 1.0;
    for (int i = 0; i < j; ++i) r *= (p - i) / (i + 1);
    return r;
}

/// Upper incomplete Gamma for positive integer n:
/// Gamma(n, x) = (n-1)! e^{-x} sum_{m<n} x^m / m!, valid for every real x.
inline double incomplete_gamma_int(int n, double x)
{
    if (n < 1) throw config_error("incomplete_gamma_int: n must be >= 1");
    double term = 1.0, sum = 1.0;
    for (int m = 1; m < n; ++m) {
        term *= x / m;
        sum += term;
    }
    return factorial(n - 1) * std::exp(-x) * sum;
}

/// Hurwitz zeta(s, q) for real s > 1, q > 0 (Euler-Maclaurin, ~1e-16 relative).
inline double hurwitz_zeta(double s, double q)
{
    if (!(s > 1.0) || !(q > 0.0)) throw config_error("hurwitz_zeta: need s > 1 and q > 0");
    static constexpr double bernoulli[] = {1.0 / 6,         -1.0 / 30,      1.0 / 42,   -1.0 / 30,
                                           5.0 / 66,        -691.0 / 2730,  7.0 / 6,    -3617.0 / 510,
                                           43867.0 / 798,   -174611.0 / 330};
    constexpr int N = 30;
    double sum = 0.0;
    for (int n = N - 1; n >= 0; --n) sum += std::pow(n + q, -s);
    const double x = N + q;
    sum += std::pow(x, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(x, -s);
    double rise = s, fact = 2.0, xp = std::pow(x, -s - 1.0);
    for (int j = 1; j <= 10; ++j) {
        sum += bernoulli[j - 1] / fact * rise * xp;
        rise *= (s + 2 * j - 1) * (s + 2 * j);
        fact *= (2 * j + 1) * (2 * j + 2);
        xp /= x * x;
    }
    return sum;
}

namespace detail {

// beta(x; n + 1/2, 1/2) given the angle theta = arcsin(sqrt x) in [0, pi/2].
inline double beta_half_angle(double theta, int n)
{
    const double s = std::sin(theta);
    const double x = s * s;
    const double r = n + 0.5;
    if (x <= 0.5) {
        // sum_j (1/2)_j / j! x^{r+j} / (r+j); ratio <= 1/2 so ~55 terms reach roundoff
        double coef = 1.0, xp = 1.0, sum = 0.0;
        for (int j = 0; j < 200; ++j) {
            const double term = coef * xp / (r + j);
            sum += term;
            if (term < 1e-17 * sum) break;
            coef *= (0.5 + j) / (j + 1);
            xp *= x;
        }
        return sum * std::pow(x, r);
    }
    // 2 int_0^theta sin^{2n}; forward Wallis reduction is stable (multipliers < 1)
    const double c = std::cos(theta);
    double I = theta;
    double sp = s;  // sin^{2m-1}
    for (int m = 1; m <= n; ++m) {
        I = -sp * c / (2.0 * m) + (2.0 * m - 1.0) / (2.0 * m) * I;
        sp *= s * s;
    }
    return 2.0 * I;
}

}  // namespace detail

/// beta(x; n + 1/2, 1/2) from x and y = 1 - x (y carries the accuracy near x = 1).
inline double beta_half_xy(double x, double y, int n)
{
    if (x <= 0.5) {
        const double r = n + 0.5;
        double coef = 1.0, xp = 1.0, sum = 0.0;
        for (int j = 0; j < 200; ++j) {
            const double term = coef * xp / (r + j);
            sum += term;
            if (term < 1e-17 * sum) break;
            coef *= (0.5 + j) / (j + 1);
            xp *= x;
        }
        double pw = std::sqrt(x);
        for (int i = 0; i < n; ++i) pw *= x;
        return sum * pw;
    }
    return detail::beta_half_angle(std::atan2(std::sqrt(x), std::sqrt(y)), n);
}

enum class beta_variant { k_minus_half, k_plus_half };

/// beta(x; r, 1/2) with r = k - 1/2 or k + 1/2.
inline double incomplete_beta_half(double x, int k, beta_variant variant)
{
    if (k < 1) throw config_error("incomplete_beta_half: k must be >= 1");
    if (!(x >= 0.0)) throw config_error("incomplete_beta_half: x must be >= 0");
    if (x >= 1.0 - 1e-9) throw near_singular_error("incomplete_beta_half: x too close to 1", 1.0 - x);
    const int n = variant == beta_variant::k_minus_half ? k - 1 : k;
    return beta_half_xy(x, 1.0 - x, n);
}

/// Taylor coefficients t_0..t_m of h -> beta(x0 + h; n + 1/2, 1/2), where y0 = 1 - x0
/// is passed separately so that points near x = 1 keep full relative accuracy.
inline std::vector<double> beta_half_taylor(double x0, double y0, int n, int m)
{
    std::vector<double> t(static_cast<std::size_t>(m) + 1, 0.0);
    t[0] = beta_half_xy(x0, y0, n);
    if (m == 0) return t;
    // beta' = x^{r-1} (1-x)^{-1/2}: product of two binomial series in h
    const double r = n + 0.5;
    std::vector<double> A(static_cast<std::size_t>(m)), B(static_cast<std::size_t>(m));
    double ca = 1.0, cb = 1.0;
    for (int j = 0; j < m; ++j) {
        A[static_cast<std::size_t>(j)] = ca;
        B[static_cast<std::size_t>(j)] = cb;
        ca *= (r - 1.0 - j) / ((j + 1) * x0);
        cb *= (0.5 + j) / ((j + 1) * y0);
    }
    const double scale = std::pow(x0, r - 1.0) / std::sqrt(y0);
    for (int j = 0; j < m; ++j) {
        double d = 0.0;
        for (int l = 0; l <= j; ++l) d += A[static_cast<std::size_t>(l)] * B[static_cast<std::size_t>(j - l)];
        t[static_cast<std::size_t>(j) + 1] = scale * d / (j + 1);
    }
    return t;
}

/// n-point Gauss-Legendre rule on [-1, 1], cached.
struct gauss_legendre_rule {
    std::vector<double> nodes, weights;

    static const gauss_legendre_rule &get(int n)
    {
        static std::mutex mutex;
        static std::map<int, std::unique_ptr<const gauss_legendre_rule>> cache;
        std::lock_guard lock(mutex);
        auto &slot = cache[n];
        if (!slot) slot.reset(new gauss_legendre_rule(n));
        return *slot;
    }

private:
    explicit gauss_legendre_rule(int n) : nodes(static_cast<std::size_t>(n)), weights(static_cast<std::size_t>(n))
    {
        if (n < 1) throw config_error("gauss_legendre_rule: n must be >= 1");
        for (int i = 0; i < (n + 1) / 2; ++i) {
            double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int j = 2; j <= n; ++j) {
                    const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            // recompute derivative at converged node
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[static_cast<std::size_t>(i)] = -x;
            nodes[static_cast<std::size_t>(n - 1 - i)] = x;
            weights[static_cast<std::size_t>(i)] = weights[static_cast<std::size_t>(n - 1 - i)] = w;
        }
    }
};

/// Composite Gauss-Legendre on [a, b] with `panels` equal panels.
template <class T, class Fn>
T gauss_legendre(Fn &&f, double a, double b, int panels = 1, int n = 20)
{
    const auto &rule = gauss_legendre_rule::get(n);
    const double h = (b - a) / panels;
    T total{};
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h, mid = lo + 0.5 * h;
        T part{};
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) part += rule.weights[i] * f(mid + 0.5 * h * rule.nodes[i]);
        total += 0.5 * h * part;
    }
    return total;
}

}  // namespace lhmf
