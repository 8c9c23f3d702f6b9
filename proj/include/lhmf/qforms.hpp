#pragma once

// Integral binary quadratic forms [a, b, c] of a fixed positive non-square
// discriminant: evaluation, box enumeration, geodesics, exceptional-set
// proximity and the support set of the local polynomial.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "lhmf/arith.hpp"
#include "lhmf/errors.hpp"
#include "lhmf/point.hpp"

namespace lhmf {

using i64 = std::int64_t;

struct QForm {
    i64 a = 0, b = 0, c = 0;

    QForm operator-() const { return {-a, -b, -c}; }
    friend bool operator==(const QForm &, const QForm &) = default;
};

inline std::ostream &operator<<(std::ostream &os, const QForm &q)
{
    return os << '[' << q.a << ',' << q.b << ',' << q.c << ']';
}

inline i64 discriminant(const QForm &q) { return q.b * q.b - 4 * q.a * q.c; }

/// A positive non-square discriminant.
class Discriminant {
public:
    explicit Discriminant(i64 D) : D_(D)
    {
        if (D <= 0) throw config_error("discriminant must be positive, got " + std::to_string(D));
        if (arith::mod(D, 4) > 1) throw config_error("discriminant must be 0 or 1 mod 4, got " + std::to_string(D));
        if (arith::is_perfect_square(D)) throw config_error("discriminant must not be a square, got " + std::to_string(D));
        sqrt_ = std::sqrt(static_cast<double>(D));
    }

    i64 value() const { return D_; }
    double sqrt() const { return sqrt_; }

private:
    i64 D_;
    double sqrt_;
};

/// Q(tau, 1) = a tau^2 + b tau + c.
inline std::complex<double> q_value(const QForm &q, const Point &p)
{
    const std::complex<double> t = p.tau();
    return (static_cast<double>(q.a) * t + static_cast<double>(q.b)) * t + static_cast<double>(q.c);
}

/// Q_tau = (a |tau|^2 + b u + c) / v.
inline double q_tau(const QForm &q, const Point &p)
{
    return (static_cast<double>(q.a) * (p.u * p.u + p.v * p.v) + static_cast<double>(q.b) * p.u + static_cast<double>(q.c)) / p.v;
}

struct Geodesic {
    double center = 0.0;
    double radius = 0.0;
};

/// The semicircle Q_tau = 0.
inline Geodesic geodesic(const QForm &q)
{
    if (q.a == 0) throw config_error("geodesic: a = 0 has no semicircle");
    const i64 D = discriminant(q);
    if (D <= 0) throw config_error("geodesic: form must have positive discriminant");
    return {-static_cast<double>(q.b) / (2.0 * static_cast<double>(q.a)),
            std::sqrt(static_cast<double>(D)) / (2.0 * std::abs(static_cast<double>(q.a)))};
}

/// Calls fn(b) for every b in [lo, hi], ascending, with b = root (mod 2A) for
/// some root in the sorted list [first, last).
template <class Fn>
void for_each_root_b(i64 A, i64 lo, i64 hi, const std::int32_t *first, const std::int32_t *last, Fn &&fn)
{
    if (first == last || lo > hi) return;
    const i64 m = 2 * A;
    const i64 blk_lo = lo >= 0 ? lo / m : -((-lo + m - 1) / m);
    const i64 blk_hi = hi >= 0 ? hi / m : -((-hi + m - 1) / m);
    for (i64 blk = blk_lo; blk <= blk_hi; ++blk)
        for (auto it = first; it != last; ++it) {
            const i64 b = blk * m + *it;
            if (b >= lo && b <= hi) fn(b);
        }
}

/// All [a,b,c] of discriminant D with 0 < |a| <= B and |b| <= 2B + sqrt D,
/// sorted by (|a|, a, b).
inline std::vector<QForm> enumerate_forms(const Discriminant &disc, i64 B)
{
    if (B < 1) throw config_error("enumerate_forms: B must be >= 1");
    const i64 D = disc.value();
    const i64 bmax = 2 * B + static_cast<i64>(std::floor(disc.sqrt()));
    const auto table = arith::root_table::get(D, B);
    std::vector<QForm> out;
    for (i64 A = 1; A <= B; ++A) {
        auto [first, last] = table->roots(A);
        for (i64 a : {-A, A})
            for_each_root_b(A, -bmax, bmax, first, last, [&](i64 b) { out.push_back({a, b, (b * b - D) / (4 * a)}); });
    }
    return out;
}

/// Distance-like measure of tau from E_D: min over Q of |Q_tau| / sqrt D.
/// Zero exactly on E_D. Unlike a count restricted to geodesics that reach height
/// v, the minimum runs over all forms, so points just above a geodesic apex are
/// still reported as close.
inline double e_d_proximity(const Point &p, const Discriminant &disc)
{
    const i64 D = disc.value();
    const double sD = disc.sqrt(), u = p.u, v = p.v;
    double best = std::numeric_limits<double>::infinity();
    // Q and -Q give the same |Q_tau|, so a > 0 suffices.
    for (i64 A = 1;; ++A) {
        const double Ad = static_cast<double>(A);
        const double r = sD / (2.0 * Ad);
        if (r < v && std::isfinite(best)) {
            // row minimum is attained at c0 = u: |Q_tau| = A(v^2 - r^2)/v, increasing in A
            if ((Ad * v - static_cast<double>(D) / (4.0 * Ad * v)) / sD >= best) break;
        }
        const double rho2 = r * r - v * v;
        double W;
        if (std::isfinite(best)) {
            const double delta = best * sD * v / Ad;
            W = std::sqrt(std::max(0.0, rho2 + delta));
        } else {
            W = std::sqrt(std::max(0.0, rho2)) + 2.0;
        }
        // center c0 = -b / (2A) within [u - W, u + W]
        const i64 lo = static_cast<i64>(std::floor(-2.0 * Ad * (u + W))) - 1;
        const i64 hi = static_cast<i64>(std::ceil(-2.0 * Ad * (u - W))) + 1;
        const auto roots = arith::discriminant_roots(D, A);
        std::vector<std::int32_t> r32(roots.begin(), roots.end());
        for_each_root_b(A, lo, hi, r32.data(), r32.data() + r32.size(), [&](i64 b) {
            const QForm q{A, b, (b * b - D) / (4 * A)};
            best = std::min(best, std::abs(q_tau(q, p)) / sD);
        });
    }
    return best;
}

inline constexpr double default_singular_threshold = 1e-6;

inline void require_off_exceptional_set(const Point &p, const Discriminant &disc, double threshold, const char *what)
{
    const double prox = e_d_proximity(p, disc);
    if (prox < threshold) {
        std::ostringstream msg;
        msg << what << ": tau = " << p.u << "+" << p.v << "i is within " << prox << " of E_D (threshold " << threshold << ")";
        throw near_singular_error(msg.str(), prox);
    }
}

/// {Q of discriminant D : a < 0 < Q_tau}, sorted by (|a|, b). These are the
/// forms whose semicircle strictly contains tau, with a < 0.
inline std::vector<QForm> support_set(const Point &p, const Discriminant &disc, double threshold = default_singular_threshold)
{
    require_off_exceptional_set(p, disc, threshold, "support_set");
    const i64 D = disc.value();
    const double sD = disc.sqrt();
    std::vector<QForm> out;
    // tau inside the semicircle needs radius sqrt D / (2|a|) > v
    for (i64 A = 1; sD / (2.0 * static_cast<double>(A)) > p.v; ++A) {
        const double Ad = static_cast<double>(A);
        const double half = std::sqrt(std::max(0.0, static_cast<double>(D) - 4.0 * Ad * Ad * p.v * p.v));
        // a = -A: center b / (2A); |2 a u + b| < sqrt(D - 4 a^2 v^2)
        const i64 lo = static_cast<i64>(std::floor(2.0 * Ad * p.u - half)) - 1;
        const i64 hi = static_cast<i64>(std::ceil(2.0 * Ad * p.u + half)) + 1;
        const auto roots = arith::discriminant_roots(D, A);
        std::vector<std::int32_t> r32(roots.begin(), roots.end());
        for_each_root_b(A, lo, hi, r32.data(), r32.data() + r32.size(), [&](i64 b) {
            const QForm q{-A, b, -(b * b - D) / (4 * A)};
            if (q_tau(q, p) > 0.0) out.push_back(q);
        });
    }
    return out;
}

/// A in SL2(R) with (a' tau + b')(c' tau + d') = -Q(tau, 1) / sqrt D, i.e.
/// Q(tau, 1)^{k-1} = (-sqrt D)^{k-1} (tau^{k-1} |_{2-2k} A)(tau).
inline Mat2 qslash_matrix(const QForm &q)
{
    if (q.a == 0) throw config_error("qslash_matrix: a = 0");
    const double D = static_cast<double>(discriminant(q));
    if (D <= 0) throw config_error("qslash_matrix: need positive discriminant");
    const double sD = std::sqrt(D), a = static_cast<double>(q.a), b = static_cast<double>(q.b);
    const double rho1 = (-b - sD) / (2 * a), rho2 = (-b + sD) / (2 * a);
    const double g = -a / sD;
    return {1.0, -rho1, g, -g * rho2};
}

struct GeodesicWindow {
    double u0, u1, v0, v1;
};

/// Forms with a > 0 (one per geodesic) whose semicircle has radius >= min_radius
/// and meets the window, sorted by (a, b).
inline std::vector<QForm> geodesics_in_window(const Discriminant &disc, const GeodesicWindow &w, double min_radius)
{
    if (!(w.u1 > w.u0) || !(w.v1 > w.v0) || w.v0 < 0) throw config_error("geodesics: invalid window");
    const double floor_r = std::max(min_radius, w.v0);
    if (!(floor_r > 0)) throw config_error("geodesics: need a positive radius floor (min_radius or window bottom)");
    const i64 D = disc.value();
    const double sD = disc.sqrt();
    std::vector<QForm> out;
    for (i64 A = 1; sD / (2.0 * static_cast<double>(A)) >= floor_r; ++A) {
        const double r = sD / (2.0 * static_cast<double>(A));
        // center within r of [u0, u1]; then check the height at the nearest window column
        const i64 lo = static_cast<i64>(std::floor(-2.0 * A * (w.u1 + r))) - 1;
        const i64 hi = static_cast<i64>(std::ceil(-2.0 * A * (w.u0 - r))) + 1;
        const auto roots = arith::discriminant_roots(D, A);
        std::vector<std::int32_t> r32(roots.begin(), roots.end());
        for_each_root_b(A, lo, hi, r32.data(), r32.data() + r32.size(), [&](i64 b) {
            const QForm q{A, b, (b * b - D) / (4 * A)};
            const Geodesic g = geodesic(q);
            const double dist = std::max({0.0, w.u0 - g.center, g.center - w.u1});
            if (dist < g.radius && dist * dist + w.v0 * w.v0 < g.radius * g.radius) out.push_back(q);
        });
    }
    return out;
}

inline std::string geodesics_csv(const std::vector<QForm> &forms)
{
    std::ostringstream os;
    os.precision(17);
    os << "a,b,c,center,radius\n";
    for (const auto &q : forms) {
        const Geodesic g = geodesic(q);
        os << q.a << ',' << q.b << ',' << q.c << ',' << g.center << ',' << g.radius << '\n';
    }
    return os.str();
}

/// Plain SVG 1.1: one arc path per geodesic, clipped to the window.
inline std::string geodesics_svg(const std::vector<QForm> &forms, const GeodesicWindow &w, double px_per_unit = 400.0)
{
    const double W = (w.u1 - w.u0) * px_per_unit, H = (w.v1 - w.v0) * px_per_unit;
    auto X = [&](double u) { return (u - w.u0) * px_per_unit; };
    auto Y = [&](double v) { return (w.v1 - v) * px_per_unit; };
    std::ostringstream os;
    os.precision(10);
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 "
       << W << ' ' << H << "\">\n"
       << "<defs><clipPath id=\"window\"><rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\"/></clipPath></defs>\n"
       << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\" stroke=\"black\"/>\n"
       << "<g clip-path=\"url(#window)\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"1\">\n";
    for (const auto &q : forms) {
        const Geodesic g = geodesic(q);
        const double r = g.radius * px_per_unit;
        os << "<path d=\"M " << X(g.center - g.radius) << ' ' << Y(0) << " A " << r << ' ' << r << " 0 0 1 " << X(g.center + g.radius)
           << ' ' << Y(0) << "\"><title>[" << q.a << ',' << q.b << ',' << q.c << "]</title></path>\n";
    }
    os << "</g>\n</svg>\n";
    return os.str();
}

}  // namespace lhmf
