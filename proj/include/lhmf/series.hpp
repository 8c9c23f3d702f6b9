#pragma once

// Truncated series for the cusp form f_{k,D}, its signed companion g_{k+1,D},
// the locally harmonic forms F_{1-k,D} and G_{-k,D}, the constant c_inf(k) and
// the local polynomial.
//
// Every series is symmetric under Q -> -Q, which multiplies a term by (-1)^k, so
// only forms with a > 0 are summed and the result is scaled by 1 + (-1)^k. For
// odd k all four functions vanish identically.
//
// Box truncation: |a| <= B, |b| <= 2B + sqrt D, with B doubled until two
// successive values agree to the stagnation tolerance. Rows (fixed a) are
// grouped into blocks whose boundaries depend only on the bounds, so the
// compensated reduction is identical for every worker count.

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <sstream>
#include <vector>

#include "lhmf/arith.hpp"
#include "lhmf/errors.hpp"
#include "lhmf/jet.hpp"
#include "lhmf/qforms.hpp"
#include "lhmf/specfun.hpp"
#include "lhmf/summation.hpp"

namespace lhmf {

using cplx = std::complex<double>;

struct TruncationParams {
    i64 initial_bound = 16;
    double stagnation_tol = 1e-10;
    i64 max_bound = i64{1} << 22;
    // Richardson step for sums whose box tail is ~ c/B: successive values 2S(2B) - S(B)
    bool richardson = false;

    /// A single evaluation at bound B; the tail estimate is the change from B/2.
    static TruncationParams fixed(i64 B) { return {B, std::numeric_limits<double>::infinity(), B, false}; }
    bool is_fixed() const { return initial_bound == max_bound; }
};

enum class series_fn { f, g, F, G };

/// Defaults: 1e-10 for k <= 3 and 1e-8 for k >= 4, except k = 2 where the
/// F box sum (tail ~ c/B) is Richardson-extrapolated to 1e-9 and the f row
/// sum (tail ~ c/A) stops at 1e-9.
inline TruncationParams default_truncation(series_fn fn, int k)
{
    TruncationParams t;
    t.stagnation_tol = k <= 3 ? 1e-10 : 1e-8;
    if (k == 2 && fn == series_fn::F) {
        t.stagnation_tol = 1e-9;
        t.richardson = true;
    }
    if (k == 2 && fn == series_fn::f) t.stagnation_tol = 1e-9;
    return t;
}

struct SeriesValue {
    cplx value{};
    std::optional<Jet> jet;  // present in jet mode
    i64 bound_used = 0;
    double tail_estimate = 0.0;
    double proximity = std::numeric_limits<double>::infinity();
};

enum class series_method { rows, box };

namespace detail {

inline void check_k(int k)
{
    if (k < 2) throw config_error("k must be >= 2, got " + std::to_string(k));
}

inline void check_truncation(const TruncationParams &t)
{
    if (t.initial_bound < 1 || t.max_bound < t.initial_bound || !(t.stagnation_tol > 0))
        throw config_error("truncation: need 1 <= initial_bound <= max_bound and stagnation_tol > 0");
    if (t.max_bound > (i64{1} << 28)) throw config_error("truncation: max_bound above 2^28 is not supported");
}

/// z^n by squaring, the same operation sequence as basic_jet::pow, so that jet
/// constant terms coincide bit-for-bit with plain values.
inline cplx ipow(cplx z, int n)
{
    if (n < 0) return ipow(cplx(1) / z, -n);
    cplx result(1), x = z;
    while (n > 0) {
        if (n & 1) result *= x;
        n >>= 1;
        if (n > 0) x *= x;
    }
    return result;
}

template <class R>
struct accumulator;

template <>
struct accumulator<cplx> {
    compensated_complex_sum sum;
    explicit accumulator(const cplx &) {}
    void add(const cplx &z) { sum.add(z); }
    cplx result() const { return sum.value(); }
};

template <>
struct accumulator<Jet> {
    Jet proto;
    std::vector<compensated_complex_sum> sums;
    explicit accumulator(const Jet &zero) : proto(zero), sums(zero.raw().size()) {}
    void add(const Jet &j)
    {
        for (std::size_t i = 0; i < sums.size(); ++i) sums[i].add(j.raw()[i]);
    }
    Jet result() const
    {
        Jet out = proto;
        int idx = 0;
        for (int d = 0; d <= out.order(); ++d)
            for (int j = 0; j <= d; ++j) out(d - j, j) = sums[static_cast<std::size_t>(idx++)].value();
        return out;
    }
};

inline cplx scalar_of(const cplx &z) { return z; }
inline cplx scalar_of(const Jet &j) { return j.value(); }

inline cplx scaled(const cplx &z, double s) { return z * s; }
inline Jet scaled(const Jet &j, double s) { return j * cplx(s); }

inline i64 box_bmax(const Discriminant &disc, i64 B) { return 2 * B + static_cast<i64>(std::floor(disc.sqrt())); }

constexpr i64 rows_per_block = 256;

/// Sum of term(a, b, c) over the forms with a > 0 in box(B) \ box(prevB).
template <class Result, class Term>
Result box_region(const Discriminant &disc, i64 B, i64 prevB, const Term &term, const Result &zero)
{
    const i64 D = disc.value();
    const i64 bm = box_bmax(disc, B), pbm = prevB > 0 ? box_bmax(disc, prevB) : -1;
    const auto table = arith::root_table::get(D, B);
    const std::size_t n_blocks = static_cast<std::size_t>((B + rows_per_block - 1) / rows_per_block);
    auto partials = parallel_blocks<Result>(n_blocks, [&](std::size_t blk) {
        accumulator<Result> acc(zero);
        const i64 a0 = static_cast<i64>(blk) * rows_per_block + 1, a1 = std::min(B, a0 + rows_per_block - 1);
        for (i64 A = a0; A <= a1; ++A) {
            auto [first, last] = table->roots(A);
            auto visit = [&](i64 b) { acc.add(term(A, b, (b * b - D) / (4 * A))); };
            if (A <= prevB) {
                for_each_root_b(A, -bm, -pbm - 1, first, last, visit);
                for_each_root_b(A, pbm + 1, bm, first, last, visit);
            } else {
                for_each_root_b(A, -bm, bm, first, last, visit);
            }
        }
        return acc.result();
    });
    accumulator<Result> total(zero);
    for (const auto &p : partials) total.add(p);
    return total.result();
}

template <class Result>
struct adaptive_result {
    Result sum;
    i64 bound = 0;
    double tail = 0.0;
};

/// Doubling driver. `region(B, prevB)` returns the (already scaled) partial sum
/// of the shell between two bounds.
template <class Result, class Region>
adaptive_result<Result> adaptive(const TruncationParams &t, const Result &zero, const Region &region, const char *what)
{
    check_truncation(t);
    auto add = [&](const Result &x, const Result &y) {
        accumulator<Result> acc(zero);
        acc.add(x);
        acc.add(y);
        return acc.result();
    };
    i64 B = t.initial_bound;
    if (t.is_fixed()) {
        const i64 half = B / 2;
        const Result lower = half >= 1 ? region(half, 0) : zero;
        const Result full = half >= 1 ? add(lower, region(B, half)) : region(B, 0);
        return {full, B, half >= 1 ? std::abs(scalar_of(full) - scalar_of(lower)) : std::numeric_limits<double>::infinity()};
    }
    Result S = region(B, 0);
    double tail = std::numeric_limits<double>::quiet_NaN();
    std::optional<Result> prev_ext;
    while (2 * B <= t.max_bound) {
        const Result S2 = add(S, region(2 * B, B));
        B *= 2;
        if (t.richardson) {
            const Result ext = add(scaled(S2, 2.0), scaled(S, -1.0));
            if (prev_ext) {
                tail = std::abs(scalar_of(ext) - scalar_of(*prev_ext));
                if (tail <= t.stagnation_tol) return {ext, B, tail};
            }
            prev_ext = ext;
        } else {
            tail = std::abs(scalar_of(S2) - scalar_of(S));
            if (tail <= t.stagnation_tol) return {S2, B, tail};
        }
        S = S2;
    }
    std::ostringstream msg;
    msg << what << ": tail " << tail << " above tolerance " << t.stagnation_tol << " at max bound " << B;
    throw convergence_error(msg.str(), B, tail);
}

inline double pairing_factor(int k) { return k % 2 == 0 ? 2.0 : 0.0; }

// F term for a > 0 (without prefactor).
struct F_term {
    int k;
    double D, u, v, uv2;
    cplx tau;

    cplx operator()(i64 ai, i64 bi, i64 ci) const
    {
        const double a = static_cast<double>(ai), b = static_cast<double>(bi), c = static_cast<double>(ci);
        const cplx Q = (a * tau + b) * tau + c;
        const double qt = (a * uv2 + b * u + c) / v, q2 = qt * qt;
        const double beta = beta_half_xy(D / (D + q2), q2 / (D + q2), k - 1);
        return (ipow(Q, k - 1) * beta) * (qt > 0 ? 1.0 : -1.0);
    }
};

// Taylor coefficients in (t - t0) of t -> beta(D/(D+t^2); n+1/2, 1/2) on the side
// sgn(t) = sgn(t0). Its derivative -2 sgn(t) D^{n+1/2} (D+t^2)^{-n-1} is rational
// with poles at +-i sqrt D only, so the expansion stays well conditioned even
// where D/(D+t^2) approaches 1.
template <class Real = double>
std::vector<Real> beta_qt_taylor(Real D, Real t0, int n, int m)
{
    std::vector<Real> f(static_cast<std::size_t>(m) + 1, Real(0));
    const Real t2 = t0 * t0;
    f[0] = beta_half_xy(static_cast<double>(D / (D + t2)), static_cast<double>(t2 / (D + t2)), n);
    if (m == 0) return f;
    // g = P^alpha with P(s) = (D + t0^2) + 2 t0 s + s^2, alpha = -n-1 (Miller recurrence)
    const Real p[3] = {D + t2, 2 * t0, Real(1)};
    const Real alpha = -n - Real(1);
    std::vector<Real> g(static_cast<std::size_t>(m));
    g[0] = std::pow(p[0], alpha);
    for (int j = 1; j < m; ++j) {
        Real acc = 0;
        for (int i = 1; i <= std::min(j, 2); ++i) acc += ((alpha + 1) * i - j) * p[i] * g[static_cast<std::size_t>(j - i)];
        g[static_cast<std::size_t>(j)] = acc / (j * p[0]);
    }
    const Real scale = -2 * (t0 > 0 ? Real(1) : Real(-1)) * std::pow(D, n + Real(0.5));
    for (int j = 1; j <= m; ++j) f[static_cast<std::size_t>(j)] = scale * g[static_cast<std::size_t>(j - 1)] / Real(j);
    return f;
}

// Shared jet pieces: Q(tau, 1) as a holomorphic jet and the beta factor as a
// function of the real jet Q_tau = (a|tau|^2 + b u + c) / v.
template <class Real>
struct qbeta_jets {
    basic_jet<Real> Q, beta;
};

template <class Real>
qbeta_jets<Real> q_beta_jets(Real D, Point p, int N, i64 ai, i64 bi, i64 ci, int n_beta)
{
    using J = basic_jet<Real>;
    using C = std::complex<Real>;
    const Real a = static_cast<Real>(ai), b = static_cast<Real>(bi), c = static_cast<Real>(ci);
    const Real u = p.u, v = p.v;
    const C t0(u, v);
    J Q(p, N);
    Q(0, 0) = (a * t0 + b) * t0 + c;
    if (N >= 1) Q(1, 0) = Real(2) * a * t0 + b;
    if (N >= 2) Q(2, 0) = a;
    const Real qt = (a * (u * u + v * v) + b * u + c) / v;
    const auto t = beta_qt_taylor<Real>(D, qt, n_beta, N);
    J beta = J::constant(p, N, t[0]);
    if (N >= 1) {
        const J U = J::real_part(p, N), V = J::imag_part(p, N);
        const J Qt = ((U * U + V * V) * C(a) + U * C(b) + C(c)) * V.recip();
        beta = Qt.compose_real(t);
    }
    return {Q, beta};
}

// Jet terms lose digits to cancellation between Leibniz products at high
// order (the 2k+1-st holomorphic derivative of G is ~1e-5 of its size at
// k = 6), so they are formed in extended precision and rounded once.
using jet_real = long double;

struct F_jet_term {
    int k, N;
    double D;
    Point p;

    Jet operator()(i64 a, i64 b, i64 c) const
    {
        const double qt = (static_cast<double>(a) * (p.u * p.u + p.v * p.v) + static_cast<double>(b) * p.u + static_cast<double>(c)) / p.v;
        auto [Q, beta] = q_beta_jets<jet_real>(D, p, N, a, b, c, k - 1);
        return ((Q.pow(k - 1) * beta) * std::complex<jet_real>(qt > 0 ? 1 : -1)).cast<double>();
    }
};

struct G_term {
    int k;
    double D, u, v, uv2;
    cplx tau;

    cplx operator()(i64 ai, i64 bi, i64 ci) const
    {
        const double a = static_cast<double>(ai), b = static_cast<double>(bi), c = static_cast<double>(ci);
        const cplx Q = (a * tau + b) * tau + c;
        const double qt = (a * uv2 + b * u + c) / v, q2 = qt * qt;
        return ipow(Q, k) * beta_half_xy(D / (D + q2), q2 / (D + q2), k);
    }
};

struct G_jet_term {
    int k, N;
    double D;
    Point p;

    Jet operator()(i64 a, i64 b, i64 c) const
    {
        auto [Q, beta] = q_beta_jets<jet_real>(D, p, N, a, b, c, k);
        return (Q.pow(k) * beta).cast<double>();
    }
};

// f and g terms: Q^{-p}, optionally signed by Q_tau.
struct inverse_power_term {
    int p;
    bool signed_by_qtau;
    double u, v, uv2;
    cplx tau;

    cplx operator()(i64 ai, i64 bi, i64 ci) const
    {
        const double a = static_cast<double>(ai), b = static_cast<double>(bi), c = static_cast<double>(ci);
        const cplx Q = (a * tau + b) * tau + c;
        const cplx t = cplx(1) / ipow(Q, p);
        if (!signed_by_qtau) return t;
        return (a * uv2 + b * u + c) / v > 0 ? t : -t;
    }
};

inline double F_prefactor(int k, double D)
{
    return std::pow(D, 0.5 - k) / (2.0 * static_cast<double>(binomial(2 * k - 2, k - 1)) * std::numbers::pi) * pairing_factor(k);
}
inline double G_prefactor(int k) { return 0.5 * pairing_factor(k); }
inline double f_prefactor(int k, double D)
{
    return std::pow(D, k - 0.5) / (static_cast<double>(binomial(2 * k - 2, k - 1)) * std::numbers::pi) * pairing_factor(k);
}
inline double g_prefactor(int k) { return pairing_factor(k); }

template <class Result, class Term>
SeriesValue run_box(const Discriminant &disc, const TruncationParams &t, const Term &term, const Result &zero,
                    double prefactor, double proximity, const char *what)
{
    SeriesValue out;
    out.proximity = proximity;
    if (prefactor == 0.0) {
        out.bound_used = t.initial_bound;
        if constexpr (std::is_same_v<Result, Jet>) out.jet = zero;
        return out;
    }
    auto region = [&](i64 B, i64 prevB) { return scaled(box_region<Result>(disc, B, prevB, term, zero), prefactor); };
    auto r = adaptive<Result>(t, zero, region, what);
    out.value = scalar_of(r.sum);
    if constexpr (std::is_same_v<Result, Jet>) out.jet = r.sum;
    out.bound_used = r.bound;
    out.tail_estimate = r.tail;
    return out;
}

}  // namespace detail

/// F_{1-k,D}(tau) (jet_order = 0) or its jet of the given order.
inline SeriesValue eval_F(int k, const Discriminant &disc, const Point &p, const TruncationParams &t, int jet_order = 0,
                          double singular_threshold = default_singular_threshold)
{
    detail::check_k(k);
    if (jet_order < 0) throw config_error("jet_order must be >= 0");
    const double prox = e_d_proximity(p, disc);
    if (prox < singular_threshold) require_off_exceptional_set(p, disc, singular_threshold, "eval_F");
    const double D = static_cast<double>(disc.value());
    const double pref = detail::F_prefactor(k, D);
    if (jet_order == 0) {
        const detail::F_term term{k, D, p.u, p.v, p.u * p.u + p.v * p.v, p.tau()};
        return detail::run_box<cplx>(disc, t, term, cplx{}, pref, prox, "eval_F");
    }
    const detail::F_jet_term term{k, jet_order, D, p};
    return detail::run_box<Jet>(disc, t, term, Jet(p, jet_order), pref, prox, "eval_F");
}

/// G_{-k,D}(tau) or its jet.
inline SeriesValue eval_G(int k, const Discriminant &disc, const Point &p, const TruncationParams &t, int jet_order = 0,
                          double singular_threshold = default_singular_threshold)
{
    detail::check_k(k);
    if (jet_order < 0) throw config_error("jet_order must be >= 0");
    const double prox = e_d_proximity(p, disc);
    if (prox < singular_threshold) require_off_exceptional_set(p, disc, singular_threshold, "eval_G");
    const double D = static_cast<double>(disc.value());
    const double pref = detail::G_prefactor(k);
    if (jet_order == 0) {
        const detail::G_term term{k, D, p.u, p.v, p.u * p.u + p.v * p.v, p.tau()};
        return detail::run_box<cplx>(disc, t, term, cplx{}, pref, prox, "eval_G");
    }
    const detail::G_jet_term term{k, jet_order, D, p};
    return detail::run_box<Jet>(disc, t, term, Jet(p, jet_order), pref, prox, "eval_G");
}

namespace detail {

/// Coefficients of sum_n ((w+n)^2 - s^2)^{-p} = sum_{m>=1} h_m e^{2 pi i m w}, Im w > 0.
/// Returns h_m and an envelope bounding |h_m| without cancellation (for cutoffs).
struct lipschitz_coeff {
    double value, envelope;
};

inline lipschitz_coeff row_fourier_coeff(int p, double s, int m)
{
    const double pi = std::numbers::pi;
    const double x = 2 * pi * m * s;
    if (x <= std::max(7.0, p + 1.0)) {
        // Taylor series in s: sum_j C(p+j-1, j) s^{2j} (-4 pi^2)^{p+j} m^{2p+2j-1} / (2p+2j-1)!
        double term = std::pow(-4 * pi * pi, p) * std::pow(static_cast<double>(m), 2 * p - 1) / factorial(2 * p - 1);
        double sum = 0.0, env = 0.0;
        for (int j = 0; j < 400; ++j) {
            sum += term;
            env += std::abs(term);
            if (std::abs(term) < 1e-18 * env && j > x) break;
            term *= -x * x * (p + j) / ((j + 1.0) * (2.0 * p + 2 * j) * (2.0 * p + 2 * j + 1));
        }
        return {sum, env};
    }
    // residues at z = +s and z = -s of ((z-s)(z+s))^{-p} e^{-2 pi i m z}
    const cplx mi(0, -2 * pi * m);
    cplx Rp{}, Rm{};
    double env = 0.0;
    for (int l = 0; l < p; ++l) {
        const double c = static_cast<double>(binomial(p - 1, l)) * (l % 2 ? -1.0 : 1.0) * rising_factorial(p, l);
        const cplx a = c * std::pow(2 * s, -p - l) * std::pow(mi, p - 1 - l);
        const cplx b = c * std::pow(-2 * s, -p - l) * std::pow(mi, p - 1 - l);
        Rp += a;
        Rm += b;
        env += std::abs(a) + std::abs(b);
    }
    const cplx e = std::polar(1.0, -2 * pi * m * s);
    const cplx h = cplx(0, -2 * pi) * (Rp * e + Rm * std::conj(e)) / factorial(p - 1);
    return {h.real(), 2 * pi * env / factorial(p - 1)};
}

/// sum over a in (prevA, A], all roots b0, all n, of a^{-p} ((w+n)^2 - s^2)^{-p}
/// with w = tau + b0 / (2a), s = sqrt D / (2a).
inline cplx row_region(const Discriminant &disc, const Point &pt, int p, i64 A, i64 prevA)
{
    const double sD = disc.sqrt(), pi = std::numbers::pi;
    const auto table = arith::root_table::get(disc.value(), A);
    const i64 first_row = prevA + 1;
    const std::size_t n_blocks = static_cast<std::size_t>((A - prevA + rows_per_block - 1) / rows_per_block);
    const double decay = std::exp(-2 * pi * pt.v);
    auto partials = parallel_blocks<cplx>(n_blocks, [&](std::size_t blk) {
        compensated_complex_sum acc;
        const i64 a0 = first_row + static_cast<i64>(blk) * rows_per_block, a1 = std::min(A, a0 + rows_per_block - 1);
        std::vector<double> h;
        for (i64 a = a0; a <= a1; ++a) {
            auto [first, last] = table->roots(a);
            if (first == last) continue;
            const double s = sD / (2.0 * static_cast<double>(a));
            h.clear();
            double env_max = 0.0, damp = 1.0;
            for (int m = 1; m < 100000; ++m) {
                damp *= decay;
                const auto c = row_fourier_coeff(p, s, m);
                h.push_back(c.value);
                const double env = c.envelope * damp;
                env_max = std::max(env_max, env);
                if (env < 1e-18 * env_max && m > 2) break;
            }
            const double scale = std::pow(static_cast<double>(a), -p);
            for (auto it = first; it != last; ++it) {
                const cplx E = std::polar(decay, 2 * pi * (pt.u + *it / (2.0 * static_cast<double>(a))));
                cplx Em = E, row{};
                for (double hm : h) {
                    row += hm * Em;
                    Em *= E;
                }
                acc.add(row * scale);
            }
        }
        return acc.value();
    });
    compensated_complex_sum total;
    for (const auto &z : partials) total.add(z);
    return total.value();
}

}  // namespace detail

/// f_{k,D}(tau). The row method sums each row of fixed a exactly over b via its
/// Fourier expansion, truncating only in a; the box method follows the plain
/// definition over box(B).
inline SeriesValue eval_f(int k, const Discriminant &disc, const Point &p, const TruncationParams &t,
                          series_method method = series_method::rows)
{
    detail::check_k(k);
    const double D = static_cast<double>(disc.value());
    const double pref = detail::f_prefactor(k, D);
    const double prox = e_d_proximity(p, disc);
    if (method == series_method::box) {
        const detail::inverse_power_term term{k, false, p.u, p.v, p.u * p.u + p.v * p.v, p.tau()};
        return detail::run_box<cplx>(disc, t, term, cplx{}, pref, prox, "eval_f");
    }
    SeriesValue out;
    out.proximity = prox;
    if (pref == 0.0) {
        out.bound_used = t.initial_bound;
        return out;
    }
    auto region = [&](i64 A, i64 prevA) { return detail::row_region(disc, p, k, A, prevA) * pref; };
    auto r = detail::adaptive<cplx>(t, cplx{}, region, "eval_f");
    out.value = r.sum;
    out.bound_used = r.bound;
    out.tail_estimate = r.tail;
    return out;
}

/// g_{k+1,D}(tau) = sum sgn(Q_tau) Q(tau,1)^{-k-1}. Rows: the unsigned row sums
/// minus twice the finitely many a > 0 terms with Q_tau < 0 (the negatives of
/// the support set).
inline SeriesValue eval_g(int k, const Discriminant &disc, const Point &p, const TruncationParams &t,
                          series_method method = series_method::rows, double singular_threshold = default_singular_threshold)
{
    detail::check_k(k);
    const double prox = e_d_proximity(p, disc);
    if (prox < singular_threshold) require_off_exceptional_set(p, disc, singular_threshold, "eval_g");
    const double pref = detail::g_prefactor(k);
    if (method == series_method::box) {
        const detail::inverse_power_term term{k + 1, true, p.u, p.v, p.u * p.u + p.v * p.v, p.tau()};
        return detail::run_box<cplx>(disc, t, term, cplx{}, pref, prox, "eval_g");
    }
    SeriesValue out;
    out.proximity = prox;
    if (pref == 0.0) {
        out.bound_used = t.initial_bound;
        return out;
    }
    compensated_complex_sum inside;
    for (const auto &q : support_set(p, disc, singular_threshold)) inside.add(cplx(1) / detail::ipow(q_value(-q, p), k + 1));
    const cplx correction = -2.0 * inside.value() * pref;
    bool first = true;
    auto region = [&](i64 A, i64 prevA) {
        cplx r = detail::row_region(disc, p, k + 1, A, prevA) * pref;
        if (first) {
            r += correction;
            first = false;
        }
        return r;
    };
    auto r = detail::adaptive<cplx>(t, cplx{}, region, "eval_g");
    out.value = r.sum;
    out.bound_used = r.bound;
    out.tail_estimate = r.tail;
    return out;
}

struct CInfinity {
    double value = 0.0;
    double tail_bound = 0.0;
    i64 bound = 0;
};

namespace detail {

inline double c_inf_norm(int k) { return 1.0 / (std::pow(2.0, 2 * k - 2) * (2 * k - 1)); }

/// Upper bound for sum_{a > A} d(a) a^{-s} (s > 1), by partial summation with
/// sum_{a <= x} d(a) <= x (log x + 1).
inline double divisor_tail_bound(double A, double s)
{
    const double L = std::log(A) + 1.0;
    return s * (L * std::pow(A, 1.0 - s) / (s - 1.0) + std::pow(A, 1.0 - s) / ((s - 1.0) * (s - 1.0)));
}

/// Largest value of rho(a) / d(a) permitted by the local structure: rho(p^e) <= d(p^e)
/// for p not dividing 2D, and <= 2 p^{floor(v_p(4D)/2)} otherwise.
inline double rho_over_divisor_bound(i64 D)
{
    double bound = 1.0;
    i64 n = 4 * D;
    for (i64 p = 2; p * p <= n || n > 1; ++p) {
        if (p * p > n) p = n;
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        bound *= 2.0 * std::pow(static_cast<double>(p), e / 2);
    }
    return bound;
}

}  // namespace detail

/// c_inf(k) = 2^{2-2k}/(2k-1) sum_{a>=1} #{0 <= b < 2a : b^2 = D (4a)} a^{-k}, summed
/// directly over a <= A with a rigorous tail bound.
inline CInfinity c_infinity(int k, const Discriminant &disc, i64 A)
{
    detail::check_k(k);
    if (A < 1) throw config_error("c_infinity: A must be >= 1");
    const auto rho = arith::discriminant_root_counts(disc.value(), A);
    compensated_sum sum;
    for (i64 a = 1; a <= A; ++a)
        if (rho[static_cast<std::size_t>(a)]) sum.add(rho[static_cast<std::size_t>(a)] * std::pow(static_cast<double>(a), -k));
    const double norm = detail::c_inf_norm(k);
    const double Ad = static_cast<double>(A);
    // rho(a) <= 2a gives sum_{a>A} 2 a^{1-k} (finite for k >= 3);
    // rho(a) <= C_D d(a) works for every k >= 2.
    double tail = detail::rho_over_divisor_bound(disc.value()) * detail::divisor_tail_bound(Ad, k);
    if (k >= 3) tail = std::min(tail, 2.0 * (std::pow(Ad, 2.0 - k) / (k - 2.0)));
    return {sum.value() * norm, tail * norm, A};
}

/// sum_{a>=1} rho(a) a^{-s} = zeta(s) L(s, (D/.)) / zeta(2s) times correction
/// factors at the primes dividing 2D, where rho(a) counts b mod 2a with b^2 = D (4a).
inline double rho_dirichlet_series(i64 D, int s)
{
    const double sd = s;
    compensated_sum L;
    for (i64 r = 1; r <= D; ++r) {
        const int chi = arith::kronecker(D, r);
        if (chi) L.add(chi * hurwitz_zeta(sd, static_cast<double>(r) / static_cast<double>(D)));
    }
    double value = hurwitz_zeta(sd, 1.0) * L.value() * std::pow(static_cast<double>(D), -sd) / hurwitz_zeta(2 * sd, 1.0);
    i64 n = 2 * D;
    for (i64 p = 2; p <= n; ++p) {
        if (n % p) continue;
        while (n % p == 0) n /= p;
        const double pd = static_cast<double>(p), ps = std::pow(pd, -sd);
        const int chi = arith::kronecker(D, p);
        const double generic = (1 - ps * ps) / ((1 - ps) * (1 - chi * ps));
        // local factor sum_e rho(p^e) p^{-es}; rho(p^e) = N(4 p^e) / 2
        double local = 1.0, pe_s = 1.0;
        i64 pe = 1;
        for (int e = 1; pe <= (i64{1} << 40) / p; ++e) {
            pe *= p;
            pe_s *= ps;
            double count;
            if (p == 2) {
                count = static_cast<double>(arith::sqrt_mod_prime_power(D, 2, e + 2).size()) / 2.0;
            } else {
                count = static_cast<double>(arith::sqrt_mod_prime_power(D, p, e).size());
            }
            local += count * pe_s;
            if (pe_s * std::max(1.0, count) * 4 * std::sqrt(static_cast<double>(pe)) < 1e-18) break;
        }
        value *= local / generic;
    }
    return value;
}

/// c_inf(k) from the Dirichlet series above (machine precision); cached.
inline double c_infinity_closed(int k, const Discriminant &disc)
{
    detail::check_k(k);
    static std::mutex mutex;
    static std::map<std::pair<int, i64>, double> cache;
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find({k, disc.value()}); it != cache.end()) return it->second;
    }
    const double v = detail::c_inf_norm(k) * rho_dirichlet_series(disc.value(), k);
    std::lock_guard lock(mutex);
    cache[{k, disc.value()}] = v;
    return v;
}

/// Constant term of F on every component: -2 c_inf(k) / C(2k-2, k-1) for even k
/// (0 for odd k, where F vanishes identically).
inline double F_constant(int k, const Discriminant &disc)
{
    if (k % 2) return 0.0;
    return -2.0 * c_infinity_closed(k, disc) / static_cast<double>(binomial(2 * k - 2, k - 1));
}

/// Constant in the splitting of G: 2 pi D^{k+1/2} c_inf(k+1) for even k, 0 for odd k.
inline double G_constant(int k, const Discriminant &disc)
{
    if (k % 2) return 0.0;
    return 2.0 * std::numbers::pi * std::pow(static_cast<double>(disc.value()), k + 0.5) * c_infinity_closed(k + 1, disc);
}

/// Jet of the local polynomial P_C on the component of tau:
/// F_constant + (-1)^k 2^{3-2k} D^{1/2-k} sum_{a < 0 < Q_tau} Q(tau,1)^{k-1}, times the parity factor.
inline Jet local_polynomial_jet(int k, const Discriminant &disc, const Point &p, int order,
                                double singular_threshold = default_singular_threshold)
{
    detail::check_k(k);
    const auto forms = support_set(p, disc, singular_threshold);
    Jet out = Jet::constant(p, order, F_constant(k, disc));
    if (k % 2) return Jet(p, order);
    const Jet t = Jet::tau(p, order);
    detail::accumulator<Jet> acc(Jet(p, order));
    for (const auto &q : forms)
        acc.add(((t * cplx(static_cast<double>(q.a)) + cplx(static_cast<double>(q.b))) * t + cplx(static_cast<double>(q.c))).pow(k - 1));
    const double c = std::pow(2.0, 3 - 2 * k) * std::pow(static_cast<double>(disc.value()), 0.5 - k);
    return out + acc.result() * cplx(c);
}

inline cplx local_polynomial(int k, const Discriminant &disc, const Point &p, double singular_threshold = default_singular_threshold)
{
    return local_polynomial_jet(k, disc, p, 0, singular_threshold).value();
}

}  // namespace lhmf
