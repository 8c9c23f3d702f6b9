#pragma once

// Fourier coefficients of periodic cusp-form evaluators by horocycle DFT, the
// holomorphic and non-holomorphic Eichler integrals built from them, and the
// splitting of F and G into Eichler integrals plus a local polynomial.

#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <vector>

#include "json.hpp"
#include "lhmf/errors.hpp"
#include "lhmf/jet.hpp"
#include "lhmf/point.hpp"
#include "lhmf/qforms.hpp"
#include "lhmf/series.hpp"
#include "lhmf/specfun.hpp"
#include "lhmf/summation.hpp"

namespace lhmf {

struct CuspExpansion {
    int weight = 0;                 // 2k
    double height = 0.0;            // extraction height v0
    double check_height = 0.0;      // second height used for the error estimate
    std::vector<cplx> coeffs;       // c(1..N) stored at index n-1
    std::vector<double> errors;     // |c_{v0}(n) - c_{v0+1/4}(n)|
    double tolerance = 0.0;         // relative tolerance of the consistency flag
    int reliable = 0;               // leading coefficients meeting the tolerance
    bool consistent = false;        // every coefficient meets the tolerance

    int size() const { return static_cast<int>(coeffs.size()); }
};

inline void to_json(nlohmann::json &j, const CuspExpansion &e)
{
    j = nlohmann::json{{"weight", e.weight}, {"height", e.height}, {"check_height", e.check_height},
                       {"tolerance", e.tolerance}, {"reliable", e.reliable}, {"consistent", e.consistent}};
    auto &cs = j["coefficients"] = nlohmann::json::array();
    for (std::size_t n = 0; n < e.coeffs.size(); ++n)
        cs.push_back({{"n", n + 1}, {"re", e.coeffs[n].real()}, {"im", e.coeffs[n].imag()}, {"error", e.errors[n]}});
}

using PointFunction = std::function<cplx(const Point &)>;

namespace detail {

inline std::vector<cplx> horocycle_dft(const PointFunction &f, double v0, int N, int M)
{
    // samples are independent; the DFT itself runs in fixed order
    auto samples = parallel_blocks<cplx>(static_cast<std::size_t>(M), [&](std::size_t j) {
        return f(Point(static_cast<double>(j) / M, v0));
    });
    std::vector<cplx> out(static_cast<std::size_t>(N));
    for (int n = 1; n <= N; ++n) {
        compensated_complex_sum s;
        for (int j = 0; j < M; ++j)
            s.add(samples[static_cast<std::size_t>(j)] * std::polar(1.0, -2 * std::numbers::pi * static_cast<double>((static_cast<long long>(n) * j) % M) / M));
        out[static_cast<std::size_t>(n - 1)] = s.value() / static_cast<double>(M) * std::exp(2 * std::numbers::pi * n * v0);
    }
    return out;
}

}  // namespace detail

/// c(n) = e^{2 pi n v0} int_0^1 f(u + i v0) e^{-2 pi i n u} du by an M-point
/// trapezoid rule, n = 1..N, with the error estimated from a second height v0 + 1/4.
/// Coefficient noise grows like e^{2 pi n v0}, so large n are only usable at
/// heights v >= v0, where q^n cancels that growth.
inline CuspExpansion fourier_coefficients(const PointFunction &f, int k, double v0, int N, int M = 64, double tol = 1e-9)
{
    if (k < 1) throw config_error("fourier_coefficients: k must be >= 1");
    if (!(v0 > 0)) throw config_error("fourier_coefficients: v0 must be > 0");
    if (N < 1 || M <= 2 * N) throw config_error("fourier_coefficients: need N >= 1 and M > 2N");
    CuspExpansion e;
    e.weight = 2 * k;
    e.height = v0;
    e.check_height = v0 + 0.25;
    e.tolerance = tol;
    e.coeffs = detail::horocycle_dft(f, v0, N, M);
    const auto check = detail::horocycle_dft(f, e.check_height, N, M);
    e.errors.resize(static_cast<std::size_t>(N));
    e.reliable = 0;
    bool leading = true;
    for (int n = 0; n < N; ++n) {
        const auto i = static_cast<std::size_t>(n);
        e.errors[i] = std::abs(e.coeffs[i] - check[i]);
        const bool ok = e.errors[i] <= tol * std::abs(e.coeffs[i]);
        if (ok && leading) ++e.reliable;
        leading = leading && ok;
    }
    e.consistent = e.reliable == N;
    return e;
}

/// Expansion with the given coefficients c(1), c(2), ... (no extraction error).
inline CuspExpansion make_expansion(int weight, std::vector<cplx> coeffs)
{
    CuspExpansion e;
    e.weight = weight;
    e.errors.assign(coeffs.size(), 0.0);
    e.coeffs = std::move(coeffs);
    e.reliable = e.size();
    e.consistent = true;
    return e;
}

struct EichlerValue {
    cplx value{};
    double tail_estimate = 0.0;
};

namespace detail {

inline int half_weight(const CuspExpansion &e)
{
    if (e.weight < 2 || e.weight % 2) throw config_error("expansion weight must be a positive even integer");
    return e.weight / 2;
}

// |c(N)| N^{1-2k} |q|^N |q| / (1 - |q|): the next terms continued geometrically.
inline double eichler_tail(const CuspExpansion &e, int k, double v, double poly)
{
    if (e.coeffs.empty()) return 0.0;
    const int N = e.size();
    const double aq = std::exp(-2 * std::numbers::pi * v);
    return std::abs(e.coeffs.back()) * std::pow(N, 1.0 - 2 * k) * std::pow(aq, N + 1) / (1 - aq) * poly;
}

// q^n as a holomorphic jet: c(i, 0) = (2 pi i n)^i / i! q^n.
inline Jet q_power_jet(const Point &p, int order, int n)
{
    Jet out(p, order);
    const cplx qn = std::exp(cplx(0, 2 * std::numbers::pi * n) * p.tau());
    cplx c = qn;
    for (int i = 0; i <= order; ++i) {
        out(i, 0) = c;
        c *= cplx(0, 2 * std::numbers::pi * n) / static_cast<double>(i + 1);
    }
    return out;
}

}  // namespace detail

/// E_f(tau) = sum c(n) n^{1-2k} q^n.
inline EichlerValue eval_holomorphic_eichler(const CuspExpansion &e, const Point &p)
{
    const int k = detail::half_weight(e);
    compensated_complex_sum s;
    const cplx q = p.q();
    cplx qn = 1.0;
    for (int n = 1; n <= e.size(); ++n) {
        qn *= q;
        s.add(e.coeffs[static_cast<std::size_t>(n - 1)] * std::pow(static_cast<double>(n), 1.0 - 2 * k) * qn);
    }
    return {s.value(), detail::eichler_tail(e, k, p.v, 1.0)};
}

inline Jet holomorphic_eichler_jet(const CuspExpansion &e, const Point &p, int order)
{
    const int k = detail::half_weight(e);
    detail::accumulator<Jet> acc(Jet(p, order));
    for (int n = 1; n <= e.size(); ++n)
        acc.add(detail::q_power_jet(p, order, n) * (e.coeffs[static_cast<std::size_t>(n - 1)] * std::pow(static_cast<double>(n), 1.0 - 2 * k)));
    return acc.result();
}

/// The defining integral (2i)^{1-2k} int_{-conj tau}^{i inf} f^c(z) (z + tau)^{2k-2} dz,
/// f^c(z) = conj(f(-conj z)) = sum conj(c(n)) e^{2 pi i n z}, along the vertical
/// ray z = -conj(tau) + i t with composite Gauss-Legendre panels doubled to `tol`.
inline cplx eichler_ray_integral(const CuspExpansion &e, const Point &p, double tol = 1e-11)
{
    const int k = detail::half_weight(e);
    const double pi = std::numbers::pi;
    // cut the ray where e^{-2 pi t} (1 + t / 2v)^{2k-2} has decayed below 1e-20
    double T = 1.0;
    while (-2 * pi * T + (2 * k - 2) * std::log1p(T / (2 * p.v)) > std::log(1e-20)) T *= 2;
    auto integrand = [&](double t) {
        const cplx z(-p.u, p.v + t);
        const cplx qz = std::exp(cplx(0, 2 * pi) * z);
        cplx fc{}, qn = 1.0;
        for (int n = 1; n <= e.size(); ++n) {
            qn *= qz;
            fc += std::conj(e.coeffs[static_cast<std::size_t>(n - 1)]) * qn;
        }
        return fc * detail::ipow(cplx(0, 2 * p.v + t), 2 * k - 2) * cplx(0, 1);
    };
    auto quad = [&](int panels) {
        cplx re = gauss_legendre<cplx>([&](double t) { return integrand(t); }, 0.0, T, panels);
        return re;
    };
    int panels = 8;
    cplx prev = quad(panels);
    for (;;) {
        panels *= 2;
        const cplx cur = quad(panels);
        if (std::abs(cur - prev) <= tol * std::max(std::abs(cur), 1e-300) || std::abs(cur - prev) == 0.0)
            return std::pow(cplx(0, 2), 1 - 2 * k) * cur;
        if (panels >= 1 << 14) {
            throw convergence_error("eichler_ray_integral: panel doubling did not settle", panels, std::abs(cur - prev));
        }
        prev = cur;
    }
}

namespace detail {

// sum conj(c(n)) n^{1-2k} Gamma(2k-1, 4 pi n v) q^{-n}, without normalisation.
inline cplx eichler_gamma_series(const CuspExpansion &e, int k, const Point &p)
{
    const double pi = std::numbers::pi;
    compensated_complex_sum s;
    for (int n = 1; n <= e.size(); ++n) {
        // Gamma(., 4 pi n v) carries e^{-4 pi n v}; combine with |q|^{-n} = e^{2 pi n v}
        const double g = incomplete_gamma_int(2 * k - 1, 4 * pi * n * p.v) * std::exp(2 * pi * n * p.v);
        s.add(std::conj(e.coeffs[static_cast<std::size_t>(n - 1)]) * std::pow(static_cast<double>(n), 1.0 - 2 * k) * g *
              std::polar(1.0, -2 * pi * n * p.u));
    }
    return s.value();
}

}  // namespace detail

/// Normalisation of the incomplete-Gamma series relative to the defining
/// integral, obtained by matching the two on a single-mode expansion at five
/// points (cached per weight). Throws if the five ratios disagree.
inline cplx eichler_series_normalisation(int k)
{
    static std::mutex mutex;
    static std::map<int, cplx> cache;
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(k); it != cache.end()) return it->second;
    }
    const auto e = make_expansion(2 * k, {cplx(1.0)});
    const Point pts[] = {{0.0, 0.7}, {0.13, 0.9}, {-0.31, 1.1}, {0.42, 1.4}, {0.27, 2.0}};
    std::vector<cplx> ratios;
    for (const auto &p : pts) ratios.push_back(eichler_ray_integral(e, p, 1e-13) / detail::eichler_gamma_series(e, k, p));
    cplx mean{};
    for (const auto &r : ratios) mean += r / 5.0;
    for (const auto &r : ratios)
        if (std::abs(r - mean) > 1e-9 * std::abs(mean)) throw convergence_error("eichler_series_normalisation: inconsistent matching", k, std::abs(r - mean));
    std::lock_guard lock(mutex);
    cache[k] = mean;
    return mean;
}

/// Sign that makes xi_{2-2k}(f*) = f: the defining integral as written yields -f.
constexpr double nonholomorphic_eichler_sign = -1.0;

enum class eichler_path { integral, series };

/// f*(tau), normalised so that xi_{2-2k} f* = f.
inline EichlerValue eval_nonholomorphic_eichler(const CuspExpansion &e, const Point &p, eichler_path path = eichler_path::series)
{
    const int k = detail::half_weight(e);
    // Gamma(2k-1, x) <= (2k-2)! e^{-x} (1+x)^{2k-2}, so the tail matches the holomorphic one up to that factor
    const double poly = std::pow(1 + 4 * std::numbers::pi * (e.size() + 1) * p.v, 2 * k - 2);
    const double tail = detail::eichler_tail(e, k, p.v, poly);
    if (path == eichler_path::integral) return {nonholomorphic_eichler_sign * eichler_ray_integral(e, p), tail};
    return {nonholomorphic_eichler_sign * eichler_series_normalisation(k) * detail::eichler_gamma_series(e, k, p), tail};
}

/// Jet of f*: Gamma(2k-1, 4 pi n v) q^{-n} = (2k-2)! P(4 pi n v) conj(q^n) with
/// P the degree-(2k-2) exponential Taylor polynomial.
inline Jet nonholomorphic_eichler_jet(const CuspExpansion &e, const Point &p, int order)
{
    const int k = detail::half_weight(e);
    const cplx norm = nonholomorphic_eichler_sign * eichler_series_normalisation(k) * factorial(2 * k - 2);
    const Jet V = Jet::imag_part(p, order);
    detail::accumulator<Jet> acc(Jet(p, order));
    for (int n = 1; n <= e.size(); ++n) {
        const Jet X = V * cplx(4 * std::numbers::pi * n);
        Jet P = Jet::constant(p, order, 1.0 / factorial(2 * k - 2));
        for (int j = 2 * k - 3; j >= 0; --j) P = P * X + cplx(1.0 / factorial(j));
        const cplx c = std::conj(e.coeffs[static_cast<std::size_t>(n - 1)]) * std::pow(static_cast<double>(n), 1.0 - 2 * k);
        acc.add(P * detail::q_power_jet(p, order, n).conj() * c);
    }
    return acc.result() * norm;
}

/// Expansion of f_{k,D} extracted at height v0.
inline CuspExpansion cusp_expansion_f(int k, const Discriminant &disc, double v0, int N, int M = 64,
                                      const std::optional<TruncationParams> &t = std::nullopt)
{
    // extraction noise is amplified by e^{2 pi n v0}; rows converge like A^{1-k}, so tighten for k >= 4
    auto trunc = default_truncation(series_fn::f, k);
    if (k >= 4) trunc.stagnation_tol = 1e-13;
    trunc = t.value_or(trunc);
    return fourier_coefficients([&](const Point &p) { return eval_f(k, disc, p, trunc).value; }, k, v0, N, M);
}

/// Expansion of g_{k+1,D} above all geodesics (v0 > sqrt D / 2), weight 2k+2.
inline CuspExpansion cusp_expansion_g(int k, const Discriminant &disc, double v0, int N, int M = 64,
                                      const std::optional<TruncationParams> &t = std::nullopt)
{
    if (!(v0 > disc.sqrt() / 2)) throw config_error("cusp_expansion_g: extraction height must exceed sqrt(D)/2");
    const auto trunc = t.value_or(default_truncation(series_fn::g, k));
    return fourier_coefficients([&](const Point &p) { return eval_g(k, disc, p, trunc).value; }, k + 1, v0, N, M);
}

struct SplittingResult {
    cplx lhs{};       // F (or G)
    cplx rhs{};       // sum of the pieces
    cplx nonholomorphic{}, holomorphic{}, polynomial{};
    double residual = 0.0;
    double scale = 0.0;  // max modulus among the pieces, for relative reporting
    double tail_estimate = 0.0;
};

/// |F - (D^{1/2-k} f* - D^{1/2-k} (2k-2)!/(4 pi)^{2k-1} E_f + P_C)| at tau.
inline SplittingResult verify_splitting(int k, const Discriminant &disc, const Point &p, const CuspExpansion &fexp,
                                        const std::optional<TruncationParams> &t = std::nullopt)
{
    if (fexp.weight != 2 * k) throw config_error("verify_splitting: expansion weight must be 2k");
    const double Dp = std::pow(static_cast<double>(disc.value()), 0.5 - k);
    const auto F = eval_F(k, disc, p, t.value_or(default_truncation(series_fn::F, k)));
    const auto fs = eval_nonholomorphic_eichler(fexp, p);
    const auto E = eval_holomorphic_eichler(fexp, p);
    SplittingResult r;
    r.lhs = F.value;
    r.nonholomorphic = Dp * fs.value;
    r.holomorphic = -Dp * factorial(2 * k - 2) / std::pow(4 * std::numbers::pi, 2 * k - 1) * E.value;
    r.polynomial = local_polynomial(k, disc, p);
    r.rhs = r.nonholomorphic + r.holomorphic + r.polynomial;
    r.residual = std::abs(r.lhs - r.rhs);
    r.scale = std::max({std::abs(r.lhs), std::abs(r.nonholomorphic), std::abs(r.holomorphic), std::abs(r.polynomial)});
    r.tail_estimate = F.tail_estimate + Dp * (fs.tail_estimate + E.tail_estimate);
    return r;
}

/// |G - (G_constant - D^{k+1/2} (2k)!/(4 pi)^{2k+1} E_g + D^{k+1/2} g*)| for v > sqrt D / 2.
inline SplittingResult verify_splitting_G(int k, const Discriminant &disc, const Point &p, const CuspExpansion &gexp,
                                          const std::optional<TruncationParams> &t = std::nullopt)
{
    if (gexp.weight != 2 * k + 2) throw config_error("verify_splitting_G: expansion weight must be 2k+2");
    if (!(p.v > disc.sqrt() / 2)) throw config_error("verify_splitting_G: requires v > sqrt(D)/2");
    const double Dp = std::pow(static_cast<double>(disc.value()), k + 0.5);
    const auto G = eval_G(k, disc, p, t.value_or(default_truncation(series_fn::G, k)));
    const auto gs = eval_nonholomorphic_eichler(gexp, p);
    const auto E = eval_holomorphic_eichler(gexp, p);
    SplittingResult r;
    r.lhs = G.value;
    r.nonholomorphic = Dp * gs.value;
    r.holomorphic = -Dp * factorial(2 * k) / std::pow(4 * std::numbers::pi, 2 * k + 1) * E.value;
    r.polynomial = G_constant(k, disc);
    r.rhs = r.nonholomorphic + r.holomorphic + r.polynomial;
    r.residual = std::abs(r.lhs - r.rhs);
    r.scale = std::max({std::abs(r.lhs), std::abs(r.nonholomorphic), std::abs(r.holomorphic), std::abs(r.polynomial)});
    r.tail_estimate = G.tail_estimate + Dp * (gs.tail_estimate + E.tail_estimate);
    return r;
}

}  // namespace lhmf
