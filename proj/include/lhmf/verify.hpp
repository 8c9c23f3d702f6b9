#pragma once

// Identity checks for F, G and the operator calculus at sample points, with
// machine-readable reports.
//
// The flip, image, interplay and Laplacian identities hold term by term, so
// both sides are evaluated over the same fixed box of forms ("paired"
// truncation) and the residual measures only the identity, not the series tail.
// Convergence itself is exercised by the modularity and cusp-space checks.

#include <algorithm>
#include <cmath>
#include <complex>
#include <iomanip>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "lhmf/errors.hpp"
#include "lhmf/jet.hpp"
#include "lhmf/operators.hpp"
#include "lhmf/point.hpp"
#include "lhmf/qforms.hpp"
#include "lhmf/series.hpp"

namespace lhmf {

constexpr int report_schema_version = 1;

struct IdentityReport {
    std::string identity_id;
    int k = 0;
    i64 D = 0;
    std::string truncation;  // "paired:B", "adaptive:eps" or "exact"
    int jet_order = 0;
    std::vector<Point> points;
    std::vector<double> residuals;
    std::vector<double> references;  // |reference side| per point
    double tolerance = 0.0;
    bool passed = false;
    std::string note;

    double max_residual() const { return residuals.empty() ? 0.0 : *std::max_element(residuals.begin(), residuals.end()); }
    void finish() { passed = max_residual() <= tolerance && std::none_of(residuals.begin(), residuals.end(), [](double r) { return std::isnan(r); }); }
};

inline void to_json(nlohmann::json &j, const IdentityReport &r)
{
    j = nlohmann::json{{"identity_id", r.identity_id},
                       {"params", {{"k", r.k}, {"D", r.D}, {"truncation", r.truncation}, {"jet_order", r.jet_order}}},
                       {"tolerance", r.tolerance},
                       {"max_residual", r.max_residual()},
                       {"passed", r.passed}};
    auto &pts = j["points"] = nlohmann::json::array();
    for (std::size_t i = 0; i < r.points.size(); ++i)
        pts.push_back({{"u", r.points[i].u}, {"v", r.points[i].v}, {"residual", r.residuals[i]}, {"reference", r.references[i]}});
    if (!r.note.empty()) j["note"] = r.note;
}

/// Relative residual when the reference exceeds 1e-3 in modulus, absolute otherwise.
inline double identity_residual(cplx lhs, cplx rhs)
{
    const double diff = std::abs(lhs - rhs), ref = std::abs(rhs);
    return ref > 1e-3 ? diff / ref : diff;
}

/// `count` points of a seeded additive (R2) low-discrepancy sequence in
/// [-1/2, 1/2) x [v0, v1], keeping those with e_d_proximity > min_proximity.
inline std::vector<Point> sample_points(const Discriminant &disc, int count, std::uint64_t seed, double v0 = 0.6, double v1 = 1.6,
                                        double min_proximity = 0.05)
{
    if (count < 0 || !(v1 > v0) || !(v0 > 0)) throw config_error("sample_points: need count >= 0 and 0 < v0 < v1");
    // plastic-number recurrence; the seed only chooses the starting offset
    constexpr double g = 1.32471795724474602596;
    constexpr double a1 = 1.0 / g, a2 = 1.0 / (g * g);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double x = unit(rng), y = unit(rng);
    std::vector<Point> out;
    for (int i = 0; static_cast<int>(out.size()) < count; ++i) {
        if (i > 1000 * (count + 1)) throw config_error("sample_points: proximity filter rejects too many points");
        x = std::fmod(x + a1, 1.0);
        y = std::fmod(y + a2, 1.0);
        const Point p(x - 0.5, v0 + (v1 - v0) * y);
        if (e_d_proximity(p, disc) > min_proximity) out.push_back(p);
    }
    return out;
}

/// Number of connected components of H \ E_D met by the points (distinct support sets).
inline int component_count(const Discriminant &disc, const std::vector<Point> &pts)
{
    std::set<std::vector<std::tuple<i64, i64, i64>>> seen;
    for (const auto &p : pts) {
        std::vector<std::tuple<i64, i64, i64>> key;
        for (const auto &q : support_set(p, disc)) key.emplace_back(q.a, q.b, q.c);
        std::sort(key.begin(), key.end());
        seen.insert(std::move(key));
    }
    return static_cast<int>(seen.size());
}

constexpr i64 default_paired_bound = 32;

namespace detail {

inline IdentityReport start_report(std::string id, int k, i64 D, std::string trunc, int order, double tol)
{
    IdentityReport r;
    r.identity_id = std::move(id);
    r.k = k;
    r.D = D;
    r.truncation = std::move(trunc);
    r.jet_order = order;
    r.tolerance = tol;
    return r;
}

inline void add_point(IdentityReport &r, const Point &p, cplx lhs, cplx rhs)
{
    r.points.push_back(p);
    r.residuals.push_back(identity_residual(lhs, rhs));
    r.references.push_back(std::abs(rhs));
}

inline std::string paired(i64 B) { return "paired:" + std::to_string(B); }

}  // namespace detail

/// flip_{2-2k}(F) = -F.
inline IdentityReport check_theorem_flip_F(int k, const Discriminant &disc, const std::vector<Point> &pts, double tol,
                                           i64 B = default_paired_bound)
{
    const int w = 2 - 2 * k, order = 2 * k - 2;
    auto r = detail::start_report("flip-F", k, disc.value(), detail::paired(B), order, tol);
    for (const auto &p : pts) {
        const auto F = eval_F(k, disc, p, TruncationParams::fixed(B), order);
        detail::add_point(r, p, flip(*F.jet, w).value(), -F.value);
    }
    r.note = "components=" + std::to_string(component_count(disc, pts));
    r.finish();
    return r;
}

/// flip of the local polynomial: flip_{2-2k}(P_C) = -P_C (finite sums, no truncation).
inline IdentityReport check_flip_local_polynomial(int k, const Discriminant &disc, const std::vector<Point> &pts, double tol)
{
    const int w = 2 - 2 * k, order = 2 * k - 2;
    auto r = detail::start_report("flip-P", k, disc.value(), "exact", order, tol);
    for (const auto &p : pts) {
        const Jet P = local_polynomial_jet(k, disc, p, order);
        detail::add_point(r, p, flip(P, w).value(), -P.value());
    }
    r.finish();
    return r;
}

/// flip_{-2k}(G) = -G (flip order 2k).
inline IdentityReport check_corollary_flip_G(int k, const Discriminant &disc, const std::vector<Point> &pts, double tol,
                                             i64 B = default_paired_bound)
{
    const int w = -2 * k, order = 2 * k;
    auto r = detail::start_report("flip-G", k, disc.value(), detail::paired(B), order, tol);
    for (const auto &p : pts) {
        const auto G = eval_G(k, disc, p, TruncationParams::fixed(B), order);
        detail::add_point(r, p, flip(*G.jet, w).value(), -G.value);
    }
    r.finish();
    return r;
}

/// xi_{2-2k} F = D^{1/2-k} f and D^{2k-1} F = -(2k-2)!/(4 pi)^{2k-1} D^{1/2-k} f.
inline std::vector<IdentityReport> check_images_F(int k, const Discriminant &disc, const std::vector<Point> &pts, double tol,
                                                  i64 B = default_paired_bound)
{
    const int w = 2 - 2 * k, order = 2 * k - 1;
    const double Dp = std::pow(static_cast<double>(disc.value()), 0.5 - k);
    const double c = factorial(2 * k - 2) / std::pow(4 * std::numbers::pi, 2 * k - 1);
    auto rx = detail::start_report("xi-F", k, disc.value(), detail::paired(B), order, tol);
    auto rb = detail::start_report("bol-F", k, disc.value(), detail::paired(B), order, tol);
    for (const auto &p : pts) {
        const auto F = eval_F(k, disc, p, TruncationParams::fixed(B), order);
        const cplx f = eval_f(k, disc, p, TruncationParams::fixed(B), series_method::box).value;
        detail::add_point(rx, p, xi(*F.jet, w), Dp * f);
        detail::add_point(rb, p, bol(*F.jet, 2 * k - 1), -c * Dp * f);
    }
    rx.finish();
    rb.finish();
    return {rx, rb};
}

/// xi_{-2k} G = D^{k+1/2} g and D^{2k+1} G = -D^{k+1/2} (2k)!/(4 pi)^{2k+1} g.
inline std::vector<IdentityReport> check_images_G(int k, const Discriminant &disc, const std::vector<Point> &pts, double tol,
                                                  i64 B = default_paired_bound)
{
    const int w = -2 * k, order = 2 * k + 1;
    const double Dp = std::pow(static_cast<double>(disc.value()), k + 0.5);
    const double c = factorial(2 * k) / std::pow(4 * std::numbers::pi, 2 * k + 1);
    auto rx = detail::start_report("xi-G", k, disc.value(), detail::paired(B), order, tol);
    auto rb = detail::start_report("bol-G", k, disc.value(), detail::paired(B), order, tol);
    for (const auto &p : pts) {
        const auto G = eval_G(k, disc, p, TruncationParams::fixed(B), order);
        const cplx g = eval_g(k, disc, p, TruncationParams::fixed(B), series_method::box).value;
        detail::add_point(rx, p, xi(*G.jet, w), Dp * g);
        detail::add_point(rb, p, bol(*G.jet, 2 * k + 1), -c * Dp * g);
    }
    rx.finish();
    rb.finish();
    return {rx, rb};
}

/// R_{2-2k}^{2k-2}(tau^{k-1}) = (2k-2)! conj(tau)^{k-1} / v^{2k-2}, and flip(1) = -1.
inline IdentityReport check_raise_power(int k, const std::vector<Point> &pts, double tol)
{
    const int n = 2 * k - 2;
    auto r = detail::start_report("raise-power", k, 0, "exact", n, tol);
    for (const auto &p : pts) {
        const cplx got = iterate_raise(Jet::tau(p, n).pow(k - 1), 2 - 2 * k, n).value();
        const cplx want = factorial(n) * std::pow(std::conj(p.tau()), k - 1) / std::pow(p.v, n);
        const cplx one = flip(Jet::constant(p, n, 1.0), 2 - 2 * k).value();
        r.points.push_back(p);
        r.residuals.push_back(std::max(identity_residual(got, want), identity_residual(one, -1.0)));
        r.references.push_back(std::abs(want));
    }
    r.finish();
    return r;
}

/// R^{2k-2}(Q(tau,1)^{k-1}) = (2k-2)!/v^{2k-2} Q(conj tau,1)^{k-1} and flip(Q^{k-1}) = -Q^{k-1}.
inline IdentityReport check_qslash_conjugation(int k, const Discriminant &disc, const std::vector<QForm> &forms,
                                               const std::vector<Point> &pts, double tol)
{
    const int n = 2 * k - 2;
    auto r = detail::start_report("qslash", k, disc.value(), "exact", n, tol);
    for (const auto &p : pts) {
        double worst = 0.0, ref = 0.0;
        const Jet t = Jet::tau(p, n);
        for (const auto &q : forms) {
            const Jet Q = ((t * cplx(static_cast<double>(q.a)) + cplx(static_cast<double>(q.b))) * t + cplx(static_cast<double>(q.c))).pow(k - 1);
            const cplx lhs = iterate_raise(Q, 2 - 2 * k, n).value();
            const cplx tb = std::conj(p.tau());
            const cplx Qbar = (static_cast<double>(q.a) * tb + static_cast<double>(q.b)) * tb + static_cast<double>(q.c);
            const cplx rhs = factorial(n) / std::pow(p.v, n) * detail::ipow(Qbar, k - 1);
            worst = std::max({worst, identity_residual(lhs, rhs), identity_residual(flip(Q, 2 - 2 * k).value(), -Q.value())});
            ref = std::max(ref, std::abs(rhs));
        }
        r.points.push_back(p);
        r.residuals.push_back(worst);
        r.references.push_back(ref);
    }
    r.finish();
    return r;
}

/// xi(flip F) = ((4 pi)^{2k-1}/(2k-2)!) D^{2k-1} F and D^{2k-1}(flip F) = ((2k-2)!/(4 pi)^{2k-1}) xi F,
/// with F jets as seeds (the second needs harmonic seeds, which F is).
inline IdentityReport check_operator_interplay(int k, const Discriminant &disc, const std::vector<Point> &pts, double tol,
                                               i64 B = default_paired_bound)
{
    const int w = 2 - 2 * k, order = 4 * k - 3;
    const double c = std::pow(4 * std::numbers::pi, 2 * k - 1) / factorial(2 * k - 2);
    auto r = detail::start_report("interplay-F", k, disc.value(), detail::paired(B), order, tol);
    for (const auto &p : pts) {
        const auto F = eval_F(k, disc, p, TruncationParams::fixed(B), order);
        const Jet flipped = flip(*F.jet, w);
        const cplx a1 = xi(flipped, w), b1 = c * bol(*F.jet, 2 * k - 1);
        const cplx a2 = bol(flipped, 2 * k - 1), b2 = xi(*F.jet, w) / c;
        r.points.push_back(p);
        r.residuals.push_back(std::max(identity_residual(a1, b1), identity_residual(a2, b2)));
        r.references.push_back(std::max(std::abs(b1), std::abs(b2)));
    }
    r.finish();
    return r;
}

/// Modularity under T and S at truncation scale, Laplacian annihilation and
/// boundedness toward the cusp.
inline std::vector<IdentityReport> check_lhmf_axioms(int k, const Discriminant &disc, const std::vector<Point> &pts,
                                                     double laplace_tol = 1e-6, i64 B = default_paired_bound)
{
    const int w = 2 - 2 * k;
    const auto trunc = default_truncation(series_fn::F, k);
    std::ostringstream eps;
    eps << "adaptive:" << trunc.stagnation_tol;
    auto mod = detail::start_report("modularity-F", k, disc.value(), eps.str(), 0, 10 * 2 * trunc.stagnation_tol);
    auto lap = detail::start_report("laplacian-F", k, disc.value(), detail::paired(B), 2, laplace_tol);
    auto cusp = detail::start_report("cusp-growth-F", k, disc.value(), eps.str(), 0, 10 * trunc.stagnation_tol);
    for (const auto &p : pts) {
        const cplx F = eval_F(k, disc, p, trunc).value;
        const cplx FT = eval_F(k, disc, Point(p.tau() + 1.0), trunc).value;
        const cplx FS = eval_F(k, disc, Point(-1.0 / p.tau()), trunc).value;
        // F(-1/tau) = tau^{2-2k} F(tau): compare at the combined tail scale
        const double res = std::max(std::abs(FT - F), std::abs(FS - std::pow(p.tau(), w) * F) / std::max(1.0, std::abs(std::pow(p.tau(), w))));
        mod.points.push_back(p);
        mod.residuals.push_back(res);
        mod.references.push_back(std::abs(F));
        const auto J = eval_F(k, disc, p, TruncationParams::fixed(B), 2);
        lap.points.push_back(p);
        lap.residuals.push_back(std::abs(laplacian(*J.jet, w)));
        lap.references.push_back(std::abs(J.value));
    }
    // toward the cusp F settles to its constant term (no growth)
    for (double v : {4.0, 8.0, 16.0}) {
        const Point p(0.23, v * std::max(1.0, disc.sqrt() / 2));
        const cplx Fv = eval_F(k, disc, p, trunc).value;
        cusp.points.push_back(p);
        cusp.residuals.push_back(std::abs(Fv - F_constant(k, disc)));
        cusp.references.push_back(std::abs(F_constant(k, disc)));
    }
    mod.finish();
    lap.finish();
    cusp.finish();
    return {mod, lap, cusp};
}

struct SuiteConfig {
    int k = 2;
    i64 D = 5;
    int points = 20;
    std::uint64_t seed = 7;
    i64 paired_bound = default_paired_bound;
    std::optional<double> tolerance;  // overrides every default tolerance
};

/// Default tolerances per identity.
inline double default_tolerance(const std::string &id, int k)
{
    if (id == "flip-F") return k <= 3 ? 1e-8 : 1e-6;
    if (id == "flip-P") return 1e-11;
    if (id == "flip-G" || id == "xi-G" || id == "bol-G") return 1e-7;
    if (id == "xi-F" || id == "bol-F" || id == "interplay-F") return 1e-8;
    if (id == "raise-power" || id == "qslash") return 1e-12;
    if (id == "laplacian-F") return 1e-6;
    throw config_error("unknown identity '" + id + "'");
}

inline const std::vector<std::string> &identity_names()
{
    static const std::vector<std::string> names{"flip-F", "flip-P", "flip-G", "images-F", "images-G", "raise-power", "qslash", "interplay-F", "axioms"};
    return names;
}

/// Run one named check ("flip-F", ..., "axioms") or every check ("all").
inline std::vector<IdentityReport> run_suite(const std::string &which, const SuiteConfig &cfg)
{
    if (cfg.k < 2) throw config_error("k must be >= 2");
    if (cfg.points < 1) throw config_error("points must be >= 1");
    const Discriminant disc(cfg.D);
    const auto pts = sample_points(disc, cfg.points, cfg.seed);
    auto tol = [&](const std::string &id) { return cfg.tolerance.value_or(default_tolerance(id, cfg.k)); };
    std::vector<IdentityReport> out;
    auto append = [&](std::vector<IdentityReport> rs) { out.insert(out.end(), rs.begin(), rs.end()); };
    const bool all = which == "all";
    bool matched = false;
    auto want = [&](const char *id) {
        const bool hit = all || which == id;
        matched = matched || hit;
        return hit;
    };
    if (want("flip-F")) out.push_back(check_theorem_flip_F(cfg.k, disc, pts, tol("flip-F"), cfg.paired_bound));
    if (want("flip-P")) out.push_back(check_flip_local_polynomial(cfg.k, disc, pts, tol("flip-P")));
    if (want("flip-G")) out.push_back(check_corollary_flip_G(cfg.k, disc, pts, tol("flip-G"), cfg.paired_bound));
    if (want("images-F")) append(check_images_F(cfg.k, disc, pts, tol("xi-F"), cfg.paired_bound));
    if (want("images-G")) append(check_images_G(cfg.k, disc, pts, tol("xi-G"), cfg.paired_bound));
    if (want("raise-power")) out.push_back(check_raise_power(cfg.k, pts, tol("raise-power")));
    if (want("qslash")) out.push_back(check_qslash_conjugation(cfg.k, disc, enumerate_forms(disc, 1), pts, tol("qslash")));
    if (want("interplay-F")) out.push_back(check_operator_interplay(cfg.k, disc, pts, tol("interplay-F"), cfg.paired_bound));
    if (want("axioms")) {
        // the modularity sub-check evaluates converged series, so it uses a few points only
        const std::vector<Point> few(pts.begin(), pts.begin() + std::min<std::size_t>(pts.size(), 3));
        append(check_lhmf_axioms(cfg.k, disc, few, cfg.tolerance.value_or(default_tolerance("laplacian-F", cfg.k)), cfg.paired_bound));
    }
    if (!matched) throw config_error("unknown identity '" + which + "'");
    return out;
}

inline nlohmann::json reports_json(const std::vector<IdentityReport> &reports, const SuiteConfig &cfg)
{
    nlohmann::json j{{"schema_version", report_schema_version},
                     {"config", {{"k", cfg.k}, {"D", cfg.D}, {"points", cfg.points}, {"seed", cfg.seed}, {"paired_bound", cfg.paired_bound}}},
                     {"reports", reports},
                     {"passed", std::all_of(reports.begin(), reports.end(), [](const auto &r) { return r.passed; })}};
    if (cfg.tolerance) j["config"]["tolerance"] = *cfg.tolerance;
    return j;
}

inline std::string reports_table(const std::vector<IdentityReport> &reports)
{
    std::ostringstream os;
    os << std::left << std::setw(16) << "identity" << std::setw(4) << "k" << std::setw(6) << "D" << std::setw(8) << "points"
       << std::setw(14) << "max_residual" << std::setw(12) << "tolerance" << "result\n";
    for (const auto &r : reports) {
        os << std::left << std::setw(16) << r.identity_id << std::setw(4) << r.k << std::setw(6) << r.D << std::setw(8) << r.points.size()
           << std::setw(14) << std::setprecision(3) << std::scientific << r.max_residual() << std::setw(12) << r.tolerance
           << std::defaultfloat << (r.passed ? "PASS" : "FAIL") << "\n";
    }
    return os.str();
}

}  // namespace lhmf
