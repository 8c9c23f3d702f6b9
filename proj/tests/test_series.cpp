#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lhmf/series.hpp"
#include "test_util.hpp"

using namespace lhmf;

namespace {

cplx delta(const Point &p)
{
    const cplx q = p.q();
    cplx prod = 1.0, qn = q;
    for (int n = 1; n < 200; ++n) {
        prod *= std::pow(1.0 - qn, 24);
        qn *= q;
    }
    return q * prod;
}

// Brute-force Q(tau,1)^{-p} box sum over all a != 0 (both signs), optionally signed.
cplx brute_inverse_sum(const Discriminant &disc, const Point &p, int pw, bool signed_by_qtau, i64 B)
{
    compensated_complex_sum s;
    for (const auto &q : enumerate_forms(disc, B)) {
        const cplx t = 1.0 / std::pow(q_value(q, p), pw);
        s.add(signed_by_qtau && q_tau(q, p) < 0 ? -t : t);
    }
    return s.value();
}

}  // namespace

TEST(Series, HurwitzZeta)
{
    EXPECT_NEAR(hurwitz_zeta(2, 1), std::numbers::pi * std::numbers::pi / 6, 1e-15);
    EXPECT_NEAR(hurwitz_zeta(4, 1), std::pow(std::numbers::pi, 4) / 90, 1e-15);
    // zeta(2, 1/2) = 3 zeta(2)
    EXPECT_NEAR(hurwitz_zeta(2, 0.5), std::numbers::pi * std::numbers::pi / 2, 1e-14);
}

TEST(Series, KroneckerSymbol)
{
    // (5/n) is the character mod 5 with chi(2) = chi(3) = -1
    const int expect5[] = {1, -1, -1, 1, 0};
    for (int n = 1; n <= 20; ++n) EXPECT_EQ(arith::kronecker(5, n), expect5[(n - 1) % 5]) << n;
    // (8/n): 0 on evens, +1 for n = +-1 mod 8, -1 for n = +-3 mod 8
    for (int n = 1; n <= 40; ++n) {
        const int want = n % 2 == 0 ? 0 : (n % 8 == 1 || n % 8 == 7 ? 1 : -1);
        EXPECT_EQ(arith::kronecker(8, n), want) << n;
    }
}

TEST(Series, CInfinityClosedFormD5)
{
    const Discriminant d5(5);
    // L(2, chi_5) = 4 pi^2 / (25 sqrt 5), hence c_inf(2) = 1 / (5 sqrt 5)
    EXPECT_NEAR(c_infinity_closed(2, d5), 1.0 / (5 * std::sqrt(5.0)), 1e-15);
}

TEST(Series, CInfinityClosedMatchesDirect)
{
    for (i64 D : {5, 8, 12, 13, 17, 21, 24, 28, 32, 60}) {
        const Discriminant disc(D);
        for (int k : {2, 3, 4, 6}) {
            const auto direct = c_infinity(k, disc, 200000);
            const double closed = c_infinity_closed(k, disc);
            EXPECT_LE(std::abs(direct.value - closed), direct.tail_bound + 1e-15) << "D=" << D << " k=" << k;
            EXPECT_LE(direct.value, closed + 1e-15);  // partial sums increase
            if (k >= 4) {
                EXPECT_NEAR(direct.value, closed, 1e-14 * closed) << "D=" << D << " k=" << k;
            }
        }
    }
}

TEST(Series, CInfinityTailBoundShrinks)
{
    const Discriminant d5(5);
    const auto a = c_infinity(4, d5, 1000), b = c_infinity(4, d5, 10000);
    EXPECT_LT(b.tail_bound, a.tail_bound);
    EXPECT_LE(std::abs(a.value - c_infinity_closed(4, d5)), a.tail_bound);
}

TEST(Series, OddWeightSeriesVanish)
{
    const Discriminant d5(5);
    const Point p(0.2, 1.3);
    const auto t = TruncationParams::fixed(64);
    EXPECT_EQ(eval_F(3, d5, p, t).value, cplx{});
    EXPECT_EQ(eval_G(3, d5, p, t).value, cplx{});
    EXPECT_EQ(eval_f(3, d5, p, t).value, cplx{});
    EXPECT_EQ(eval_g(5, d5, p, t).value, cplx{});
}

TEST(Series, PairedSumMatchesBothSigns)
{
    // the a > 0 half doubled equals the sum over both signs of a
    const Discriminant d(13);
    const Point p(0.31, 0.87);
    const auto half = eval_f(4, d, p, TruncationParams::fixed(40), series_method::box);
    const cplx full = brute_inverse_sum(d, p, 4, false, 40) * detail::f_prefactor(4, 13.0) / 2.0;
    EXPECT_LT(std::abs(half.value - full), 1e-13 * std::max(1.0, std::abs(full)));
    const auto g = eval_g(4, d, p, TruncationParams::fixed(40), series_method::box);
    const cplx gfull = brute_inverse_sum(d, p, 5, true, 40);
    EXPECT_LT(std::abs(g.value - gfull), 1e-13 * std::max(1.0, std::abs(gfull)));
}

TEST(Series, RowMethodMatchesLatticeSums)
{
    // rows sum b exactly, so they agree with a box sum whose b-range is far wider
    const Discriminant d(5);
    const Point p(0.13, 0.9);
    for (int k : {4, 6}) {
        const double pref = detail::f_prefactor(k, 5.0);
        compensated_complex_sum s;
        for (i64 a = 1; a <= 12; ++a)
            for (const auto &r : arith::discriminant_roots(5, a))
                for (i64 blk = -20000; blk <= 20000; ++blk) {
                    const i64 b = r + 2 * a * blk;
                    const QForm q{a, b, (b * b - 5) / (4 * a)};
                    s.add(1.0 / std::pow(q_value(q, p), k));
                }
        const cplx rows = detail::row_region(d, p, k, 12, 0) * pref;
        EXPECT_LT(std::abs(rows - s.value() * pref), 1e-9 * std::abs(rows)) << k;
    }
}

TEST(Series, CuspFormsInTrivialSpacesVanish)
{
    // S_4 = {0}, so f_{2,5} vanishes identically
    const Discriminant d5(5);
    for (const Point p : {Point(0.1, 1.1), Point(-0.3, 0.95), Point(0.45, 1.6)}) {
        const auto r = eval_f(2, d5, p, default_truncation(series_fn::f, 2));
        EXPECT_LT(std::abs(r.value), 1e-8) << r.value;
    }
}

TEST(Series, WeightTwelveIsMultipleOfDelta)
{
    const Discriminant d5(5);
    const auto t = default_truncation(series_fn::f, 6);
    std::vector<cplx> ratios;
    for (const Point p : {Point(0.1, 1.1), Point(-0.3, 0.95), Point(0.45, 1.3), Point(0.0, 0.8)})
        ratios.push_back(eval_f(6, d5, p, t).value / delta(p));
    for (const auto &r : ratios) EXPECT_LT(std::abs(r - ratios[0]), 1e-8 * std::abs(ratios[0])) << r;
}

TEST(Series, GRowsMatchBox)
{
    const Discriminant d(8);
    const Point p(0.21, 0.7);
    const auto rows = eval_g(4, d, p, default_truncation(series_fn::g, 4));
    const auto box = eval_g(4, d, p, TruncationParams::fixed(4096), series_method::box);
    EXPECT_LT(std::abs(rows.value - box.value), 1e-6 * std::abs(rows.value));
}

TEST(Series, FAboveGeodesicsIsConstant)
{
    const Discriminant d5(5);
    const auto r = eval_F(2, d5, Point(0.1, 2.0), default_truncation(series_fn::F, 2));
    EXPECT_NEAR(r.value.real(), -1.0 / (5 * std::sqrt(5.0)), 1e-8);
    EXPECT_NEAR(r.value.imag(), 0.0, 1e-8);
    EXPECT_NEAR(local_polynomial(2, d5, Point(0.1, 2.0)).real(), -1.0 / (5 * std::sqrt(5.0)), 1e-15);
}

TEST(Series, FModularity)
{
    const Discriminant d5(5);
    const int k = 4;
    const Point p(0.17, 0.83);
    const auto t = default_truncation(series_fn::F, k);
    const cplx F0 = eval_F(k, d5, p, t).value;
    const cplx Ft = eval_F(k, d5, Point(p.tau() + 1.0), t).value;
    const cplx Fs = eval_F(k, d5, Point(-1.0 / p.tau()), t).value;
    EXPECT_LT(std::abs(Ft - F0), 2 * t.stagnation_tol);
    // weight 2 - 2k: F(-1/tau) = tau^{2-2k} F(tau)
    EXPECT_LT(std::abs(Fs - std::pow(p.tau(), 2 - 2 * k) * F0), 2 * t.stagnation_tol * (1 + std::pow(std::abs(p.tau()), 2 - 2 * k)));
}

TEST(Series, JetConstantTermMatchesValue)
{
    const Discriminant d(13);
    const Point p(0.07, 0.66);
    const auto t = TruncationParams::fixed(64);
    for (int k : {2, 4}) {
        const auto v = eval_F(k, d, p, t), j = eval_F(k, d, p, t, 3);
        // jet terms are formed in extended precision, values in double
        EXPECT_LE(std::abs(v.value - j.jet->value()), 1e-13 * std::abs(v.value));
        const auto gv = eval_G(k, d, p, t), gj = eval_G(k, d, p, t, 3);
        EXPECT_LE(std::abs(gv.value - gj.jet->value()), 1e-13 * std::abs(gv.value));
    }
}

TEST(Series, JetDerivativeMatchesFiniteDifference)
{
    const Discriminant d(5);
    const Point p(0.3, 0.74);
    const auto t = TruncationParams::fixed(64);
    const auto j = eval_G(4, d, p, t, 2);
    const double h = 1e-5;
    const cplx fu = (eval_G(4, d, Point(p.u + h, p.v), t).value - eval_G(4, d, Point(p.u - h, p.v), t).value) / (2 * h);
    const cplx fv = (eval_G(4, d, Point(p.u, p.v + h), t).value - eval_G(4, d, Point(p.u, p.v - h), t).value) / (2 * h);
    // d/du = d_tau + d_taubar, d/dv = i (d_tau - d_taubar)
    const cplx c10 = (*j.jet)(1, 0), c01 = (*j.jet)(0, 1);
    EXPECT_LT(std::abs(c10 + c01 - fu), 1e-6 * std::abs(fu));
    EXPECT_LT(std::abs(cplx(0, 1) * (c10 - c01) - fv), 1e-6 * std::abs(fv));
}

TEST(Series, LocalPolynomialConstantAboveGeodesics)
{
    for (i64 D : {5, 8, 13}) {
        const Discriminant disc(D);
        for (int k : {2, 4, 6}) {
            const cplx P = local_polynomial(k, disc, Point(0.3, disc.sqrt() / 2 + 0.1));
            EXPECT_NEAR(P.real(), F_constant(k, disc), 1e-15);
            EXPECT_EQ(P.imag(), 0.0);
        }
    }
}

TEST(Series, ConvergenceFailureReported)
{
    const Discriminant d5(5);
    TruncationParams t;
    t.initial_bound = 4;
    t.max_bound = 16;
    t.stagnation_tol = 1e-15;
    try {
        eval_F(2, d5, Point(0.1, 0.9), t);
        FAIL() << "expected convergence_error";
    } catch (const convergence_error &e) {
        EXPECT_EQ(e.bound(), 16);
        EXPECT_GT(e.tail(), 0.0);
    }
}

TEST(Series, NearSingularRejected)
{
    const Discriminant d5(5);
    // tau on the geodesic of [1, 1, -1]: center -1/2, radius sqrt5/2
    const Point p(-0.5, std::sqrt(5.0) / 2);
    EXPECT_THROW(eval_F(4, d5, p, TruncationParams::fixed(16)), near_singular_error);
    EXPECT_THROW(eval_G(4, d5, p, TruncationParams::fixed(16)), near_singular_error);
}

TEST(Series, InvalidConfig)
{
    const Discriminant d5(5);
    const Point p(0.1, 1.0);
    EXPECT_THROW(eval_F(1, d5, p, TruncationParams::fixed(16)), config_error);
    TruncationParams bad;
    bad.initial_bound = 0;
    EXPECT_THROW(eval_F(2, d5, p, bad), config_error);
}

TEST(Series, MirrorSymmetry)
{
    // [a,b,c] -> [a,-b,c] maps Q(tau) to conj(Q(-conj tau)) and keeps Q_tau
    const Discriminant d5(5);
    const Point p(0.27, 0.81), m(-0.27, 0.81);
    const auto tg = default_truncation(series_fn::g, 2);
    EXPECT_LT(std::abs(eval_g(2, d5, m, tg).value - std::conj(eval_g(2, d5, p, tg).value)), 1e-12);
    const auto tG = TruncationParams::fixed(128);
    const cplx G = eval_G(4, d5, p, tG).value, Gm = eval_G(4, d5, m, tG).value;
    EXPECT_LT(std::abs(Gm - std::conj(G)), 1e-12 * std::abs(G));
    const cplx Gi = eval_G(4, d5, Point(0.0, 0.77), tG).value;
    EXPECT_LT(std::abs(Gi.imag()), 1e-12 * std::abs(Gi));
}

TEST(Series, GStagnatesAtSmallK)
{
    const Discriminant d5(5);
    const auto t = default_truncation(series_fn::g, 2);
    const auto r = eval_g(2, d5, Point(0.3, 0.9), t);
    EXPECT_LE(r.tail_estimate, t.stagnation_tol);
}

TEST(Series, FTranslationAndDoubling)
{
    const Discriminant d5(5);
    const Point p(0.2, 0.85);
    const auto t = default_truncation(series_fn::f, 6);
    const auto a = eval_f(6, d5, p, t), b = eval_f(6, d5, Point(1.2, 0.85), t);
    EXPECT_LT(std::abs(a.value - b.value), 1e-9);
    TruncationParams twice = t;
    twice.initial_bound = a.bound_used;
    EXPECT_LT(std::abs(eval_f(6, d5, p, twice).value - a.value), 1e-9);
}

TEST(Series, CInfinityLeadingTerm)
{
    const Discriminant d5(5);
    for (int k = 2; k <= 6; ++k) {
        const auto c = c_infinity(k, d5, 1);
        EXPECT_DOUBLE_EQ(c.value, 1.0 / (std::pow(2.0, 2 * k - 2) * (2 * k - 1)));
        EXPECT_LE(c_infinity(k, d5, 100).value, c_infinity(k, d5, 200).value);
    }
}
