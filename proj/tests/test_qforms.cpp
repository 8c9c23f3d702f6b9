#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <tuple>

#include "test_util.hpp"

using namespace lhmf;

namespace {

// Exhaustive triple loop, independent of the root tables.
std::vector<QForm> brute_forms(i64 D, i64 amax, double bmax)
{
    std::vector<QForm> out;
    const i64 bm = static_cast<i64>(std::floor(bmax));
    for (i64 A = 1; A <= amax; ++A)
        for (i64 a : {-A, A})
            for (i64 b = -bm; b <= bm; ++b)
                if ((b * b - D) % (4 * a) == 0) out.push_back({a, b, (b * b - D) / (4 * a)});
    return out;
}

double brute_proximity(const Point &p, i64 D, i64 amax, i64 bmax)
{
    double best = INFINITY;
    for (const auto &q : brute_forms(D, amax, static_cast<double>(bmax))) best = std::min(best, std::abs(q_tau(q, p)) / std::sqrt(double(D)));
    return best;
}

}  // namespace

TEST(QForms, Discriminant)
{
    EXPECT_EQ(discriminant({1, 1, -1}), 5);
    EXPECT_EQ(discriminant({1, 0, 1}), -4);
    EXPECT_EQ(discriminant({2, 3, 1}), 1);
    EXPECT_THROW(Discriminant(4), config_error);
    EXPECT_THROW(Discriminant(7), config_error);
    EXPECT_THROW(Discriminant(-3), config_error);
    EXPECT_NO_THROW(Discriminant(5));
    EXPECT_NO_THROW(Discriminant(8));
}

TEST(QForms, Evaluation)
{
    const Point i(0, 1);
    EXPECT_EQ(q_value({1, 1, -1}, i), std::complex<double>(-2, 1));
    EXPECT_EQ(q_value({1, 0, -1}, i), std::complex<double>(-2, 0));
    EXPECT_EQ(q_value({-1, -1, 1}, i), std::complex<double>(2, -1));
    EXPECT_EQ(q_tau({1, 1, -1}, i), 0.0);
    EXPECT_EQ(q_tau({1, 0, -1}, Point(0, 2)), 1.5);
    EXPECT_EQ(q_tau({-1, 1, 1}, i), 0.0);
}

TEST(QForms, EnumerateSmallBox)
{
    const auto forms = enumerate_forms(Discriminant(5), 1);
    const std::vector<QForm> want{{-1, -3, -1}, {-1, -1, 1}, {-1, 1, 1}, {-1, 3, -1}, {1, -3, 1}, {1, -1, -1}, {1, 1, -1}, {1, 3, 1}};
    EXPECT_EQ(forms, want);
    for (const auto &q : forms) EXPECT_NE(q.a, 0);
}

TEST(QForms, EnumerateMatchesBruteForce)
{
    for (i64 D : {5, 8, 12, 13, 17, 60}) {
        for (i64 B : {1, 3, 10, 25}) {
            const Discriminant disc(D);
            auto got = enumerate_forms(disc, B);
            auto want = brute_forms(D, B, 2.0 * B + std::sqrt(double(D)));
            auto key = [](const QForm &q) { return std::make_tuple(std::abs(q.a), q.a, q.b); };
            std::sort(want.begin(), want.end(), [&](auto &x, auto &y) { return key(x) < key(y); });
            ASSERT_EQ(got, want) << "D=" << D << " B=" << B;
            for (const auto &q : got) {
                EXPECT_EQ(discriminant(q), D);
                EXPECT_NE(std::find(got.begin(), got.end(), -q), got.end());
            }
        }
    }
}

TEST(QForms, Geodesic)
{
    auto g = geodesic({1, 1, -1});
    EXPECT_DOUBLE_EQ(g.center, -0.5);
    EXPECT_DOUBLE_EQ(g.radius, std::sqrt(5.0) / 2);
    g = geodesic({-1, 1, 1});
    EXPECT_DOUBLE_EQ(g.center, 0.5);
    EXPECT_DOUBLE_EQ(g.radius, std::sqrt(5.0) / 2);
    EXPECT_DOUBLE_EQ(geodesic({3, 7, 2}).radius, geodesic({-3, -7, -2}).radius);
    EXPECT_THROW(geodesic({0, 1, 1}), config_error);
    // points on the semicircle have Q_tau = 0
    for (double t : {0.3, 1.0, 2.0}) {
        const Point p(g.center + g.radius * std::cos(t), g.radius * std::sin(t));
        EXPECT_NEAR(q_tau({-1, 1, 1}, p), 0.0, 1e-14);
    }
}

TEST(QForms, ProximityMatchesBruteForce)
{
    const Discriminant d5(5);
    EXPECT_EQ(e_d_proximity(Point(0, 1), d5), 0.0);
    const Point p(0.1, 1.3);
    const double got = e_d_proximity(p, d5);
    EXPECT_GT(got, 0.0);
    EXPECT_DOUBLE_EQ(got, brute_proximity(p, 5, 1, 6));  // |a| <= ceil(sqrt5 / 2.6)
    EXPECT_DOUBLE_EQ(got, brute_proximity(p, 5, 60, 300));

    std::mt19937_64 rng(11);
    for (i64 D : {5, 8, 13}) {
        const Discriminant disc(D);
        for (int t = 0; t < 200; ++t) {
            const Point q = test::random_point(rng, -1.0, 1.0, 0.08, 3.0);
            const i64 amax = static_cast<i64>(std::ceil(std::sqrt(double(D)) / (2 * q.v))) + 40;
            EXPECT_DOUBLE_EQ(e_d_proximity(q, disc), brute_proximity(q, D, amax, 4 * amax + 10)) << q.u << "+" << q.v << "i";
        }
    }
}

TEST(QForms, SupportSetEmptyAboveApex)
{
    std::mt19937_64 rng(3);
    for (i64 D : {5, 8, 12}) {
        const Discriminant disc(D);
        for (int t = 0; t < 100; ++t) {
            const Point p = test::random_point(rng, -3, 3, disc.sqrt() / 2 + 1e-3, 5.0);
            EXPECT_TRUE(support_set(p, disc).empty());
        }
    }
}

TEST(QForms, SupportSetMatchesBruteFilter)
{
    const Discriminant d5(5);
    const Point p(0.25, 0.3);
    std::vector<QForm> want;
    for (const auto &q : enumerate_forms(d5, 4))
        if (q.a < 0 && q_tau(q, p) > 0) want.push_back(q);
    EXPECT_EQ(support_set(p, d5), want);
    EXPECT_FALSE(want.empty());
}

TEST(QForms, SupportSetRandomBruteForce)
{
    std::mt19937_64 rng(5);
    int checked = 0;
    for (i64 D : {5, 8, 13}) {
        const Discriminant disc(D);
        while (checked < 1000 * (D == 5 ? 1 : D == 8 ? 2 : 3)) {
            const Point p = test::random_point(rng, -2, 2, 0.05, 1.5);
            if (e_d_proximity(p, disc) < 1e-6) continue;
            ++checked;
            const i64 amax = static_cast<i64>(std::ceil(disc.sqrt() / (2 * p.v)));
            std::vector<QForm> want;
            for (const auto &q : brute_forms(D, amax, 4.0 * amax * 3 + 10))
                if (q.a < 0 && q_tau(q, p) > 0) want.push_back(q);
            ASSERT_EQ(support_set(p, disc), want);
        }
    }
}

TEST(QForms, SupportSetNearSingularThrows)
{
    EXPECT_THROW(support_set(Point(0, 1), Discriminant(5)), near_singular_error);
}

TEST(QForms, NormIdentity)
{
    // |Q(tau,1)|^2 = v^2 (D + Q_tau^2)
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<i64> A(1, 40), Bd(-200, 200);
    int n = 0;
    for (i64 D : {5, 8, 12, 13}) {
        const auto forms = enumerate_forms(Discriminant(D), 40);
        std::uniform_int_distribution<std::size_t> pick(0, forms.size() - 1);
        for (int t = 0; t < 2500; ++t, ++n) {
            const QForm q = forms[pick(rng)];
            const Point p = test::random_point(rng, -3, 3, 0.01, 4);
            const double lhs = std::norm(q_value(q, p));
            const double qt = q_tau(q, p);
            const double rhs = p.v * p.v * (double(D) + qt * qt);
            EXPECT_LE(std::abs(lhs - rhs), 1e-12 * rhs);
        }
    }
    EXPECT_EQ(n, 10000);
}

TEST(QForms, Slash)
{
    const JetFunction id = [](Point p, int N) { return Jet::tau(p, N); };
    const Point i(0, 1);
    EXPECT_EQ(slash(id, Mat2{}, -2)(i, 0).value(), std::complex<double>(0, 1));
    const JetFunction one = [](Point p, int N) { return Jet::constant(p, N, 1.0); };
    EXPECT_NEAR(std::abs(slash(one, Mat2{2, 1, 3, 2}, 0)(Point(0.3, 0.7), 2).value() - 1.0), 0.0, 1e-15);
    const auto s = slash(id, Mat2{0, -1, 1, 0}, -2)(i, 0).value();
    EXPECT_NEAR(std::abs(s - std::complex<double>(0, -1)), 0.0, 1e-15);
    EXPECT_THROW(slash(id, Mat2{1, 1, 1, 1}, 0), config_error);
}

TEST(QForms, QslashMatrix)
{
    std::mt19937_64 rng(9);
    for (const auto &q : enumerate_forms(Discriminant(5), 3)) {
        const Mat2 A = qslash_matrix(q);
        EXPECT_NEAR(A.det(), 1.0, 1e-12);
        const Point p = test::random_point(rng);
        const auto t = p.tau();
        const auto lhs = (A.a * t + A.b) * (A.c * t + A.d);
        EXPECT_LT(std::abs(lhs + q_value(q, p) / std::sqrt(5.0)), 1e-12 * std::abs(lhs));
    }
}

TEST(QForms, GeodesicExport)
{
    const Discriminant d5(5);
    const GeodesicWindow w{-1, 1, 0, 1.5};
    const auto forms = geodesics_in_window(d5, w, 0.05);
    EXPECT_FALSE(forms.empty());
    for (const auto &q : forms) EXPECT_GE(geodesic(q).radius, 0.05);
    const auto csv = geodesics_csv(forms);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), static_cast<long>(forms.size()) + 1);
    const auto svg = geodesics_svg(forms, w);
    std::size_t paths = 0;
    for (std::size_t pos = 0; (pos = svg.find("<path", pos)) != std::string::npos; ++pos) ++paths;
    EXPECT_EQ(paths, forms.size());
    EXPECT_TRUE(geodesics_in_window(d5, {-1, 1, 1.2, 2}, 0.05).empty());
}
