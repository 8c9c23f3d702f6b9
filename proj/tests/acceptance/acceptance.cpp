// Acceptance runner: one PASS/FAIL line per criterion.
//
//   lhmf_acceptance            run every criterion
//   lhmf_acceptance 3 8        run criteria 3 and 8
//
// Exit status is 0 iff every selected criterion passed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "lhmf/lhmf.hpp"
#include "test_util.hpp"

using namespace lhmf;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    // Records one measured quantity against its bound.
    void bound(const std::string &what, double value, double limit)
    {
        const bool ok = value <= limit && !std::isnan(value);
        pass = pass && ok;
        detail << (detail.tellp() > 0 ? "; " : "") << what << "=" << fmt(value) << (ok ? "<=" : ">") << fmt(limit);
    }
    void require(const std::string &what, bool ok)
    {
        pass = pass && ok;
        if (!ok) detail << (detail.tellp() > 0 ? "; " : "") << what << " violated";
    }
    void report(const IdentityReport &r, const std::string &label)
    {
        bound(label + " " + r.identity_id + "[" + std::to_string(r.points.size()) + "pts]", r.max_residual(), r.tolerance);
    }
    static std::string fmt(double x)
    {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2e", x);
        return buf;
    }
};

std::string kd(int k, i64 D) { return "(" + std::to_string(k) + "," + std::to_string(D) + ")"; }

std::vector<Point> random_points(std::mt19937_64 &rng, int n)
{
    std::vector<Point> out;
    for (int i = 0; i < n; ++i) out.push_back(test::random_point(rng));
    return out;
}

void flip_theorem(Outcome &o)
{
    for (auto [k, D] : {std::pair{2, 5}, {3, 5}, {2, 8}, {6, 5}}) {
        const Discriminant disc(D);
        const auto pts = sample_points(disc, 20, 7);
        o.require("20 points", pts.size() == 20);
        o.report(check_theorem_flip_F(k, disc, pts, k <= 3 ? 1e-8 : 1e-6), kd(k, D));
    }
}

void flip_corollary(Outcome &o)
{
    for (auto [k, D] : {std::pair{2, 5}, {2, 8}, {3, 5}}) {
        const Discriminant disc(D);
        o.report(check_corollary_flip_G(k, disc, sample_points(disc, 10, 7), 1e-7), kd(k, D));
    }
}

void images_F(Outcome &o)
{
    const Discriminant d5(5);
    const auto pts = sample_points(d5, 10, 7);
    for (int k = 2; k <= 6; ++k)
        for (const auto &r : check_images_F(k, d5, pts, 1e-8)) o.report(r, kd(k, 5));
}

void images_G(Outcome &o)
{
    const Discriminant d5(5);
    for (const auto &r : check_images_G(2, d5, sample_points(d5, 10, 7), 1e-7)) o.report(r, kd(2, 5));
}

void raise_closed_form(Outcome &o)
{
    std::mt19937_64 rng(11);
    const Discriminant d5(5);
    const auto forms = enumerate_forms(d5, 3);
    for (int k = 2; k <= 6; ++k) {
        const auto pts = random_points(rng, 50);
        o.report(check_raise_power(k, pts, 1e-12), "k=" + std::to_string(k));
        o.report(check_qslash_conjugation(k, d5, forms, pts, 1e-12), "k=" + std::to_string(k));
    }
}

void raise_operator(Outcome &o)
{
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<int> nd(0, 8), wd(-6, 0);
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
        const Point p = test::random_point(rng);
        const int n = nd(rng), w = 2 * wd(rng);
        const Jet f = test::random_polynomial_jet(rng, p, 8, 8);
        const cplx a = iterate_raise(f, w, n).value(), b = rd_closed_form(f, w, n);
        worst = std::max(worst, std::abs(a - b) / std::abs(b));
    }
    o.bound("relative residual[50 jets]", worst, 1e-11);
}

void interplay(Outcome &o)
{
    const Discriminant d5(5);
    o.report(check_operator_interplay(2, d5, sample_points(d5, 10, 7), 1e-8), kd(2, 5));
}

void splitting(Outcome &o)
{
    const Discriminant d5(5);
    const auto e = cusp_expansion_f(6, d5, 1.0, 12);
    o.require("leading coefficients of f_{6,5} reliable", e.reliable >= 3);
    double worst = 0.0;
    const auto high = sample_points(d5, 5, 7, 1.25, 2.0);
    for (const auto &p : high) worst = std::max(worst, verify_splitting(6, d5, p, e).residual);
    o.bound("splitting (6,5)[" + std::to_string(high.size()) + "pts]", worst, 1e-6);
    for (int k : {2, 3}) {
        double d = 0.0;
        for (const auto &p : sample_points(d5, 5, 7))
            d = std::max(d, std::abs(eval_F(k, d5, p, default_truncation(series_fn::F, k)).value - local_polynomial(k, d5, p)));
        o.bound("|F-P| " + kd(k, 5), d, 1e-8);
    }
}

void cusp_sanity(Outcome &o)
{
    const Discriminant d5(5);
    const auto pts = sample_points(d5, 10, 7);
    for (int k = 2; k <= 5; ++k) {
        double worst = 0.0;
        for (const auto &p : pts) worst = std::max(worst, std::abs(eval_f(k, d5, p, default_truncation(series_fn::f, k)).value));
        o.bound("|f| " + kd(k, 5), worst, 1e-8);
    }
    const auto e = cusp_expansion_f(6, d5, 0.6, 6);
    const auto tau = test::ramanujan_tau(6);
    o.require("3 reliable coefficients", e.reliable >= 3);
    const cplx r2 = e.coeffs[1] / e.coeffs[0];
    o.bound("|c2/c1+24|", std::abs(r2 + 24.0), 1e-6);
    double prop = 0.0;
    for (int n = 0; n < e.reliable; ++n)
        prop = std::max(prop, std::abs(e.coeffs[static_cast<std::size_t>(n)] / e.coeffs[0] - static_cast<double>(tau[static_cast<std::size_t>(n)])) /
                                  std::abs(static_cast<double>(tau[static_cast<std::size_t>(n)])));
    o.bound("max_n |c_n/c_1/tau(n)-1|[reliable=" + std::to_string(e.reliable) + "]", prop, 1e-6);
}

void structure(Outcome &o)
{
    std::mt19937_64 rng(17);
    const std::vector<i64> Ds{5, 8, 12, 13, 17, 21, 24, 28, 29, 33};
    std::vector<std::vector<QForm>> pool;
    for (i64 D : Ds) pool.push_back(enumerate_forms(Discriminant(D), 6));
    double worst = 0.0;
    for (int t = 0; t < 10000; ++t) {
        const std::size_t i = static_cast<std::size_t>(t) % Ds.size();
        const Discriminant disc(Ds[i]);
        const auto &forms = pool[i];
        const QForm q = forms[std::uniform_int_distribution<std::size_t>(0, forms.size() - 1)(rng)];
        const Point p = test::random_point(rng, -2.0, 2.0, 0.05, 3.0);
        const double lhs = std::norm(q_value(q, p)), qt = q_tau(q, p);
        const double rhs = p.v * p.v * (static_cast<double>(disc.value()) + qt * qt);
        worst = std::max(worst, std::abs(lhs - rhs) / rhs);
    }
    o.bound("|Q|^2 identity[1e4]", worst, 1e-12);

    int mismatches = 0, checked = 0, skipped = 0, nonempty_high = 0;
    for (int t = 0; t < 1000; ++t) {
        const Discriminant disc(Ds[static_cast<std::size_t>(t) % Ds.size()]);
        const Point p = test::random_point(rng, -1.0, 1.0, 0.05, 1.1 * disc.sqrt() / 2);
        if (e_d_proximity(p, disc) < default_singular_threshold) {
            ++skipped;
            continue;
        }
        // brute force: a < 0 with |a| < sqrt D / (2v), every b whose semicircle could reach u
        std::vector<std::pair<i64, i64>> brute;
        const i64 D = disc.value();
        for (i64 A = 1; static_cast<double>(A) < disc.sqrt() / (2 * p.v) + 1; ++A) {
            const i64 bmax = static_cast<i64>(2.0 * static_cast<double>(A) * (std::abs(p.u) + 1.0) + disc.sqrt()) + 2;
            for (i64 b = -bmax; b <= bmax; ++b) {
                if ((b * b - D) % (4 * A) != 0) continue;
                const QForm q{-A, b, -(b * b - D) / (4 * A)};
                if (q_tau(q, p) > 0.0) brute.emplace_back(A, b);
            }
        }
        std::vector<std::pair<i64, i64>> fast;
        for (const auto &q : support_set(p, disc)) fast.emplace_back(-q.a, q.b);
        std::sort(brute.begin(), brute.end());
        if (fast != brute) ++mismatches;
        if (p.v > disc.sqrt() / 2 && !fast.empty()) ++nonempty_high;
        ++checked;
    }
    o.bound("support_set mismatches[" + std::to_string(checked) + "pts]", mismatches, 0);
    o.require("no point skipped", skipped == 0);
    std::mt19937_64 rng2(19);
    for (int t = 0; t < 200; ++t) {
        const Discriminant disc(Ds[static_cast<std::size_t>(t) % Ds.size()]);
        const Point p = test::random_point(rng2, -1.0, 1.0, disc.sqrt() / 2 * (1 + 1e-9), 3.0 * disc.sqrt());
        if (!support_set(p, disc).empty()) ++nonempty_high;
    }
    o.bound("nonempty support above sqrt(D)/2", nonempty_high, 0);
}

void determinism(Outcome &o)
{
    SuiteConfig cfg;
    cfg.seed = 7;
    const std::string a = reports_json(run_suite("all", cfg), cfg).dump(2);
    const std::string b = reports_json(run_suite("all", cfg), cfg).dump(2);
    o.require("identical JSON", a == b);
    o.detail << (o.detail.tellp() > 0 ? "; " : "") << "bytes=" << a.size() << (a == b ? " identical" : " differ");
}

struct Criterion {
    int id;
    const char *name;
    double budget_seconds;
    std::function<void(Outcome &)> run;
};

}  // namespace

int main(int argc, char **argv)
{
    const std::vector<Criterion> all{
        {1, "flip theorem for F", 120, flip_theorem},
        {2, "flip corollary for G", 60, flip_corollary},
        {3, "shadow and Bol images of F", 60, images_F},
        {4, "shadow and Bol images of G", 60, images_G},
        {5, "raising closed forms", 10, raise_closed_form},
        {6, "iterated raising vs closed form", 10, raise_operator},
        {7, "flip/shadow/Bol interplay", 60, interplay},
        {8, "splitting into Eichler integrals", 180, splitting},
        {9, "cusp-space sanity", 60, cusp_sanity},
        {10, "structural invariants", 10, structure},
        {11, "deterministic reports", 120, determinism},
    };
    std::set<int> wanted;
    for (int i = 1; i < argc; ++i) {
        try {
            wanted.insert(std::stoi(argv[i]));
        } catch (const std::exception &) {
            std::cerr << "usage: " << argv[0] << " [criterion ...]\n";
            return 2;
        }
    }
    bool ok = true;
    for (const auto &c : all) {
        if (!wanted.empty() && !wanted.count(c.id)) continue;
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.run(o);
        } catch (const std::exception &e) {
            o.require(std::string("exception: ") + e.what(), false);
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        o.bound("seconds", secs, c.budget_seconds);
        ok = ok && o.pass;
        std::cout << "AC" << c.id << " " << (o.pass ? "PASS" : "FAIL") << " " << c.name << ": " << o.detail.str() << std::endl;
    }
    return ok ? 0 : 1;
}
