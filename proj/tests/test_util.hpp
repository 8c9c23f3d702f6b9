#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "lhmf/lhmf.hpp"

namespace lhmf::test {

inline double rel_err(std::complex<double> got, std::complex<double> want)
{
    const double scale = std::max(1.0, std::abs(want));
    return std::abs(got - want) / scale;
}

/// Jet of sum p_ij tau^i taubar^j with random coefficients, total degree <= deg.
inline Jet random_polynomial_jet(std::mt19937_64 &rng, Point base, int order, int deg)
{
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    const Jet t = Jet::tau(base, order), tb = Jet::tau_bar(base, order);
    Jet out(base, order);
    for (int i = 0; i <= deg; ++i)
        for (int j = 0; i + j <= deg; ++j) out += t.pow(i) * tb.pow(j) * std::complex<double>(coef(rng), coef(rng));
    return out;
}

inline Point random_point(std::mt19937_64 &rng, double u0 = -1.0, double u1 = 1.0, double v0 = 0.3, double v1 = 2.0)
{
    std::uniform_real_distribution<double> U(u0, u1), V(v0, v1);
    return {U(rng), V(rng)};
}

/// Ramanujan tau(1..N) from the integer expansion of q prod (1 - q^n)^24; tau(m + 1) = out[m].
inline std::vector<long long> ramanujan_tau(int N)
{
    std::vector<long long> c(static_cast<std::size_t>(N), 0);
    c[0] = 1;
    for (int n = 1; n < N; ++n)
        for (int r = 0; r < 24; ++r)
            for (int m = N - 1; m >= n; --m) c[static_cast<std::size_t>(m)] -= c[static_cast<std::size_t>(m - n)];
    return c;
}

}  // namespace lhmf::test
