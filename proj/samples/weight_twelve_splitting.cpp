// f_{6,5} is a multiple of the discriminant function: extract its Fourier
// coefficients, then split F_{-5,5} into Eichler integrals plus a local polynomial.

#include <cstdio>

#include "lhmf/lhmf.hpp"

using namespace lhmf;

int main()
{
    const int k = 6;
    const Discriminant disc(5);
    const auto e = cusp_expansion_f(k, disc, 0.9, 8);
    std::printf("f_{6,5} coefficients at v0 = %.2f (%d reliable):\n", e.height, e.reliable);
    for (std::size_t n = 0; n < e.coeffs.size(); ++n)
        std::printf("  c(%zu) = %+.10e   c(n)/c(1) = %+.6f   two-height error %.1e\n", n + 1, e.coeffs[n].real(),
                    (e.coeffs[n] / e.coeffs[0]).real(), e.errors[n]);

    std::printf("\n%14s %16s %16s %16s %10s\n", "tau", "F", "f* part", "E_f part", "residual");
    for (const Point p : {Point(0.0, 1.3), Point(0.3, 1.7), Point(-0.4, 2.5)}) {
        const auto s = verify_splitting(k, disc, p, e);
        std::printf("%6.2f+%5.2fi %+16.8e %+16.8e %+16.8e %10.2e\n", p.u, p.v, s.lhs.real(), s.nonholomorphic.real(), s.holomorphic.real(),
                    s.residual);
    }
}
