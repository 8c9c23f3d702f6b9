// Evaluate F_{1-k,D} on a vertical line, compare with its local polynomial,
// and check that the flipping operator sends F to -F.

#include <cstdio>

#include "lhmf/lhmf.hpp"

using namespace lhmf;

int main()
{
    const int k = 2;
    const Discriminant disc(5);
    const int w = 2 - 2 * k;
    std::printf("%6s %22s %22s %12s %10s\n", "v", "F", "P", "|flip F + F|", "support");
    for (double v : {0.45, 0.7, 0.95, 1.2, 1.5, 2.0}) {
        const Point p(0.1, v);
        const auto F = eval_F(k, disc, p, default_truncation(series_fn::F, k));
        // jets from a fixed box make the flip identity hold term by term
        const auto J = eval_F(k, disc, p, TruncationParams::fixed(32), 2 * k - 2);
        const cplx P = local_polynomial(k, disc, p);
        const double res = std::abs(flip(*J.jet, w).value() + J.value);
        std::printf("%6.2f %22.15f %22.15f %12.2e %10zu\n", v, F.value.real(), P.real(), res, support_set(p, disc).size());
    }
}
