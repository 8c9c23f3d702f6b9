#pragma once

// Elementary arithmetic for discriminant-D forms: square roots of D modulo
// 4a, multiplicative root counts, and a shared smallest-prime-factor sieve.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

namespace lhmf::arith {

using i64 = std::int64_t;

inline i64 mod(i64 x, i64 m)
{
    const i64 r = x % m;
    return r < 0 ? r + m : r;
}

inline i64 mulmod(i64 a, i64 b, i64 m)
{
    return static_cast<i64>((static_cast<__int128>(a) * b) % m);
}

inline i64 powmod(i64 base, i64 exp, i64 m)
{
    i64 result = 1 % m;
    base = mod(base, m);
    while (exp > 0) {
        if (exp & 1) result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return result;
}

/// Inverse of a modulo m; requires gcd(a, m) = 1.
inline i64 invmod(i64 a, i64 m)
{
    i64 g = m, x = 0, x1 = 1, a1 = mod(a, m);
    while (a1 != 0) {
        const i64 q = g / a1;
        std::tie(g, a1) = std::make_pair(a1, g - q * a1);
        std::tie(x, x1) = std::make_pair(x1, x - q * x1);
    }
    if (g != 1) throw std::domain_error("invmod: not invertible");
    return mod(x, m);
}

inline bool is_perfect_square(i64 n)
{
    if (n < 0) return false;
    auto r = static_cast<i64>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r * r == n;
}

/// Smallest-prime-factor table, grown on demand and shared between threads.
class spf_table {
public:
    static const spf_table &instance(i64 n)
    {
        static std::mutex mutex;
        // Superseded tables stay alive so references handed out earlier remain valid.
        static std::vector<std::unique_ptr<const spf_table>> tables;
        std::lock_guard lock(mutex);
        if (tables.empty() || tables.back()->limit() < n) {
            i64 want = std::max<i64>(n, 1 << 16);
            if (!tables.empty()) want = std::max(want, 2 * tables.back()->limit());
            tables.push_back(std::unique_ptr<const spf_table>(new spf_table(want)));
        }
        return *tables.back();
    }

    i64 limit() const { return static_cast<i64>(spf_.size()) - 1; }

    /// Factorisation of n <= limit() as (prime, exponent) pairs.
    std::vector<std::pair<i64, int>> factor(i64 n) const
    {
        std::vector<std::pair<i64, int>> out;
        while (n > 1) {
            const i64 p = spf_[static_cast<std::size_t>(n)];
            int e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            out.emplace_back(p, e);
        }
        return out;
    }

private:
    explicit spf_table(i64 n) : spf_(static_cast<std::size_t>(n) + 1, 0)
    {
        for (i64 i = 2; i <= n; ++i) {
            if (spf_[static_cast<std::size_t>(i)] != 0) continue;
            for (i64 j = i; j <= n; j += i)
                if (spf_[static_cast<std::size_t>(j)] == 0) spf_[static_cast<std::size_t>(j)] = static_cast<std::uint32_t>(i);
        }
    }

    std::vector<std::uint32_t> spf_;
};

/// Legendre symbol (a/p) for an odd prime p.
inline int legendre(i64 a, i64 p)
{
    a = mod(a, p);
    if (a == 0) return 0;
    return powmod(a, (p - 1) / 2, p) == 1 ? 1 : -1;
}

/// Jacobi symbol (a/n) for odd n > 0.
inline int jacobi(i64 a, i64 n)
{
    a = mod(a, n);
    int t = 1;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            const i64 r = n % 8;
            if (r == 3 || r == 5) t = -t;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) t = -t;
        a %= n;
    }
    return n == 1 ? t : 0;
}

/// Kronecker symbol (D/n) for n >= 1.
inline int kronecker(i64 D, i64 n)
{
    int t = 1;
    while (n % 2 == 0) {
        n /= 2;
        const i64 r = mod(D, 8);
        if (r % 2 == 0) return 0;
        if (r == 3 || r == 5) t = -t;
    }
    return t * jacobi(D, n);
}

/// Tonelli-Shanks square root of a quadratic residue n modulo an odd prime p.
inline i64 sqrt_mod_prime(i64 n, i64 p)
{
    n = mod(n, p);
    if (n == 0) return 0;
    if (p % 4 == 3) return powmod(n, (p + 1) / 4, p);
    i64 q = p - 1;
    int s = 0;
    while (q % 2 == 0) {
        q /= 2;
        ++s;
    }
    i64 z = 2;
    while (legendre(z, p) != -1) ++z;
    i64 m = s, c = powmod(z, q, p), t = powmod(n, q, p), r = powmod(n, (q + 1) / 2, p);
    while (t != 1) {
        i64 i = 0, t2 = t;
        while (t2 != 1) {
            t2 = mulmod(t2, t2, p);
            ++i;
        }
        const i64 b = powmod(c, i64{1} << (m - i - 1), p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    return r;
}

/// All x in [0, p^e) with x^2 = D (mod p^e), sorted.
inline std::vector<i64> sqrt_mod_prime_power(i64 D, i64 p, int e)
{
    i64 pe = 1;
    for (int i = 0; i < e; ++i) pe *= p;
    std::vector<i64> roots;
    if (p != 2 && mod(D, p) != 0) {
        if (legendre(D, p) != 1) return roots;
        i64 x = sqrt_mod_prime(D, p), pj = p;
        for (int j = 1; j < e; ++j) {
            const i64 next = pj * p;
            const i64 f = mod(mulmod(x, x, next) - D, next);
            const i64 inv = invmod(mod(2 * x, next), next);
            x = mod(x - mulmod(f, inv, next), next);
            pj = next;
        }
        roots = {x, mod(-x, pe)};
    } else {
        // p divides 2D: lift every residue class level by level (p is small here).
        std::vector<i64> level;
        for (i64 x = 0; x < p; ++x)
            if (mod(x * x - D, p) == 0) level.push_back(x);
        i64 pj = p;
        for (int j = 1; j < e; ++j) {
            const i64 next = pj * p;
            std::vector<i64> lifted;
            for (i64 x : level)
                for (i64 t = 0; t < p; ++t) {
                    const i64 y = x + t * pj;
                    if (mod(mulmod(y, y, next) - D, next) == 0) lifted.push_back(y);
                }
            level = std::move(lifted);
            pj = next;
        }
        roots = std::move(level);
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

/// Residues b in [0, 2a) with b^2 = D (mod 4a), for a >= 1, sorted.
inline std::vector<i64> discriminant_roots(i64 D, i64 a)
{
    if (a < 1) throw std::invalid_argument("discriminant_roots: a must be >= 1");
    const i64 modulus = 4 * a;
    const auto &spf = spf_table::instance(modulus);
    std::vector<i64> combined{0};
    i64 m = 1;
    for (auto [p, e] : spf.factor(modulus)) {
        const auto local = sqrt_mod_prime_power(D, p, e);
        if (local.empty()) return {};
        i64 pe = 1;
        for (int i = 0; i < e; ++i) pe *= p;
        const i64 m_inv = invmod(m % pe, pe);
        std::vector<i64> next;
        next.reserve(combined.size() * local.size());
        for (i64 x : combined)
            for (i64 y : local) {
                // CRT: z = x (mod m), z = y (mod pe)
                const i64 t = mulmod(mod(y - x, pe), m_inv, pe);
                next.push_back(x + m * t);
            }
        combined = std::move(next);
        m *= pe;
    }
    std::vector<i64> out;
    out.reserve(combined.size());
    for (i64 z : combined) out.push_back(z % (2 * a));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// #{b in [0, 2a) : b^2 = D (mod 4a)} for every a in [1, A]; index 0 unused.
inline std::vector<std::uint32_t> discriminant_root_counts(i64 D, i64 A)
{
    // N(n) = #{x mod n : x^2 = D} is multiplicative and the requested count is N(4a)/2.
    const auto &spf = spf_table::instance(std::max<i64>(A, 2));
    std::vector<std::uint32_t> out(static_cast<std::size_t>(A) + 1, 0);
    std::map<std::pair<i64, int>, i64> ramified;  // p | 2D
    std::vector<std::int8_t> symbol(static_cast<std::size_t>(A) + 1, 2);
    auto local_count = [&](i64 p, int e) -> i64 {
        if (p != 2 && mod(D, p) != 0) {
            auto &s = symbol[static_cast<std::size_t>(p)];
            if (s == 2) s = static_cast<std::int8_t>(legendre(D, p));
            return 1 + s;
        }
        auto [it, fresh] = ramified.try_emplace({p, e}, 0);
        if (fresh) it->second = static_cast<i64>(sqrt_mod_prime_power(D, p, e).size());
        return it->second;
    };
    for (i64 a = 1; a <= A; ++a) {
        i64 n = a, e2 = 2;
        while (n % 2 == 0) {
            n /= 2;
            ++e2;
        }
        i64 count = local_count(2, static_cast<int>(e2));
        for (auto [p, e] : spf.factor(n)) {
            if (count == 0) break;
            count *= local_count(p, e);
        }
        out[static_cast<std::size_t>(a)] = static_cast<std::uint32_t>(count / 2);
    }
    return out;
}

/// Cached root lists for one discriminant, rows a = 1..limit().
class root_table {
public:
    static std::shared_ptr<const root_table> get(i64 D, i64 a_max)
    {
        static std::mutex mutex;
        static std::vector<std::shared_ptr<const root_table>> tables;
        std::lock_guard lock(mutex);
        i64 want = a_max;
        for (auto &t : tables) {
            if (t->D_ != D) continue;
            if (t->limit() >= a_max) return t;
            want = std::max(want, 2 * t->limit());
        }
        auto fresh = std::shared_ptr<const root_table>(new root_table(D, want));
        std::erase_if(tables, [&](const auto &t) { return t->D_ == D; });
        tables.push_back(fresh);
        return fresh;
    }

    i64 limit() const { return static_cast<i64>(offsets_.size()) - 2; }

    /// Residues b in [0, 2a) with b^2 = D (mod 4a).
    std::pair<const std::int32_t *, const std::int32_t *> roots(i64 a) const
    {
        const auto lo = offsets_[static_cast<std::size_t>(a)], hi = offsets_[static_cast<std::size_t>(a) + 1];
        return {roots_.data() + lo, roots_.data() + hi};
    }

private:
    root_table(i64 D, i64 a_max) : D_(D)
    {
        const i64 n = std::max<i64>(a_max, 16);
        offsets_.assign(static_cast<std::size_t>(n) + 2, 0);
        const auto counts = discriminant_root_counts(D, n);
        for (i64 a = 1; a <= n; ++a) {
            offsets_[static_cast<std::size_t>(a)] = static_cast<std::uint32_t>(roots_.size());
            if (counts[static_cast<std::size_t>(a)] == 0) continue;
            for (i64 b : discriminant_roots(D, a)) roots_.push_back(static_cast<std::int32_t>(b));
        }
        offsets_[static_cast<std::size_t>(n) + 1] = static_cast<std::uint32_t>(roots_.size());
    }

    i64 D_;
    std::vector<std::uint32_t> offsets_;
    std::vector<std::int32_t> roots_;
};

}  // namespace lhmf::arith
