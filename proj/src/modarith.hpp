#pragma once

// Word-size modular helpers shared by the factoring and form-counting kernels.

#include <cstdint>
#include <tuple>
#include <utility>

namespace qf::detail {

using u64 = std::uint64_t;
using u128 = unsigned __int128;
using i64 = std::int64_t;
using i128 = __int128;

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

inline u64 powmod(u64 base, u64 exp, u64 m) {
    u64 result = 1 % m;
    base %= m;
    while (exp != 0) {
        if (exp & 1) result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return result;
}

inline u64 gcd_u64(u64 a, u64 b) {
    while (b != 0) {
        a %= b;
        std::swap(a, b);
    }
    return a;
}

/// Inverse of a modulo m, requires gcd(a, m) = 1.
inline u64 invmod(u64 a, u64 m) {
    i128 t = 0, new_t = 1;
    i128 r = m, new_r = a % m;
    while (new_r != 0) {
        i128 q = r / new_r;
        std::tie(t, new_t) = std::make_pair(new_t, t - q * new_t);
        std::tie(r, new_r) = std::make_pair(new_r, r - q * new_r);
    }
    if (t < 0) t += m;
    return static_cast<u64>(t);
}

inline u64 mod_i64(i64 a, u64 m) {
    i128 r = static_cast<i128>(a) % static_cast<i128>(m);
    if (r < 0) r += m;
    return static_cast<u64>(r);
}

/// Square root of n modulo an odd prime p (Tonelli-Shanks), or -1 if n is a
/// non-residue. n must already be reduced modulo p.
inline i64 sqrt_mod_prime(u64 n, u64 p) {
    if (n == 0) return 0;
    if (p == 2) return static_cast<i64>(n & 1);
    if (powmod(n, (p - 1) / 2, p) != 1) return -1;
    if (p % 4 == 3) return static_cast<i64>(powmod(n, (p + 1) / 4, p));

    u64 q = p - 1;
    unsigned s = 0;
    while ((q & 1) == 0) {
        q >>= 1;
        ++s;
    }
    u64 z = 2;
    while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;

    u64 c = powmod(z, q, p);
    u64 r = powmod(n, (q + 1) / 2, p);
    u64 t = powmod(n, q, p);
    unsigned m = s;
    while (t != 1) {
        unsigned i = 0;
        u64 tt = t;
        while (tt != 1) {
            tt = mulmod(tt, tt, p);
            ++i;
        }
        u64 b = c;
        for (unsigned j = 0; j + i + 1 < m; ++j) b = mulmod(b, b, p);
        r = mulmod(r, b, p);
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        m = i;
    }
    return static_cast<i64>(r);
}

}  // namespace qf::detail
