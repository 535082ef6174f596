#include "qfields/arith.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <map>
#include <string>

#include "modarith.hpp"
#include "qfields/errors.hpp"

namespace qf::arith {

using detail::i64;
using detail::u128;
using detail::u64;

namespace {

constexpr u64 kTrialLimit = 1u << 16;
constexpr std::array<unsigned, 13> kWitnesses{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};

const std::vector<std::int64_t>& small_primes() {
    static const std::vector<std::int64_t> primes = primes_up_to(static_cast<std::int64_t>(kTrialLimit));
    return primes;
}

bool miller_rabin_u64(u64 n, u64 base) {
    u64 d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    u64 x = detail::powmod(base % n, d, n);
    if (x == 1 || x == n - 1) return true;
    for (unsigned r = 1; r < s; ++r) {
        x = detail::mulmod(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

bool miller_rabin_big(const BigInt& n, unsigned base) {
    BigInt d = n - 1;
    unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
    mpz_fdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
    BigInt x;
    BigInt b = base;
    mpz_powm(x.get_mpz_t(), b.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    const BigInt n_minus_1 = n - 1;
    if (x == 1 || x == n_minus_1) return true;
    for (unsigned long r = 1; r < s; ++r) {
        x = x * x % n;
        if (x == n_minus_1) return true;
    }
    return false;
}

class RhoCounter {
public:
    explicit RhoCounter(u64 limit) : limit_(limit) {}

    void charge(u64 steps) {
        used_ += steps;
        if (used_ > limit_) {
            throw ResourceError("factoring budget exhausted after " + std::to_string(used_) + " rho iterations");
        }
    }

private:
    u64 limit_;
    u64 used_ = 0;
};

// Brent's cycle finding with batched gcds. Returns a proper factor of the
// odd composite n, trying c = 1, 2, ... in order.
u64 rho_u64(u64 n, RhoCounter& counter) {
    constexpr u64 kBatch = 128;
    for (u64 c = 1;; ++c) {
        auto f = [&](u64 v) { return static_cast<u64>((static_cast<u128>(detail::mulmod(v, v, n)) + c) % n); };
        u64 y = 2, x = 2, ys = 2, q = 1, g = 1;
        for (u64 r = 1; g == 1; r <<= 1) {
            x = y;
            for (u64 i = 0; i < r; ++i) y = f(y);
            for (u64 k = 0; k < r && g == 1; k += kBatch) {
                ys = y;
                const u64 steps = std::min(kBatch, r - k);
                for (u64 i = 0; i < steps; ++i) {
                    y = f(y);
                    q = detail::mulmod(q, x > y ? x - y : y - x, n);
                }
                counter.charge(steps);
                g = detail::gcd_u64(q, n);
            }
        }
        if (g == n) {
            do {
                ys = f(ys);
                g = detail::gcd_u64(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

BigInt rho_big(const BigInt& n, RhoCounter& counter) {
    constexpr u64 kBatch = 128;
    for (unsigned long c = 1;; ++c) {
        auto f = [&](const BigInt& v) -> BigInt { return (v * v + c) % n; };
        BigInt y = 2, x = 2, ys = 2, q = 1, g = 1;
        for (u64 r = 1; g == 1; r <<= 1) {
            x = y;
            for (u64 i = 0; i < r; ++i) y = f(y);
            for (u64 k = 0; k < r && g == 1; k += kBatch) {
                ys = y;
                const u64 steps = std::min(kBatch, r - k);
                for (u64 i = 0; i < steps; ++i) {
                    y = f(y);
                    BigInt diff = x - y;
                    q = q * qf::abs(diff) % n;
                }
                counter.charge(steps);
                g = qf::gcd(q, n);
            }
        }
        if (g == n) {
            do {
                ys = f(ys);
                g = qf::gcd(BigInt(x - ys), n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

// Returns (root, k) with n = root^k and k maximal, or (n, 1).
std::pair<BigInt, unsigned> perfect_power(const BigInt& n) {
    const unsigned long bits = mpz_sizeinbase(n.get_mpz_t(), 2);
    for (unsigned long k = bits; k >= 2; --k) {
        BigInt root;
        if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), k) != 0) {
            return {root, static_cast<unsigned>(k)};
        }
    }
    return {n, 1};
}

void split_into(const BigInt& n, unsigned multiplicity, std::map<BigInt, unsigned>& out, RhoCounter& counter) {
    if (n == 1) return;
    if (is_prime(n)) {
        out[n] += multiplicity;
        return;
    }
    auto [root, k] = perfect_power(n);
    if (k > 1) {
        split_into(root, multiplicity * k, out, counter);
        return;
    }
    BigInt factor;
    if (mpz_fits_ulong_p(n.get_mpz_t()) != 0) {
        factor = static_cast<unsigned long>(rho_u64(n.get_ui(), counter));
    } else {
        factor = rho_big(n, counter);
    }
    split_into(factor, multiplicity, out, counter);
    split_into(BigInt(n / factor), multiplicity, out, counter);
}

}  // namespace

BigInt Factorization::product() const {
    BigInt p = 1;
    for (const auto& pp : factors) p *= ipow(pp.prime, pp.exponent);
    return p;
}

const BigInt& primality_bound() {
    static const BigInt bound("3317044064679887385961981");
    return bound;
}

bool is_prime_u64(u64 m) {
    if (m < 2) return false;
    for (u64 p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
        if (m % p == 0) return m == p;
    }
    if (m < 41 * 41) return true;
    for (unsigned base : kWitnesses) {
        if (base >= 41) break;  // first 12 bases are deterministic below 3.18e23
        if (!miller_rabin_u64(m, base)) return false;
    }
    return true;
}

bool is_prime(const BigInt& m) {
    if (m < 2) return false;
    if (mpz_fits_ulong_p(m.get_mpz_t()) != 0) return is_prime_u64(m.get_ui());
    for (unsigned base : kWitnesses) {
        if (mpz_divisible_ui_p(m.get_mpz_t(), base) != 0) return false;
    }
    for (unsigned base : kWitnesses) {
        if (!miller_rabin_big(m, base)) return false;
    }
    if (m < primality_bound()) return true;
    // A witness proves compositeness at any size; only "no witness found" is
    // uncertified up here.
    for (unsigned base : {43u, 47u, 53u, 59u, 61u, 67u, 71u, 73u, 79u, 83u, 89u, 97u}) {
        if (!miller_rabin_big(m, base)) return false;
    }
    throw UnsupportedRange("primality of " + to_string(m) +
                           " is outside the deterministic range (< 3317044064679887385961981)");
}

Factorization factorize(const BigInt& m, const FactorBudget& budget) {
    if (m < 2) throw DomainError("factorize requires m >= 2, got " + to_string(m));

    std::map<BigInt, unsigned> found;
    BigInt rest = m;
    for (std::int64_t p : small_primes()) {
        const auto up = static_cast<unsigned long>(p);
        if (BigInt(up) * up > rest) break;
        unsigned e = 0;
        while (mpz_divisible_ui_p(rest.get_mpz_t(), up) != 0) {
            mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), up);
            ++e;
        }
        if (e > 0) found[BigInt(up)] = e;
    }
    if (rest > 1) {
        if (rest < BigInt(static_cast<unsigned long>(kTrialLimit)) * kTrialLimit) {
            found[rest] += 1;  // no factor below its square root
        } else {
            RhoCounter counter(budget.rho_iterations);
            split_into(rest, 1, found, counter);
        }
    }

    Factorization result{m, {}};
    for (auto& [p, e] : found) result.factors.push_back({p, e});
    return result;
}

SquarefreeDecomposition squarefree_decompose(const BigInt& m, const FactorBudget& budget) {
    if (m == 0) throw DomainError("squarefree_decompose requires m != 0");
    BigInt s = 1, f = 1;
    const BigInt mag = qf::abs(m);
    if (mag > 1) {
        for (const auto& [p, e] : factorize(mag, budget).factors) {
            if (e % 2 == 1) s *= p;
            f *= ipow(p, e / 2);
        }
    }
    if (m < 0) s = -s;
    return {m, s, f};
}

bool is_squarefree(const BigInt& m, const FactorBudget& budget) {
    if (m == 0) return false;
    return squarefree_decompose(m, budget).f == 1;
}

int kronecker(const BigInt& D, const BigInt& n) { return mpz_kronecker(D.get_mpz_t(), n.get_mpz_t()); }

int kronecker_i64(std::int64_t D, std::int64_t n) {
    if (n == 0) return (D == 1 || D == -1) ? 1 : 0;
    int result = 1;
    u64 un;
    if (n < 0) {
        un = static_cast<u64>(0) - static_cast<u64>(n);
        if (D < 0) result = -result;
    } else {
        un = static_cast<u64>(n);
    }
    const unsigned v2 = static_cast<unsigned>(__builtin_ctzll(un));
    if (v2 > 0) {
        if ((D & 1) == 0) return 0;
        un >>= v2;
        const u64 d8 = detail::mod_i64(D, 8);
        if ((v2 & 1) && (d8 == 3 || d8 == 5)) result = -result;
    }
    if (un == 1) return result;

    // Jacobi symbol (a / un) for odd un.
    u64 a = detail::mod_i64(D, un);
    while (a != 0) {
        const unsigned z = static_cast<unsigned>(__builtin_ctzll(a));
        a >>= z;
        const u64 r8 = un & 7;
        if ((z & 1) && (r8 == 3 || r8 == 5)) result = -result;
        if ((a & 3) == 3 && (un & 3) == 3) result = -result;
        std::swap(a, un);
        a %= un;
    }
    return un == 1 ? result : 0;
}

std::vector<std::int64_t> primes_up_to(std::int64_t m) {
    std::vector<std::int64_t> primes;
    if (m < 2) return primes;
    std::vector<bool> composite(static_cast<std::size_t>(m) + 1, false);
    for (std::int64_t i = 2; i <= m; ++i) {
        if (composite[static_cast<std::size_t>(i)]) continue;
        primes.push_back(i);
        for (std::int64_t j = i * i; j <= m; j += i) composite[static_cast<std::size_t>(j)] = true;
    }
    return primes;
}

std::vector<BigInt> divisors(const BigInt& m, const FactorBudget& budget) {
    if (m < 1) throw DomainError("divisors requires m >= 1");
    std::vector<BigInt> divs{1};
    if (m == 1) return divs;
    for (const auto& [p, e] : factorize(m, budget).factors) {
        const std::size_t base = divs.size();
        BigInt pk = 1;
        for (unsigned k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < base; ++i) divs.push_back(divs[i] * pk);
        }
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

}  // namespace qf::arith
