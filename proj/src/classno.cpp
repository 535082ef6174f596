#include "qfields/classno.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>

#include "modarith.hpp"
#include "qfields/arith.hpp"
#include "qfields/errors.hpp"

namespace qf::classno {

using detail::i64;
using detail::u64;

namespace {

u64 isqrt_u64(u64 n) {
    u64 r = static_cast<u64>(__builtin_sqrtl(static_cast<long double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

std::vector<std::uint32_t> smallest_prime_factors(u64 limit) {
    std::vector<std::uint32_t> spf(limit + 1, 0);
    for (u64 i = 2; i <= limit; ++i) {
        if (spf[i] != 0) continue;
        for (u64 j = i; j <= limit; j += i) {
            if (spf[j] == 0) spf[j] = static_cast<std::uint32_t>(i);
        }
    }
    return spf;
}

// Everything the per-a root search needs, shared read-only across workers.
struct Kernel {
    u64 abs_d;
    i64 D;
    u64 a_max;
    std::vector<std::uint32_t> spf;
    std::vector<std::int32_t> root_mod_p;  // indexed by odd prime p not dividing D; -1 = non-residue

    explicit Kernel(i64 disc) : abs_d(static_cast<u64>(-disc)), D(disc), a_max(isqrt_u64(abs_d / 3)) {
        spf = smallest_prime_factors(std::max<u64>(a_max, 2));
        root_mod_p.assign(spf.size(), -1);
        for (u64 p = 3; p < spf.size(); p += 2) {
            if (spf[p] != p) continue;
            const u64 dp = detail::mod_i64(D, p);
            if (dp == 0) continue;
            root_mod_p[p] = static_cast<std::int32_t>(detail::sqrt_mod_prime(dp, p));
        }
    }

    // All x in [0, p^e) with x^2 = D mod p^e.
    std::vector<u64> roots_mod_prime_power(u64 p, unsigned e, u64 pe) const {
        std::vector<u64> roots;
        const u64 dp = detail::mod_i64(D, p);
        if (p != 2 && dp != 0) {
            const i64 r0 = root_mod_p[p];
            if (r0 < 0) return roots;
            u64 r = static_cast<u64>(r0);
            for (u64 cur = p; cur < pe;) {
                const u64 next = cur * p;
                const u64 dn = detail::mod_i64(D, next);
                const u64 f = (detail::mulmod(r, r, next) + next - dn) % next;
                const u64 inv = detail::invmod((2 * r) % next, next);
                r = (r + next - detail::mulmod(f, inv, next)) % next;
                cur = next;
            }
            roots = {r, pe - r};
            return roots;
        }
        for (u64 x = 0; x < p; ++x) {
            if (detail::mulmod(x, x, p) == dp) roots.push_back(x);
        }
        u64 cur = p;
        for (unsigned k = 1; k < e && !roots.empty(); ++k) {
            const u64 next = cur * p;
            const u64 dn = detail::mod_i64(D, next);
            std::vector<u64> lifted;
            for (u64 r : roots) {
                for (u64 j = 0; j < p; ++j) {
                    const u64 x = r + j * cur;
                    if (detail::mulmod(x, x, next) == dn) lifted.push_back(x);
                }
            }
            roots = std::move(lifted);
            cur = next;
        }
        return roots;
    }

    // Solutions b in (-a, a] of b^2 = D mod 4a.
    std::vector<i64> middle_coefficients(u64 a) const {
        std::vector<std::pair<u64, unsigned>> pf;  // prime factorization of 4a
        u64 rest = a;
        unsigned e2 = 2;
        while (rest % 2 == 0) {
            rest /= 2;
            ++e2;
        }
        pf.emplace_back(2, e2);
        while (rest > 1) {
            const u64 p = spf[rest];
            unsigned e = 0;
            while (rest % p == 0) {
                rest /= p;
                ++e;
            }
            pf.emplace_back(p, e);
        }

        std::vector<u64> acc{0};
        u64 modulus = 1;
        for (auto [p, e] : pf) {
            u64 pe = 1;
            for (unsigned i = 0; i < e; ++i) pe *= p;
            const std::vector<u64> local = roots_mod_prime_power(p, e, pe);
            if (local.empty()) return {};
            const u64 inv = detail::invmod(modulus % pe, pe);
            std::vector<u64> next;
            next.reserve(acc.size() * local.size());
            for (u64 r : acc) {
                for (u64 s : local) {
                    const u64 t = detail::mulmod((s + pe - r % pe) % pe, inv, pe);
                    next.push_back(r + modulus * t);
                }
            }
            acc = std::move(next);
            modulus *= pe;
        }

        std::vector<i64> bs;
        const u64 two_a = 2 * a;
        for (u64 x : acc) {
            if (x >= two_a) continue;  // x and x + 2a give the same b mod 2a
            bs.push_back(x <= a ? static_cast<i64>(x) : static_cast<i64>(x) - static_cast<i64>(two_a));
        }
        std::sort(bs.begin(), bs.end());
        return bs;
    }

    struct Chunk {
        u64 count = 0;
        std::vector<QuadForm> forms;
    };

    void scan(u64 a_lo, u64 a_hi, bool collect, Chunk& out) const {
        for (u64 a = a_lo; a <= a_hi; ++a) {
            for (i64 b : middle_coefficients(a)) {
                const u64 b_abs = static_cast<u64>(b < 0 ? -b : b);
                const u64 c = static_cast<u64>((static_cast<detail::u128>(b_abs) * b_abs + abs_d) / (4 * a));
                if (c < a) continue;
                if (b < 0 && (b_abs == a || a == c)) continue;
                if (detail::gcd_u64(detail::gcd_u64(a, b_abs), c) != 1) continue;
                ++out.count;
                if (collect) {
                    out.forms.push_back({BigInt(static_cast<unsigned long>(a)), BigInt(static_cast<long>(b)),
                                         BigInt(static_cast<unsigned long>(c))});
                }
            }
        }
    }
};

void require_negative_discriminant(const BigInt& D) {
    if (D >= 0) throw DomainError("discriminant must be negative, got " + to_string(D));
    const BigInt r = mod_floor(D, 4);
    if (r != 0 && r != 1) throw DomainError("discriminant must be 0 or 1 mod 4, got " + to_string(D));
}

const std::vector<std::uint32_t>& dirichlet_spf() {
    static const std::vector<std::uint32_t> spf = smallest_prime_factors(kMaxDirichletDiscriminant);
    return spf;
}

}  // namespace

bool is_reduced(const QuadForm& f) {
    if (f.a <= 0 || f.discriminant() >= 0) return false;
    const BigInt b_abs = qf::abs(f.b);
    if (b_abs > f.a || f.a > f.c) return false;
    if ((b_abs == f.a || f.a == f.c) && f.b < 0) return false;
    return true;
}

QuadForm reduce_form(const QuadForm& f) {
    if (f.discriminant() >= 0) throw DomainError("reduce_form requires a negative discriminant");
    if (f.a <= 0) throw DomainError("reduce_form requires a > 0 (positive definite)");

    QuadForm g = f;
    auto normalize = [&g] {
        // x -> x + k y with k = floor((a - b) / 2a) moves b into (-a, a].
        const BigInt k = floor_div(BigInt(g.a - g.b), BigInt(2 * g.a));
        g.c += k * g.b + k * k * g.a;
        g.b += 2 * k * g.a;
    };
    normalize();
    while (g.a > g.c) {
        std::swap(g.a, g.c);
        g.b = -g.b;
        normalize();
    }
    if (g.a == g.c && g.b < 0) g.b = -g.b;
    return g;
}

ClassNumberResult class_number_forms(const BigInt& D, const FormCountOptions& options) {
    require_negative_discriminant(D);
    if (D < -BigInt(std::to_string(kMaxFormCountDiscriminant))) {
        throw UnsupportedRange("|D| = " + to_string(qf::abs(D)) + " exceeds the form-count limit 10^14");
    }
    const Kernel kernel(to_i64(D));

    const u64 a_max = kernel.a_max;
    const u64 chunk_size = std::max<u64>(1, std::min<u64>(1 << 14, (a_max + 63) / 64));
    const u64 n_chunks = (a_max + chunk_size - 1) / chunk_size;
    std::vector<Kernel::Chunk> chunks(n_chunks);

    std::atomic<u64> next{0};
    std::atomic<u64> done{0};
    std::mutex progress_mutex;
    auto worker = [&] {
        for (u64 i = next++; i < n_chunks; i = next++) {
            const u64 lo = 1 + i * chunk_size;
            const u64 hi = std::min(a_max, lo + chunk_size - 1);
            kernel.scan(lo, hi, options.collect_forms, chunks[i]);
            const u64 finished = done += hi - lo + 1;
            if (options.progress) {
                std::lock_guard lock(progress_mutex);
                options.progress(finished, a_max);
            }
        }
    };
    const unsigned n_threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(n_chunks)));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    }

    ClassNumberResult result{D, 0, Method::FormCount, std::nullopt};
    u64 total = 0;
    for (const auto& chunk : chunks) total += chunk.count;
    result.h = BigInt(static_cast<unsigned long>(total));
    if (options.collect_forms) {
        std::vector<QuadForm> forms;
        forms.reserve(total);
        for (auto& chunk : chunks) forms.insert(forms.end(), chunk.forms.begin(), chunk.forms.end());
        result.reduced_forms = std::move(forms);
    }
    return result;
}

bool is_fundamental_discriminant(const BigInt& D) {
    if (D == 0 || D == 1) return false;
    const BigInt r = mod_floor(D, 4);
    if (r == 1) return arith::is_squarefree(D);
    if (r != 0) return false;
    const BigInt m = D / 4;
    const BigInt rm = mod_floor(m, 4);
    return (rm == 2 || rm == 3) && arith::is_squarefree(m);
}

ClassNumberResult class_number_dirichlet(const BigInt& D) {
    if (D >= 0) throw DomainError("discriminant must be negative, got " + to_string(D));
    if (D < -kMaxDirichletDiscriminant) {
        throw UnsupportedRange("character-sum oracle needs |D| <= 10^6, got " + to_string(D));
    }
    if (!is_fundamental_discriminant(D)) throw DomainError("not a fundamental discriminant: " + to_string(D));

    const i64 disc = to_i64(D);
    const i64 n = -disc;
    const auto& spf = dirichlet_spf();

    // (D / .) is completely multiplicative on positive integers.
    std::vector<std::int8_t> chi(static_cast<std::size_t>(n), 0);
    i64 sum = 0;
    if (n > 1) chi[1] = 1;
    for (i64 a = 1; a < n; ++a) {
        if (a > 1) {
            const i64 p = spf[static_cast<std::size_t>(a)];
            chi[static_cast<std::size_t>(a)] =
                p == a ? static_cast<std::int8_t>(arith::kronecker_i64(disc, p))
                       : static_cast<std::int8_t>(chi[static_cast<std::size_t>(p)] * chi[static_cast<std::size_t>(a / p)]);
        }
        sum += chi[static_cast<std::size_t>(a)] * a;
    }
    const i64 w = disc == -3 ? 6 : disc == -4 ? 4 : 2;
    const i64 numerator = w * (sum < 0 ? -sum : sum);
    if (numerator % (2 * n) != 0) {
        throw std::logic_error("character sum not divisible by 2|D| for D = " + std::to_string(disc));
    }
    return {D, BigInt(static_cast<long>(numerator / (2 * n))), Method::Dirichlet, std::nullopt};
}

BigInt fundamental_discriminant(const BigInt& d) {
    if (d == 0 || d == 1) throw DomainError("radicand must not be 0 or 1");
    if (!arith::is_squarefree(d)) throw DomainError("radicand is not square-free: " + to_string(d));
    return mod_floor(d, 4) == 1 ? d : BigInt(4 * d);
}

ClassNumberResult field_class_number(const BigInt& d, const FormCountOptions& options) {
    if (d >= 0) throw DomainError("field_class_number expects an imaginary field (d < 0), got " + to_string(d));
    return class_number_forms(fundamental_discriminant(d), options);
}

}  // namespace qf::classno
