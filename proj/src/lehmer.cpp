#include "qfields/lehmer.hpp"

#include <algorithm>
#include <string>

#include "json.hpp"

#include "qfields/errors.hpp"

namespace qf::lehmer {

namespace detail {
std::string_view embedded_table_json();
}

namespace {

constexpr unsigned long kRootOfUnityHorizon = 12;

std::vector<BigInt> sequence_unchecked(const BigInt& a, const BigInt& b, unsigned long n) {
    const BigInt q = (a - b) / 4;
    const BigInt s = (a + b) / 2;
    const BigInt q2 = q * q;
    std::vector<BigInt> L(std::max<unsigned long>(n, 3) + 1);
    L[0] = 0;
    L[1] = 1;
    L[2] = 1;
    L[3] = (3 * a + b) / 4;
    for (unsigned long k = 4; k <= n; ++k) L[k] = s * L[k - 2] - q2 * L[k - 4];
    L.resize(n + 1);
    return L;
}

struct Table {
    int version = 0;
    std::vector<TableEntry> sporadic;
};

const Table& table() {
    static const Table t = [] {
        const auto doc = nlohmann::json::parse(detail::embedded_table_json());
        Table out;
        out.version = doc.at("version").get<int>();
        for (const auto& e : doc.at("sporadic")) {
            out.sporadic.push_back({e.at("t").get<unsigned>(), BigInt(e.at("a").get<long>()),
                                    BigInt(e.at("b").get<long>())});
        }
        return out;
    }();
    return t;
}

// Signed Lucas number, L_{-j} = (-1)^j L_j.
BigInt lucas_signed(long k) {
    if (k >= 0) return lucas(k);
    BigInt v = lucas(-k);
    return (-k) % 2 == 0 ? v : BigInt(-v);
}

bool matches(const LehmerParams& p, const BigInt& a, const BigInt& b) {
    return (p.a() == a && p.b() == b) || (p.a() == -a && p.b() == -b);
}

bool in_t3_families(const LehmerParams& p, const FamilySearchBounds& bounds) {
    for (int sign : {1, -1}) {
        const BigInt a = sign * p.a();
        const BigInt b = sign * p.b();
        // (1 + u, 1 - 3u)
        const BigInt u = a - 1;
        if (u != 0 && u != 1 && qf::abs(u) <= bounds.max_u && b == 1 - 3 * u) return true;
        // (3^k + u, 3^k - 3u)
        BigInt pow3 = 1;
        for (unsigned k = 0; k <= bounds.max_k; ++k, pow3 *= 3) {
            const BigInt v = a - pow3;
            if (v == 0 || qf::abs(v) > bounds.max_u) continue;
            if (mod_floor(v, 3) == 0) continue;
            if (k == 1 && v == 1) continue;
            if (b == pow3 - 3 * v) return true;
        }
    }
    return false;
}

// The Lucas branch also needs negative k: (1, 5) is k = -1, eps = -1.
bool in_t5_families(const LehmerParams& p, const FamilySearchBounds& bounds) {
    const long K = static_cast<long>(bounds.max_k);
    for (long k = 3; k <= K; ++k) {
        for (long eps : {1L, -1L}) {
            const BigInt first = fibonacci(k - 2 * eps);
            if (matches(p, first, first - 4 * fibonacci(k))) return true;
        }
    }
    for (long k = -K; k <= K; ++k) {
        if (k == 1) continue;
        for (long eps : {1L, -1L}) {
            const BigInt first = lucas_signed(k - 2 * eps);
            if (matches(p, first, first - 4 * lucas_signed(k))) return true;
        }
    }
    return false;
}

void strip_common_primes(BigInt& g, const BigInt& x) {
    for (BigInt c = qf::gcd(g, x); c > 1; c = qf::gcd(g, x)) g /= c;
}

void require_index(unsigned long n, unsigned long min) {
    if (n < min) throw DomainError("Lehmer index must be >= " + std::to_string(min) + ", got " + std::to_string(n));
}

}  // namespace

bool LehmerParams::is_valid(const BigInt& a, const BigInt& b) {
    if (a == 0 || b == 0 || a == b) return false;
    if (mod_floor(BigInt(a - b), 4) != 0) return false;
    const BigInt q = (a - b) / 4;
    if (qf::gcd(a, q) != 1) return false;
    const auto L = sequence_unchecked(a, b, kRootOfUnityHorizon);
    return std::none_of(L.begin() + 1, L.end(), [](const BigInt& v) { return v == 0; });
}

LehmerParams LehmerParams::make(const BigInt& a, const BigInt& b) {
    if (!is_valid(a, b)) {
        throw DomainError("(" + to_string(a) + ", " + to_string(b) + ") are not Lehmer parameters");
    }
    return LehmerParams(a, b, BigInt((a - b) / 4));
}

std::vector<BigInt> lehmer_sequence(const LehmerParams& p, unsigned long n) {
    return sequence_unchecked(p.a(), p.b(), n);
}

BigInt lehmer_number(const LehmerParams& p, unsigned long n) {
    require_index(n, 1);
    return lehmer_sequence(p, n)[n];
}

BigInt primitive_part(const LehmerParams& p, unsigned long n) {
    require_index(n, 2);
    const auto L = lehmer_sequence(p, n);
    BigInt g = qf::abs(L[n]);
    strip_common_primes(g, p.a() * p.b());
    for (unsigned long k = 1; k < n && g > 1; ++k) strip_common_primes(g, L[k]);
    return g;
}

std::vector<BigInt> primitive_divisors(const LehmerParams& p, unsigned long n, const arith::FactorBudget& budget) {
    const BigInt g = primitive_part(p, n);
    std::vector<BigInt> primes;
    if (g == 1) return primes;
    for (const auto& pp : arith::factorize(g, budget).factors) primes.push_back(pp.prime);
    return primes;
}

bool has_primitive_divisor(const LehmerParams& p, unsigned long n) { return primitive_part(p, n) != 1; }

bool equivalent_params(const LehmerParams& p1, const LehmerParams& p2) { return matches(p1, p2.a(), p2.b()); }

bool exceptional_table_lookup(unsigned long t, const LehmerParams& p, const FamilySearchBounds& bounds) {
    if (t % 2 == 0) throw DomainError("exceptional table is indexed by odd t, got " + std::to_string(t));
    require_index(t, 3);
    if (t == 3) return in_t3_families(p, bounds);
    if (t == 5) return in_t5_families(p, bounds);
    const auto& entries = table().sporadic;
    return std::any_of(entries.begin(), entries.end(),
                       [&](const TableEntry& e) { return e.t == t && matches(p, e.a, e.b); });
}

const std::vector<TableEntry>& sporadic_table() { return table().sporadic; }

int table_version() { return table().version; }

std::string_view table_json() { return detail::embedded_table_json(); }

BigInt fibonacci(long k) {
    if (k < 0) throw DomainError("fibonacci index must be >= 0");
    BigInt r;
    mpz_fib_ui(r.get_mpz_t(), static_cast<unsigned long>(k));
    return r;
}

BigInt lucas(long k) {
    if (k < 0) throw DomainError("lucas index must be >= 0");
    BigInt r;
    mpz_lucnum_ui(r.get_mpz_t(), static_cast<unsigned long>(k));
    return r;
}

}  // namespace qf::lehmer
