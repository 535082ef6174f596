#include "doctest.h"
#include "oracles.hpp"
#include "qfields/arith.hpp"
#include "qfields/errors.hpp"

#include <random>

using namespace qf;
using namespace qf::arith;

namespace {

std::vector<std::pair<std::int64_t, unsigned>> as_pairs(const Factorization& f) {
    std::vector<std::pair<std::int64_t, unsigned>> out;
    for (const auto& pp : f.factors) out.emplace_back(to_i64(pp.prime), pp.exponent);
    return out;
}

}  // namespace

TEST_SUITE("arith") {

TEST_CASE("factorize small values") {
    CHECK(as_pairs(factorize(12)) == std::vector<std::pair<std::int64_t, unsigned>>{{2, 2}, {3, 1}});
    CHECK(as_pairs(factorize(119164)) == oracle::trial_factor(119164));
    CHECK(as_pairs(factorize(119164)) == std::vector<std::pair<std::int64_t, unsigned>>{{2, 2}, {31, 3}});
    CHECK(as_pairs(factorize(14891)) == std::vector<std::pair<std::int64_t, unsigned>>{{14891, 1}});
    CHECK(oracle::trial_is_prime(14891));
    CHECK_THROWS_AS(factorize(1), DomainError);
    CHECK_THROWS_AS(factorize(-5), DomainError);
}

TEST_CASE("factorize agrees with trial division on [2, 10^6]") {
    for (std::int64_t m = 2; m <= 1'000'000; ++m) {
        const auto f = factorize(m);
        REQUIRE(f.product() == m);
        for (const auto& pp : f.factors) REQUIRE(is_prime(pp.prime));
        if (m % 997 == 0) REQUIRE(as_pairs(f) == oracle::trial_factor(m));
    }
}

TEST_CASE("factorize beyond trial division") {
    const BigInt p = parse_bigint("1000000007"), q = parse_bigint("998244353");
    const auto f = factorize(p * q * q);
    REQUIRE(f.factors.size() == 2);
    CHECK(f.factors[0] == PrimePower{q, 2});
    CHECK(f.factors[1] == PrimePower{p, 1});

    // Semiprime with two 40-bit factors goes through the multiprecision rho.
    const BigInt r = parse_bigint("1099511627791"), s = parse_bigint("1099511627873");
    REQUIRE(is_prime(r));
    REQUIRE(is_prime(s));
    const auto g = factorize(r * s * 3);
    CHECK(g.product() == r * s * 3);
    CHECK(g.factors.size() == 3);

    // Perfect powers of a large prime.
    const auto h = factorize(ipow(r, 5));
    REQUIRE(h.factors.size() == 1);
    CHECK(h.factors[0] == PrimePower{r, 5});
}

TEST_CASE("factorize is deterministic and honours the budget") {
    const BigInt n = parse_bigint("1208925819614629174706189");  // 2^80 + 13
    const auto a = factorize(n), b = factorize(n);
    CHECK(a.factors == b.factors);
    CHECK(a.product() == n);

    const BigInt hard = parse_bigint("1000000000000000003") * parse_bigint("1000000000000000009");
    CHECK_THROWS_AS(factorize(hard, FactorBudget{10}), ResourceError);
}

TEST_CASE("is_prime") {
    CHECK(is_prime(2));
    CHECK(is_prime(31));
    CHECK_FALSE(is_prime(119163));
    CHECK(119163 == 3 * 39721);
    CHECK_FALSE(is_prime(1));
    CHECK_FALSE(is_prime(0));
    CHECK_FALSE(is_prime(-7));
    for (std::int64_t m = 0; m < 200'000; ++m) REQUIRE(is_prime(m) == oracle::trial_is_prime(m));
    // Strong pseudoprimes to several small bases.
    CHECK_FALSE(is_prime(parse_bigint("3215031751")));
    CHECK_FALSE(is_prime(parse_bigint("3825123056546413051")));
    CHECK_FALSE(is_prime(parse_bigint("318665857834031151167461")));
    CHECK(is_prime(parse_bigint("18446744073709551557")));
    CHECK(is_prime(parse_bigint("100000000000000000039")));
    CHECK(is_prime_u64(18446744073709551557ull));
    CHECK_FALSE(is_prime_u64(18446744073709551615ull));
}

TEST_CASE("is_prime refuses to guess outside the proven range") {
    // A probable prime past the bound cannot be certified.
    CHECK_THROWS_AS(is_prime(ipow(2, 89) - 1), UnsupportedRange);
    // Compositeness is proven at any size once a witness turns up. The bound
    // itself fools the first 13 prime bases but not base 43 onward.
    CHECK_FALSE(is_prime(primality_bound()));
    CHECK_FALSE(is_prime(ipow(2, 200)));
    CHECK_FALSE(is_prime((ipow(2, 61) - 1) * (ipow(2, 31) - 1)));
}

TEST_CASE("squarefree_decompose examples") {
    auto check = [](std::int64_t m, std::int64_t s, std::int64_t f) {
        const auto sf = squarefree_decompose(m);
        CHECK(sf.s == s);
        CHECK(sf.f == f);
    };
    check(12, 3, 2);
    check(-119164, -31, 62);
    check(-29790, -3310, 3);
    check(-1, -1, 1);
    check(1, 1, 1);
    check(-4, -1, 2);
    CHECK_THROWS_AS(squarefree_decompose(0), DomainError);
}

TEST_CASE("squarefree_decompose on [-10^6, 10^6]") {
    for (std::int64_t m = -1'000'000; m <= 1'000'000; ++m) {
        if (m == 0) continue;
        const auto sf = squarefree_decompose(m);
        REQUIRE(sf.s * sf.f * sf.f == m);
        REQUIRE(sf.f > 0);
        if (m % 101 == 0) REQUIRE(oracle::squarefree_by_trial(to_i64(sf.s)));
        REQUIRE(is_squarefree(sf.s));
    }
}

TEST_CASE("kronecker examples") {
    CHECK(kronecker(-4, 3) == -1);
    CHECK(kronecker(-4, 5) == 1);
    CHECK(kronecker(-23, 2) == 1);
    CHECK(kronecker_i64(-23, 2) == 1);
}

TEST_CASE("kronecker matches the definition and is multiplicative") {
    for (std::int64_t D = -100; D <= 100; ++D) {
        for (std::int64_t n1 = 1; n1 <= 100; ++n1) {
            const int k1 = kronecker(D, n1);
            REQUIRE(k1 == oracle::kronecker_by_definition(D, n1));
            REQUIRE(k1 == kronecker_i64(D, n1));
            for (std::int64_t n2 = 1; n2 <= 100; ++n2) {
                REQUIRE(kronecker(D, n1 * n2) == k1 * kronecker(D, n2));
            }
        }
        REQUIRE(kronecker(D, -7) == oracle::kronecker_by_definition(D, -7));
        REQUIRE(kronecker_i64(D, -7) == kronecker(D, -7));
        REQUIRE(kronecker_i64(D, 0) == kronecker(D, 0));
    }
    std::mt19937_64 rng(7);
    for (int i = 0; i < 20000; ++i) {
        const auto D = static_cast<std::int64_t>(rng() % 2'000'000'001) - 1'000'000'000;
        const auto n = static_cast<std::int64_t>(rng() % 2'000'001) - 1'000'000;
        REQUIRE(kronecker_i64(D, n) == kronecker(D, n));
    }
}

TEST_CASE("primes_up_to") {
    CHECK(primes_up_to(10) == std::vector<std::int64_t>{2, 3, 5, 7});
    CHECK(primes_up_to(1).empty());
    const auto p31 = primes_up_to(31);
    CHECK(p31.size() == 11);
    CHECK(p31.back() == 31);
    for (std::int64_t m : {0, 2, 3, 4, 97, 1000, 65536, 100000}) REQUIRE(primes_up_to(m) == oracle::eratosthenes(m));
}

TEST_CASE("divisors") {
    CHECK(divisors(1) == std::vector<BigInt>{1});
    CHECK(divisors(12) == std::vector<BigInt>{1, 2, 3, 4, 6, 12});
    for (int m = 1; m <= 500; ++m) {
        std::vector<BigInt> expect;
        for (int d = 1; d <= m; ++d)
            if (m % d == 0) expect.emplace_back(d);
        REQUIRE(divisors(m) == expect);
    }
    CHECK_THROWS_AS(divisors(0), DomainError);
}

}  // TEST_SUITE
