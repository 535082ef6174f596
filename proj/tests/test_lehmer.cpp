#include "doctest.h"
#include "oracles.hpp"
#include "qfields/errors.hpp"
#include "qfields/lehmer.hpp"

#include <random>

using namespace qf;
using namespace qf::lehmer;

namespace {

LehmerParams P(long a, long b) { return LehmerParams::make(a, b); }

// Valid pairs with |a|, |b| <= bound.
std::vector<LehmerParams> valid_pairs(long bound) {
    std::vector<LehmerParams> out;
    for (long a = -bound; a <= bound; ++a)
        for (long b = -bound; b <= bound; ++b)
            if (LehmerParams::is_valid(a, b)) out.push_back(P(a, b));
    return out;
}

struct Listed {
    unsigned t;
    long a, b;
};

// No-primitive-divisor pairs for odd t >= 7, as published.
const std::vector<Listed> kPublished = {
    {7, 1, -7}, {7, 1, -19}, {7, 3, -5}, {7, 5, -7}, {7, 13, -3}, {7, 14, -22},
    {9, 5, -3}, {9, 7, -1},  {9, 7, -5}, {13, 1, -7}, {15, 7, -1}, {15, 10, -2},
};

}  // namespace

TEST_SUITE("lehmer") {

TEST_CASE("parameter validation") {
    CHECK(LehmerParams::is_valid(1, -7));
    CHECK(LehmerParams::is_valid(-1, 7));
    CHECK_FALSE(LehmerParams::is_valid(0, -4));
    CHECK_FALSE(LehmerParams::is_valid(5, 5));
    CHECK_FALSE(LehmerParams::is_valid(1, -6));  // a - b not divisible by 4
    CHECK_FALSE(LehmerParams::is_valid(2, -6));  // gcd(a, q) = 2
    CHECK_FALSE(LehmerParams::is_valid(1, -3));  // alpha/beta a root of unity, L_3 = 0
    CHECK_FALSE(LehmerParams::is_valid(2, -2));
    CHECK_FALSE(LehmerParams::is_valid(3, -1));  // L_6 = 0
    CHECK_THROWS_AS(P(1, -3), DomainError);
    const auto p = P(13, -3);
    CHECK(p.q() == 4);
}

TEST_CASE("lehmer_number examples") {
    const auto p = P(1, -7);
    CHECK(lehmer_number(p, 1) == 1);
    CHECK(lehmer_number(p, 3) == -1);
    CHECK(lehmer_number(p, 5) == -1);
    CHECK(lehmer_number(p, 7) == 7);
    CHECK(lehmer_number(p, 9) == -17);
    CHECK(lehmer_number(p, 11) == 23);
    CHECK(lehmer_number(p, 13) == -1);
    CHECK(lehmer_number(P(7, -1), 15) == -275);
    CHECK(lehmer_number(P(10, -2), 15) == 133);
    CHECK_THROWS_AS(lehmer_number(p, 0), DomainError);
    const auto seq = lehmer_sequence(p, 4);
    CHECK(seq == std::vector<BigInt>{0, 1, 1, -1, -3});
}

TEST_CASE("recurrence equals symbolic expansion") {
    for (const auto& p : valid_pairs(50)) {
        const auto seq = lehmer_sequence(p, 30);
        for (unsigned n = 1; n <= 30; ++n) {
            const auto expect = oracle::lehmer_by_expansion(p.a(), p.b(), n);
            REQUIRE(expect.has_value());
            REQUIRE(seq[n] == *expect);
        }
    }
}

TEST_CASE("L_m divides L_n when m divides n") {
    for (const auto& p : valid_pairs(30)) {
        const auto seq = lehmer_sequence(p, 24);
        for (unsigned n = 1; n <= 24; ++n)
            for (unsigned m = 1; m <= n; ++m)
                if (n % m == 0) REQUIRE(mpz_divisible_p(seq[n].get_mpz_t(), seq[m].get_mpz_t()));
    }
}

TEST_CASE("primitive_divisors examples") {
    CHECK(primitive_divisors(P(1, -7), 7).empty());
    CHECK(primitive_divisors(P(7, -1), 15).empty());
    CHECK(primitive_divisors(P(1, -7), 11) == std::vector<BigInt>{23});
    CHECK(primitive_divisors(P(10, -2), 15).empty());
    CHECK_FALSE(primitive_divisors(P(3, -13), 31).empty());
    CHECK_THROWS_AS(primitive_divisors(P(1, -7), 1), DomainError);
}

TEST_CASE("primitive divisors by factoring agree with the definition") {
    for (const auto& p : valid_pairs(12)) {
        const auto seq = lehmer_sequence(p, 20);
        for (unsigned n = 2; n <= 20; ++n) {
            std::vector<BigInt> expect;
            const BigInt v = abs(seq[n]);
            if (v > 1) {
                for (const auto& [q, e] : oracle::trial_factor(to_i64(v))) {
                    bool primitive = (p.a() * p.b()) % q != 0;
                    for (unsigned k = 1; k < n && primitive; ++k) primitive = seq[k] % q != 0;
                    if (primitive) expect.emplace_back(q);
                }
            }
            if (v.get_si() == 0) continue;
            REQUIRE(primitive_divisors(p, n) == expect);
            REQUIRE(has_primitive_divisor(p, n) == !expect.empty());
        }
    }
}

TEST_CASE("has_primitive_divisor on published pairs") {
    CHECK_FALSE(has_primitive_divisor(P(1, -7), 13));
    CHECK_FALSE(has_primitive_divisor(P(5, -3), 9));
    for (const auto& e : kPublished) {
        REQUIRE(LehmerParams::is_valid(e.a, e.b));
        REQUIRE_FALSE(has_primitive_divisor(P(e.a, e.b), e.t));
        REQUIRE_FALSE(has_primitive_divisor(P(-e.a, -e.b), e.t));
    }
}

TEST_CASE("embedded table equals the published list") {
    const auto& table = sporadic_table();
    REQUIRE(table.size() == kPublished.size());
    for (std::size_t i = 0; i < table.size(); ++i) {
        CHECK(table[i].t == kPublished[i].t);
        CHECK(table[i].a == kPublished[i].a);
        CHECK(table[i].b == kPublished[i].b);
    }
    CHECK(table_version() == 1);
    CHECK(table_json().find("qfields.lehmer-exceptions/1") != std::string_view::npos);
}

TEST_CASE("equivalence is symmetric and ignores the unit sign") {
    CHECK(equivalent_params(P(1, -7), P(1, -7)));
    CHECK(equivalent_params(P(1, -7), P(-1, 7)));
    CHECK_FALSE(equivalent_params(P(1, -7), P(7, -1)));
    for (const auto& p : valid_pairs(20)) {
        const auto neg = P(-to_i64(p.a()), -to_i64(p.b()));
        REQUIRE(equivalent_params(p, neg));
        REQUIRE(equivalent_params(neg, p));
        for (unsigned n : {3u, 5u, 7u, 9u, 13u}) REQUIRE(has_primitive_divisor(p, n) == has_primitive_divisor(neg, n));
    }
}

TEST_CASE("exceptional_table_lookup examples") {
    CHECK(exceptional_table_lookup(7, P(14, -22)));
    CHECK_FALSE(exceptional_table_lookup(13, P(1, -19)));
    CHECK(exceptional_table_lookup(13, P(-1, 7)));
    // F_1 = 1, F_1 - 4 F_3 = -7.
    CHECK(exceptional_table_lookup(5, P(1, -7)));
    CHECK_FALSE(exceptional_table_lookup(11, P(1, -7)));
    CHECK_THROWS_AS(exceptional_table_lookup(8, P(1, -7)), DomainError);
    CHECK_THROWS_AS(exceptional_table_lookup(1, P(1, -7)), DomainError);
}

TEST_CASE("table lookup is exact on small pairs for every odd t up to 29") {
    // Both directions: every pair without a primitive divisor is listed, and
    // every listed pair lacks one.
    for (const auto& p : valid_pairs(40)) {
        for (unsigned t = 3; t <= 29; t += 2) {
            const bool missing = !has_primitive_divisor(p, t);
            const bool listed = exceptional_table_lookup(t, p);
            if (missing != listed) {
                FAIL_CHECK("t=" << t << " (a, b)=(" << to_string(p.a()) << ", " << to_string(p.b())
                                << ") missing=" << missing << " listed=" << listed);
            }
        }
    }
}

TEST_CASE("t = 13 has only the class of (1, -7)") {
    for (const auto& p : valid_pairs(40)) {
        if (!has_primitive_divisor(p, 13)) REQUIRE(equivalent_params(p, P(1, -7)));
    }
}

TEST_CASE("every random pair has a primitive divisor at n = 31") {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<long> dist(-100, 100);
    int tested = 0;
    while (tested < 200) {
        const long a = dist(rng), b = dist(rng);
        if (!LehmerParams::is_valid(a, b)) continue;
        ++tested;
        REQUIRE(has_primitive_divisor(P(a, b), 31));
    }
}

TEST_CASE("fibonacci and lucas") {
    CHECK(fibonacci(0) == 0);
    CHECK(fibonacci(1) == 1);
    CHECK(lucas(0) == 2);
    CHECK(lucas(1) == 1);
    CHECK(fibonacci(10) == 55);
    for (unsigned k = 0; k <= 200; ++k) {
        REQUIRE(fibonacci(k) == oracle::fib_iter(k));
        REQUIRE(lucas(k) == oracle::lucas_iter(k));
    }
    CHECK_THROWS_AS(fibonacci(-1), DomainError);
}

}  // TEST_SUITE
