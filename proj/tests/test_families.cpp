#include "doctest.h"
#include "oracles.hpp"
#include "qfields/classno.hpp"
#include "qfields/errors.hpp"
#include "qfields/families.hpp"
#include "qfields/serialize.hpp"

using namespace qf;
using namespace qf::families;

namespace {

std::vector<BigInt> radicands(const FamilyTuple& t) {
    std::vector<BigInt> out;
    for (const auto& m : t.members) out.push_back(m.radicand);
    return out;
}

std::vector<BigInt> offsets(const FamilyTuple& t) {
    std::vector<BigInt> out;
    for (const auto& m : t.members) out.push_back(m.offset);
    return out;
}

// Class number of Q(sqrt(d)) by the character sum, with the square-free part
// found by trial division.
BigInt character_sum_h(std::int64_t d) {
    std::int64_t s = -1;
    for (const auto& [p, e] : oracle::trial_factor(-d))
        if (e % 2) s *= p;
    const std::int64_t D = ((s % 4) + 4) % 4 == 1 ? s : 4 * s;
    return classno::class_number_dirichlet(D).h;
}

}  // namespace

TEST_SUITE("families") {

TEST_CASE("n_membership") {
    CHECK(n_membership(3, 2));
    CHECK(n_membership(3, 3));
    CHECK(n_membership(5, 2));
    CHECK_THROWS_AS(n_membership(4, 2), DomainError);
    CHECK_THROWS_AS(n_membership(3, 1), DomainError);
}

TEST_CASE("quadruple construction") {
    const auto t = quadruple(3, 3, 2);
    CHECK(*t.d == -119164);
    CHECK(*t.ell == 31);
    CHECK(radicands(t) == std::vector<BigInt>{-119164, -119163, -119160, -119128});
    CHECK(t.p_list == std::vector<long>{3});
    CHECK(t.verdict == Verdict::Unverified);
    for (const auto& m : t.members) CHECK(m.status == MemberStatus::Pending);
    CHECK(identity_failures(t).empty());
}

TEST_CASE("quadruple rejections name the check") {
    try {
        quadruple(3, 3, 4);
        FAIL("expected a rejection");
    } catch (const Rejection& r) {
        CHECK(r.check() == "gcd(ell, p) = 1 [p=3]");
        CHECK(std::string(r.what()).find("gcd(255, 3) = 3") != std::string::npos);
    }
    CHECK_THROWS_AS(quadruple(3, 9, 2), Rejection);
    CHECK_THROWS_AS(quadruple(3, 2, 2), Rejection);
    CHECK_THROWS_AS(quadruple(4, 3, 2), DomainError);
    CHECK_THROWS_AS(quadruple(3, 3, 1), DomainError);
}

TEST_CASE("quadruple with p outside {3, 5} uses the congruence branch") {
    CHECK(29742 == 2 * 3 * 4957);
    CHECK(oracle::squarefree_by_trial(29742));
    const auto t = quadruple(3, 7, 2);
    bool saw = false;
    for (const auto& h : t.hypotheses) {
        if (h.name == "p != +-1 mod d' [p=7]") {
            saw = true;
            CHECK(h.passed);
            CHECK(h.detail == "d' = 29742, p mod d' = 7");
        }
    }
    CHECK(saw);
    CHECK(radicands(t).back() == -119164 + 196);
}

TEST_CASE("quintuple construction") {
    const auto t = quintuple(3, 2);
    CHECK(radicands(t) == std::vector<BigInt>{-119164, -119163, -119160, -119128, -119064});
    CHECK_THROWS_AS(quintuple(3, 4), Rejection);
    const auto t5 = quintuple(5, 2);
    CHECK(*t5.d == 4 * ipow(BigInt(-127), 5));
    CHECK(*t5.ell == 127);
    CHECK(oracle::trial_is_prime(127));
}

TEST_CASE("pi_tuple construction") {
    CHECK(offsets(pi_tuple(3, 6, 2)) == std::vector<BigInt>{0, 1, 4, 36, 100});
    CHECK(offsets(pi_tuple(3, 2, 2)) == std::vector<BigInt>{0, 1, 4});
    const auto t12 = pi_tuple(3, 12, 2);
    CHECK(t12.p_list == std::vector<long>{3, 5, 7, 11});
    CHECK(offsets(t12).back() == 484);
    CHECK_THROWS_AS(pi_tuple(3, 1, 2), DomainError);

    // k = 4 has ell = 255 = 3 * 5 * 17: strict rejects, lenient drops 3, 5, 17.
    CHECK_THROWS_AS(pi_tuple(3, 20, 4), Rejection);
    const auto lenient = pi_tuple(3, 20, 4, {.mode = Mode::Lenient});
    CHECK(lenient.p_list == std::vector<long>{7, 11, 13, 19});
    CHECK(lenient.warnings.size() == 3);
    CHECK(identity_failures(lenient).empty());
}

TEST_CASE("construction identities for odd n <= 9 and k <= 6") {
    for (unsigned n = 3; n <= 9; n += 2) {
        for (long k = 2; k <= 6; ++k) {
            const BigInt U = 4 * ipow(BigInt(k), n) - 1;
            const BigInt Un = ipow(U, n);
            const BigInt d = 4 * ipow(BigInt(1 - 4 * ipow(BigInt(k), n)), n);
            REQUIRE(d + 1 == 1 - 4 * Un);
            REQUIRE(d + 4 == 4 * (1 - Un));
            for (long p : {3L, 5L, 7L, 11L, 13L}) REQUIRE(d + 4 * p * p == 4 * (p * p - Un));

            // p = 3, 5 need no factoring, so every (n, k) builds instantly.
            FamilyTuple t;
            try {
                t = quintuple(n, k);
            } catch (const Rejection&) {
                t = pi_tuple(n, 2, k);
            }
            REQUIRE(*t.d == d);
            REQUIRE(identity_failures(t).empty());
            for (const auto& m : t.members) REQUIRE(m.radicand == d + m.offset);
        }
    }
}

TEST_CASE("identity_failures catches tampering") {
    auto t = quadruple(3, 3, 2);
    t.members[1].radicand += 1;
    CHECK_FALSE(identity_failures(t).empty());
    const auto v = verify_tuple(t);
    CHECK(v.verdict == Verdict::Failed);
}

TEST_CASE("verify quadruple (3, 3, 2)") {
    const auto t = verify_tuple(quadruple(3, 3, 2));
    CHECK(t.verdict == Verdict::Verified);
    CHECK(*t.members[0].squarefree_part == -31);
    CHECK(*t.members[0].cofactor == 62);
    CHECK(*t.members[0].class_number == 3);
    for (const auto& m : t.members) {
        REQUIRE(m.status == MemberStatus::Verified);
        REQUIRE(*m.divisible);
        REQUIRE(*m.squarefree_part * *m.cofactor * *m.cofactor == m.radicand);
        REQUIRE(*m.class_number == character_sum_h(to_i64(m.radicand)));
    }
}

TEST_CASE("verify quintuples") {
    for (long k : {2L, 3L}) {
        const auto t = verify_tuple(quintuple(3, k));
        CHECK(t.verdict == Verdict::Verified);
        CHECK(t.members.size() == 5);
        for (const auto& m : t.members) REQUIRE(*m.divisible);
    }
    CHECK(*verify_tuple(quintuple(3, 3)).members[0].squarefree_part == -107);
}

TEST_CASE("quadruples for n = 3, p = 3 verify at every accepted k") {
    for (long k : {2L, 3L, 5L, 6L}) {
        FamilyTuple t;
        try {
            t = quadruple(3, 3, k);
        } catch (const Rejection&) {
            continue;
        }
        t = verify_tuple(t);
        REQUIRE(t.verdict == Verdict::Verified);
        // Membership of k agrees with the member at offset 0.
        REQUIRE(n_membership(3, k) == *t.members[0].divisible);
    }
}

TEST_CASE("field equality: even cofactors on d, d+4, d+4p^2") {
    const auto t = verify_tuple(pi_tuple(3, 7, 2));
    for (const auto& m : t.members) {
        if (m.offset == 1) continue;
        REQUIRE(*m.cofactor % 2 == 0);
    }
}

TEST_CASE("hand-built tuple") {
    FamilyTuple t;
    t.kind = "custom";
    t.n = 3;
    t.members.push_back({0, -15, {}, {}, {}, {}, MemberStatus::Pending, {}});
    const auto v = verify_tuple(t);
    CHECK(*v.members[0].class_number == 2);
    CHECK_FALSE(*v.members[0].divisible);
    CHECK(v.verdict == Verdict::Failed);
}

TEST_CASE("budget gating marks members unverified") {
    VerifyOptions o;
    o.max_abs_squarefree = 1000;
    const auto t = verify_tuple(quadruple(3, 3, 2), o);
    CHECK(t.members[0].status == MemberStatus::Verified);
    CHECK(t.members[1].status == MemberStatus::UnverifiedBudget);
    CHECK(t.members[1].note.rfind("unverified (budget)", 0) == 0);
    CHECK(t.verdict == Verdict::Incomplete);
}

TEST_CASE("threads give identical records") {
    VerifyOptions one, many;
    many.threads = 4;
    const auto a = serialize::tuple_to_json(verify_tuple(quintuple(5, 2), one));
    const auto b = serialize::tuple_to_json(verify_tuple(quintuple(5, 2), many));
    CHECK(a == b);
}

TEST_CASE("json round trip") {
    for (const auto& t : {quadruple(3, 3, 2), verify_tuple(quintuple(3, 2)), pi_tuple(3, 20, 4, {.mode = Mode::Lenient})}) {
        const auto text = serialize::tuple_to_json(t);
        CHECK(serialize::tuple_to_json(serialize::tuple_from_json(text)) == text);
    }
    const auto custom = serialize::tuple_from_json(R"({"n": 3, "members": [{"radicand": "-15"}, {"radicand": -23}]})");
    CHECK(custom.kind == "custom");
    CHECK(custom.members.size() == 2);
    CHECK(custom.members[1].radicand == -23);
    CHECK_THROWS_AS(serialize::tuple_from_json("{"), DomainError);
    CHECK_THROWS_AS(serialize::tuple_from_json(R"({"n": 4, "members": []})"), DomainError);
    CHECK_THROWS_AS(serialize::tuple_from_json(R"({"schema": "other/1", "n": 3, "members": []})"), DomainError);
    CHECK_THROWS_AS(serialize::tuple_from_json(R"({"n": 3, "members": [{"radicand": "x"}]})"), DomainError);
}

TEST_CASE("csv rows") {
    const auto rows = serialize::tuple_to_csv(verify_tuple(quadruple(3, 3, 2)));
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == "quadruple,3,2,3,-119164,0,-119164,-31,62,3,true,verified,verified");
}

}  // TEST_SUITE
