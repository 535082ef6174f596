#pragma once

#include <string_view>
#include <vector>

#include "qfields/arith.hpp"
#include "qfields/bigint.hpp"

namespace qf::lehmer {

/// Parameters (a, b) = ((alpha + beta)^2, (alpha - beta)^2) of a Lehmer pair.
/// q = (a - b) / 4 = alpha * beta. Only valid pairs can be constructed.
class LehmerParams {
public:
    /// Throws DomainError unless a, b are nonzero, a != b, a = b mod 4,
    /// gcd(a, q) = 1 and alpha/beta is not a root of unity (no L_n = 0, n <= 12).
    static LehmerParams make(const BigInt& a, const BigInt& b);
    static bool is_valid(const BigInt& a, const BigInt& b);

    const BigInt& a() const { return a_; }
    const BigInt& b() const { return b_; }
    const BigInt& q() const { return q_; }

private:
    LehmerParams(BigInt a, BigInt b, BigInt q) : a_(std::move(a)), b_(std::move(b)), q_(std::move(q)) {}

    BigInt a_;
    BigInt b_;
    BigInt q_;
};

/// L_0 .. L_n. Odd indices: L_1 = 1, L_3 = (3a + b)/4; even: L_0 = 0,
/// L_2 = 1; both continue with L_{k+2} = ((a + b)/2) L_k - q^2 L_{k-2}.
std::vector<BigInt> lehmer_sequence(const LehmerParams& p, unsigned long n);

BigInt lehmer_number(const LehmerParams& p, unsigned long n);

/// |L_n| with every prime dividing a*b*L_1*...*L_{n-1} removed. It is 1
/// exactly when L_n has no primitive divisor. Needs no factoring.
BigInt primitive_part(const LehmerParams& p, unsigned long n);

/// Primes dividing L_n but not a*b*L_1*...*L_{n-1}, ascending. n >= 2.
/// Factoring the primitive part may throw ResourceError.
std::vector<BigInt> primitive_divisors(const LehmerParams& p, unsigned long n,
                                       const arith::FactorBudget& budget = {});

bool has_primitive_divisor(const LehmerParams& p, unsigned long n);

/// Same pair up to multiplying alpha, beta by a unit in {+-1, +-i}.
bool equivalent_params(const LehmerParams& p1, const LehmerParams& p2);

struct FamilySearchBounds {
    unsigned max_k = 60;
    BigInt max_u = 10'000;
};

/// Whether p (up to equivalence) is a known no-primitive-divisor pair at
/// index t: the sporadic table for t in {7, 9, 13, 15} and the parametrized
/// families for t in {3, 5}. Other odd t >= 3 have no entries.
bool exceptional_table_lookup(unsigned long t, const LehmerParams& p, const FamilySearchBounds& bounds = {});

struct TableEntry {
    unsigned t;
    BigInt a;
    BigInt b;
};

const std::vector<TableEntry>& sporadic_table();
int table_version();
/// The embedded data file, verbatim.
std::string_view table_json();

/// F_0 = 0, F_1 = 1; L_0 = 2, L_1 = 1. k >= 0.
BigInt fibonacci(long k);
BigInt lucas(long k);

}  // namespace qf::lehmer
