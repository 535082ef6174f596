#pragma once

#include <cstdint>
#include <vector>

#include "qfields/bigint.hpp"

namespace qf::arith {

struct PrimePower {
    BigInt prime;
    unsigned exponent = 0;

    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Prime factorization of an integer >= 2, primes strictly increasing.
struct Factorization {
    BigInt input;
    std::vector<PrimePower> factors;

    BigInt product() const;
};

/// m = s * f^2 with s square-free, sign(s) = sign(m), f > 0.
struct SquarefreeDecomposition {
    BigInt input;
    BigInt s;
    BigInt f;
};

struct FactorBudget {
    /// Total Pollard-Brent iterations across one factorization.
    std::uint64_t rho_iterations = 100'000'000;
};

/// Largest value for which is_prime is a proof: Miller-Rabin with the first
/// 13 prime bases is deterministic below 3317044064679887385961981.
const BigInt& primality_bound();

/// Deterministic primality. Composites of any size are recognised; for
/// m >= primality_bound() with no witness found it throws UnsupportedRange.
bool is_prime(const BigInt& m);
bool is_prime_u64(std::uint64_t m);

/// Trial division up to 2^16, then Pollard-Brent rho with a fixed retry
/// schedule (c = 1, 2, 3, ...). Same input gives the same output.
/// Throws DomainError for m < 2 and ResourceError when the budget runs out.
Factorization factorize(const BigInt& m, const FactorBudget& budget = {});

SquarefreeDecomposition squarefree_decompose(const BigInt& m, const FactorBudget& budget = {});

bool is_squarefree(const BigInt& m, const FactorBudget& budget = {});

/// Kronecker symbol (D/n), all integer arguments.
int kronecker(const BigInt& D, const BigInt& n);
int kronecker_i64(std::int64_t D, std::int64_t n);

std::vector<std::int64_t> primes_up_to(std::int64_t m);

/// All positive divisors of m >= 1, ascending.
std::vector<BigInt> divisors(const BigInt& m, const FactorBudget& budget = {});

}  // namespace qf::arith
