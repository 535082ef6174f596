#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qfields/arith.hpp"
#include "qfields/bigint.hpp"
#include "qfields/classno.hpp"

namespace qf::lrn {

/// x^2 + d y^2 = ell^z with gcd(x, y) = 1 and z <= z_max.
struct LrnInstance {
    BigInt d;
    BigInt ell;
    unsigned z_max = 1;
};

/// x + y sqrt(-d) = eps * (a + mu * b sqrt(-d))^t, a^2 + d b^2 = ell^s, z = s t.
struct Decomposition {
    int eps = 1;
    int mu = 1;
    BigInt a;
    BigInt b;
    unsigned s = 0;
    unsigned t = 0;
};

struct LrnSolution {
    BigInt x;
    BigInt y;
    unsigned z = 0;
    std::optional<Decomposition> decomposition;
};

/// Gaussian-style element x + y sqrt(-d) of Z[sqrt(-d)].
struct ImagQuadInt {
    BigInt re;
    BigInt im;
};

ImagQuadInt multiply(const ImagQuadInt& l, const ImagQuadInt& r, const BigInt& d);
ImagQuadInt power(const ImagQuadInt& base, unsigned t, const BigInt& d);
/// eps * (a + mu b sqrt(-d))^t, computed exactly.
ImagQuadInt expand(const Decomposition& dec, const BigInt& d);

struct LrnBudget {
    /// Upper bound on candidate x values examined by a scan.
    std::uint64_t max_candidates = 100'000'000;
};

/// Validates: d >= 2, d != 3, ell > 1, gcd(ell, 2d) = 1, z_max >= 1.
void validate(const LrnInstance& inst);

/// Exhaustive scan over z <= z_max and 1 <= x <= sqrt(ell^z).
/// Sorted by (z, x). Decompositions absent.
std::vector<LrnSolution> solve_brute(const LrnInstance& inst, const LrnBudget& budget = {});

/// Base solutions a^2 + d b^2 = ell^s, gcd(a, b) = 1, for s | h*(-4d)
/// (ascending s, then ascending a), raised to powers t with s t <= z_max.
/// The first decomposition found for each (x, y, z) is kept. Sorted by (z, x).
std::vector<LrnSolution> solve_structured(const LrnInstance& inst, const LrnBudget& budget = {});

/// The decomposition of one known solution, searching only s | gcd(h*(-4d), z).
std::optional<Decomposition> decompose(const LrnInstance& inst, const LrnSolution& sol, const LrnBudget& budget = {});

struct HypothesisCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Finite checks behind ruling out t = 3 and t = 5 for the solution (p, r, n).
struct EliminationTrace {
    // t = 3: p^2 - 3 d b^2 = +1 or -1 has no integer b > 0.
    bool t3_plus_solvable = false;
    bool t3_minus_solvable = false;
    bool t3_plus_excluded_mod4 = false;
    bool t3_minus_excluded_mod3 = false;
    // t = 5: -4 d b^2 equals no F(k - 2e) or L(k - 2e), k <= k_bound.
    unsigned t5_k_bound = 90;
    unsigned t5_matches = 0;
};

struct Theorem31Report {
    BigInt ell;
    BigInt n;
    BigInt p;
    BigInt d;  // positive square-free part of ell^n - p^2
    BigInt r;  // ell^n - p^2 = d r^2
    std::string branch;  // "general" or "p in {3,5}"
    std::vector<HypothesisCheck> hypotheses;
    std::optional<std::string> failed_check;
    std::optional<EliminationTrace> trace;
    std::optional<Decomposition> decomposition;  // of (p, r, n)
    std::optional<BigInt> class_number;          // h*(-4d)
    std::optional<BigInt> field_class_number;    // h(-d), equal to the above
    bool verdict = false;                        // n | h*(-4d)

    bool accepted() const { return !failed_check.has_value(); }
};

struct Theorem31Options {
    arith::FactorBudget factor_budget;
    classno::FormCountOptions forms;
    /// Skip the decomposition search for (p, r, n) when ell^n exceeds this.
    BigInt decomposition_limit = BigInt("1000000000000");
};

/// Checks the hypotheses for (ell, n, p), then computes d and h*(-4d) and
/// reports whether n divides it. A failed hypothesis is reported through
/// failed_check rather than thrown; malformed arguments throw DomainError.
Theorem31Report theorem31_verify(const BigInt& ell, const BigInt& n, const BigInt& p,
                                 const Theorem31Options& options = {});

}  // namespace qf::lrn
