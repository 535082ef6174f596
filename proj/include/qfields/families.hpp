#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qfields/arith.hpp"
#include "qfields/bigint.hpp"
#include "qfields/lrn.hpp"

namespace qf::families {

using lrn::HypothesisCheck;

enum class Mode { Strict, Lenient };

enum class MemberStatus { Pending, Verified, UnverifiedBudget, Error };

enum class Verdict { Unverified, Verified, Incomplete, Failed };

struct Member {
    BigInt offset;
    BigInt radicand;
    std::optional<BigInt> squarefree_part;
    std::optional<BigInt> cofactor;
    std::optional<BigInt> class_number;
    std::optional<bool> divisible;
    MemberStatus status = MemberStatus::Pending;
    std::string note;
};

/// Radicands d + offset for d = 4(1 - 4k^n)^n and offsets {0, 1, 4} plus
/// 4p^2 for each p in p_list. ell = U = V = 4k^n - 1.
///
/// A "custom" tuple carries only n and member radicands (no k, d, ell);
/// verify_tuple skips the construction identities for it.
struct FamilyTuple {
    std::string kind;  // quadruple, quintuple, pi-tuple, custom
    unsigned n = 3;
    std::optional<BigInt> k;
    std::optional<long> m;
    std::vector<long> p_list;
    std::optional<BigInt> d;
    std::optional<BigInt> ell;
    std::vector<Member> members;
    std::vector<HypothesisCheck> hypotheses;
    std::vector<std::string> warnings;
    Verdict verdict = Verdict::Unverified;
};

struct ConstructOptions {
    Mode mode = Mode::Strict;
    arith::FactorBudget factor_budget;
};

struct VerifyOptions {
    arith::FactorBudget factor_budget;
    /// Members whose square-free part exceeds this in absolute value are
    /// reported as unverified instead of attempted.
    BigInt max_abs_squarefree = BigInt("1000000000000");
    /// Members verified concurrently; also passed to the form count.
    unsigned threads = 1;
    std::function<void(std::uint64_t, std::uint64_t)> progress;
};

/// d = 4(1 - 4k^n)^n.
BigInt base_radicand(unsigned n, const BigInt& k);

/// n | h(Q(sqrt(1 - 4k^n))). n odd >= 3, k >= 2.
bool n_membership(unsigned n, const BigInt& k, const VerifyOptions& options = {});

/// Throws DomainError for n even or < 3, k < 2; Rejection naming the failed
/// hypothesis (gcd(ell, p) = 1, p^2 < ell^n, p != +-1 mod d', ...).
FamilyTuple quadruple(unsigned n, long p, const BigInt& k, const ConstructOptions& options = {});

/// Offsets {0, 1, 4, 36, 100}.
FamilyTuple quintuple(unsigned n, const BigInt& k, const ConstructOptions& options = {});

/// Offsets {0, 1, 4} plus 4p^2 for every odd prime p <= m. In lenient mode a
/// prime failing its hypotheses is dropped with a warning.
FamilyTuple pi_tuple(unsigned n, long m, const BigInt& k, const ConstructOptions& options = {});

/// Failed identities as readable strings; empty when all hold exactly.
std::vector<std::string> identity_failures(const FamilyTuple& t);

/// Completes every member: square-free part, class number, n | h.
FamilyTuple verify_tuple(FamilyTuple t, const VerifyOptions& options = {});

std::string to_string(MemberStatus s);
std::string to_string(Verdict v);
MemberStatus member_status_from_string(const std::string& s);
Verdict verdict_from_string(const std::string& s);

}  // namespace qf::families
