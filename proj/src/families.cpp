#include "qfields/families.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "qfields/classno.hpp"
#include "qfields/errors.hpp"

namespace qf::families {

namespace {

void require_shape(unsigned n, const BigInt& k) {
    if (n < 3 || n % 2 == 0) throw DomainError("n must be odd and >= 3, got " + std::to_string(n));
    if (k < 2) throw DomainError("k must be >= 2, got " + qf::to_string(k));
}

BigInt ell_of(unsigned n, const BigInt& k) { return 4 * ipow(k, n) - 1; }

FamilyTuple skeleton(std::string kind, unsigned n, const BigInt& k) {
    require_shape(n, k);
    FamilyTuple t;
    t.kind = std::move(kind);
    t.n = n;
    t.k = k;
    t.d = base_radicand(n, k);
    t.ell = ell_of(n, k);
    t.hypotheses.push_back({"ell = 3 mod 4", mod_floor(*t.ell, 4) == 3, "ell = " + qf::to_string(*t.ell)});
    t.hypotheses.push_back({"V >= 3 odd, (n, V) != (5, 3)", *t.ell >= 3 && !(n == 5 && *t.ell == 3), ""});
    for (long off : {0L, 1L, 4L}) t.members.push_back({BigInt(off), *t.d + off, {}, {}, {}, {}, MemberStatus::Pending, {}});
    return t;
}

// Hypotheses that let offset 4p^2 inherit n | h. Returns the first failure.
std::optional<HypothesisCheck> check_prime(FamilyTuple& t, long p, const ConstructOptions& options) {
    const BigInt bp(p);
    const BigInt& ell = *t.ell;
    std::vector<HypothesisCheck> local;
    auto require = [&](std::string name, bool passed, std::string detail) {
        local.push_back({std::move(name) + " [p=" + std::to_string(p) + "]", passed, std::move(detail)});
        return passed;
    };
    auto finish = [&]() -> std::optional<HypothesisCheck> {
        t.hypotheses.insert(t.hypotheses.end(), local.begin(), local.end());
        if (!local.back().passed) return local.back();
        return std::nullopt;
    };

    if (!require("p odd prime", p > 2 && arith::is_prime(bp), "")) return finish();
    const BigInt g = qf::gcd(ell, bp);
    if (!require("gcd(ell, p) = 1", g == 1, "gcd(" + qf::to_string(ell) + ", " + std::to_string(p) + ") = " + qf::to_string(g))) {
        return finish();
    }
    const BigInt ell_n = ipow(ell, t.n);
    if (!require("p^2 < ell^n", bp * bp < ell_n, "")) return finish();
    if (p == 3 || p == 5) {
        require("(ell, n) != (3, 3)", !(ell == 3 && t.n == 3), "congruence condition waived for p in {3,5}");
        return finish();
    }
    const BigInt d_prime = arith::squarefree_decompose(BigInt(ell_n - bp * bp), options.factor_budget).s;
    const BigInt pm = mod_floor(bp, d_prime);
    require("p != +-1 mod d'", d_prime > 2 && pm != 1 && pm != d_prime - 1,
            "d' = " + qf::to_string(d_prime) + ", p mod d' = " + qf::to_string(pm));
    return finish();
}

void add_prime_member(FamilyTuple& t, long p) {
    const BigInt off = 4 * BigInt(p) * p;
    t.p_list.push_back(p);
    t.members.push_back({off, *t.d + off, {}, {}, {}, {}, MemberStatus::Pending, {}});
}

void add_primes(FamilyTuple& t, const std::vector<long>& primes, const ConstructOptions& options) {
    for (long p : primes) {
        if (auto failed = check_prime(t, p, options)) {
            if (options.mode == Mode::Strict) throw Rejection(failed->name, failed->detail);
            t.warnings.push_back("dropped p = " + std::to_string(p) + ": " + failed->name +
                                 (failed->detail.empty() ? "" : " (" + failed->detail + ")"));
            continue;
        }
        add_prime_member(t, p);
    }
}

void verify_member(Member& m, unsigned n, const VerifyOptions& options) {
    try {
        const auto sf = arith::squarefree_decompose(m.radicand, options.factor_budget);
        m.squarefree_part = sf.s;
        m.cofactor = sf.f;
        if (sf.s >= 0) {
            m.status = MemberStatus::Error;
            m.note = "radicand is not imaginary";
            return;
        }
        if (qf::abs(sf.s) > options.max_abs_squarefree) {
            m.status = MemberStatus::UnverifiedBudget;
            m.note = "unverified (budget): |square-free part| > " + qf::to_string(options.max_abs_squarefree);
            return;
        }
        classno::FormCountOptions forms;
        forms.threads = options.threads;
        forms.progress = options.progress;
        m.class_number = classno::field_class_number(sf.s, forms).h;
        m.divisible = mpz_divisible_ui_p(m.class_number->get_mpz_t(), n) != 0;
        m.status = MemberStatus::Verified;
    } catch (const UnsupportedRange& e) {
        m.status = MemberStatus::UnverifiedBudget;
        m.note = std::string("unverified (budget): ") + e.what();
    } catch (const ResourceError& e) {
        m.status = MemberStatus::UnverifiedBudget;
        m.note = std::string("unverified (budget): ") + e.what();
    } catch (const std::exception& e) {
        m.status = MemberStatus::Error;
        m.note = e.what();
    }
}

}  // namespace

BigInt base_radicand(unsigned n, const BigInt& k) { return 4 * ipow(BigInt(1 - 4 * ipow(k, n)), n); }

bool n_membership(unsigned n, const BigInt& k, const VerifyOptions& options) {
    require_shape(n, k);
    const BigInt s = arith::squarefree_decompose(BigInt(1 - 4 * ipow(k, n)), options.factor_budget).s;
    if (qf::abs(s) > options.max_abs_squarefree) {
        throw ResourceError("square-free part " + qf::to_string(s) + " is over the class-number budget");
    }
    classno::FormCountOptions forms;
    forms.threads = options.threads;
    const BigInt h = classno::field_class_number(s, forms).h;
    return mpz_divisible_ui_p(h.get_mpz_t(), n) != 0;
}

FamilyTuple quadruple(unsigned n, long p, const BigInt& k, const ConstructOptions& options) {
    FamilyTuple t = skeleton("quadruple", n, k);
    ConstructOptions strict = options;
    strict.mode = Mode::Strict;
    add_primes(t, {p}, strict);
    return t;
}

FamilyTuple quintuple(unsigned n, const BigInt& k, const ConstructOptions& options) {
    FamilyTuple t = skeleton("quintuple", n, k);
    ConstructOptions strict = options;
    strict.mode = Mode::Strict;
    add_primes(t, {3, 5}, strict);
    return t;
}

FamilyTuple pi_tuple(unsigned n, long m, const BigInt& k, const ConstructOptions& options) {
    if (m < 2) throw DomainError("m must be >= 2, got " + std::to_string(m));
    FamilyTuple t = skeleton("pi-tuple", n, k);
    t.m = m;
    std::vector<long> odd;
    for (auto p : arith::primes_up_to(m)) {
        if (p != 2) odd.push_back(static_cast<long>(p));
    }
    add_primes(t, odd, options);
    return t;
}

std::vector<std::string> identity_failures(const FamilyTuple& t) {
    std::vector<std::string> failures;
    if (!t.k) return failures;
    const unsigned n = t.n;
    const BigInt& k = *t.k;
    const BigInt u = 4 * ipow(k, n) - 1;  // U = V = ell
    const BigInt d = base_radicand(n, k);
    const BigInt ell_n = ipow(u, n);
    if (!t.d || *t.d != d) failures.push_back("d != 4(1 - 4k^n)^n");
    if (!t.ell || *t.ell != u) failures.push_back("ell != 4k^n - 1");
    if (d >= 0) failures.push_back("d is not negative");
    if (d + 1 != 1 - 4 * ell_n) failures.push_back("d + 1 != 1 - 4U^n");
    if (d + 4 != 4 * (1 - ell_n)) failures.push_back("d + 4 != 4(1 - V^n)");
    for (long p : t.p_list) {
        const BigInt p2 = BigInt(p) * p;
        if (d + 4 * p2 != 4 * (p2 - ell_n)) failures.push_back("d + 4p^2 != 4(p^2 - ell^n) for p = " + std::to_string(p));
    }
    for (const auto& m : t.members) {
        if (m.radicand != d + m.offset) failures.push_back("radicand != d + offset at offset " + qf::to_string(m.offset));
    }
    return failures;
}

FamilyTuple verify_tuple(FamilyTuple t, const VerifyOptions& options) {
    if (t.n < 3 || t.n % 2 == 0) throw DomainError("n must be odd and >= 3");
    const auto failures = identity_failures(t);
    if (!failures.empty()) {
        t.warnings.insert(t.warnings.end(), failures.begin(), failures.end());
        t.verdict = Verdict::Failed;
        return t;
    }

    const unsigned workers = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(t.members.size())));
    VerifyOptions per_member = options;
    if (workers > 1) {
        per_member.threads = 1;
        per_member.progress = nullptr;
    }
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < t.members.size(); i = next++) verify_member(t.members[i], t.n, per_member);
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }

    bool complete = true;
    bool all_divisible = true;
    for (const auto& m : t.members) {
        if (m.status != MemberStatus::Verified) complete = false;
        if (m.divisible && !*m.divisible) all_divisible = false;
        if (m.status == MemberStatus::Error) all_divisible = false;
    }
    t.verdict = !all_divisible ? Verdict::Failed : complete ? Verdict::Verified : Verdict::Incomplete;
    return t;
}

std::string to_string(MemberStatus s) {
    switch (s) {
        case MemberStatus::Pending: return "pending";
        case MemberStatus::Verified: return "verified";
        case MemberStatus::UnverifiedBudget: return "unverified-budget";
        case MemberStatus::Error: return "error";
    }
    return "pending";
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Unverified: return "unverified";
        case Verdict::Verified: return "verified";
        case Verdict::Incomplete: return "incomplete";
        case Verdict::Failed: return "failed";
    }
    return "unverified";
}

MemberStatus member_status_from_string(const std::string& s) {
    for (auto v : {MemberStatus::Pending, MemberStatus::Verified, MemberStatus::UnverifiedBudget, MemberStatus::Error}) {
        if (to_string(v) == s) return v;
    }
    throw DomainError("unknown member status '" + s + "'");
}

Verdict verdict_from_string(const std::string& s) {
    for (auto v : {Verdict::Unverified, Verdict::Verified, Verdict::Incomplete, Verdict::Failed}) {
        if (to_string(v) == s) return v;
    }
    throw DomainError("unknown verdict '" + s + "'");
}

}  // namespace qf::families
