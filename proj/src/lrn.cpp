#include "qfields/lrn.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "qfields/errors.hpp"
#include "qfields/lehmer.hpp"

namespace qf::lrn {

namespace {

struct Base {
    BigInt a;
    BigInt b;
    unsigned s;
};

// Coprime (a, b), a, b >= 1, with a^2 + d b^2 = ell^s, ascending a.
std::vector<Base> base_solutions(const BigInt& d, const BigInt& ell, unsigned s, const LrnBudget& budget) {
    const BigInt target = ipow(ell, s);
    const BigInt a_max = isqrt(target);
    if (a_max > BigInt(static_cast<unsigned long>(budget.max_candidates))) {
        throw ResourceError("base-solution scan for ell^" + std::to_string(s) + " exceeds the candidate budget");
    }
    std::vector<Base> out;
    BigInt rem, b;
    for (BigInt a = 1; a <= a_max; ++a) {
        rem = target - a * a;
        if (rem <= 0 || mpz_divisible_p(rem.get_mpz_t(), d.get_mpz_t()) == 0) continue;
        rem /= d;
        if (!is_square(rem)) continue;
        b = isqrt(rem);
        if (qf::gcd(a, b) == 1) out.push_back({a, b, s});
    }
    return out;
}

std::vector<unsigned> admissible_s(const BigInt& d, unsigned limit) {
    const BigInt h = classno::class_number_forms(BigInt(-4 * d)).h;
    std::vector<unsigned> out;
    for (const auto& s : arith::divisors(h)) {
        if (s > limit) break;
        out.push_back(static_cast<unsigned>(s.get_ui()));
    }
    return out;
}

// Canonical decomposition with x, y > 0 for (a + b sqrt(-d))^t, if it is a
// coprime solution.
std::optional<std::pair<LrnSolution, Decomposition>> raise(const Base& base, unsigned t, const BigInt& d) {
    const ImagQuadInt w = power({base.a, base.b}, t, d);
    if (w.re == 0 || w.im == 0) return std::nullopt;
    Decomposition dec;
    dec.eps = sgn(w.re);
    dec.mu = sgn(w.im) * dec.eps;
    dec.a = base.a;
    dec.b = base.b;
    dec.s = base.s;
    dec.t = t;
    LrnSolution sol{qf::abs(w.re), qf::abs(w.im), base.s * t, dec};
    if (qf::gcd(sol.x, sol.y) != 1) return std::nullopt;
    return std::make_pair(sol, dec);
}

bool by_z_then_x(const LrnSolution& l, const LrnSolution& r) { return std::tie(l.z, l.x, l.y) < std::tie(r.z, r.x, r.y); }

}  // namespace

ImagQuadInt multiply(const ImagQuadInt& l, const ImagQuadInt& r, const BigInt& d) {
    return {l.re * r.re - d * l.im * r.im, l.re * r.im + l.im * r.re};
}

ImagQuadInt power(const ImagQuadInt& base, unsigned t, const BigInt& d) {
    ImagQuadInt acc{1, 0};
    for (unsigned i = 0; i < t; ++i) acc = multiply(acc, base, d);
    return acc;
}

ImagQuadInt expand(const Decomposition& dec, const BigInt& d) {
    ImagQuadInt w = power({dec.a, dec.mu * dec.b}, dec.t, d);
    w.re *= dec.eps;
    w.im *= dec.eps;
    return w;
}

void validate(const LrnInstance& inst) {
    if (inst.d < 2 || inst.d == 3) throw DomainError("d must be >= 2 and != 3, got " + to_string(inst.d));
    if (inst.ell <= 1) throw DomainError("ell must be > 1, got " + to_string(inst.ell));
    if (qf::gcd(inst.ell, BigInt(2 * inst.d)) != 1) {
        throw DomainError("gcd(ell, 2d) must be 1 for ell = " + to_string(inst.ell) + ", d = " + to_string(inst.d));
    }
    if (inst.z_max < 1) throw DomainError("z_max must be >= 1");
}

std::vector<LrnSolution> solve_brute(const LrnInstance& inst, const LrnBudget& budget) {
    validate(inst);
    BigInt work = 0;
    for (unsigned z = 1; z <= inst.z_max; ++z) work += isqrt(ipow(inst.ell, z));
    if (work > BigInt(static_cast<unsigned long>(budget.max_candidates))) {
        throw ResourceError("brute-force scan needs " + to_string(work) + " candidates, over budget");
    }

    std::vector<LrnSolution> out;
    BigInt rem, y;
    for (unsigned z = 1; z <= inst.z_max; ++z) {
        const BigInt target = ipow(inst.ell, z);
        const BigInt x_max = isqrt(target);
        for (BigInt x = 1; x <= x_max; ++x) {
            rem = target - x * x;
            if (rem <= 0 || mpz_divisible_p(rem.get_mpz_t(), inst.d.get_mpz_t()) == 0) continue;
            rem /= inst.d;
            if (!is_square(rem)) continue;
            y = isqrt(rem);
            if (qf::gcd(x, y) == 1) out.push_back({x, y, z, std::nullopt});
        }
    }
    std::sort(out.begin(), out.end(), by_z_then_x);
    return out;
}

std::vector<LrnSolution> solve_structured(const LrnInstance& inst, const LrnBudget& budget) {
    validate(inst);
    std::map<std::tuple<unsigned, BigInt, BigInt>, LrnSolution> found;
    for (unsigned s : admissible_s(inst.d, inst.z_max)) {
        for (const Base& base : base_solutions(inst.d, inst.ell, s, budget)) {
            for (unsigned t = 1; s * t <= inst.z_max; ++t) {
                auto raised = raise(base, t, inst.d);
                if (!raised) continue;
                const auto& sol = raised->first;
                found.try_emplace({sol.z, sol.x, sol.y}, sol);
            }
        }
    }
    std::vector<LrnSolution> out;
    out.reserve(found.size());
    for (auto& [key, sol] : found) out.push_back(std::move(sol));
    std::sort(out.begin(), out.end(), by_z_then_x);
    return out;
}

std::optional<Decomposition> decompose(const LrnInstance& inst, const LrnSolution& sol, const LrnBudget& budget) {
    validate(inst);
    for (unsigned s : admissible_s(inst.d, sol.z)) {
        if (sol.z % s != 0) continue;
        for (const Base& base : base_solutions(inst.d, inst.ell, s, budget)) {
            auto raised = raise(base, sol.z / s, inst.d);
            if (raised && raised->first.x == sol.x && raised->first.y == sol.y) return raised->second;
        }
    }
    return std::nullopt;
}

namespace {

class CheckList {
public:
    explicit CheckList(Theorem31Report& report) : report_(report) {}

    bool require(std::string name, bool passed, std::string detail = {}) {
        report_.hypotheses.push_back({name, passed, std::move(detail)});
        if (!passed && !report_.failed_check) report_.failed_check = std::move(name);
        return passed;
    }

private:
    Theorem31Report& report_;
};

BigInt lucas_signed(long j) {
    BigInt v = lehmer::lucas(j < 0 ? -j : j);
    if (j < 0 && (-j) % 2 == 1) v = -v;
    return v;
}

EliminationTrace eliminate_small_t(const BigInt& p, const BigInt& d) {
    EliminationTrace tr;
    const BigInt p2 = p * p;
    const BigInt three_d = 3 * d;
    auto solvable = [&](const BigInt& rhs) {
        // 3 d b^2 = rhs with b >= 1
        if (rhs <= 0 || mpz_divisible_p(rhs.get_mpz_t(), three_d.get_mpz_t()) == 0) return false;
        return is_square(BigInt(rhs / three_d));
    };
    tr.t3_plus_solvable = solvable(p2 - 1);
    tr.t3_minus_solvable = solvable(p2 + 1);
    // b odd and d = 2 mod 4 make 3 d b^2 = 2 mod 4, while p^2 - 1 = 0 mod 4.
    tr.t3_plus_excluded_mod4 = mod_floor(BigInt(p2 - 1), 4) == 0 && mod_floor(d, 4) == 2;
    tr.t3_minus_excluded_mod3 = mod_floor(BigInt(p2 + 1), 3) != 0;

    const BigInt four_d = 4 * d;
    auto hits = [&](const BigInt& v) {
        if (v >= 0 || mpz_divisible_p(v.get_mpz_t(), four_d.get_mpz_t()) == 0) return false;
        return is_square(BigInt(-v / four_d));
    };
    const long K = static_cast<long>(tr.t5_k_bound);
    for (long k = -K; k <= K; ++k) {
        for (long eps : {1L, -1L}) {
            if (k >= 3 && hits(lehmer::fibonacci(k - 2 * eps))) ++tr.t5_matches;
            if (k != 1 && hits(lucas_signed(k - 2 * eps))) ++tr.t5_matches;
        }
    }
    return tr;
}

}  // namespace

Theorem31Report theorem31_verify(const BigInt& ell, const BigInt& n, const BigInt& p, const Theorem31Options& options) {
    Theorem31Report report;
    report.ell = ell;
    report.n = n;
    report.p = p;
    CheckList checks(report);

    const bool small_p = p == 3 || p == 5;
    report.branch = small_p ? "p in {3,5}" : "general";

    if (!checks.require("ell > 1 odd", ell > 1 && mpz_odd_p(ell.get_mpz_t()) != 0)) return report;
    if (!checks.require("n > 1 odd", n > 1 && mpz_odd_p(n.get_mpz_t()) != 0)) return report;
    if (n > 100'000) throw DomainError("exponent n = " + to_string(n) + " is too large to evaluate ell^n");
    if (!checks.require("p odd prime", p > 2 && arith::is_prime(p))) return report;
    if (!checks.require("ell = 3 mod 4", mod_floor(ell, 4) == 3)) return report;
    if (!checks.require("gcd(ell, p) = 1", qf::gcd(ell, p) == 1)) return report;

    const unsigned long exponent = n.get_ui();
    const BigInt ell_n = ipow(ell, exponent);
    if (!checks.require("p^2 < ell^n", p * p < ell_n)) return report;

    const auto sf = arith::squarefree_decompose(BigInt(ell_n - p * p), options.factor_budget);
    report.d = sf.s;
    report.r = sf.f;
    const BigInt d = report.d;

    if (small_p) {
        if (!checks.require("(ell, n) != (3, 3)", !(ell == 3 && n == 3))) return report;
    } else {
        const BigInt pm = mod_floor(p, d);
        const bool ok = d > 2 ? (pm != 1 && pm != d - 1) : false;
        if (!checks.require("p != +-1 mod d", ok, "p mod d = " + to_string(pm) + ", d = " + to_string(d))) {
            return report;
        }
    }
    checks.require("d = 2 mod 4", mod_floor(d, 4) == 2, "implied by ell = 3 mod 4 with n, p odd");

    report.trace = eliminate_small_t(p, d);

    if (ell_n <= options.decomposition_limit && d >= 2 && d != 3 && qf::gcd(ell, BigInt(2 * d)) == 1) {
        const LrnInstance inst{d, ell, static_cast<unsigned>(exponent)};
        report.decomposition = decompose(inst, {p, report.r, static_cast<unsigned>(exponent), std::nullopt});
    }

    report.class_number = classno::class_number_forms(BigInt(-4 * d), options.forms).h;
    report.field_class_number = classno::field_class_number(BigInt(-d), options.forms).h;
    report.verdict = mpz_divisible_p(report.class_number->get_mpz_t(), n.get_mpz_t()) != 0;
    return report;
}

}  // namespace qf::lrn
