#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "qfields/bigint.hpp"

namespace qf::classno {

/// Binary quadratic form a x^2 + b xy + c y^2.
struct QuadForm {
    BigInt a;
    BigInt b;
    BigInt c;

    BigInt discriminant() const { return b * b - 4 * a * c; }

    friend bool operator==(const QuadForm& l, const QuadForm& r) { return l.a == r.a && l.b == r.b && l.c == r.c; }
};

enum class Method { FormCount, Dirichlet };

struct ClassNumberResult {
    BigInt discriminant;
    BigInt h;
    Method method = Method::FormCount;
    /// Reduced primitive forms in (a, b) order, only when requested.
    std::optional<std::vector<QuadForm>> reduced_forms;
};

struct FormCountOptions {
    bool collect_forms = false;
    unsigned threads = 1;
    /// Called with (a_done, a_total) after each chunk; calls are serialized but
    /// may come from a worker thread.
    std::function<void(std::uint64_t, std::uint64_t)> progress;
};

/// Largest |D| accepted by class_number_forms. The sieve over a <= sqrt(|D|/3)
/// is held in memory, so this bounds it at about 6 * 10^6 entries.
inline constexpr std::int64_t kMaxFormCountDiscriminant = 100'000'000'000'000;
/// Largest |D| accepted by the O(|D|) character-sum oracle.
inline constexpr std::int64_t kMaxDirichletDiscriminant = 1'000'000;

bool is_reduced(const QuadForm& f);

/// Unique reduced representative of the proper equivalence class of a
/// positive definite form: |b| <= a <= c, and b >= 0 if |b| = a or a = c.
QuadForm reduce_form(const QuadForm& f);

/// h*(D): reduced primitive positive definite forms of discriminant D < 0,
/// D = 0, 1 mod 4. For each a <= sqrt(|D|/3) the roots of b^2 = D mod 4a are
/// built prime power by prime power and recombined by CRT.
ClassNumberResult class_number_forms(const BigInt& D, const FormCountOptions& options = {});

/// h(D) = (w / 2|D|) |sum_{a<|D|} (D/a) a| for fundamental D < 0.
ClassNumberResult class_number_dirichlet(const BigInt& D);

bool is_fundamental_discriminant(const BigInt& D);

/// d if d = 1 mod 4, else 4d. d must be square-free and not 0 or 1.
BigInt fundamental_discriminant(const BigInt& d);

/// Class number of Q(sqrt(d)) for square-free d < 0, i.e. h*(disc of the field).
/// For d = 2 mod 4 (and 3 mod 4) this is h*(4d).
ClassNumberResult field_class_number(const BigInt& d, const FormCountOptions& options = {});

}  // namespace qf::classno
