#include "qfields/bigint.hpp"

#include <limits>
#include <stdexcept>

namespace qf {

BigInt parse_bigint(std::string_view text) {
    std::string s(text);
    if (!s.empty() && s.front() == '+') s.erase(0, 1);
    BigInt v;
    if (s.empty() || v.set_str(s, 10) != 0) {
        throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
    }
    return v;
}

std::string to_string(const BigInt& v) { return v.get_str(10); }

bool fits_i64(const BigInt& v) {
    static const BigInt lo(std::to_string(std::numeric_limits<std::int64_t>::min()));
    static const BigInt hi(std::to_string(std::numeric_limits<std::int64_t>::max()));
    return v >= lo && v <= hi;
}

std::int64_t to_i64(const BigInt& v) {
    if (!fits_i64(v)) throw std::range_error("integer does not fit in 64 bits: " + to_string(v));
    return std::stoll(to_string(v));
}

BigInt from_i64(std::int64_t v) { return BigInt(std::to_string(v)); }

BigInt ipow(const BigInt& base, unsigned long exponent) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exponent);
    return r;
}

BigInt isqrt(const BigInt& v) {
    if (v < 0) throw std::domain_error("isqrt of negative integer");
    BigInt r;
    mpz_sqrt(r.get_mpz_t(), v.get_mpz_t());
    return r;
}

bool is_square(const BigInt& v) { return v >= 0 && mpz_perfect_square_p(v.get_mpz_t()) != 0; }

BigInt gcd(const BigInt& a, const BigInt& b) {
    BigInt r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

BigInt abs(const BigInt& v) {
    BigInt r;
    mpz_abs(r.get_mpz_t(), v.get_mpz_t());
    return r;
}

int sign(const BigInt& v) { return sgn(v); }

BigInt floor_div(const BigInt& a, const BigInt& b) {
    BigInt r;
    mpz_fdiv_q(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

BigInt mod_floor(const BigInt& a, const BigInt& m) {
    BigInt r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

}  // namespace qf
