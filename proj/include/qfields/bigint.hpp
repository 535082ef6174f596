#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace qf {

/// Exact arbitrary-precision integer used at every public boundary.
using BigInt = mpz_class;

BigInt parse_bigint(std::string_view text);
std::string to_string(const BigInt& v);

bool fits_i64(const BigInt& v);
std::int64_t to_i64(const BigInt& v);  // throws std::range_error when it does not fit
BigInt from_i64(std::int64_t v);

BigInt ipow(const BigInt& base, unsigned long exponent);
BigInt isqrt(const BigInt& v);          // floor(sqrt(v)), v >= 0
bool is_square(const BigInt& v);        // false for negatives
BigInt gcd(const BigInt& a, const BigInt& b);
BigInt abs(const BigInt& v);
int sign(const BigInt& v);

/// Floor division and the matching non-negative remainder (for positive m).
BigInt floor_div(const BigInt& a, const BigInt& b);
BigInt mod_floor(const BigInt& a, const BigInt& m);

}  // namespace qf
