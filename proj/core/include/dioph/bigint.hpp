#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <string_view>

namespace dioph {

using Integer = mpz_class;
using Rational = mpq_class;

Integer ipow(const Integer& base, unsigned long exponent);
Rational rpow(const Rational& base, unsigned long exponent);

// Number of bits in |v|; zero for v = 0.
std::size_t bit_length(const Integer& v);

Integer floor(const Rational& v);
Integer ceil(const Rational& v);

// Smallest integer m with m >= base^exponent, for base >= 1 and exponent >= 0.
Integer ceil_pow(const Integer& base, const Rational& exponent);

// Largest integer m with m <= base^n, for base >= 0.
Integer floor_pow(const Rational& base, unsigned long n);

// Exact comparison of a^ea against b^eb for a, b >= 1 and ea, eb >= 0.
// Returns -1, 0 or 1.
int compare_powers(const Integer& a, const Rational& ea, const Integer& b, const Rational& eb);

// Largest integer m >= 0 with m <= scale * window^(-mu), for scale >= 0,
// window >= 1 and mu >= 0.
Integer floor_scaled_power(const Rational& scale, const Integer& window, const Rational& mu);

// Parses "123", "-4/6" or a decimal literal such as "-1.25".
Integer parse_integer(std::string_view text);
Rational parse_rational(std::string_view text);

std::string to_string(const Integer& v);
std::string to_string(const Rational& v);

double to_double(const Rational& v);

}  // namespace dioph
