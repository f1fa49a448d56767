#pragma once

#include <cstddef>
#include <vector>

#include "dioph/bigint.hpp"

namespace dioph {

// Closed interval with exact rational endpoints, lo <= hi.
struct RationalInterval {
  Rational lo;
  Rational hi;

  static RationalInterval point(const Rational& v) { return {v, v}; }
  bool contains(const Rational& v) const { return lo <= v && v <= hi; }
  bool contains_zero() const { return sgn(lo) <= 0 && sgn(hi) >= 0; }
  Rational width() const { return hi - lo; }
  Rational magnitude() const;  // max |v| over the interval
  Rational mignitude() const;  // min |v| over the interval
};

RationalInterval operator+(const RationalInterval& a, const RationalInterval& b);
RationalInterval operator-(const RationalInterval& a, const RationalInterval& b);
RationalInterval operator*(const RationalInterval& a, const RationalInterval& b);
RationalInterval operator*(const Rational& s, const RationalInterval& a);
RationalInterval pow(const RationalInterval& a, unsigned n);
RationalInterval abs(const RationalInterval& a);

// Enclosure of the natural logarithm of v > 0 with directed rounding.
RationalInterval log_bounds(const Rational& v, unsigned precision = 128);
RationalInterval log_bounds(const Integer& v, unsigned precision = 128);

// Certified lower bound on -log(error) / log(window) for 0 < error < 1
// and window >= 2.
Rational exponent_lower_bound(const Rational& error_upper, const Integer& window);

// Certified upper bound on -log(error) / log(window) for error > 0.
Rational exponent_upper_bound(const Rational& error_lower, const Integer& window);

enum class Certainty { Yes, No, Unknown };

// Decides error <= window^(-nu) with outward rounding.
Certainty certify_power_bound(const Rational& error, const Integer& window, const Rational& nu);

// Certified enclosure of log(a) / log(b) for a >= 1, b >= 2.
RationalInterval log_ratio(const Integer& a, const Integer& b);

}  // namespace dioph
