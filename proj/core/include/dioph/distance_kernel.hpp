#pragma once

#include <optional>
#include <span>
#include <vector>

#include "dioph/bigint.hpp"
#include "dioph/real_source.hpp"

namespace dioph {

// Nearest-integer distance ||x * zeta|| enclosed in [lo, hi].
struct DistanceInterval {
  Rational lo;
  Rational hi;
  unsigned target_precision = 0;
  bool indeterminate = false;

  bool exact() const { return lo == hi; }
};

// Fixed-point form of a source used by the search loops: zeta is enclosed
// in [L, H] / D for a denominator D shared by every kernel of one scan.
// Exact rationals whose denominator divides D are represented exactly.
class DistanceKernel {
 public:
  // Distance numerators over 2D.
  struct Value {
    Integer lo;
    Integer hi;
  };

  static std::optional<DistanceKernel> make(const RealSource& source, const Integer& denominator);

  // Common denominator 2^bits * lcm(exact denominators) for a set of sources.
  static Integer common_denominator(std::span<const RealSource> sources, unsigned bits);

  void distance(const Integer& x, Value& out) const;
  void distance(unsigned long x, Value& out) const;
  // Offset x*zeta - p enclosed as numerators over D.
  void offset(const Integer& x, const Integer& p, Integer& lo, Integer& hi) const;

  bool exact() const { return exact_; }
  const Integer& denominator() const { return den_; }
  const Integer& lower() const { return lower_; }
  const Integer& upper() const { return upper_; }
  DistanceInterval to_interval(const Value& v) const;

 private:
  Integer lower_, upper_, den_, half_;
  bool exact_ = false;
  void finish(Value& out) const;

  mutable Integer a_, b_, w_, r_, t_;
};

}  // namespace dioph
