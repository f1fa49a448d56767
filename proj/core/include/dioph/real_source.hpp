#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dioph/bigint.hpp"
#include "dioph/certified.hpp"
#include "dioph/precision.hpp"

namespace dioph {

enum class SourceKind { ExactRational, ContinuedFraction, BinarySeries, Power };

// Nested rational enclosure [lo, hi] of a real number.
struct Enclosure {
  Rational lo;
  Rational hi;

  bool exact() const { return lo == hi; }
  Rational width() const { return hi - lo; }
};

// Certified leading partial quotients of a source.
struct QuotientPrefix {
  std::vector<Integer> quotients;
  bool terminated = false;  // the full expansion of an exact rational
  bool exhausted = false;   // no further term could be certified
};

// Produces successive partial quotients; nullopt ends the known prefix.
using QuotientGenerator = std::function<std::optional<Integer>()>;
// Produces the strictly increasing exponents a_1 < a_2 < ... of sum 2^(-a_n).
using ExponentGenerator = std::function<std::optional<std::uint64_t>()>;

// A real number that can be enclosed to any requested absolute precision,
// within what its description allows. Copies share the memoized expansion,
// and all queries are safe to call from several threads.
class RealSource {
 public:
  static RealSource rational(const Integer& num, const Integer& den);
  static RealSource rational(const Rational& value);

  // A continued fraction [a_0; a_1, ...]. Without a generator the tail after
  // the listed quotients is unknown, so precision is limited by the prefix.
  static RealSource continued_fraction(std::vector<Integer> prefix,
                                       QuotientGenerator tail = nullptr);
  // [prefix; period, period, ...]
  static RealSource periodic_continued_fraction(std::vector<Integer> prefix,
                                                std::vector<Integer> period);

  static RealSource binary_series(std::vector<std::uint64_t> exponents,
                                  ExponentGenerator tail = nullptr);

  // base^exponent, exponent >= 1.
  static RealSource power(const RealSource& base, unsigned exponent);

  SourceKind kind() const;
  bool is_exact_rational() const;
  std::optional<Rational> exact_value() const;

  // Enclosure of absolute width at most 2^-bits, or nullopt when the known
  // description does not determine the value that precisely.
  std::optional<Enclosure> try_enclosure(unsigned bits) const;
  // As try_enclosure, raising Indeterminate on failure.
  Enclosure enclosure(unsigned bits) const;

  // Up to `count` certified partial quotients.
  QuotientPrefix partial_quotients(std::size_t count, unsigned budget = default_precision_budget()) const;
  // Certified partial quotients until a convergent denominator exceeds `bound`.
  QuotientPrefix quotients_beyond(const Integer& bound, unsigned budget = default_precision_budget()) const;

  // Description accessors, used for serialization.
  std::vector<Integer> known_quotients() const;
  std::vector<std::uint64_t> known_exponents() const;
  bool has_generator() const;
  const RealSource& base() const;
  unsigned power_exponent() const;

  // Ensures at least `count` terms of a lazy description are materialized.
  void materialize(std::size_t count) const;

  // Opaque JSON text describing how to regenerate a lazy source.
  const std::string& provenance() const;
  void set_provenance(std::string json);

  unsigned precision_hint() const;
  void set_precision_hint(unsigned bits);

  // Identity of the shared state; equal for copies of the same source.
  const void* identity() const { return impl_.get(); }

  struct Impl;

 private:
  explicit RealSource(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<Impl> impl_;
};

// Canonical continued fraction of num/den (den > 0), last quotient >= 2
// unless the expansion has a single term.
std::vector<Integer> cf_expand_rational(const Integer& num, const Integer& den);

// Longest prefix of quotients shared by the expansions of lo <= hi; every
// real in [lo, hi] has these leading quotients.
std::vector<Integer> common_quotient_prefix(const Rational& lo, const Rational& hi);

}  // namespace dioph
