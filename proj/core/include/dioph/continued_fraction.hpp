#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "dioph/bigint.hpp"
#include "dioph/distance_kernel.hpp"
#include "dioph/precision.hpp"
#include "dioph/real_source.hpp"

namespace dioph {

// Convergent r_l / s_l of index l together with its partial quotient a_l.
struct Convergent {
  std::size_t index = 0;
  Integer quotient;
  Integer numerator;
  Integer denominator;
};

struct ConvergentList {
  std::vector<Convergent> items;
  bool terminated = false;  // exact rational, expansion complete
  bool truncated = false;   // fewer terms than requested could be certified
};

// Convergents built from quotients by the standard recurrence.
ConvergentList convergents_from_quotients(const std::vector<Integer>& quotients);

// The first `count` convergents of a source.
ConvergentList convergents(const RealSource& source, std::size_t count,
                           unsigned budget = default_precision_budget());

// Convergents up to and including the first with denominator > bound.
ConvergentList convergents_beyond(const RealSource& source, const Integer& bound,
                                  unsigned budget = default_precision_budget());

// ||x * zeta|| with width at most 2^-precision.
DistanceInterval nearest_distance(const Integer& x, const RealSource& source,
                                  unsigned precision = kDefaultPrecision,
                                  unsigned budget = default_precision_budget());

// ||x * zeta|| refined until hi - lo <= lo * 2^-relative_bits, or exact.
DistanceInterval nearest_distance_relative(const Integer& x, const RealSource& source,
                                           unsigned relative_bits = 64,
                                           unsigned budget = default_precision_budget());

enum class LegendreOutcome { IsConvergent, HypothesisFails, Violation };

struct LegendreResult {
  LegendreOutcome outcome = LegendreOutcome::HypothesisFails;
  Integer p;  // reduced
  Integer q;
  std::optional<std::size_t> index;
  // For rationals, matched only by the expansion ending in (a_n - 1, 1).
  bool alternate_expansion = false;
};

// If |q zeta - p| <= 1/(2q) after reducing p/q, locate p/q among the convergents.
LegendreResult legendre_certify(const Integer& p, const Integer& q, const RealSource& source,
                                unsigned budget = default_precision_budget());

struct BestApproximation {
  Integer q;
  DistanceInterval distance;
};

struct BestApproximationList {
  std::vector<BestApproximation> items;
  bool cross_checked = false;  // exhaustive route agreed with the convergent route
};

inline constexpr long kExhaustiveBestApproximationLimit = 100000;

// Denominators q <= Q whose ||q zeta|| strictly improves on every smaller q.
BestApproximationList best_approximations(const RealSource& source, const Integer& Q,
                                          unsigned budget = default_precision_budget());

// The exhaustive route alone, for q <= Q.
std::vector<Integer> best_approximation_records(const RealSource& source, const Integer& Q,
                                                unsigned budget = default_precision_budget());

struct MinkowskiResult {
  bool pass = true;
  std::vector<std::pair<Integer, Integer>> solutions;  // (p, q), q != 0
  std::optional<std::pair<std::pair<Integer, Integer>, std::pair<Integer, Integer>>> counterexample;
};

// All nonzero integer (p, q) with |q| <= Q and |q zeta - p| <= 1/(2Q) are
// checked to be pairwise proportional.
MinkowskiResult minkowski_2d_check(const RealSource& source, const Rational& Q,
                                   unsigned budget = default_precision_budget());

}  // namespace dioph
