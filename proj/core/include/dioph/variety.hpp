#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dioph/bigint.hpp"
#include "dioph/polynomial.hpp"

namespace dioph {

using RationalPoint = std::vector<Rational>;

struct RationalPointSet {
  Integer height_bound;
  std::vector<RationalPoint> points;  // lexicographically sorted
  bool contains_line = false;         // some fibre vanished identically
};

// Every rational point of V(P) whose coordinates have height max(|p|, q) <= H.
// The enumeration cost H^(k+1) must stay below cost_guard.
RationalPointSet rational_point_search(const MultiPolynomial& p, const Integer& height,
                                       double cost_guard = 1e9);

struct DenominatorBoundResult {
  bool zero = false;
  Rational value;          // P(point)
  Rational total_bound;    // (prod q_j)^(-r)
  Rational refined_bound;  // prod q_j^(-r_j)
  std::optional<Rational> shared_bound;  // x^(-r) for a shared denominator x
};

// For integer-coefficient P and a rational point, either P vanishes there or
// |P| is at least each denominator bound. Throws BoundViolation otherwise.
DenominatorBoundResult denominator_bound_check(const MultiPolynomial& p, std::span<const Rational> point,
                                               std::optional<Integer> shared_denominator = std::nullopt);

// Upper bound on max_i |dP/dz_i| over the box, by interval evaluation.
Rational derivative_bound(const MultiPolynomial& p, const Box& box);

// P has no zero in the intersection of the box with the sup-norm ball of
// the given radius around the candidate.
struct ExclusionCertificate {
  Box box;
  Rational derivative_bound;
  RationalPoint candidate;
  Rational value;
  Rational radius;
};

ExclusionCertificate exclusion_certificate(const MultiPolynomial& p, const Box& box,
                                           std::span<const Rational> candidate);

// Independent check by a mean-value enclosure over the certified region and a
// grid of sample points.
bool verify_exclusion_certificate(const MultiPolynomial& p, const ExclusionCertificate& cert,
                                  unsigned grid = 5);

enum class ScanMode { SharedDenominator, PerCoordinate };
enum class HitClass { NearRationalPoint, Outlier };

const char* to_string(ScanMode mode);
const char* to_string(HitClass cls);

struct ScanHit {
  std::vector<Integer> denominators;  // x, or x_1..x_k
  std::vector<Integer> numerators;    // y_1..y_k
  Rational value;                     // P(y / x)
  HitClass cls = HitClass::Outlier;
  bool on_variety = false;
  bool in_point_set = false;
  std::optional<std::size_t> nearest;  // index into the rational point set
  std::optional<Rational> distance;    // sup distance to the nearest point
  std::optional<Rational> exclusion_radius;  // outliers only

  RationalPoint point() const;
  const Integer& scale() const;  // x, or max_j x_j
};

struct ScanOptions {
  ScanMode mode = ScanMode::SharedDenominator;
  Rational radius = 0;  // hits this close to a known rational point count as near it
  unsigned threads = 1;
  double cost_guard = 2e10;
};

struct ScanReport {
  ScanMode mode = ScanMode::SharedDenominator;
  Integer x_max;
  Rational mu;
  std::size_t k = 0;
  unsigned degree = 0;          // r
  unsigned refined_degree = 0;  // sum of r_j
  Rational derivative_bound;    // C for the integer-cleared polynomial
  unsigned exclusion_exponent = 0;  // r - 1 or refined - 1
  // Scale from which no outlier can occur: x^(mu + 1 - r) >= 2 k C.
  std::optional<Integer> effective_from;
  std::vector<ScanHit> hits;
  std::uint64_t evaluated = 0;     // integer points evaluated exactly
  std::uint64_t bound_checks = 0;  // nonzero values checked against the bound
  std::uint64_t exact_route_checks = 0;  // of those, re-checked in rational arithmetic
  std::size_t near_points = 0;
  std::size_t outliers = 0;
  std::size_t outliers_effective = 0;  // outliers at scale >= effective_from
  std::size_t points_outside_set = 0;  // exact zeros missing from the point set
};

// Integer tuples (x, y) in the box with |P(y/x)| at most k C X^(-mu) / x,
// the size forced on any point approximating V at exponent mu.
ScanReport variety_approx_scan(const MultiPolynomial& p, const Box& box, const Integer& x_max,
                               const Rational& mu, const RationalPointSet& points,
                               const ScanOptions& options = {});

}  // namespace dioph
