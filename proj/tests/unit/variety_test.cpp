#include <gtest/gtest.h>

#include <set>

#include "dioph/error.hpp"
#include "dioph/polynomial.hpp"
#include "dioph/variety.hpp"

using namespace dioph;

namespace {

MultiPolynomial make(const std::vector<std::pair<Monomial, Rational>>& terms) {
  return MultiPolynomial::from_terms(2, terms);
}

MultiPolynomial fermat() { return make({{{3, 0}, 1}, {{0, 3}, 1}, {{0, 0}, -1}}); }
MultiPolynomial unit_circle() { return make({{{2, 0}, 1}, {{0, 2}, 1}, {{0, 0}, -1}}); }

Box square(Rational r) { return {{-r, r}, {-r, r}}; }

// All fractions p/q in lowest terms with max(|p|, q) <= h.
std::vector<Rational> fractions(long h) {
  std::set<Rational> out;
  for (long q = 1; q <= h; ++q) {
    for (long p = -h; p <= h; ++p) {
      Rational v(p, q);
      v.canonicalize();
      out.insert(v);
    }
  }
  return {out.begin(), out.end()};
}

}  // namespace

TEST(Polynomial, DegreesAndEvaluation) {
  MultiPolynomial p = make({{{2, 1}, 3}, {{0, 3}, Rational(1, 2)}, {{1, 0}, -1}});
  Degrees d = degrees(p);
  EXPECT_EQ(d.absolute, 3u);
  EXPECT_EQ(d.per_variable, (std::vector<unsigned>{2, 3}));
  EXPECT_EQ(d.refined, 5u);
  std::vector<Rational> z{Rational(1, 2), Rational(2)};
  EXPECT_EQ(p.evaluate(z), Rational(3, 2) + 4 - Rational(1, 2));
  EXPECT_FALSE(p.has_integer_coefficients());
  EXPECT_TRUE(p.integer_cleared().has_integer_coefficients());
  EXPECT_THROW(degrees(make({{{0, 0}, 5}})), InvalidArgument);
  MultiPolynomial dx = p.derivative(0);
  EXPECT_EQ(dx.evaluate(z), 6 * Rational(1, 2) * 2 - 1);
}

TEST(Polynomial, IntervalEvaluationEncloses) {
  MultiPolynomial p = fermat();
  Box b{{Rational(-1, 2), Rational(1)}, {Rational(1, 3), Rational(2, 3)}};
  RationalInterval v = p.evaluate(b);
  for (Rational x : {Rational(-1, 2), Rational(0), Rational(1, 4), Rational(1)}) {
    for (Rational y : {Rational(1, 3), Rational(1, 2), Rational(2, 3)}) {
      std::vector<Rational> z{x, y};
      EXPECT_TRUE(v.contains(p.evaluate(z)));
    }
  }
}

TEST(DenominatorBound, HoldsOrVanishes) {
  MultiPolynomial p = fermat();
  for (const Rational& a : fractions(12)) {
    for (Rational b : {Rational(1, 2), Rational(-2, 3), Rational(5, 7), Rational(0)}) {
      std::vector<Rational> z{a, b};
      DenominatorBoundResult r = denominator_bound_check(p, z);
      if (r.zero) {
        EXPECT_EQ(p.evaluate(z), 0);
        continue;
      }
      Integer q = a.get_den() * b.get_den();
      EXPECT_GE(abs(r.value), Rational(1) / Rational(q * q * q));
      EXPECT_GE(abs(r.value), r.refined_bound);
    }
  }
  std::vector<Rational> z{Rational(1, 2), Rational(1, 3)};
  DenominatorBoundResult s = denominator_bound_check(p, z, Integer(6));
  ASSERT_TRUE(s.shared_bound.has_value());
  EXPECT_EQ(*s.shared_bound, Rational(1, 216));
  EXPECT_THROW(denominator_bound_check(make({{{1, 0}, Rational(1, 2)}, {{0, 0}, -1}}), z), InvalidArgument);
}

TEST(RationalPoints, UnitCircleHeightFive) {
  RationalPointSet s = rational_point_search(unit_circle(), Integer(5));
  std::vector<RationalPoint> brute;
  auto fr = fractions(5);
  for (const auto& a : fr) {
    for (const auto& b : fr) {
      if (a * a + b * b == 1) brute.push_back({a, b});
    }
  }
  std::sort(brute.begin(), brute.end());
  EXPECT_EQ(s.points, brute);
  EXPECT_EQ(s.points.size(), 12u);
  EXPECT_FALSE(s.contains_line);
}

TEST(RationalPoints, EmptyAndLines) {
  EXPECT_TRUE(rational_point_search(make({{{2, 0}, 1}, {{0, 2}, 1}, {{0, 0}, -3}}), Integer(20)).points.empty());
  RationalPointSet f = rational_point_search(fermat(), Integer(20));
  EXPECT_EQ(f.points.size(), 2u);
  RationalPointSet line = rational_point_search(make({{{1, 1}, 1}}), Integer(3));
  EXPECT_TRUE(line.contains_line);
  EXPECT_THROW(rational_point_search(fermat(), Integer(100000), 1e6), CostGuardExceeded);
}

TEST(Exclusion, CertificateVerifies) {
  MultiPolynomial p = fermat();
  Box b = square(Rational(3, 2));
  std::vector<Rational> c{Rational(1, 2), Rational(1, 2)};
  ExclusionCertificate cert = exclusion_certificate(p, b, c);
  EXPECT_GT(cert.radius, 0);
  EXPECT_EQ(cert.value, p.evaluate(c));
  EXPECT_TRUE(verify_exclusion_certificate(p, cert));
  ExclusionCertificate inflated = cert;
  inflated.radius *= 100;
  EXPECT_FALSE(verify_exclusion_certificate(p, inflated));
  std::vector<Rational> on{Rational(1), Rational(0)};
  EXPECT_THROW(exclusion_certificate(p, b, on), InvalidArgument);
}

// Every hit satisfies the threshold, and every exact zero in the box is hit,
// by direct rational evaluation over the whole grid.
TEST(Scan, MatchesDirectEnumeration) {
  MultiPolynomial p = fermat();
  Box b = square(Rational(3, 2));
  RationalPointSet pts = rational_point_search(p, Integer(10));
  const long X = 60;
  const Rational mu(5, 2);
  ScanReport r = variety_approx_scan(p, b, Integer(X), mu, pts);
  Rational kc = 2 * r.derivative_bound;
  std::set<std::vector<Integer>> hits;
  for (const auto& h : r.hits) {
    hits.insert({h.denominators[0], h.numerators[0], h.numerators[1]});
    std::vector<Rational> z = h.point();
    EXPECT_EQ(h.value, p.evaluate(z));
  }
  std::size_t zeros = 0;
  for (long x = 1; x <= X; ++x) {
    for (long a = -3 * x / 2; a <= 3 * x / 2; ++a) {
      for (long c = -3 * x / 2; c <= 3 * x / 2; ++c) {
        std::vector<Rational> z{Rational(a, x), Rational(c, x)};
        z[0].canonicalize();
        z[1].canonicalize();
        Rational v = abs(p.evaluate(z));
        // |P| <= kC x^(-1-mu), i.e. (|P| x / kC)^2 x^5 <= 1.
        Rational t = v * x / kc;
        bool expected = t * t * Rational(ipow(Integer(x), 5)) <= 1;
        bool got = hits.count({Integer(x), Integer(a), Integer(c)}) > 0;
        EXPECT_EQ(got, expected) << x << " " << a << " " << c;
        if (v == 0) ++zeros;
      }
    }
  }
  std::size_t on = 0;
  for (const auto& h : r.hits) on += h.on_variety;
  EXPECT_EQ(on, zeros);
  EXPECT_EQ(r.points_outside_set, 0u);
}

TEST(Scan, ThreadsDoNotChangeResult) {
  MultiPolynomial p = unit_circle();
  Box b = square(Rational(1));
  RationalPointSet pts = rational_point_search(p, Integer(20));
  ScanOptions one, four;
  four.threads = 4;
  ScanReport a = variety_approx_scan(p, b, Integer(300), Rational(3, 2), pts, one);
  ScanReport c = variety_approx_scan(p, b, Integer(300), Rational(3, 2), pts, four);
  ASSERT_EQ(a.hits.size(), c.hits.size());
  for (std::size_t i = 0; i < a.hits.size(); ++i) {
    EXPECT_EQ(a.hits[i].denominators, c.hits[i].denominators);
    EXPECT_EQ(a.hits[i].numerators, c.hits[i].numerators);
  }
  EXPECT_EQ(a.evaluated, c.evaluated);
}

TEST(Scan, PerCoordinateModeFindsZeros) {
  MultiPolynomial p = unit_circle();
  ScanOptions opt;
  opt.mode = ScanMode::PerCoordinate;
  RationalPointSet pts = rational_point_search(p, Integer(20));
  ScanReport r = variety_approx_scan(p, square(Rational(1)), Integer(25), Rational(1), pts, opt);
  bool found = false;
  for (const auto& h : r.hits) {
    if (h.denominators == std::vector<Integer>{5, 5} && h.numerators == std::vector<Integer>{3, 4}) found = true;
    if (h.on_variety) EXPECT_EQ(h.cls, HitClass::NearRationalPoint);
  }
  EXPECT_TRUE(found);
  EXPECT_EQ(r.refined_degree, 4u);
}

TEST(Scan, RejectsBadInput) {
  RationalPointSet none;
  EXPECT_THROW(variety_approx_scan(fermat(), square(1), Integer(10), Rational(-1), none), InvalidArgument);
  Box bad{{Rational(1), Rational(0)}, {Rational(0), Rational(1)}};
  EXPECT_THROW(variety_approx_scan(fermat(), bad, Integer(10), Rational(2), none), InvalidArgument);
  ScanOptions tiny;
  tiny.cost_guard = 10;
  EXPECT_THROW(variety_approx_scan(fermat(), square(1), Integer(1000), Rational(2), none, tiny), CostGuardExceeded);
}
