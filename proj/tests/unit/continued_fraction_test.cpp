#include <gtest/gtest.h>

#include <random>

#include "dioph/continued_fraction.hpp"
#include "dioph/error.hpp"
#include "oracles.hpp"

using namespace dioph;

namespace {

RealSource sqrt_source(unsigned long n) {
  if (n == 2) return RealSource::periodic_continued_fraction({Integer(1)}, {Integer(2)});
  if (n == 3) return RealSource::periodic_continued_fraction({Integer(1)}, {Integer(1), Integer(2)});
  return RealSource::periodic_continued_fraction({Integer(2)}, {Integer(4)});  // sqrt 5
}

RealSource golden() { return RealSource::periodic_continued_fraction({Integer(1)}, {Integer(1)}); }

}  // namespace

TEST(Convergents, GoldenRatioGivesFibonacci) {
  ConvergentList c = convergents(golden(), 20);
  auto fib = oracle::fibonacci(22);
  ASSERT_EQ(c.items.size(), 20u);
  for (std::size_t i = 0; i < 20; ++i) {
    EXPECT_EQ(c.items[i].denominator, fib[i]);
    EXPECT_EQ(c.items[i].numerator, fib[i + 1]);
  }
}

TEST(Convergents, FromQuotientsRecurrence) {
  ConvergentList c = convergents_from_quotients({Integer(3), Integer(7), Integer(15), Integer(1)});
  ASSERT_EQ(c.items.size(), 4u);
  EXPECT_EQ(c.items[1].numerator, 22);
  EXPECT_EQ(c.items[1].denominator, 7);
  EXPECT_EQ(c.items[3].numerator, 355);
  EXPECT_EQ(c.items[3].denominator, 113);
}

TEST(Convergents, BeyondStopsPastBound) {
  ConvergentList c = convergents_beyond(sqrt_source(2), Integer(1000));
  ASSERT_GE(c.items.size(), 2u);
  EXPECT_GT(c.items.back().denominator, 1000);
  EXPECT_LE(c.items[c.items.size() - 2].denominator, 1000);
}

TEST(NearestDistance, RationalIsExact) {
  Rational v(-22, 7);
  RealSource src = RealSource::rational(v);
  for (long x = 1; x < 50; ++x) {
    DistanceInterval d = nearest_distance(Integer(x), src);
    EXPECT_TRUE(d.exact());
    EXPECT_EQ(d.lo, oracle::rational_distance(x, v));
  }
}

TEST(NearestDistance, SqrtMatchesIntegerSquareRoot) {
  for (unsigned long n : {2ul, 3ul, 5ul}) {
    RealSource src = sqrt_source(n);
    for (long x : {1l, 2l, 7l, 99l, 12345l, 985l, 5741l, 1000003l}) {
      DistanceInterval d = nearest_distance(Integer(x), src, 128);
      auto [lo, hi] = oracle::sqrt_distance(x, n);
      EXPECT_LE(d.lo, hi) << "n=" << n << " x=" << x;
      EXPECT_GE(d.hi, lo) << "n=" << n << " x=" << x;
      EXPECT_LE(d.hi - d.lo, Rational(1) / Rational(Integer(1) << 128));
    }
  }
}

TEST(NearestDistance, RelativeRefinement) {
  DistanceInterval d = nearest_distance_relative(Integer(5741), sqrt_source(2), 40);
  EXPECT_LE(d.hi - d.lo, d.lo / Rational(Integer(1) << 40));
}

TEST(Legendre, ConvergentsOfSqrt2) {
  RealSource s = sqrt_source(2);
  LegendreResult r = legendre_certify(Integer(99), Integer(70), s);
  EXPECT_EQ(r.outcome, LegendreOutcome::IsConvergent);
  ASSERT_TRUE(r.index.has_value());
  EXPECT_EQ(*r.index, 5u);
  LegendreResult scaled = legendre_certify(Integer(198), Integer(140), s);
  EXPECT_EQ(scaled.p, 99);
  EXPECT_EQ(scaled.q, 70);
  // |7 sqrt2 - 10| is about 0.1 > 1/14.
  EXPECT_EQ(legendre_certify(Integer(10), Integer(7), s).outcome, LegendreOutcome::HypothesisFails);
}

TEST(Legendre, AlternateExpansionOfRational) {
  RealSource half = RealSource::rational(Integer(1), Integer(2));
  LegendreResult r = legendre_certify(Integer(1), Integer(1), half);
  EXPECT_EQ(r.outcome, LegendreOutcome::IsConvergent);
  EXPECT_TRUE(r.alternate_expansion);
  LegendreResult z = legendre_certify(Integer(0), Integer(1), half);
  EXPECT_EQ(z.outcome, LegendreOutcome::IsConvergent);
  EXPECT_FALSE(z.alternate_expansion);
}

TEST(BestApproximations, RationalsMatchRecordOracle) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 30; ++t) {
    Rational v(Integer(static_cast<long>(rng() % 2000)) - 1000, Integer(static_cast<long>(rng() % 500 + 1)));
    v.canonicalize();
    BestApproximationList best = best_approximations(RealSource::rational(v), Integer(2000));
    EXPECT_TRUE(best.cross_checked);
    std::vector<Integer> got;
    for (const auto& b : best.items) got.push_back(b.q);
    EXPECT_EQ(got, oracle::rational_records(v, 2000)) << v.get_str();
  }
}

TEST(BestApproximations, Sqrt2GivesPellDenominators) {
  BestApproximationList best = best_approximations(sqrt_source(2), Integer(100000));
  std::vector<Integer> pell{1, 2, 5, 12, 29, 70, 169, 408, 985, 2378, 5741, 13860, 33461, 80782};
  std::vector<Integer> got;
  for (const auto& b : best.items) got.push_back(b.q);
  EXPECT_EQ(got, pell);
  EXPECT_EQ(best_approximation_records(sqrt_source(2), Integer(100000)), pell);
}

TEST(Minkowski, SolutionsSatisfyInequality) {
  for (long qn : {10l, 73l, 500l}) {
    Rational Q(qn, 3);
    MinkowskiResult m = minkowski_2d_check(sqrt_source(3), Q);
    EXPECT_TRUE(m.pass);
    for (const auto& [p, q] : m.solutions) {
      EXPECT_LE(abs(Rational(q)), Q);
      auto [lo, hi] = oracle::sqrt_distance(abs(q), 3);
      (void)hi;
      EXPECT_LE(lo, Rational(1) / (2 * Q));
    }
  }
  Rational v(7, 3);
  MinkowskiResult r = minkowski_2d_check(RealSource::rational(v), Rational(20));
  EXPECT_TRUE(r.pass);
  for (const auto& [p, q] : r.solutions) EXPECT_LE(abs(Rational(q * v - p)), Rational(1, 40));
}
