#include <gtest/gtest.h>

#include "dioph/error.hpp"
#include "dioph/real_source.hpp"

using namespace dioph;

namespace {

RealSource sqrt2() { return RealSource::periodic_continued_fraction({Integer(1)}, {Integer(2)}); }

}  // namespace

TEST(RealSource, RationalIsExact) {
  RealSource r = RealSource::rational(Integer(-6), Integer(4));
  ASSERT_TRUE(r.is_exact_rational());
  EXPECT_EQ(*r.exact_value(), Rational(-3, 2));
  Enclosure e = r.enclosure(100);
  EXPECT_TRUE(e.exact());
  EXPECT_THROW(RealSource::rational(Integer(1), Integer(0)), InvalidArgument);
}

TEST(RealSource, PeriodicEnclosesSqrt2) {
  for (unsigned bits : {10u, 64u, 300u, 1000u}) {
    Enclosure e = sqrt2().enclosure(bits);
    EXPECT_LE(e.width(), Rational(1) / Rational(Integer(1) << bits));
    EXPECT_LE(e.lo * e.lo, 2);
    EXPECT_GE(e.hi * e.hi, 2);
  }
}

TEST(RealSource, PowerOfSqrt2) {
  Enclosure e = RealSource::power(sqrt2(), 2).enclosure(200);
  EXPECT_LE(e.lo, 2);
  EXPECT_GE(e.hi, 2);
  EXPECT_LE(e.width(), Rational(1) / Rational(Integer(1) << 200));
}

TEST(RealSource, BinarySeriesBrackets) {
  std::uint64_t n = 0;
  RealSource s = RealSource::binary_series({1, 3}, [n]() mutable -> std::optional<std::uint64_t> {
    n = n == 0 ? 5 : n * 2;
    return n;
  });
  Enclosure e = s.enclosure(150);
  // 2^-1 + 2^-3 + 2^-5 + 2^-10 + 2^-20 + 2^-40 + 2^-80 + 2^-160 + ...
  Rational partial = 0;
  for (unsigned a : {1u, 3u, 5u, 10u, 20u, 40u, 80u, 160u}) partial += Rational(1) / Rational(Integer(1) << a);
  Rational tail_cap = Rational(2) / Rational(Integer(1) << 320);
  EXPECT_LE(e.lo, partial + tail_cap);
  EXPECT_GE(e.hi, partial);
}

TEST(RealSource, PrefixOnlyIsLimited) {
  RealSource cf = RealSource::continued_fraction({Integer(0), Integer(1), Integer(2)});
  EXPECT_FALSE(cf.try_enclosure(200).has_value());
  EXPECT_THROW(cf.enclosure(200), Indeterminate);
}

TEST(RealSource, PartialQuotients) {
  QuotientPrefix q = sqrt2().partial_quotients(8);
  ASSERT_EQ(q.quotients.size(), 8u);
  EXPECT_EQ(q.quotients[0], 1);
  for (std::size_t i = 1; i < 8; ++i) EXPECT_EQ(q.quotients[i], 2);
  QuotientPrefix r = RealSource::rational(Integer(355), Integer(113)).partial_quotients(10);
  EXPECT_TRUE(r.terminated);
  EXPECT_EQ(r.quotients, (std::vector<Integer>{3, 7, 16}));
}

TEST(RealSource, ExpandRational) {
  EXPECT_EQ(cf_expand_rational(Integer(355), Integer(113)), (std::vector<Integer>{3, 7, 16}));
  EXPECT_EQ(cf_expand_rational(Integer(-22), Integer(7)), (std::vector<Integer>{-4, 1, 6}));
  EXPECT_EQ(cf_expand_rational(Integer(5), Integer(1)), (std::vector<Integer>{5}));
  std::vector<Integer> common = common_quotient_prefix(Rational(333, 106), Rational(355, 113));
  EXPECT_EQ(common, (std::vector<Integer>{3, 7}));
}

TEST(RealSource, CopiesShareState) {
  RealSource a = sqrt2();
  RealSource b = a;
  EXPECT_EQ(a.identity(), b.identity());
  EXPECT_NE(a.identity(), sqrt2().identity());
}
