#include <gtest/gtest.h>

#include "json.hpp"

#include "dioph/constructors.hpp"
#include "dioph/continued_fraction.hpp"
#include "dioph/error.hpp"
#include "dioph/exponents.hpp"
#include "dioph/serialization.hpp"
#include "dioph/variety.hpp"

using namespace dioph;
using nlohmann::json;

namespace {

RealSource sqrt2() { return RealSource::periodic_continued_fraction({Integer(1)}, {Integer(2)}); }

ConstructionPlan cf_plan() {
  ConstructionPlan p;
  p.kind = PlanKind::Lambda1CF;
  p.lambdas = {Rational(5, 2)};
  p.depth = 4;
  p.salt = 7;
  return p;
}

}  // namespace

TEST(Serialization, PlanRoundTrip) {
  ConstructionPlan p;
  p.kind = PlanKind::VectorLamblemm;
  p.lambdas = {3, Rational(7, 2)};
  p.w = 2;
  p.depth = 5;
  p.salt = 99;
  ConstructionPlan q = plan_from_json(plan_to_json(p));
  EXPECT_EQ(q.kind, p.kind);
  EXPECT_EQ(q.lambdas, p.lambdas);
  EXPECT_EQ(q.w, p.w);
  EXPECT_EQ(q.depth, p.depth);
  EXPECT_EQ(q.salt, p.salt);
  EXPECT_THROW(plan_from_json("{\"kind\":\"lambda1_cf\"}"), InvalidArgument);
  EXPECT_THROW(plan_from_json("not json"), InvalidArgument);
}

TEST(Serialization, SourcesRoundTrip) {
  RealSource r = source_from_json(source_to_json(RealSource::rational(Integer(-7), Integer(3))));
  EXPECT_EQ(*r.exact_value(), Rational(-7, 3));

  RealSource s = source_from_json(source_to_json(sqrt2(), 10));
  EXPECT_EQ(s.partial_quotients(30).quotients, sqrt2().partial_quotients(30).quotients);

  Construction c = construct(cf_plan());
  RealSource g = source_from_json(source_to_json(c.sources[0], 12));
  EXPECT_EQ(g.partial_quotients(12).quotients, c.sources[0].partial_quotients(12).quotients);

  ConstructionPlan series = cf_plan();
  series.kind = PlanKind::Lambda1Series;
  series.lambdas = {3};
  Construction cs = construct(series);
  RealSource b = source_from_json(source_to_json(cs.sources[0], 5));
  EXPECT_EQ(b.known_exponents(), cs.sources[0].known_exponents());

  RealSource pw = source_from_json(source_to_json(RealSource::power(sqrt2(), 3), 8));
  EXPECT_EQ(pw.power_exponent(), 3u);
}

TEST(Serialization, TamperedSourceIsRejected) {
  Construction c = construct(cf_plan());
  json j = json::parse(source_to_json(c.sources[0], 8));
  ASSERT_TRUE(j.contains("quotients"));
  j["quotients"][3] = "12345";
  EXPECT_THROW(source_from_json(j.dump()), VerificationFailure);
}

TEST(Serialization, WitnessAndEstimateRoundTrip) {
  std::vector<RealSource> src{sqrt2()};
  ExponentEstimate est = estimate_omega_k(src, geometric_schedule(Integer(8), Integer(1000), 2));
  WitnessRecord w = *est.windows.back().witness;
  WitnessRecord w2 = witness_from_json(witness_to_json(w));
  EXPECT_EQ(w2.denominators, w.denominators);
  EXPECT_EQ(w2.numerators, w.numerators);
  EXPECT_EQ(w2.achieved.lower, w.achieved.lower);
  verify_witness(w2, src);

  EstimateArtifact a = estimate_from_json(estimate_to_json(est, src, 10));
  ASSERT_EQ(a.sources.size(), 1u);
  ASSERT_EQ(a.estimate.windows.size(), est.windows.size());
  EXPECT_EQ(a.estimate.empirical.lower, est.empirical.lower);
  std::string csv = estimate_to_csv(est);
  EXPECT_EQ(csv.rfind("window,best_exponent\n", 0), 0u);
}

TEST(Serialization, ConvergentsRoundTrip) {
  ConvergentList c = convergents(sqrt2(), 12);
  ConvergentList d = convergents_from_json(convergents_to_json(c));
  ASSERT_EQ(d.items.size(), c.items.size());
  EXPECT_EQ(d.items.back().numerator, c.items.back().numerator);
  EXPECT_EQ(d.items.back().denominator, c.items.back().denominator);
}

TEST(Serialization, TraceCsvHeader) {
  Construction c = construct(cf_plan());
  std::string csv = trace_to_csv(c.trace);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "jump,coordinate,position,h,s,target_ratio,realized_ratio,target_nu,realized_nu");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
}

TEST(Serialization, ScanRoundTrip) {
  MultiPolynomial p = MultiPolynomial::from_terms(2, {{{2, 0}, 1}, {{0, 2}, 1}, {{0, 0}, -1}});
  EXPECT_EQ(polynomial_from_json(polynomial_to_json(p)), p);
  Box box{{-1, 1}, {-1, 1}};
  RationalPointSet pts = rational_point_search(p, Integer(10));
  ScanReport r = variety_approx_scan(p, box, Integer(40), Rational(3, 2), pts);
  ScanArtifact a = scan_from_json(scan_to_json(r, p, box, pts));
  EXPECT_EQ(a.polynomial, p);
  EXPECT_EQ(a.points.points, pts.points);
  ASSERT_EQ(a.report.hits.size(), r.hits.size());
  for (std::size_t i = 0; i < r.hits.size(); ++i) {
    EXPECT_EQ(a.report.hits[i].value, r.hits[i].value);
    EXPECT_EQ(a.report.hits[i].cls, r.hits[i].cls);
  }
  std::string csv = scan_to_csv(r, pts);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "x,y1,y2,abs_value,class,nearest,distance");
}
