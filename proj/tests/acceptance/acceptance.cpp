// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "dioph/constructors.hpp"
#include "dioph/continued_fraction.hpp"
#include "dioph/error.hpp"
#include "dioph/exponents.hpp"
#include "dioph/polynomial.hpp"
#include "dioph/real_source.hpp"
#include "dioph/variety.hpp"

using namespace dioph;

namespace {

// Tolerances, pinned.
constexpr unsigned kBudget = 1u << 17;
constexpr long kLegendreQ = 10000;
constexpr long kLagrangeQ = 100000;
constexpr int kMinkowskiSources = 100;
constexpr int kMinkowskiValues = 10;
constexpr double kEtaNuTolerance = 0.05;
constexpr double kVeroneseLambda1Lo = 4.9, kVeroneseLambda1Hi = 5.1;
constexpr double kVeronesePowerLo = 1.9, kVeronesePowerHi = 2.1;
constexpr double kVeroneseChiCap = 2.2;
constexpr unsigned kVeroneseLargeBits = 80;
constexpr double kVectorNuTolerance = 0.1;
constexpr double kVectorRatioTolerance = 0.05;
constexpr double kVectorChiLo = 1.85, kVectorChiHi = 2.15;
constexpr unsigned kVectorChiFromBits = 64;
constexpr int kOracleInstances = 50;
constexpr long kOracleWindowMax = 1000;
constexpr double kDirichletSlack = 0.01;
constexpr long kDirichletFrom = 10000;
constexpr long kUniformXMax = 100000;
constexpr double kUniformFloor = 0.9;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// log2 |r| from GMP mantissas; independent of the library's certified logs.
double log2_abs(const Rational& r) {
  long e1 = 0, e2 = 0;
  double m1 = mpz_get_d_2exp(&e1, r.get_num().get_mpz_t());
  double m2 = mpz_get_d_2exp(&e2, r.get_den().get_mpz_t());
  return std::log2(std::fabs(m1)) + static_cast<double>(e1) - std::log2(m2) - static_cast<double>(e2);
}

double log2_int(const Integer& x) { return log2_abs(Rational(x)); }

RealSource random_cf(std::uint64_t seed) {
  auto rng = std::make_shared<std::mt19937_64>(seed);
  auto draw = [rng]() -> std::optional<Integer> {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double v = u(*rng);
    double a = std::floor(1.0 / std::max(v, 1e-6));
    return Integer(static_cast<unsigned long>(std::max(1.0, a)));
  };
  std::vector<Integer> prefix{Integer(0)};
  for (int i = 0; i < 3; ++i) prefix.push_back(*draw());
  return RealSource::continued_fraction(prefix, draw);
}

ConstructionPlan plan_of(PlanKind kind, std::vector<Rational> lambdas, unsigned k, Rational w, std::size_t depth) {
  ConstructionPlan p;
  p.kind = kind;
  p.lambdas = std::move(lambdas);
  p.k = k;
  p.w = std::move(w);
  p.depth = depth;
  return p;
}

struct NamedSource {
  std::string name;
  RealSource source;
};

std::vector<NamedSource> twenty_sources() {
  std::vector<NamedSource> out;
  for (int i = 0; i < 10; ++i) out.push_back({"random" + std::to_string(i), random_cf(1000 + i)});
  out.push_back({"lambda1_cf(2)", construct(plan_of(PlanKind::Lambda1CF, {2}, 1, 1, 6), kBudget).sources[0]});
  out.push_back({"lambda1_cf(3)", construct(plan_of(PlanKind::Lambda1CF, {3}, 1, 1, 6), kBudget).sources[0]});
  out.push_back({"lambda1_series(2)", construct(plan_of(PlanKind::Lambda1Series, {2}, 1, 1, 5), kBudget).sources[0]});
  out.push_back({"veronese(2,2)", construct(plan_of(PlanKind::Veronese, {2}, 2, 1, 6), kBudget).sources[0]});
  out.push_back({"vector(3,4;2)[2]",
                 construct(plan_of(PlanKind::VectorLamblemm, {3, 4}, 1, 2, 5), kBudget).sources[1]});
  out.push_back({"355/113", RealSource::rational(Integer(355), Integer(113))});
  out.push_back({"-22/7", RealSource::rational(Integer(-22), Integer(7))});
  out.push_back({"1/2", RealSource::rational(Integer(1), Integer(2))});
  out.push_back({"103993/33102", RealSource::rational(Integer(103993), Integer(33102))});
  out.push_back({"123456/78901", RealSource::rational(Integer(123456), Integer(78901))});
  return out;
}

// Convergent fractions up to bound, including the alternate last step of a rational.
std::set<std::pair<Integer, Integer>> convergent_set(const RealSource& src, const Integer& bound) {
  ConvergentList list = convergents_beyond(src, bound, kBudget);
  std::set<std::pair<Integer, Integer>> out;
  for (const auto& c : list.items) out.insert({c.numerator, c.denominator});
  if (list.terminated && list.items.size() >= 2) {
    const auto& a = list.items[list.items.size() - 1];
    const auto& b = list.items[list.items.size() - 2];
    out.insert({a.numerator - b.numerator, a.denominator - b.denominator});
  }
  return out;
}

Outcome ac1_legendre(const std::vector<NamedSource>& sources) {
  Outcome o;
  long violations = 0, hypotheses = 0, unresolved = 0;
  for (const auto& [name, src] : sources) {
    auto conv = convergent_set(src, Integer(kLegendreQ));
    for (long qi = 1; qi <= kLegendreQ; ++qi) {
      Integer q(qi);
      Rational half(Integer(1), 2 * q);
      DistanceInterval d = nearest_distance(q, src, 96, kBudget);
      if (d.lo > half) continue;
      if (d.hi > half) {
        d = nearest_distance(q, src, 1024, kBudget);
        if (d.lo > half) continue;
        if (d.hi > half) {
          ++unresolved;
          continue;
        }
      }
      ++hypotheses;
      Enclosure e = src.enclosure(static_cast<unsigned>(bit_length(q)) + 96);
      Integer p = floor(e.lo * q + Rational(1, 2));
      LegendreResult r = legendre_certify(p, q, src, kBudget);
      Rational red(p, q);
      red.canonicalize();
      bool member = conv.count({red.get_num(), red.get_den()}) > 0;
      if (r.outcome != LegendreOutcome::IsConvergent || !member) {
        ++violations;
        if (o.detail.empty()) o.detail = " first at " + name + " q=" + q.get_str();
      }
    }
  }
  o.pass = violations == 0 && unresolved == 0;
  o.detail = std::to_string(violations) + " violations, " + std::to_string(unresolved) + " unresolved, " +
             std::to_string(hypotheses) + " certified hypotheses over " + std::to_string(sources.size()) +
             " sources, q<=" + std::to_string(kLegendreQ) + o.detail;
  return o;
}

Outcome ac2_lagrange(const std::vector<NamedSource>& sources) {
  Outcome o;
  long mismatches = 0, records = 0;
  for (const auto& [name, src] : sources) {
    Integer Q(kLagrangeQ);
    BestApproximationList best;
    try {
      best = best_approximations(src, Q, kBudget);
    } catch (const SearchMismatch& e) {
      ++mismatches;
      o.detail += " " + name + ": " + e.what();
      continue;
    }
    std::set<Integer> dens;
    for (const auto& c : convergents_beyond(src, Q, kBudget).items) {
      if (c.denominator <= Q) dens.insert(c.denominator);
    }
    std::set<Integer> got;
    for (const auto& b : best.items) got.insert(b.q);
    records += static_cast<long>(got.size());
    if (got != dens || !best.cross_checked) {
      ++mismatches;
      o.detail += " " + name + ": record set differs from convergent denominators";
    }
  }
  o.pass = mismatches == 0;
  o.detail = std::to_string(mismatches) + " mismatches, " + std::to_string(records) + " records, Q=" +
             std::to_string(kLagrangeQ) + o.detail;
  return o;
}

Outcome ac3_minkowski() {
  Outcome o;
  std::mt19937_64 rng(77);
  long violations = 0, checks = 0;
  for (int i = 0; i < kMinkowskiSources; ++i) {
    RealSource src = i % 4 == 3
                         ? RealSource::rational(Integer(static_cast<long>(rng() % 20001)) - 10000,
                                                Integer(static_cast<long>(rng() % 2000 + 1)))
                         : random_cf(5000 + static_cast<std::uint64_t>(i));
    for (int j = 0; j < kMinkowskiValues; ++j) {
      long num = 2 * 7 + static_cast<long>(rng() % (998 * 7 + 1));
      Rational Q(num, 7);
      MinkowskiResult r = minkowski_2d_check(src, Q, kBudget);
      ++checks;
      if (!r.pass) ++violations;
    }
  }
  o.pass = violations == 0;
  o.detail = std::to_string(violations) + " violations over " + std::to_string(checks) + " (source, Q) pairs";
  return o;
}

double interval_gap(const RationalInterval& a, const RationalInterval& b) {
  Rational d1 = abs(Rational(a.hi - b.lo));
  Rational d2 = abs(Rational(b.hi - a.lo));
  return to_double(std::max(d1, d2));
}

// Profile entries (convergents with s_n >= 2) up to the one preceding the
// quotient at last_position, so the last jump is covered and nothing beyond.
std::size_t profile_depth(const RealSource& src, std::size_t last_position) {
  ConvergentList list = convergents(src, last_position, kBudget);
  std::size_t n = 0;
  for (const auto& c : list.items) {
    if (c.denominator >= 2) ++n;
  }
  return n;
}

struct CfConstruction {
  std::string name;
  Construction c;
};

Outcome ac4_profile_law(const std::vector<CfConstruction>& constructions) {
  Outcome o;
  long law_failures = 0, entries = 0;
  double worst = 0;
  for (const auto& [name, c] : constructions) {
    for (std::size_t j = 0; j < c.sources.size(); ++j) {
      std::size_t depth = profile_depth(c.sources[j], c.designated[j].back());
      EstimateOptions opt;
      opt.budget = kBudget;
      ExponentEstimate est = lambda1_profile(c.sources[j], depth, opt);
      std::map<Integer, const ProfileEntry*> by_q;
      for (const auto& e : est.profile) {
        ++entries;
        if (!e.gap_positive || !e.gap_bounded) ++law_failures;
        by_q[e.q] = &e;
      }
      std::vector<const JumpRecord*> rows;
      for (const auto& r : c.trace.rows) {
        if (r.coordinate == j + 1) rows.push_back(&r);
      }
      for (std::size_t t = rows.size() >= 3 ? rows.size() - 3 : 0; t < rows.size(); ++t) {
        auto it = by_q.find(rows[t]->s);
        if (it == by_q.end()) {
          ++law_failures;
          o.detail += " " + name + ": jump denominator missing from profile";
          continue;
        }
        worst = std::max(worst, interval_gap(it->second->eta, it->second->nu));
      }
    }
  }
  o.pass = law_failures == 0 && worst < kEtaNuTolerance;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%ld law failures over %ld profile entries, max |eta-nu| at last 3 jumps = %.4g",
                law_failures, entries, worst);
  o.detail = buf + o.detail;
  return o;
}

// Veronese (k=2, lambda=2): lambda_1, power witnesses and chi_2 windows.
Outcome ac5_veronese(const Construction& c) {
  Outcome o;
  const RealSource& zeta = c.sources[0];
  EstimateOptions opt;
  opt.budget = kBudget;
  std::size_t depth = profile_depth(zeta, c.designated[0].back());
  ExponentEstimate prof = lambda1_profile(zeta, depth, opt);
  double lam_lo = 1e9, lam_hi = -1e9;
  std::vector<std::pair<Integer, Integer>> large;  // (r_n, s_n) with s_n > 2^80
  ConvergentList conv = convergents(zeta, c.designated[0].back() + 1, kBudget);
  for (const auto& e : prof.profile) {
    if (bit_length(e.q) <= kVeroneseLargeBits) continue;
    lam_lo = std::min(lam_lo, to_double(e.nu.lo));
    lam_hi = std::max(lam_hi, to_double(e.nu.hi));
    large.push_back({conv.items[e.index].numerator, e.q});
  }
  bool ok = !large.empty() && lam_lo >= kVeroneseLambda1Lo && lam_hi <= kVeroneseLambda1Hi;

  // Power witnesses x = s^2, y = (r s, r^2), measured directly.
  double pw_lo = 1e9, pw_hi = -1e9;
  for (const auto& [r, s] : large) {
    Integer x = s * s;
    unsigned bits = static_cast<unsigned>(8 * bit_length(x)) + 256;
    Enclosure e = zeta.enclosure(bits);
    Rational z = e.lo;
    Rational err1 = abs(Rational(z * x - r * s));
    Rational err2 = abs(Rational(z * z * x - r * r));
    double ex = -log2_abs(std::max(err1, err2)) / log2_int(x);
    pw_lo = std::min(pw_lo, ex);
    pw_hi = std::max(pw_hi, ex);
  }
  ok = ok && pw_lo >= kVeronesePowerLo && pw_hi <= kVeronesePowerHi;

  // chi_2 of (zeta, zeta^2) on the default schedule through s_n^2.
  std::vector<RealSource> vs = veronese_sources(zeta, 2);
  WindowSchedule sched = geometric_schedule(Integer(8), Integer(1) << 40, 2);
  WindowSchedule squares;
  for (const auto& item : conv.items) {
    if (bit_length(item.denominator) > kVeroneseLargeBits && item.index < c.designated[0].back()) {
      squares.windows.push_back(item.denominator * item.denominator);
    }
  }
  std::sort(squares.windows.begin(), squares.windows.end());
  squares.windows.erase(std::unique(squares.windows.begin(), squares.windows.end()), squares.windows.end());
  sched = merge_schedules(sched, squares);
  ExponentEstimate chi = estimate_chi_k(vs, sched, SearchMethod::ConvergentCandidates, opt);
  std::set<Integer> targets;
  for (const auto& [r, s] : large) targets.insert(s * s);
  double at_lo = 1e9, at_hi = -1e9, cap = 0;
  long flagged = 0, hit_targets = 0;
  for (const auto& w : chi.windows) {
    if (!w.witness) {
      ++flagged;
      continue;
    }
    double v = w.witness->achieved.unbounded ? 1e9 : w.witness->achieved.approx();
    cap = std::max(cap, v);
    if (targets.count(w.window)) {
      ++hit_targets;
      at_lo = std::min(at_lo, v);
      at_hi = std::max(at_hi, v);
    }
  }
  ok = ok && hit_targets == static_cast<long>(targets.size()) && at_lo >= kVeronesePowerLo &&
       at_hi <= kVeronesePowerHi && cap <= kVeroneseChiCap && flagged == 0;
  o.pass = ok;
  char buf[400];
  std::snprintf(buf, sizeof buf,
                "lambda1 in [%.4f, %.4f] over %zu jumps with s_n > 2^%u; power witnesses in [%.4f, %.4f]; "
                "chi_2 at s_n^2 in [%.4f, %.4f], max over %zu windows %.4f, %ld flagged",
                lam_lo, lam_hi, large.size(), kVeroneseLargeBits, pw_lo, pw_hi, at_lo, at_hi, chi.windows.size(), cap,
                flagged);
  o.detail = buf;
  return o;
}

Outcome ac6_vector(const Construction& c) {
  Outcome o;
  const auto& rows = c.trace.rows;
  std::size_t last_jump = rows.back().jump;
  double nu_err = 0, ratio_err = 0;
  for (const auto& r : rows) {
    if (r.jump != last_jump) continue;
    double target = to_double(c.plan.lambdas[r.coordinate - 1]);
    nu_err = std::max(nu_err, std::fabs(to_double(r.realized_nu) - target));
    if (r.coordinate == 2) ratio_err = std::max(ratio_err, std::fabs(r.realized_ratio - 0.5));
  }
  EstimateOptions opt;
  opt.budget = kBudget;
  std::set<Integer> targets;
  Integer x_max = 2;
  for (const auto& r : rows) {
    if (r.coordinate == 1 && bit_length(r.s) > kVectorChiFromBits) {
      targets.insert(r.s);
      x_max = std::max(x_max, r.s);
    }
  }
  WindowSchedule sched = default_schedule(c.sources, x_max, kBudget);
  ExponentEstimate chi = estimate_chi_k(c.sources, sched, SearchMethod::ConvergentCandidates, opt);
  double lo = 1e9, hi = -1e9;
  long seen = 0;
  for (const auto& w : chi.windows) {
    if (!targets.count(w.window) || !w.witness) continue;
    ++seen;
    double v = w.witness->achieved.approx();
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  o.pass = nu_err <= kVectorNuTolerance && ratio_err <= kVectorRatioTolerance &&
           seen == static_cast<long>(targets.size()) && seen > 0 && lo >= kVectorChiLo && hi <= kVectorChiHi;
  char buf[300];
  std::snprintf(buf, sizeof buf,
                "last jump: max |nu - lambda_j| = %.4g, |ratio - 1/2| = %.4g; chi_2 at %ld windows s_{1,i} > 2^%u in "
                "[%.4f, %.4f]",
                nu_err, ratio_err, seen, kVectorChiFromBits, lo, hi);
  o.detail = buf;
  return o;
}

struct EstimateRun {
  std::string name;
  std::vector<RealSource> sources;
  WindowSchedule schedule;
  ExponentEstimate omega;
  ExponentEstimate chi;
};

Outcome ac7_sandwich(const std::vector<EstimateRun>& runs) {
  Outcome o;
  long violations = 0, windows = 0, verified = 0, vacuous = 0;
  EstimateOptions opt;
  opt.budget = kBudget;
  for (const auto& run : runs) {
    std::vector<ExponentEstimate> per;
    for (const auto& s : run.sources) {
      std::vector<RealSource> one{s};
      per.push_back(estimate_omega_k(one, run.schedule, opt));
    }
    SandwichReport rep = sandwich_report(run.sources, run.omega, run.chi, per, opt);
    violations += static_cast<long>(rep.violations.size());
    windows += static_cast<long>(rep.windows_checked);
    verified += static_cast<long>(rep.transforms_verified);
    vacuous += static_cast<long>(rep.transforms_vacuous);
    if (!rep.violations.empty()) {
      o.detail += " " + run.name + ": " + rep.violations[0].relation + " at " + rep.violations[0].window.get_str();
    }
  }
  o.pass = violations == 0 && verified > 0;
  o.detail = std::to_string(violations) + " violations over " + std::to_string(windows) + " windows in " +
             std::to_string(runs.size()) + " runs; " + std::to_string(verified) + " transforms re-verified, " +
             std::to_string(vacuous) + " vacuous" + o.detail;
  return o;
}

Outcome ac8_oracle() {
  Outcome o;
  WindowSchedule all;
  for (long x = 2; x <= kOracleWindowMax; ++x) all.windows.push_back(Integer(x));
  EstimateOptions opt;
  opt.budget = kBudget;
  long mismatches = 0, compared = 0;
  for (int i = 0; i < kOracleInstances; ++i) {
    std::vector<RealSource> src{random_cf(9000 + 2 * static_cast<std::uint64_t>(i)),
                                random_cf(9001 + 2 * static_cast<std::uint64_t>(i))};
    ExponentEstimate brute = estimate_chi_k(src, all, SearchMethod::BruteForce, opt);
    ExponentEstimate cand = estimate_chi_k(src, all, SearchMethod::ConvergentCandidates, opt);
    for (std::size_t w = 0; w < all.windows.size(); ++w) {
      const auto& a = brute.windows[w].witness;
      const auto& b = cand.windows[w].witness;
      ++compared;
      if (!a || !b || a->denominators != b->denominators || a->achieved.unbounded != b->achieved.unbounded ||
          a->achieved.lower != b->achieved.lower) {
        ++mismatches;
      }
    }
  }
  o.pass = mismatches == 0;
  o.detail = std::to_string(mismatches) + " mismatches over " + std::to_string(compared) + " windows (" +
             std::to_string(kOracleInstances) + " instances, X<=" + std::to_string(kOracleWindowMax) + ")";
  return o;
}

MultiPolynomial poly2(const std::vector<std::pair<Monomial, long>>& terms) {
  MultiPolynomial p(2);
  for (const auto& [m, c] : terms) p.add_term(m, Rational(c));
  return p;
}

// |P(y/x)| >= x^(-r) for every nonzero value over a full grid, in plain rationals.
long denominator_bound_sweep(const MultiPolynomial& p, const Box& box, long x_max, long& checked) {
  long violations = 0;
  unsigned r = degrees(p).absolute;
  for (long x = 1; x <= x_max; ++x) {
    Integer X(x);
    Rational floor_value(Integer(1), ipow(X, r));
    Integer lo0 = ceil(box[0].lo * X), hi0 = floor(box[0].hi * X);
    Integer lo1 = ceil(box[1].lo * X), hi1 = floor(box[1].hi * X);
    for (Integer a = lo0; a <= hi0; ++a) {
      for (Integer b = lo1; b <= hi1; ++b) {
        std::vector<Rational> z{Rational(a, X), Rational(b, X)};
        z[0].canonicalize();
        z[1].canonicalize();
        Rational v = p.evaluate(z);
        if (sgn(v) == 0) continue;
        ++checked;
        if (abs(v) < floor_value) ++violations;
      }
    }
  }
  return violations;
}

Outcome ac9_variety() {
  Outcome o;
  MultiPolynomial fermat = poly2({{{3, 0}, 1}, {{0, 3}, 1}, {{0, 0}, -1}});
  Box fbox{{Rational(-3, 2), Rational(3, 2)}, {Rational(-3, 2), Rational(3, 2)}};
  RationalPointSet fpts = rational_point_search(fermat, Integer(30));
  ScanReport f = variety_approx_scan(fermat, fbox, Integer(2000), Rational(5, 2), fpts);
  long f_eff = 0, f_eff_near = 0, f_small = 0;
  bool f_points_ok = true;
  for (const auto& h : f.hits) {
    if (f.effective_from && h.scale() >= *f.effective_from) {
      ++f_eff;
      if (h.cls != HitClass::NearRationalPoint) continue;
      RationalPoint z = h.point();
      bool trivial = (z[0] == 1 && z[1] == 0) || (z[0] == 0 && z[1] == 1);
      if (trivial) {
        ++f_eff_near;
      } else {
        f_points_ok = false;
      }
    } else {
      ++f_small;
    }
  }

  MultiPolynomial circle = poly2({{{2, 0}, 1}, {{0, 2}, 1}, {{0, 0}, -3}});
  Box cbox{{Rational(-2), Rational(2)}, {Rational(-2), Rational(2)}};
  RationalPointSet cpts = rational_point_search(circle, Integer(30));
  ScanReport c = variety_approx_scan(circle, cbox, Integer(2000), Rational(3, 2), cpts);
  long c_eff = 0;
  for (const auto& h : c.hits) {
    if (c.effective_from && h.scale() >= *c.effective_from) ++c_eff;
  }

  long checked = 0;
  long bound_violations = denominator_bound_sweep(fermat, fbox, 150, checked);
  bound_violations += denominator_bound_sweep(circle, cbox, 150, checked);

  o.pass = f.effective_from && c.effective_from && f_eff > 0 && f_eff == f_eff_near && f_points_ok &&
           f.outliers_effective == 0 && cpts.points.empty() && c_eff == 0 && c.outliers_effective == 0 &&
           bound_violations == 0;
  o.detail = "fermat: " + std::to_string(f_eff_near) + "/" + std::to_string(f_eff) +
             " hits at x >= " + (f.effective_from ? f.effective_from->get_str() : "-") +
             " on (1,0)/(0,1), " + std::to_string(f_small) + " earlier hits; circle-3: " + std::to_string(c_eff) +
             " hits at x >= " + (c.effective_from ? c.effective_from->get_str() : "-") + " (" +
             std::to_string(c.hits.size()) + " earlier); scan bound checks " +
             std::to_string(f.bound_checks + c.bound_checks) + ", exact-route " +
             std::to_string(f.exact_route_checks + c.exact_route_checks) + "; grid sweep " +
             std::to_string(bound_violations) + " violations over " + std::to_string(checked) + " values";
  return o;
}

Outcome ac10_dirichlet(const std::vector<EstimateRun>& runs) {
  Outcome o;
  long below = 0, windows = 0;
  double min_omega_gap = 1e9, min_chi = 1e9;
  for (const auto& run : runs) {
    double k = static_cast<double>(run.sources.size());
    for (std::size_t i = 0; i < run.schedule.windows.size(); ++i) {
      const Integer& x = run.schedule.windows[i];
      if (x < kDirichletFrom) continue;
      const auto& wo = run.omega.windows[i];
      const auto& wc = run.chi.windows[i];
      if (wo.witness && wo.route == "exhaustive") {
        ++windows;
        double v = wo.witness->achieved.unbounded ? 1e9 : wo.witness->achieved.approx();
        min_omega_gap = std::min(min_omega_gap, v - 1.0 / k);
        if (v < 1.0 / k - kDirichletSlack) ++below;
      }
      if (wc.witness) {
        ++windows;
        double v = wc.witness->achieved.unbounded ? 1e9 : wc.witness->achieved.approx();
        min_chi = std::min(min_chi, v);
        if (v < 1.0 - kDirichletSlack) ++below;
      }
    }
  }
  double worst_uniform = 1e9;
  EstimateOptions opt;
  opt.budget = kBudget;
  for (const auto& run : runs) {
    UniformChiReport u = uniform_chi_check(run.sources, Integer(kUniformXMax), opt);
    double v = u.worst.unbounded ? 1e9 : u.worst.approx();
    worst_uniform = std::min(worst_uniform, v);
  }
  o.pass = below == 0 && worst_uniform >= kUniformFloor;
  char buf[300];
  std::snprintf(buf, sizeof buf,
                "%ld of %ld windows below the floors; min(omega - 1/k) = %.4f, min chi = %.4f; uniform chi worst "
                "= %.4f at X_max = %ld",
                below, windows, min_omega_gap, min_chi, worst_uniform, kUniformXMax);
  o.detail = buf;
  return o;
}

}  // namespace

int main() {
  set_default_precision_budget(kBudget);
  int failures = 0;
  auto report = [&](const char* id, const char* name, const std::function<Outcome()>& fn) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failures;
    std::printf("%s %s %s: %s (%.1f s)\n", id, o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  };

  std::vector<NamedSource> twenty = twenty_sources();
  report("AC1", "legendre-sweep", [&] { return ac1_legendre(twenty); });
  report("AC2", "lagrange-equivalence", [&] { return ac2_lagrange(twenty); });
  report("AC3", "minkowski-sweep", [] { return ac3_minkowski(); });

  Construction veronese = construct(plan_of(PlanKind::Veronese, {2}, 2, 1, 6), kBudget);
  Construction vector = construct(plan_of(PlanKind::VectorLamblemm, {3, 4}, 1, 2, 5), kBudget);
  std::vector<CfConstruction> cf_constructions{
      {"lambda1_cf(2)", construct(plan_of(PlanKind::Lambda1CF, {2}, 1, 1, 6), kBudget)},
      {"lambda1_cf(3)", construct(plan_of(PlanKind::Lambda1CF, {3}, 1, 1, 6), kBudget)},
      {"veronese(2,2)", veronese},
      {"vector(3,4;2)", vector}};
  report("AC4", "profile-law", [&] { return ac4_profile_law(cf_constructions); });
  report("AC5", "veronese-k2-lambda2", [&] { return ac5_veronese(veronese); });
  report("AC6", "vector-3-4-w2", [&] { return ac6_vector(vector); });

  std::vector<EstimateRun> runs;
  {
    EstimateOptions opt;
    opt.budget = kBudget;
    auto add = [&](std::string name, std::vector<RealSource> sources, const Integer& x_max) {
      EstimateRun run;
      run.name = std::move(name);
      run.sources = std::move(sources);
      run.schedule = default_schedule(run.sources, x_max, kBudget);
      run.omega = estimate_omega_k(run.sources, run.schedule, opt);
      run.chi = estimate_chi_k(run.sources, run.schedule, SearchMethod::Both, opt);
      runs.push_back(std::move(run));
    };
    for (int i = 0; i < 3; ++i) {
      add("random pair " + std::to_string(i),
          {random_cf(300 + 2 * static_cast<std::uint64_t>(i)), random_cf(301 + 2 * static_cast<std::uint64_t>(i))},
          Integer(100000));
    }
    add("random triple", {random_cf(400), random_cf(401), random_cf(402)}, Integer(100000));
    add("veronese(2,2)", veronese_sources(veronese.sources[0], 2), Integer(100000));
    add("vector(3,4;2)", vector.sources, Integer(100000));
  }
  report("AC7", "sandwich-and-transform", [&] { return ac7_sandwich(runs); });
  report("AC8", "search-method-oracle", [] { return ac8_oracle(); });
  report("AC9", "variety-exclusion", [] { return ac9_variety(); });
  report("AC10", "dirichlet-floors", [&] { return ac10_dirichlet(runs); });

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
