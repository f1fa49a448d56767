#include "dioph/variety.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <thread>

#include "dioph/error.hpp"

namespace dioph {

const char* to_string(ScanMode mode) {
  return mode == ScanMode::SharedDenominator ? "shared" : "per_coordinate";
}

const char* to_string(HitClass cls) {
  return cls == HitClass::NearRationalPoint ? "near_rational_point" : "outlier";
}

RationalPoint ScanHit::point() const {
  RationalPoint z;
  for (std::size_t j = 0; j < numerators.size(); ++j) {
    const Integer& x = denominators.size() == 1 ? denominators[0] : denominators[j];
    Rational v(numerators[j], x);
    v.canonicalize();
    z.push_back(v);
  }
  return z;
}

const Integer& ScanHit::scale() const {
  return *std::max_element(denominators.begin(), denominators.end());
}

namespace {

__extension__ typedef __int128 i128;
__extension__ typedef unsigned __int128 u128;

Integer to_integer(i128 v) {
  bool neg = v < 0;
  u128 u = neg ? -static_cast<u128>(v) : static_cast<u128>(v);
  Integer hi(static_cast<unsigned long>(u >> 64));
  Integer lo(static_cast<unsigned long>(u & 0xffffffffffffffffull));
  Integer r = (hi << 64) + lo;
  return neg ? Integer(-r) : r;
}

i128 to_i128(const Integer& v) {
  Integer a = abs(v);
  Integer hi = a >> 64;
  Integer lo = a - (hi << 64);
  u128 u = (static_cast<u128>(hi.get_ui()) << 64) | lo.get_ui();
  i128 r = static_cast<i128>(u);
  return sgn(v) < 0 ? -r : r;
}

template <class I>
I iabs(const I& v) {
  return v < 0 ? I(-v) : v;
}

inline Integer iabs(const Integer& v) { return abs(v); }

template <class I>
I from_integer(const Integer& v);
template <>
i128 from_integer<i128>(const Integer& v) {
  return to_i128(v);
}
template <>
Integer from_integer<Integer>(const Integer& v) {
  return v;
}

inline Integer as_integer(i128 v) { return to_integer(v); }
inline Integer as_integer(const Integer& v) { return v; }

template <class I>
I horner(const std::vector<I>& c, const I& t) {
  I v = 0;
  for (std::size_t i = c.size(); i-- > 0;) v = v * t + c[i];
  return v;
}

template <class I>
void interval_eval(const std::vector<I>& c, const I& a, const I& b, I& lo, I& hi) {
  lo = 0;
  hi = 0;
  I pa = 1, pb = 1;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i > 0) {
      pa = pa * a;
      pb = pb * b;
    }
    if (c[i] == 0) continue;
    I mn, mx;
    if (i == 0) {
      mn = 1;
      mx = 1;
    } else if (i % 2 == 1 || a >= 0) {
      mn = pa;
      mx = pb;
    } else if (b <= 0) {
      mn = pb;
      mx = pa;
    } else {
      mn = 0;
      mx = pa > pb ? pa : pb;
    }
    if (c[i] > 0) {
      lo = lo + c[i] * mn;
      hi = hi + c[i] * mx;
    } else {
      lo = lo + c[i] * mx;
      hi = hi + c[i] * mn;
    }
  }
}

// Calls leaf(t, g(t)) for every integer t in [a, b] that survives interval
// pruning against |g| <= T, in increasing order of t.
template <class I, class Leaf>
void small_values(const std::vector<I>& c, const I& a0, const I& b0, const I& T, Leaf&& leaf,
                  std::uint64_t& evaluated) {
  std::vector<std::pair<I, I>> stack;
  stack.push_back({a0, b0});
  I lo, hi, negT = -T;
  while (!stack.empty()) {
    auto [a, b] = stack.back();
    stack.pop_back();
    if (a > b) continue;
    if (b - a <= 3) {
      for (I t = a; t <= b; t = t + 1) {
        ++evaluated;
        leaf(t, horner(c, t));
      }
      continue;
    }
    interval_eval(c, a, b, lo, hi);
    if (lo > T || hi < negT) continue;
    I m = a + (b - a) / 2;
    stack.push_back({m + 1, b});
    stack.push_back({a, m});
  }
}

struct Term {
  Monomial exps;
  Integer coef;
};

std::vector<Term> integer_terms(const MultiPolynomial& p) {
  std::vector<Term> out;
  for (const auto& [m, c] : p.terms()) out.push_back({m, c.get_num()});
  return out;
}

void check_box(const Box& box, std::size_t k) {
  if (box.size() != k) throw InvalidArgument("box dimension does not match the polynomial");
  for (const auto& iv : box) {
    if (!(iv.lo < iv.hi)) throw InvalidArgument("box intervals must satisfy lo < hi");
  }
}

}  // namespace

DenominatorBoundResult denominator_bound_check(const MultiPolynomial& p, std::span<const Rational> point,
                                               std::optional<Integer> shared_denominator) {
  if (!p.has_integer_coefficients()) throw InvalidArgument("denominator bound needs integer coefficients");
  if (point.size() != p.variables()) throw InvalidArgument("point has the wrong dimension");
  Degrees deg = degrees(p);
  DenominatorBoundResult out;
  out.value = p.evaluate(point);
  Integer prod = 1;
  out.refined_bound = 1;
  for (std::size_t j = 0; j < point.size(); ++j) {
    const Integer& q = point[j].get_den();
    prod *= q;
    out.refined_bound /= Rational(ipow(q, deg.per_variable[j]));
    if (shared_denominator && !mpz_divisible_p(shared_denominator->get_mpz_t(), q.get_mpz_t())) {
      throw InvalidArgument("shared denominator is not a multiple of every coordinate denominator");
    }
  }
  out.total_bound = Rational(Integer(1), ipow(prod, deg.absolute));
  if (shared_denominator) {
    if (sgn(*shared_denominator) <= 0) throw InvalidArgument("shared denominator must be positive");
    out.shared_bound = Rational(Integer(1), ipow(*shared_denominator, deg.absolute));
  }
  if (sgn(out.value) == 0) {
    out.zero = true;
    return out;
  }
  Rational a = abs(out.value);
  if (a < out.refined_bound || a < out.total_bound || (out.shared_bound && a < *out.shared_bound)) {
    throw BoundViolation("nonzero value " + to_string(out.value) + " below its denominator bound");
  }
  return out;
}

RationalPointSet rational_point_search(const MultiPolynomial& p_in, const Integer& height, double cost_guard) {
  if (height < 1) throw InvalidArgument("height bound must be at least 1");
  const std::size_t k = p_in.variables();
  Degrees deg = degrees(p_in);
  if (std::pow(height.get_d(), static_cast<double>(k + 1)) > cost_guard) {
    throw CostGuardExceeded("rational point search over H^(k+1) exceeds the cost guard");
  }
  MultiPolynomial p = p_in.integer_cleared();
  std::vector<Term> terms = integer_terms(p);
  const long H = height.get_si();

  std::vector<std::pair<Integer, Integer>> fractions;  // reduced p/q, height <= H
  for (long q = 1; q <= H; ++q) {
    for (long n = -H; n <= H; ++n) {
      Integer g;
      mpz_gcd(g.get_mpz_t(), Integer(n).get_mpz_t(), Integer(q).get_mpz_t());
      if (g == 1) fractions.push_back({Integer(n), Integer(q)});
    }
  }

  RationalPointSet out;
  out.height_bound = height;
  std::vector<std::size_t> idx(k - 1, 0);
  std::uint64_t evaluated = 0;
  const unsigned dk = deg.per_variable[k - 1];
  while (true) {
    // f(Y) = prod q_j^(r_j) P(prefix, Y), integer coefficients
    std::vector<Integer> e(dk + 1, 0);
    for (const auto& t : terms) {
      Integer prod = t.coef;
      for (std::size_t j = 0; j + 1 < k; ++j) {
        const auto& [pn, pd] = fractions[idx[j]];
        prod *= ipow(pn, t.exps[j]) * ipow(pd, deg.per_variable[j] - t.exps[j]);
      }
      e[t.exps[k - 1]] += prod;
    }
    RationalPoint prefix;
    for (std::size_t j = 0; j + 1 < k; ++j) prefix.push_back(Rational(fractions[idx[j]].first, fractions[idx[j]].second));
    long d = static_cast<long>(dk);
    while (d >= 0 && sgn(e[static_cast<std::size_t>(d)]) == 0) --d;
    if (d < 0) {
      out.contains_line = true;
      for (const auto& [n, q] : fractions) {
        RationalPoint z = prefix;
        z.push_back(Rational(n, q));
        out.points.push_back(std::move(z));
      }
    } else if (d > 0) {
      const Integer& lead = e[static_cast<std::size_t>(d)];
      for (long b = 1; b <= H; ++b) {
        if (!mpz_divisible_ui_p(lead.get_mpz_t(), static_cast<unsigned long>(b))) continue;
        std::vector<Integer> g(static_cast<std::size_t>(d) + 1);
        for (long i = 0; i <= d; ++i) {
          g[static_cast<std::size_t>(i)] = e[static_cast<std::size_t>(i)] * ipow(Integer(b), static_cast<unsigned long>(d - i));
        }
        small_values<Integer>(g, Integer(-H), Integer(H), Integer(0),
                              [&](const Integer& t, const Integer& v) {
                                if (sgn(v) != 0) return;
                                Integer gg;
                                mpz_gcd(gg.get_mpz_t(), t.get_mpz_t(), Integer(b).get_mpz_t());
                                if (gg != 1) return;
                                RationalPoint z = prefix;
                                z.push_back(Rational(t, Integer(b)));
                                out.points.push_back(std::move(z));
                              },
                              evaluated);
      }
    }
    // advance the prefix odometer
    std::size_t j = 0;
    while (j + 1 < k) {
      if (++idx[j] < fractions.size()) break;
      idx[j] = 0;
      ++j;
    }
    if (j + 1 >= k) break;
  }
  std::sort(out.points.begin(), out.points.end());
  out.points.erase(std::unique(out.points.begin(), out.points.end()), out.points.end());
  return out;
}

Rational derivative_bound(const MultiPolynomial& p, const Box& box) {
  check_box(box, p.variables());
  Rational c = 0;
  for (std::size_t i = 0; i < p.variables(); ++i) {
    RationalInterval d = p.derivative(i).evaluate(box);
    c = std::max(c, d.magnitude());
  }
  return c;
}

ExclusionCertificate exclusion_certificate(const MultiPolynomial& p, const Box& box,
                                           std::span<const Rational> candidate) {
  check_box(box, p.variables());
  if (candidate.size() != p.variables()) throw InvalidArgument("candidate has the wrong dimension");
  for (std::size_t j = 0; j < candidate.size(); ++j) {
    if (!box[j].contains(candidate[j])) throw InvalidArgument("candidate lies outside the box");
  }
  ExclusionCertificate cert;
  cert.box = box;
  cert.candidate.assign(candidate.begin(), candidate.end());
  cert.value = p.evaluate(candidate);
  if (sgn(cert.value) == 0) throw InvalidArgument("candidate lies on the variety");
  cert.derivative_bound = derivative_bound(p, box);
  if (sgn(cert.derivative_bound) == 0) {
    // P is constant on the box.
    Rational span = 0;
    for (const auto& iv : box) span = std::max(span, iv.width());
    cert.radius = span;
  } else {
    cert.radius = abs(cert.value) / (2 * Rational(static_cast<long>(p.variables())) * cert.derivative_bound);
  }
  return cert;
}

bool verify_exclusion_certificate(const MultiPolynomial& p, const ExclusionCertificate& cert, unsigned grid) {
  const std::size_t k = p.variables();
  if (cert.candidate.size() != k || cert.box.size() != k || sgn(cert.radius) <= 0) return false;
  if (p.evaluate(cert.candidate) != cert.value || sgn(cert.value) == 0) return false;
  Box region;
  for (std::size_t j = 0; j < k; ++j) {
    Rational lo = std::max(cert.box[j].lo, Rational(cert.candidate[j] - cert.radius));
    Rational hi = std::min(cert.box[j].hi, Rational(cert.candidate[j] + cert.radius));
    region.push_back({lo, hi});
  }
  // Mean-value form over the region.
  RationalInterval enclosure = RationalInterval::point(cert.value);
  for (std::size_t j = 0; j < k; ++j) {
    RationalInterval d = p.derivative(j).evaluate(region);
    RationalInterval step{region[j].lo - cert.candidate[j], region[j].hi - cert.candidate[j]};
    enclosure = enclosure + d * step;
  }
  if (enclosure.contains_zero()) return false;
  // Sampled points keep the sign of the candidate value.
  std::vector<unsigned> idx(k, 0);
  while (true) {
    RationalPoint z;
    for (std::size_t j = 0; j < k; ++j) {
      Rational t(static_cast<long>(idx[j]), static_cast<long>(grid));
      z.push_back(region[j].lo + t * region[j].width());
    }
    Rational v = p.evaluate(z);
    if (sgn(v) != sgn(cert.value)) return false;
    std::size_t j = 0;
    while (j < k) {
      if (++idx[j] <= grid) break;
      idx[j] = 0;
      ++j;
    }
    if (j == k) break;
  }
  return true;
}

namespace {

struct ScanContext {
  std::size_t k;
  Degrees deg;
  std::vector<Term> terms;  // integer-cleared
  MultiPolynomial original;
  MultiPolynomial cleared;
  Box box;
  Rational kc;  // k * C
  Rational mu;
  ScanMode mode;
};

struct ScanPartial {
  std::vector<ScanHit> hits;
  std::uint64_t evaluated = 0;
  std::uint64_t bound_checks = 0;
  std::uint64_t exact_route_checks = 0;
};

// Threshold on the homogenized integer value for one denominator tuple.
Integer hit_threshold(const ScanContext& ctx, const std::vector<Integer>& xs) {
  if (ctx.mode == ScanMode::SharedDenominator) {
    const Integer& x = xs[0];
    Rational scale = ctx.kc * Rational(ipow(x, ctx.deg.absolute - 1));
    return floor_scaled_power(scale, x, ctx.mu);
  }
  Integer big = 0;
  Integer small = 0;
  Rational scale = ctx.kc;
  for (std::size_t j = 0; j < ctx.k; ++j) {
    scale *= Rational(ipow(xs[j], ctx.deg.per_variable[j]));
    if (ctx.deg.per_variable[j] > 0 && (sgn(small) == 0 || xs[j] < small)) small = xs[j];
    if (xs[j] > big) big = xs[j];
  }
  scale /= Rational(small);
  return floor_scaled_power(scale, big, ctx.mu);
}

template <class I>
void scan_tuple(const ScanContext& ctx, const std::vector<Integer>& xs, const I& cap, ScanPartial& part) {
  const std::size_t k = ctx.k;
  bool shared = ctx.mode == ScanMode::SharedDenominator;
  auto x_of = [&](std::size_t j) -> const Integer& { return shared ? xs[0] : xs[j]; };
  std::vector<I> lo(k), hi(k);
  for (std::size_t j = 0; j < k; ++j) {
    Integer l = ceil(ctx.box[j].lo * x_of(j));
    Integer h = floor(ctx.box[j].hi * x_of(j));
    if (l > h) return;
    lo[j] = from_integer<I>(l);
    hi[j] = from_integer<I>(h);
  }
  Integer t_int = hit_threshold(ctx, xs);
  I T = t_int > as_integer(cap) ? cap : from_integer<I>(t_int);

  // Per-term multiplier from the homogenization.
  std::vector<I> mult(ctx.terms.size());
  for (std::size_t t = 0; t < ctx.terms.size(); ++t) {
    const Monomial& m = ctx.terms[t].exps;
    Integer v = ctx.terms[t].coef;
    if (shared) {
      unsigned total = 0;
      for (unsigned e : m) total += e;
      v *= ipow(xs[0], ctx.deg.absolute - total);
    } else {
      for (std::size_t j = 0; j < k; ++j) v *= ipow(xs[j], ctx.deg.per_variable[j] - m[j]);
    }
    mult[t] = from_integer<I>(v);
  }

  const unsigned dk = ctx.deg.per_variable[k - 1];
  std::vector<I> y(k);
  for (std::size_t j = 0; j + 1 < k; ++j) y[j] = lo[j];
  std::vector<std::vector<I>> ypow(k);
  std::vector<I> coef(dk + 1);
  while (true) {
    for (std::size_t j = 0; j + 1 < k; ++j) {
      ypow[j].assign(ctx.deg.per_variable[j] + 1, I(1));
      for (unsigned e = 1; e <= ctx.deg.per_variable[j]; ++e) ypow[j][e] = ypow[j][e - 1] * y[j];
    }
    std::fill(coef.begin(), coef.end(), I(0));
    for (std::size_t t = 0; t < ctx.terms.size(); ++t) {
      const Monomial& m = ctx.terms[t].exps;
      I prod = mult[t];
      for (std::size_t j = 0; j + 1 < k; ++j) {
        if (m[j] > 0) prod = prod * ypow[j][m[j]];
      }
      coef[m[k - 1]] = coef[m[k - 1]] + prod;
    }
    small_values<I>(coef, lo[k - 1], hi[k - 1], T,
                    [&](const I& t, const I& v) {
                      if (v != 0) ++part.bound_checks;
                      if (iabs(v) > T) return;
                      ScanHit hit;
                      if (shared) {
                        hit.denominators = {xs[0]};
                      } else {
                        hit.denominators = xs;
                      }
                      for (std::size_t j = 0; j + 1 < k; ++j) hit.numerators.push_back(as_integer(y[j]));
                      hit.numerators.push_back(as_integer(t));
                      RationalPoint z = hit.point();
                      hit.value = ctx.original.evaluate(z);
                      hit.on_variety = v == 0;
                      if (v != 0) {
                        // Rational-arithmetic re-check of the denominator bound.
                        if (shared) {
                          denominator_bound_check(ctx.cleared, z, xs[0]);
                        } else {
                          denominator_bound_check(ctx.cleared, z);
                        }
                        ++part.exact_route_checks;
                      }
                      part.hits.push_back(std::move(hit));
                    },
                    part.evaluated);
    std::size_t j = 0;
    while (j + 1 < k) {
      if (y[j] < hi[j]) {
        y[j] = y[j] + 1;
        break;
      }
      y[j] = lo[j];
      ++j;
    }
    if (j + 1 >= k) break;
  }
}

Integer magnitude_bound(const ScanContext& ctx, const Integer& x_max) {
  Integer b = x_max;
  for (const auto& iv : ctx.box) {
    Integer m = ceil(iv.magnitude() * x_max) + 1;
    if (m > b) b = m;
  }
  unsigned r = ctx.mode == ScanMode::SharedDenominator ? ctx.deg.absolute : ctx.deg.refined;
  Integer total = 0;
  for (const auto& t : ctx.terms) total += abs(t.coef);
  return total * ipow(b, r) * 8;
}

template <class I>
ScanPartial scan_range(const ScanContext& ctx, const Integer& first, const Integer& last,
                       const Integer& x_max, const I& cap) {
  ScanPartial part;
  if (ctx.mode == ScanMode::SharedDenominator) {
    for (Integer x = first; x <= last; ++x) scan_tuple<I>(ctx, {x}, cap, part);
    return part;
  }
  std::vector<Integer> xs(ctx.k, Integer(1));
  for (Integer x1 = first; x1 <= last; ++x1) {
    xs[0] = x1;
    for (std::size_t j = 1; j < ctx.k; ++j) xs[j] = 1;
    while (true) {
      scan_tuple<I>(ctx, xs, cap, part);
      std::size_t j = 1;
      while (j < ctx.k) {
        if (xs[j] < x_max) {
          ++xs[j];
          break;
        }
        xs[j] = 1;
        ++j;
      }
      if (j >= ctx.k) break;
    }
  }
  return part;
}

}  // namespace

ScanReport variety_approx_scan(const MultiPolynomial& p, const Box& box, const Integer& x_max,
                               const Rational& mu, const RationalPointSet& points,
                               const ScanOptions& options) {
  const std::size_t k = p.variables();
  check_box(box, k);
  if (x_max < 1) throw InvalidArgument("X_max must be at least 1");
  if (sgn(mu) < 0) throw InvalidArgument("mu must be nonnegative");
  if (sgn(options.radius) < 0) throw InvalidArgument("radius must be nonnegative");

  ScanContext ctx{k, degrees(p), {}, p, p.integer_cleared(), box, 0, mu, options.mode};
  ctx.terms = integer_terms(ctx.cleared);
  Rational c = derivative_bound(ctx.cleared, box);
  ctx.kc = Rational(static_cast<long>(k)) * c;

  double work = 1;
  if (options.mode == ScanMode::SharedDenominator) {
    work = x_max.get_d();
    for (std::size_t j = 0; j + 1 < k; ++j) work *= box[j].width().get_d() * x_max.get_d() + 1;
  } else {
    work = std::pow(x_max.get_d(), static_cast<double>(k));
    for (std::size_t j = 0; j + 1 < k; ++j) work *= box[j].width().get_d() * x_max.get_d() + 1;
  }
  if (work > options.cost_guard) {
    throw CostGuardExceeded("variety scan enumeration exceeds the cost guard");
  }

  ScanReport report;
  report.mode = options.mode;
  report.x_max = x_max;
  report.mu = mu;
  report.k = k;
  report.degree = ctx.deg.absolute;
  report.refined_degree = ctx.deg.refined;
  report.derivative_bound = c;
  unsigned r = options.mode == ScanMode::SharedDenominator ? ctx.deg.absolute : ctx.deg.refined;
  report.exclusion_exponent = r - 1;

  Rational e = mu + 1 - Rational(static_cast<long>(r));
  if (sgn(e) > 0) {
    Rational target = 2 * ctx.kc;
    const unsigned long ea = e.get_num().get_ui();
    const unsigned long eb = e.get_den().get_ui();
    const Integer rhs = ipow(target.get_num(), eb);
    const Integer den = ipow(target.get_den(), eb);
    auto reaches = [&](const Integer& x) { return ipow(x, ea) * den >= rhs; };
    double guess = std::ceil(std::exp(std::log(std::max(target.get_d(), 1e-300)) / e.get_d()));
    Integer x = guess < 1 ? Integer(1) : Integer(guess);
    while (x > 1 && reaches(x - 1)) --x;
    while (!reaches(x)) ++x;
    report.effective_from = x;
  }

  Integer bound = magnitude_bound(ctx, x_max);
  unsigned threads = std::max(1u, options.threads);
  Integer span = x_max;
  std::vector<ScanPartial> parts(threads);
  auto run = [&](std::size_t t) {
    Integer first = span * t / threads + 1;
    Integer last = span * (t + 1) / threads;
    if (first > last) return;
    if (bit_length(bound) < 120) {
      parts[t] = scan_range<i128>(ctx, first, last, x_max, to_i128(bound));
    } else {
      parts[t] = scan_range<Integer>(ctx, first, last, x_max, bound);
    }
  };
  if (threads == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(run, t);
    for (auto& th : pool) th.join();
  }

  std::map<RationalPoint, std::size_t> index;
  for (std::size_t i = 0; i < points.points.size(); ++i) index[points.points[i]] = i;
  for (auto& part : parts) {
    report.evaluated += part.evaluated;
    report.bound_checks += part.bound_checks;
    report.exact_route_checks += part.exact_route_checks;
    for (auto& hit : part.hits) {
      RationalPoint z = hit.point();
      auto it = index.find(z);
      if (it != index.end()) {
        hit.in_point_set = true;
        hit.nearest = it->second;
        hit.distance = Rational(0);
      } else {
        for (std::size_t i = 0; i < points.points.size(); ++i) {
          Rational d = 0;
          for (std::size_t j = 0; j < k; ++j) d = std::max(d, Rational(abs(z[j] - points.points[i][j])));
          if (!hit.distance || d < *hit.distance) {
            hit.distance = d;
            hit.nearest = i;
          }
        }
      }
      if (hit.on_variety) {
        hit.cls = HitClass::NearRationalPoint;
        if (!hit.in_point_set) ++report.points_outside_set;
      } else if (hit.distance && *hit.distance <= options.radius) {
        hit.cls = HitClass::NearRationalPoint;
      } else {
        hit.cls = HitClass::Outlier;
        hit.exclusion_radius = abs(hit.value) / (2 * Rational(static_cast<long>(k)) * derivative_bound(p, box));
      }
      if (hit.cls == HitClass::Outlier) {
        ++report.outliers;
        if (report.effective_from && hit.scale() >= *report.effective_from) ++report.outliers_effective;
      } else {
        ++report.near_points;
      }
      report.hits.push_back(std::move(hit));
    }
  }
  return report;
}

}  // namespace dioph
