#include "dioph/continued_fraction.hpp"

#include <algorithm>
#include <array>
#include <set>

#include "dioph/error.hpp"

namespace dioph {

ConvergentList convergents_from_quotients(const std::vector<Integer>& quotients) {
  ConvergentList out;
  Integer r_prev = 1, s_prev = 0, r = 0, s = 1;
  for (std::size_t l = 0; l < quotients.size(); ++l) {
    const Integer& a = quotients[l];
    Integer r_next = l == 0 ? a : a * r + r_prev;
    Integer s_next = l == 0 ? Integer(1) : a * s + s_prev;
    if (l > 0) {
      r_prev = r;
      s_prev = s;
    }
    r = r_next;
    s = s_next;
    out.items.push_back({l, a, r, s});
  }
  return out;
}

ConvergentList convergents(const RealSource& source, std::size_t count, unsigned budget) {
  QuotientPrefix q = source.partial_quotients(count, budget);
  ConvergentList out = convergents_from_quotients(q.quotients);
  out.terminated = q.terminated;
  out.truncated = q.exhausted || (q.terminated && q.quotients.size() < count);
  return out;
}

ConvergentList convergents_beyond(const RealSource& source, const Integer& bound, unsigned budget) {
  QuotientPrefix q = source.quotients_beyond(bound, budget);
  ConvergentList out = convergents_from_quotients(q.quotients);
  out.terminated = q.terminated;
  out.truncated = q.exhausted;
  return out;
}

namespace {

bool width_within(const DistanceKernel::Value& v, const Integer& two_d, unsigned precision) {
  Integer w = v.hi - v.lo;
  w <<= precision;
  return w <= two_d;
}

bool relative_within(const DistanceKernel::Value& v, unsigned relative_bits) {
  if (v.lo == v.hi) return true;
  if (sgn(v.lo) == 0) return false;
  Integer w = v.hi - v.lo;
  w <<= relative_bits;
  return w <= v.lo;
}

template <class Accept>
DistanceInterval refine_distance(const Integer& x, const RealSource& source, unsigned start_bits,
                                 unsigned budget, unsigned target, Accept accept) {
  std::array<RealSource, 1> one{source};
  unsigned bits = start_bits;
  unsigned limit = std::max(budget, start_bits);
  DistanceInterval last{0, Rational(1, 2), target, true};
  while (true) {
    Integer d = DistanceKernel::common_denominator(one, bits);
    std::optional<DistanceKernel> k = DistanceKernel::make(source, d);
    if (!k) break;
    DistanceKernel::Value v;
    k->distance(x, v);
    last = k->to_interval(v);
    last.target_precision = target;
    if (k->exact() || accept(v, d * 2)) return last;
    if (bits >= limit) break;
    bits = std::min(limit, bits * 2);
  }
  last.indeterminate = true;
  return last;
}

}  // namespace

DistanceInterval nearest_distance(const Integer& x, const RealSource& source, unsigned precision,
                                  unsigned budget) {
  unsigned start = precision + static_cast<unsigned>(bit_length(x)) + 2;
  return refine_distance(x, source, start, budget, precision,
                         [precision](const DistanceKernel::Value& v, const Integer& two_d) {
                           return width_within(v, two_d, precision);
                         });
}

DistanceInterval nearest_distance_relative(const Integer& x, const RealSource& source,
                                           unsigned relative_bits, unsigned budget) {
  unsigned start = relative_bits + static_cast<unsigned>(bit_length(x)) + 8;
  return refine_distance(x, source, start, budget, relative_bits,
                         [relative_bits](const DistanceKernel::Value& v, const Integer&) {
                           return relative_within(v, relative_bits);
                         });
}

LegendreResult legendre_certify(const Integer& p_in, const Integer& q_in, const RealSource& source,
                                unsigned budget) {
  if (sgn(q_in) == 0) throw InvalidArgument("legendre_certify: q must be nonzero");
  LegendreResult out;
  out.p = p_in;
  out.q = q_in;
  if (sgn(out.q) < 0) {
    out.p = -out.p;
    out.q = -out.q;
  }
  Integer g;
  mpz_gcd(g.get_mpz_t(), out.p.get_mpz_t(), out.q.get_mpz_t());
  out.p /= g;
  out.q /= g;

  // Decide |q zeta - p| <= 1/(2q).
  Rational threshold(Integer(1), out.q * 2);
  unsigned bits = static_cast<unsigned>(2 * bit_length(out.q) + 16);
  unsigned limit = std::max(budget, bits);
  bool holds = false;
  while (true) {
    std::optional<Enclosure> e = source.try_enclosure(bits);
    if (e) {
      RationalInterval off = abs(RationalInterval{out.q * e->lo - out.p, out.q * e->hi - out.p});
      if (off.hi <= threshold) {
        holds = true;
        break;
      }
      if (off.lo > threshold) break;
    }
    if (bits >= limit || !e) {
      throw Indeterminate("legendre_certify: cannot decide |q zeta - p| <= 1/(2q) for q = " +
                          to_string(out.q));
    }
    bits = std::min(limit, bits * 2);
  }
  if (!holds) {
    out.outcome = LegendreOutcome::HypothesisFails;
    return out;
  }

  ConvergentList list = convergents_beyond(source, out.q, budget);
  for (const auto& c : list.items) {
    if (c.denominator == out.q && c.numerator == out.p) {
      out.outcome = LegendreOutcome::IsConvergent;
      out.index = c.index;
      return out;
    }
  }
  if (list.terminated && !list.items.empty()) {
    // The same rational also expands as [a_0; ..., a_n - 1, 1].
    long n = static_cast<long>(list.items.size()) - 1;
    auto R = [&](long l) -> Integer {
      if (l >= 0) return list.items[static_cast<std::size_t>(l)].numerator;
      return l == -1 ? 1 : 0;
    };
    auto S = [&](long l) -> Integer {
      if (l >= 0) return list.items[static_cast<std::size_t>(l)].denominator;
      return l == -1 ? 0 : 1;
    };
    const Integer& a = list.items.back().quotient;
    Integer r2 = R(n - 1), s2 = S(n - 1), r1 = R(n - 2), s1 = S(n - 2);
    Integer r = (a - 1) * r2 + r1;
    Integer s = (a - 1) * s2 + s1;
    if (s == out.q && r == out.p) {
      out.outcome = LegendreOutcome::IsConvergent;
      out.index = static_cast<std::size_t>(n);
      out.alternate_expansion = true;
      return out;
    }
  }
  if (list.truncated) {
    throw Indeterminate("legendre_certify: convergents not certified up to q = " + to_string(out.q));
  }
  out.outcome = LegendreOutcome::Violation;
  return out;
}

std::vector<Integer> best_approximation_records(const RealSource& source, const Integer& Q,
                                                unsigned budget) {
  std::vector<Integer> records;
  if (Q < 1) return records;
  std::array<RealSource, 1> one{source};
  unsigned bits = static_cast<unsigned>(2 * bit_length(Q) + 32);
  unsigned limit = std::max(budget, bits);
  while (true) {
    std::optional<DistanceKernel> k =
        DistanceKernel::make(source, DistanceKernel::common_denominator(one, bits));
    if (!k) throw Indeterminate("best_approximations: source cannot be enclosed");
    records.clear();
    DistanceKernel::Value best, v;
    bool ambiguous = false;
    for (Integer q = 1; q <= Q; ++q) {
      k->distance(q, v);
      if (records.empty()) {
        records.push_back(q);
        best = v;
      } else if (v.hi < best.lo) {
        records.push_back(q);
        best = v;
      } else if (v.lo < best.hi) {
        ambiguous = true;
        break;
      }
      if (sgn(best.hi) == 0) break;
    }
    if (!ambiguous) return records;
    if (bits >= limit) throw Indeterminate("best_approximations: tie not resolved within budget");
    bits = std::min(limit, bits * 2);
  }
}

BestApproximationList best_approximations(const RealSource& source, const Integer& Q,
                                          unsigned budget) {
  BestApproximationList out;
  if (Q < 1) return out;
  ConvergentList list = convergents_beyond(source, Q, budget);
  if (list.truncated) {
    throw Indeterminate("best_approximations: convergents not certified up to Q = " + to_string(Q));
  }
  std::vector<Integer> dens;
  for (const auto& c : list.items) {
    if (c.denominator > Q) break;
    if (dens.empty() || dens.back() != c.denominator) dens.push_back(c.denominator);
  }
  if (Q <= kExhaustiveBestApproximationLimit) {
    std::vector<Integer> records = best_approximation_records(source, Q, budget);
    if (records != dens) {
      throw SearchMismatch("best_approximations: exhaustive records disagree with convergents");
    }
    out.cross_checked = true;
  }
  for (const auto& q : dens) out.items.push_back({q, nearest_distance(q, source, 64, budget)});
  return out;
}

MinkowskiResult minkowski_2d_check(const RealSource& source, const Rational& Q, unsigned budget) {
  if (sgn(Q) <= 0) throw InvalidArgument("minkowski_2d_check: Q must be positive");
  MinkowskiResult out;
  Integer qmax = floor(Q);
  // |p| <= 1/(2Q) at q = 0
  if (Q * 2 <= 1) {
    out.solutions.push_back({Integer(1), Integer(0)});
    out.solutions.push_back({Integer(-1), Integer(0)});
  }
  std::array<RealSource, 1> one{source};
  unsigned bits = static_cast<unsigned>(2 * bit_length(qmax) + 32);
  unsigned limit = std::max(budget, bits);
  const Integer& qn = Q.get_num();
  const Integer& qd = Q.get_den();
  std::vector<std::pair<Integer, Integer>> found;
  while (true) {
    Integer d = DistanceKernel::common_denominator(one, bits);
    std::optional<DistanceKernel> k = DistanceKernel::make(source, d);
    if (!k) throw Indeterminate("minkowski_2d_check: source cannot be enclosed");
    Integer rhs = qd * d;  // compare 2 Q |offset| <= 1 as |num| * 2 qn <= qd * D
    found.clear();
    bool ambiguous = false;
    Integer lo, hi, t;
    for (Integer q = -qmax; q <= qmax && !ambiguous; ++q) {
      if (sgn(q) == 0) continue;
      std::set<Integer> candidates;
      for (const Integer* bound : {&k->lower(), &k->upper()}) {
        Integer base;
        Integer prod = q * *bound;
        mpz_fdiv_q(base.get_mpz_t(), prod.get_mpz_t(), d.get_mpz_t());
        candidates.insert(base);
        candidates.insert(base + 1);
      }
      for (const auto& p : candidates) {
        k->offset(q, p, lo, hi);
        Integer alo = abs(lo), ahi = abs(hi);
        Integer mag = std::max(alo, ahi);
        bool straddles = sgn(lo) <= 0 && sgn(hi) >= 0;
        Integer mig = straddles ? Integer(0) : std::min(alo, ahi);
        if (mag * qn * 2 <= rhs) {
          found.push_back({p, q});
        } else if (mig * qn * 2 > rhs) {
          continue;
        } else {
          ambiguous = true;
          break;
        }
      }
    }
    if (!ambiguous) break;
    if (bits >= limit) throw Indeterminate("minkowski_2d_check: boundary case not resolved");
    bits = std::min(limit, bits * 2);
  }
  out.solutions.insert(out.solutions.end(), found.begin(), found.end());
  for (std::size_t i = 1; i < out.solutions.size() && out.pass; ++i) {
    const auto& a = out.solutions.front();
    const auto& b = out.solutions[i];
    if (a.first * b.second - a.second * b.first != 0) {
      out.pass = false;
      out.counterexample = {a, b};
    }
  }
  return out;
}

}  // namespace dioph
