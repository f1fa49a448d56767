#include "dioph/constructors.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "dioph/continued_fraction.hpp"
#include "dioph/error.hpp"
#include "dioph/serialization.hpp"

namespace dioph {

const char* to_string(PlanKind kind) {
  switch (kind) {
    case PlanKind::Lambda1CF:
      return "lambda1_cf";
    case PlanKind::Lambda1Series:
      return "lambda1_series";
    case PlanKind::VectorLamblemm:
      return "vector";
    case PlanKind::Veronese:
      return "veronese";
  }
  return "unknown";
}

PlanKind parse_plan_kind(const std::string& name) {
  if (name == "lambda1_cf") return PlanKind::Lambda1CF;
  if (name == "lambda1_series") return PlanKind::Lambda1Series;
  if (name == "vector") return PlanKind::VectorLamblemm;
  if (name == "veronese") return PlanKind::Veronese;
  throw InvalidPlan("unknown plan kind: " + name);
}

void validate_plan(const ConstructionPlan& plan) {
  if (plan.depth < 1) throw InvalidPlan("depth must be at least 1");
  if (plan.lambdas.empty()) throw InvalidPlan("plan needs at least one lambda");
  switch (plan.kind) {
    case PlanKind::Lambda1CF:
    case PlanKind::Lambda1Series:
      if (plan.lambdas.size() != 1) throw InvalidPlan("single-number plans take one lambda");
      if (plan.lambdas[0] < 1) throw InvalidPlan("lambda must be at least 1");
      break;
    case PlanKind::Veronese:
      if (plan.lambdas.size() != 1) throw InvalidPlan("the Veronese plan takes one lambda");
      if (plan.k < 1) throw InvalidPlan("Veronese dimension must be at least 1");
      if (plan.lambdas[0] < 2) throw InvalidPlan("the Veronese plan needs lambda >= 2");
      break;
    case PlanKind::VectorLamblemm: {
      for (const auto& l : plan.lambdas) {
        if (l < 1) throw InvalidPlan("every lambda must be at least 1");
      }
      Rational lmin = *std::min_element(plan.lambdas.begin(), plan.lambdas.end());
      if (plan.w < 1) throw InvalidPlan("w must be at least 1");
      if (plan.w > lmin) throw InvalidPlan("w must not exceed the smallest lambda");
      break;
    }
  }
}

namespace {

// Denominator recurrence s_{l} = a_l s_{l-1} + s_{l-2} over a growing quotient list.
struct Stream {
  std::vector<Integer> quotients;
  Integer s_prev = 0;  // s_{l-1}
  Integer s = 1;       // s_l for the last appended quotient

  void append(Integer a) {
    if (!quotients.empty()) {
      Integer next = a * s + s_prev;
      s_prev = s;
      s = next;
    }
    quotients.push_back(std::move(a));
  }
  Integer next_with_one() const { return s + s_prev; }
};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

bool salt_bit(std::uint64_t salt, std::size_t jump, std::size_t coordinate) {
  if (salt == 0) return false;
  return (splitmix64(salt ^ splitmix64(jump * 1315423911ull + coordinate)) & 1u) != 0;
}

double log_ratio_mid(const Integer& a, const Integer& b) {
  RationalInterval r = log_ratio(a, b);
  return to_double((r.lo + r.hi) / 2);
}

Rational realized_nu(const RealSource& source, const Integer& s, const Integer& s_after, unsigned budget) {
  unsigned need = static_cast<unsigned>(2 * bit_length(s_after) + bit_length(s) + 128);
  DistanceInterval d = nearest_distance_relative(s, source, 64, std::max(budget, need));
  if (sgn(d.hi) == 0 || s < 2) return 0;
  return exponent_lower_bound(d.hi, s);
}

std::string provenance_for(const ConstructionPlan& plan, std::size_t coordinate) {
  return plan_provenance_json(plan, coordinate);
}

RealSource stream_source(std::vector<Integer> prefix, QuotientGenerator tail) {
  return RealSource::continued_fraction(std::move(prefix), std::move(tail));
}

// Continues a_{n+1} = ceil(s_n^e) from the state of a simulated stream.
QuotientGenerator power_rule_continuation(const Stream& sim, const Rational& e) {
  auto stream = std::make_shared<Stream>(sim);
  return [stream, e]() -> std::optional<Integer> {
    Integer a = ceil_pow(stream->s, e);
    stream->append(a);
    return a;
  };
}

Construction build_power_rule(const ConstructionPlan& plan, std::vector<Integer> start, const Rational& e,
                              double target_ratio, double target_nu, unsigned budget) {
  Construction out;
  out.plan = plan;
  out.designated.resize(1);
  // Simulate enough of the stream to fill the trace.
  Stream sim;
  std::vector<std::pair<std::size_t, Integer>> jumps;  // (n, s_n) with s_n >= 2
  std::size_t n_rows_needed = plan.depth;
  while (true) {
    std::size_t idx = sim.quotients.size();
    sim.append(idx < start.size() ? start[idx] : ceil_pow(sim.s, e));
    std::size_t n = sim.quotients.size() - 1;
    if (sim.s >= 2 && n + 1 >= start.size() && jumps.size() < n_rows_needed) jumps.push_back({n, sim.s});
    if (jumps.size() >= n_rows_needed && sim.quotients.size() >= jumps.back().first + 3) break;
  }
  RealSource src = stream_source(sim.quotients, power_rule_continuation(sim, e));
  src.set_provenance(provenance_for(plan, 1));
  std::vector<Integer> dens = {1};
  {
    Integer sp = 0, s = 1;
    for (std::size_t l = 1; l < sim.quotients.size(); ++l) {
      Integer nx = sim.quotients[l] * s + sp;
      sp = s;
      s = nx;
      dens.push_back(s);
    }
  }
  for (std::size_t r = 0; r < n_rows_needed; ++r) {
    std::size_t n = jumps[r].first;
    JumpRecord row;
    row.jump = r + 1;
    row.coordinate = 1;
    row.position = n + 1;
    row.h = sim.quotients[n + 1];
    row.s = dens[n];
    row.target_ratio = target_ratio;
    row.realized_ratio = log_ratio_mid(dens[n + 1], dens[n]);
    row.target_nu = target_nu;
    row.realized_nu = realized_nu(src, dens[n], dens[n + 2], budget);
    out.designated[0].push_back(n + 1);
    out.trace.rows.push_back(row);
  }
  out.sources.push_back(src);
  return out;
}

}  // namespace

namespace {

Construction build_series(const ConstructionPlan& plan, unsigned budget) {
  Construction out;
  out.plan = plan;
  out.designated.resize(1);
  Rational base = plan.lambdas[0] + 1;
  auto n = std::make_shared<unsigned long>(0);
  ExponentGenerator gen = [base, n]() -> std::optional<std::uint64_t> {
    ++*n;
    Integer a = floor_pow(base, *n);
    if (bit_length(a) > 62) return std::nullopt;
    return a.get_ui();
  };
  std::vector<std::uint64_t> prefix;
  for (std::size_t i = 0; i < plan.depth + 1; ++i) {
    Integer a = floor_pow(base, i + 1);
    if (bit_length(a) > 62) throw InvalidPlan("series exponents exceed 62 bits at this depth");
    prefix.push_back(a.get_ui());
  }
  *n = static_cast<unsigned long>(prefix.size());
  RealSource src = RealSource::binary_series(prefix, gen);
  src.set_provenance(provenance_for(plan, 1));
  for (std::size_t i = 0; i < plan.depth; ++i) {
    JumpRecord row;
    row.jump = i + 1;
    row.coordinate = 1;
    row.position = i + 1;
    row.h = prefix[i];
    row.s = Integer(1) << static_cast<mp_bitcnt_t>(prefix[i]);
    row.target_ratio = to_double(base);
    row.realized_ratio = static_cast<double>(prefix[i + 1]) / static_cast<double>(prefix[i]);
    row.target_nu = to_double(plan.lambdas[0]);
    unsigned need = static_cast<unsigned>(2 * prefix[i + 1] + 128);
    DistanceInterval d = nearest_distance_relative(row.s, src, 64, std::max(budget, need));
    row.realized_nu = exponent_lower_bound(d.hi, row.s);
    out.designated[0].push_back(i + 1);
    out.trace.rows.push_back(row);
  }
  out.sources.push_back(src);
  return out;
}

QuotientGenerator ones_tail() {
  return []() -> std::optional<Integer> { return Integer(1); };
}

Construction build_vector(const ConstructionPlan& plan, unsigned budget) {
  const std::size_t k = plan.lambdas.size();
  const auto& lambda = plan.lambdas;
  const Rational& w = plan.w;
  std::size_t lead = static_cast<std::size_t>(std::min_element(lambda.begin(), lambda.end()) - lambda.begin());

  std::vector<Stream> streams(k);
  for (auto& st : streams) {
    st.append(0);
    st.append(1);
  }
  Construction out;
  out.plan = plan;
  out.designated.resize(k);
  std::vector<std::vector<Integer>> s_at(k);  // s_{j,i}
  Integer post_lead = 1;

  for (std::size_t i = 1; i <= plan.depth; ++i) {
    Stream& ls = streams[lead];
    auto admissible = [&](const Integer& S) {
      if (S < 2) return false;
      for (std::size_t j = 0; j < k; ++j) {
        if (j == lead) continue;
        Integer m = 2 * std::max(streams[j].s, post_lead);
        if (compare_powers(S, w, m, lambda[j]) <= 0) return false;
      }
      return true;
    };
    while (!admissible(ls.s)) ls.append(1);
    if (salt_bit(plan.salt, i, lead)) ls.append(1);
    Integer S = ls.s;
    s_at[lead].push_back(S);
    out.designated[lead].push_back(ls.quotients.size());
    ls.append(ceil_pow(S, lambda[lead] - 1));
    post_lead = ls.s;

    for (std::size_t j = 0; j < k; ++j) {
      if (j == lead) continue;
      Stream& st = streams[j];
      while (compare_powers(st.s, lambda[j], S, w) < 0 && st.next_with_one() < S) st.append(1);
      if (salt_bit(plan.salt, i, j) && st.next_with_one() < S) st.append(1);
      if (st.s >= S) {
        throw InfeasibleSchedule("jump " + std::to_string(i) + ": coordinate " + std::to_string(j + 1) +
                                 " cannot stay below the leading denominator");
      }
      if (compare_powers(2 * st.s, lambda[j], S, w) < 0) {
        throw InfeasibleSchedule("jump " + std::to_string(i) + ": coordinate " + std::to_string(j + 1) +
                                 " cannot reach its target scale below the leading denominator");
      }
      s_at[j].push_back(st.s);
      out.designated[j].push_back(st.quotients.size());
      st.append(ceil_pow(st.s, lambda[j] - 1));
    }
  }
  for (auto& st : streams) {
    st.append(1);
    st.append(1);
  }

  // Ordering invariants: the lead is largest at each jump, coordinates with
  // larger lambda sit lower, and the next jump starts beyond the lead's
  // post-jump scale.
  for (std::size_t i = 0; i < plan.depth; ++i) {
    for (std::size_t a = 0; a < k; ++a) {
      if (a != lead && s_at[a][i] >= s_at[lead][i]) throw InfeasibleSchedule("ordering violated at the lead");
      for (std::size_t b = 0; b < k; ++b) {
        if (a != lead && b != lead && lambda[a] < lambda[b] && s_at[a][i] <= s_at[b][i]) {
          throw InfeasibleSchedule("ordering violated between coordinates " + std::to_string(a + 1) +
                                   " and " + std::to_string(b + 1) + " at jump " + std::to_string(i + 1));
        }
      }
      if (i + 1 < plan.depth &&
          compare_powers(s_at[a][i + 1], Rational(1), s_at[lead][i], lambda[lead]) <= 0) {
        throw InfeasibleSchedule("next jump of coordinate " + std::to_string(a + 1) +
                                 " does not clear the lead's scale");
      }
    }
  }

  for (std::size_t j = 0; j < k; ++j) {
    RealSource src = stream_source(streams[j].quotients, ones_tail());
    src.set_provenance(provenance_for(plan, j + 1));
    out.sources.push_back(src);
  }
  for (std::size_t i = 0; i < plan.depth; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      JumpRecord row;
      row.jump = i + 1;
      row.coordinate = j + 1;
      row.position = out.designated[j][i];
      row.h = streams[j].quotients[row.position];
      row.s = s_at[j][i];
      row.target_ratio = j == lead ? 1.0 : to_double(w / lambda[j]);
      row.realized_ratio = s_at[lead][i] >= 2 ? log_ratio_mid(row.s, s_at[lead][i]) : 0.0;
      row.target_nu = to_double(lambda[j]);
      Integer after = row.h * row.s * 4;
      row.realized_nu = row.s >= 2 ? realized_nu(out.sources[j], row.s, after, budget) : Rational(0);
      out.trace.rows.push_back(row);
    }
  }
  return out;
}

}  // namespace

Construction construct(const ConstructionPlan& plan, unsigned budget) {
  validate_plan(plan);
  switch (plan.kind) {
    case PlanKind::Lambda1CF: {
      const Rational& l = plan.lambdas[0];
      return build_power_rule(plan, {Integer(0)}, l - 1, to_double(l), to_double(l), budget);
    }
    case PlanKind::Lambda1Series:
      return build_series(plan, budget);
    case PlanKind::Veronese: {
      const Rational& l = plan.lambdas[0];
      Rational k(static_cast<long>(plan.k));
      Rational e = k * l + k - 2;
      double target = to_double(k * l + k - 1);
      return build_power_rule(plan, {Integer(0), Integer(1), Integer(2)}, e, target, target, budget);
    }
    case PlanKind::VectorLamblemm:
      return build_vector(plan, budget);
  }
  throw InvalidPlan("unknown plan kind");
}

}  // namespace dioph
