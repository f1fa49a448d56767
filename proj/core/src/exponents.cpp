#include "dioph/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <array>
#include <map>
#include <thread>

#include "dioph/continued_fraction.hpp"
#include "dioph/error.hpp"

namespace dioph {

const char* to_string(ExponentName name) {
  switch (name) {
    case ExponentName::Lambda1:
      return "lambda1";
    case ExponentName::LambdaK:
      return "lambda_k";
    case ExponentName::OmegaK:
      return "omega_k";
    case ExponentName::ChiK:
      return "chi_k";
    case ExponentName::UniformChiK:
      return "uniform_chi_k";
  }
  return "unknown";
}

const char* to_string(WitnessMode mode) {
  return mode == WitnessMode::SharedDenominator ? "shared" : "per_coordinate";
}

const char* to_string(SearchMethod method) {
  switch (method) {
    case SearchMethod::BruteForce:
      return "brute_force";
    case SearchMethod::ConvergentCandidates:
      return "convergent_candidates";
    case SearchMethod::Both:
      return "both";
  }
  return "unknown";
}

double AchievedExponent::approx() const {
  return unbounded ? HUGE_VAL : lower.get_d();
}

bool AchievedExponent::operator<(const AchievedExponent& other) const {
  if (unbounded) return false;
  if (other.unbounded) return true;
  return lower < other.lower;
}

Rational WitnessRecord::max_error_upper() const {
  Rational m = 0;
  for (const auto& e : errors) m = std::max(m, e.hi);
  return m;
}

Rational WitnessRecord::max_error_lower() const {
  Rational m = 0;
  for (const auto& e : errors) m = std::max(m, e.lo);
  return m;
}

WindowSchedule geometric_schedule(const Integer& start, const Integer& x_max, const Rational& ratio) {
  if (ratio <= 1) throw InvalidArgument("schedule ratio must exceed 1");
  if (x_max < 2) throw InvalidArgument("schedule needs X_max >= 2");
  WindowSchedule out;
  Integer w = std::max(start, Integer(2));
  while (w < x_max) {
    out.windows.push_back(w);
    Integer next = ceil(ratio * w);
    w = next > w ? next : Integer(w + 1);
  }
  out.windows.push_back(x_max);
  return out;
}

WindowSchedule merge_schedules(const WindowSchedule& a, const WindowSchedule& b) {
  WindowSchedule out;
  std::merge(a.windows.begin(), a.windows.end(), b.windows.begin(), b.windows.end(),
             std::back_inserter(out.windows));
  out.windows.erase(std::unique(out.windows.begin(), out.windows.end()), out.windows.end());
  return out;
}

namespace {

std::vector<Integer> certified_denominators(const RealSource& source, const Integer& x_max,
                                            unsigned budget) {
  ConvergentList list = convergents_beyond(source, x_max, budget);
  std::vector<Integer> out;
  for (const auto& c : list.items) {
    if (c.denominator > x_max) break;
    if (out.empty() || out.back() != c.denominator) out.push_back(c.denominator);
  }
  return out;
}

WindowSchedule from_values(std::vector<Integer> values, const Integer& x_max) {
  WindowSchedule out;
  for (auto& v : values) {
    if (v >= 2 && v <= x_max) out.windows.push_back(std::move(v));
  }
  std::sort(out.windows.begin(), out.windows.end());
  out.windows.erase(std::unique(out.windows.begin(), out.windows.end()), out.windows.end());
  return out;
}

}  // namespace

WindowSchedule default_schedule(std::span<const RealSource> sources, const Integer& x_max,
                                unsigned budget, const RealSource* power_base, unsigned k) {
  WindowSchedule out = geometric_schedule(8, x_max, 2);
  std::vector<Integer> extra;
  for (const auto& s : sources) {
    for (auto& d : certified_denominators(s, x_max, budget)) extra.push_back(d);
  }
  if (power_base != nullptr) {
    for (const auto& d : certified_denominators(*power_base, x_max, budget)) {
      Integer p = d;
      for (unsigned j = 1; j <= k && p <= x_max; ++j) {
        extra.push_back(p);
        p *= d;
      }
    }
  }
  return merge_schedules(out, from_values(std::move(extra), x_max));
}

WindowSchedule dense_schedule(std::span<const RealSource> sources, const Integer& x_max,
                              unsigned budget) {
  WindowSchedule out = geometric_schedule(2, x_max, Rational(5, 4));
  std::vector<Integer> extra;
  for (const auto& s : sources) {
    for (const auto& d : certified_denominators(s, x_max, budget)) {
      extra.push_back(d - 1);
      extra.push_back(d);
    }
  }
  return merge_schedules(out, from_values(std::move(extra), x_max));
}

std::vector<RealSource> veronese_sources(const RealSource& base, unsigned k) {
  if (k < 1) throw InvalidArgument("Veronese dimension must be at least 1");
  std::vector<RealSource> out;
  for (unsigned j = 1; j <= k; ++j) out.push_back(RealSource::power(base, j));
  return out;
}

namespace {

using Value = DistanceKernel::Value;

enum class Cmp { Better, NotBetter, Ambiguous };

Cmp compare(const Value& cand, const Value& best) {
  if (cand.hi < best.lo) return Cmp::Better;
  if (cand.lo >= best.hi) return Cmp::NotBetter;
  return Cmp::Ambiguous;
}

// Positions 0..dense-1 stand for x = pos + 1; later positions index `sparse`.
struct Positions {
  unsigned long dense = 0;
  const std::vector<Integer>* sparse = nullptr;

  std::size_t size() const { return dense + (sparse ? sparse->size() : 0); }
  Integer x_at(std::size_t pos) const {
    if (pos < dense) return Integer(static_cast<unsigned long>(pos + 1));
    return (*sparse)[pos - dense];
  }
  // Last position with x <= w, or -1.
  long last_within(const Integer& w) const {
    long n = 0;
    if (w >= 1) n = w >= dense ? static_cast<long>(dense) : static_cast<long>(w.get_ui());
    if (sparse && w > dense) {
      n += static_cast<long>(std::upper_bound(sparse->begin(), sparse->end(), w) - sparse->begin());
    }
    return n - 1;
  }
};

// max_j ||x zeta_j|| over a set of kernels sharing one denominator.
struct MaxEval {
  std::vector<DistanceKernel> kernels;
  Positions positions;
  Value tmp;

  void operator()(std::size_t pos, Value& out) {
    for (std::size_t j = 0; j < kernels.size(); ++j) {
      Value& dst = j == 0 ? out : tmp;
      if (pos < positions.dense) {
        kernels[j].distance(static_cast<unsigned long>(pos + 1), dst);
      } else {
        kernels[j].distance((*positions.sparse)[pos - positions.dense], dst);
      }
      if (j > 0) {
        if (tmp.lo > out.lo) out.lo = tmp.lo;
        if (tmp.hi > out.hi) out.hi = tmp.hi;
      }
    }
  }
};

struct Best {
  std::size_t pos = 0;
  Value value;
};

struct ChunkResult {
  std::vector<std::pair<std::size_t, Best>> windows;  // (window index, prefix best in chunk)
  std::optional<Best> best;
  std::optional<std::size_t> ambiguous_at;
};

struct ScanOutcome {
  std::vector<std::optional<std::size_t>> best;  // per window
  std::optional<std::size_t> unresolved_from;     // first position left undecided
};

ChunkResult scan_chunk(MaxEval eval, std::size_t begin, std::size_t end,
                       const std::vector<long>& window_pos) {
  ChunkResult out;
  auto w = std::lower_bound(window_pos.begin(), window_pos.end(), static_cast<long>(begin));
  Value v;
  for (std::size_t pos = begin; pos < end; ++pos) {
    eval(pos, v);
    if (!out.best) {
      out.best = Best{pos, v};
    } else {
      Cmp c = compare(v, out.best->value);
      if (c == Cmp::Ambiguous) {
        out.ambiguous_at = pos;
        return out;
      }
      if (c == Cmp::Better) out.best = Best{pos, v};
    }
    while (w != window_pos.end() && *w == static_cast<long>(pos)) {
      out.windows.push_back({static_cast<std::size_t>(w - window_pos.begin()), *out.best});
      ++w;
    }
  }
  return out;
}

ScanOutcome prefix_scan(const MaxEval& proto, std::size_t n, const std::vector<long>& window_pos,
                        unsigned threads) {
  ScanOutcome out;
  out.best.assign(window_pos.size(), std::nullopt);
  if (n == 0) return out;
  std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(threads, n / 20000));
  std::vector<ChunkResult> results(chunks);
  auto bounds = [&](std::size_t c) { return n * c / chunks; };
  if (chunks == 1) {
    results[0] = scan_chunk(proto, 0, n, window_pos);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t c = 0; c < chunks; ++c) {
      pool.emplace_back([&, c] { results[c] = scan_chunk(proto, bounds(c), bounds(c + 1), window_pos); });
    }
    for (auto& t : pool) t.join();
  }
  std::optional<Best> global;
  auto combine = [&](const Best& local, std::optional<Best>& acc) -> bool {
    if (!acc) {
      acc = local;
      return true;
    }
    Cmp c = compare(local.value, acc->value);
    if (c == Cmp::Ambiguous) return false;
    if (c == Cmp::Better) acc = local;
    return true;
  };
  for (auto& r : results) {
    for (auto& [widx, local] : r.windows) {
      std::optional<Best> acc = global;
      if (!combine(local, acc)) {
        out.unresolved_from = local.pos;
        return out;
      }
      out.best[widx] = acc->pos;
    }
    if (r.ambiguous_at) {
      out.unresolved_from = *r.ambiguous_at;
      return out;
    }
    if (r.best && !combine(*r.best, global)) {
      out.unresolved_from = r.best->pos;
      return out;
    }
  }
  return out;
}

// Prefix argmin with precision doubling until every comparison is decided
// or the budget is spent.
ScanOutcome run_scan(std::span<const RealSource> sources, const Positions& positions,
                     const std::vector<long>& window_pos, const Integer& x_max,
                     const EstimateOptions& options) {
  unsigned bits = static_cast<unsigned>(2 * bit_length(x_max) + 32);
  unsigned limit = std::max(options.budget, bits);
  while (true) {
    Integer d = DistanceKernel::common_denominator(sources, bits);
    MaxEval eval;
    eval.positions = positions;
    bool ok = true;
    for (const auto& s : sources) {
      std::optional<DistanceKernel> k = DistanceKernel::make(s, d);
      if (!k) {
        ok = false;
        break;
      }
      eval.kernels.push_back(std::move(*k));
    }
    if (!ok) {
      if (bits >= limit) {
        ScanOutcome out;
        out.best.assign(window_pos.size(), std::nullopt);
        out.unresolved_from = 0;
        return out;
      }
      bits = std::min(limit, bits * 2);
      continue;
    }
    ScanOutcome out = prefix_scan(eval, positions.size(), window_pos, std::max(1u, options.threads));
    if (!out.unresolved_from || bits >= limit) return out;
    bits = std::min(limit, bits * 2);
  }
}

std::vector<long> window_positions(const WindowSchedule& schedule, const Positions& positions) {
  std::vector<long> out;
  for (const auto& w : schedule.windows) out.push_back(positions.last_within(w));
  return out;
}

struct CandidateSet {
  std::vector<Integer> values;
  Integer certified_until;  // convergents are complete up to this bound
};

CandidateSet convergent_multiples(std::span<const RealSource> sources, const Integer& above,
                                  const Integer& x_max, unsigned multiples, unsigned budget) {
  CandidateSet out;
  out.certified_until = x_max;
  for (const auto& s : sources) {
    ConvergentList list = convergents_beyond(s, x_max, budget);
    if (list.truncated) {
      Integer last = list.items.empty() ? Integer(0) : list.items.back().denominator;
      out.certified_until = std::min(out.certified_until, last);
    }
    for (const auto& c : list.items) {
      if (c.denominator > x_max) break;
      for (unsigned m = 1; m <= multiples; ++m) {
        Integer v = c.denominator * m;
        if (v > x_max) break;
        if (v > above) out.values.push_back(v);
      }
    }
  }
  std::sort(out.values.begin(), out.values.end());
  out.values.erase(std::unique(out.values.begin(), out.values.end()), out.values.end());
  return out;
}

void check_sources(std::span<const RealSource> sources) {
  if (sources.empty()) throw InvalidArgument("at least one source is required");
}

void check_schedule(const WindowSchedule& schedule) {
  if (schedule.windows.empty()) throw InvalidArgument("empty window schedule");
  for (std::size_t i = 0; i < schedule.windows.size(); ++i) {
    if (schedule.windows[i] < 2) throw InvalidArgument("windows must be at least 2");
    if (i > 0 && schedule.windows[i] <= schedule.windows[i - 1]) {
      throw InvalidArgument("windows must be strictly increasing");
    }
  }
}

// Reported error and numerator of x against one source, memoized per scan.
class ErrorCache {
 public:
  ErrorCache(std::span<const RealSource> sources, const EstimateOptions& options)
      : sources_(sources), options_(options) {}

  const std::pair<DistanceInterval, Integer>& get(std::size_t j, const Integer& x) {
    auto key = std::make_pair(j, x);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    DistanceInterval err = nearest_distance_relative(x, sources_[j], options_.relative_bits, options_.budget);
    unsigned bits = static_cast<unsigned>(bit_length(x)) + options_.relative_bits + 8;
    Integer y = 0;
    if (auto v = sources_[j].exact_value()) {
      y = floor(*v * x + Rational(1, 2));
    } else if (auto e = sources_[j].try_enclosure(bits)) {
      y = floor(e->lo * x + Rational(1, 2));
    }
    return cache_.emplace(key, std::make_pair(err, y)).first->second;
  }

 private:
  std::span<const RealSource> sources_;
  const EstimateOptions& options_;
  std::map<std::pair<std::size_t, Integer>, std::pair<DistanceInterval, Integer>> cache_;
};

AchievedExponent achieved_from(const std::vector<DistanceInterval>& errors, const Integer& window) {
  AchievedExponent a;
  Rational m = 0;
  for (const auto& e : errors) m = std::max(m, e.hi);
  if (sgn(m) == 0) {
    a.unbounded = true;
    return a;
  }
  a.lower = exponent_lower_bound(m, window);
  return a;
}

void summarize(ExponentEstimate& est) {
  bool any = false;
  for (const auto& w : est.windows) {
    if (!w.witness) continue;
    if (!any || est.empirical < w.witness->achieved) est.empirical = w.witness->achieved;
    est.tail = w.witness->achieved;
    any = true;
  }
}

WitnessRecord shared_witness(const Integer& x, const Integer& window, ErrorCache& cache, std::size_t k) {
  WitnessRecord w;
  w.mode = WitnessMode::SharedDenominator;
  w.window = window;
  w.denominators = {x};
  for (std::size_t j = 0; j < k; ++j) {
    const auto& [err, y] = cache.get(j, x);
    w.numerators.push_back(y);
    w.errors.push_back(err);
  }
  w.achieved = achieved_from(w.errors, window);
  return w;
}

}  // namespace

ExponentEstimate estimate_omega_k(std::span<const RealSource> sources, const WindowSchedule& schedule,
                                  const EstimateOptions& options) {
  check_sources(sources);
  check_schedule(schedule);
  const Integer& x_max = schedule.windows.back();
  unsigned long dense = x_max.fits_ulong_p() ? std::min(x_max.get_ui(), options.exhaustive_limit)
                                             : options.exhaustive_limit;
  CandidateSet candidates;
  if (x_max > dense) {
    candidates = convergent_multiples(sources, Integer(dense), x_max, options.multiples, options.budget);
  }
  Positions positions{dense, &candidates.values};
  std::vector<long> window_pos = window_positions(schedule, positions);
  ScanOutcome scan = run_scan(sources, positions, window_pos, x_max, options);

  ExponentEstimate est;
  est.name = ExponentName::OmegaK;
  est.k = sources.size();
  ErrorCache cache(sources, options);
  for (std::size_t i = 0; i < schedule.windows.size(); ++i) {
    WindowResult wr;
    wr.window = schedule.windows[i];
    wr.route = schedule.windows[i] <= dense ? "exhaustive" : "candidates";
    if (!scan.best[i]) {
      wr.flag = "indeterminate comparison within precision budget";
    } else {
      wr.witness = shared_witness(positions.x_at(*scan.best[i]), wr.window, cache, sources.size());
    }
    est.windows.push_back(std::move(wr));
  }
  summarize(est);
  return est;
}

ExponentEstimate estimate_lambda_k(const RealSource& base, unsigned k, const WindowSchedule& schedule,
                                   const EstimateOptions& options) {
  std::vector<RealSource> sources = veronese_sources(base, k);
  ExponentEstimate est = estimate_omega_k(sources, schedule, options);
  est.name = k == 1 ? ExponentName::Lambda1 : ExponentName::LambdaK;
  return est;
}

namespace {

struct CoordinateArgmins {
  std::vector<std::optional<Integer>> best;  // per window
  std::vector<std::string> flags;
};

CoordinateArgmins brute_force_argmins(const RealSource& source, const WindowSchedule& schedule,
                                      std::size_t count, const EstimateOptions& options) {
  CoordinateArgmins out;
  out.best.assign(schedule.windows.size(), std::nullopt);
  out.flags.assign(schedule.windows.size(), "");
  if (count == 0) return out;
  const Integer& x_last = schedule.windows[count - 1];
  Positions positions{x_last.get_ui(), nullptr};
  WindowSchedule head;
  head.windows.assign(schedule.windows.begin(), schedule.windows.begin() + static_cast<long>(count));
  std::vector<long> window_pos = window_positions(head, positions);
  std::array<RealSource, 1> one{source};
  ScanOutcome scan = run_scan(one, positions, window_pos, x_last, options);
  for (std::size_t i = 0; i < count; ++i) {
    if (scan.best[i]) {
      out.best[i] = positions.x_at(*scan.best[i]);
    } else {
      out.flags[i] = "indeterminate comparison within precision budget";
    }
  }
  return out;
}

CoordinateArgmins candidate_argmins(const RealSource& source, const WindowSchedule& schedule,
                                    const EstimateOptions& options) {
  CoordinateArgmins out;
  out.best.assign(schedule.windows.size(), std::nullopt);
  out.flags.assign(schedule.windows.size(), "");
  const Integer& x_max = schedule.windows.back();
  std::array<RealSource, 1> one{source};
  CandidateSet candidates = convergent_multiples(one, Integer(0), x_max, options.multiples, options.budget);
  Positions positions{0, &candidates.values};
  std::vector<long> window_pos = window_positions(schedule, positions);
  ScanOutcome scan = run_scan(one, positions, window_pos, x_max, options);
  for (std::size_t i = 0; i < schedule.windows.size(); ++i) {
    if (schedule.windows[i] > candidates.certified_until) {
      out.flags[i] = "convergents not certified up to window";
    } else if (scan.best[i]) {
      out.best[i] = positions.x_at(*scan.best[i]);
    } else {
      out.flags[i] = "indeterminate comparison within precision budget";
    }
  }
  return out;
}

bool brute_force_allowed(const Integer& x, std::size_t k, double guard) {
  return std::pow(x.get_d(), static_cast<double>(k)) <= guard;
}

}  // namespace

ExponentEstimate estimate_chi_k(std::span<const RealSource> sources, const WindowSchedule& schedule,
                                SearchMethod method, const EstimateOptions& options) {
  check_sources(sources);
  check_schedule(schedule);
  const std::size_t k = sources.size();
  const Integer& x_max = schedule.windows.back();
  std::size_t brute_count = 0;
  while (brute_count < schedule.windows.size() &&
         brute_force_allowed(schedule.windows[brute_count], k, options.brute_force_guard)) {
    ++brute_count;
  }
  if (method == SearchMethod::BruteForce && brute_count < schedule.windows.size()) {
    throw CostGuardExceeded("brute-force search over X_max^k = " + std::to_string(x_max.get_d()) +
                            "^" + std::to_string(k) + " exceeds the cost guard");
  }

  std::vector<CoordinateArgmins> per(k);
  for (std::size_t j = 0; j < k; ++j) {
    if (method == SearchMethod::BruteForce) {
      per[j] = brute_force_argmins(sources[j], schedule, schedule.windows.size(), options);
      continue;
    }
    per[j] = candidate_argmins(sources[j], schedule, options);
    if (method == SearchMethod::Both && brute_count > 0) {
      CoordinateArgmins brute = brute_force_argmins(sources[j], schedule, brute_count, options);
      for (std::size_t i = 0; i < brute_count; ++i) {
        if (brute.best[i] && per[j].best[i] && *brute.best[i] != *per[j].best[i]) {
          throw SearchMismatch("coordinate " + std::to_string(j + 1) + " at window " +
                               to_string(schedule.windows[i]) + ": brute force chose " +
                               to_string(*brute.best[i]) + ", candidates chose " +
                               to_string(*per[j].best[i]));
        }
        if (!per[j].best[i] && brute.best[i]) {
          per[j].best[i] = brute.best[i];
          per[j].flags[i].clear();
        }
      }
    }
  }

  ExponentEstimate est;
  est.name = ExponentName::ChiK;
  est.k = k;
  ErrorCache cache(sources, options);
  for (std::size_t i = 0; i < schedule.windows.size(); ++i) {
    WindowResult wr;
    wr.window = schedule.windows[i];
    wr.route = method == SearchMethod::BruteForce ? "exhaustive"
               : (method == SearchMethod::Both && i < brute_count) ? "both"
                                                                   : "candidates";
    for (std::size_t j = 0; j < k && wr.flag.empty(); ++j) {
      if (!per[j].best[i]) wr.flag = per[j].flags[i];
    }
    if (wr.flag.empty()) {
      WitnessRecord w;
      w.mode = WitnessMode::PerCoordinate;
      w.window = wr.window;
      for (std::size_t j = 0; j < k; ++j) {
        const Integer& x = *per[j].best[i];
        const auto& [err, y] = cache.get(j, x);
        w.denominators.push_back(x);
        w.numerators.push_back(y);
        w.errors.push_back(err);
      }
      w.achieved = achieved_from(w.errors, wr.window);
      wr.witness = std::move(w);
    }
    est.windows.push_back(std::move(wr));
  }
  summarize(est);
  return est;
}

ExponentEstimate lambda1_profile(const RealSource& source, std::size_t depth,
                                 const EstimateOptions& options) {
  if (source.is_exact_rational()) {
    throw RationalInput("the single-number profile needs an irrational source");
  }
  ExponentEstimate est;
  est.name = ExponentName::Lambda1;
  est.k = 1;
  std::size_t want = depth + 4;
  ConvergentList list;
  std::size_t usable = 0;
  while (true) {
    list = convergents(source, want, options.budget);
    if (list.terminated) throw RationalInput("source expansion terminates; it is rational");
    usable = 0;
    for (std::size_t n = 0; n + 1 < list.items.size(); ++n) {
      if (list.items[n].denominator >= 2) ++usable;
    }
    if (usable >= depth || list.truncated) break;
    want *= 2;
  }
  est.truncated = usable < depth;
  for (std::size_t n = 0; n + 1 < list.items.size() && est.profile.size() < depth; ++n) {
    const Convergent& c = list.items[n];
    const Convergent& next = list.items[n + 1];
    if (c.denominator < 2) continue;
    ProfileEntry e;
    e.index = n;
    e.q = c.denominator;
    e.q_next = next.denominator;
    e.a_next = next.quotient;
    DistanceInterval err = nearest_distance_relative(e.q, source, options.relative_bits, options.budget);
    if (sgn(err.lo) <= 0) throw Indeterminate("profile: distance at a convergent not separated from 0");
    e.nu = {exponent_lower_bound(err.hi, e.q), exponent_upper_bound(err.lo, e.q)};
    e.eta = log_ratio(e.q_next, e.q);
    e.tau = log_ratio(e.a_next * e.q, e.q);
    e.gap_positive = e.q_next > e.a_next * e.q;
    e.gap_bounded = e.q_next * 10 <= e.a_next * e.q * 27;

    WindowResult wr;
    wr.window = e.q;
    wr.route = "convergents";
    WitnessRecord w;
    w.mode = WitnessMode::SharedDenominator;
    w.window = e.q;
    w.denominators = {e.q};
    w.numerators = {c.numerator};
    w.errors = {err};
    w.achieved = achieved_from(w.errors, e.q);
    wr.witness = std::move(w);
    est.windows.push_back(std::move(wr));
    est.profile.push_back(std::move(e));
  }
  summarize(est);
  return est;
}

namespace {

// Refines ||x zeta|| until its upper end is decided against `bound`.
DistanceInterval error_below(const Integer& x, const RealSource& source, const Rational& bound,
                             unsigned budget, bool& ok) {
  DistanceInterval d;
  for (unsigned rel = 64;; rel *= 2) {
    d = nearest_distance_relative(x, source, rel, budget);
    if (d.hi <= bound) {
      ok = true;
      return d;
    }
    if (d.lo > bound || d.indeterminate || rel >= (1u << 14)) break;
  }
  ok = false;
  return d;
}

bool intersects(const DistanceInterval& a, const DistanceInterval& b) {
  return a.lo <= b.hi && b.lo <= a.hi;
}

}  // namespace

WitnessRecord chi_witness_to_omega_witness(const WitnessRecord& witness,
                                           std::span<const RealSource> sources,
                                           const EstimateOptions& options) {
  if (witness.mode != WitnessMode::PerCoordinate) {
    throw InvalidArgument("transform needs a per-coordinate witness");
  }
  const std::size_t k = sources.size();
  if (witness.denominators.size() != k || witness.errors.size() != k) {
    throw InvalidArgument("witness dimension does not match the sources");
  }
  WitnessRecord out;
  out.mode = WitnessMode::SharedDenominator;
  out.transformed = true;
  out.window = ipow(witness.window, k);
  Integer x = 1;
  for (const auto& xi : witness.denominators) x *= xi;
  out.denominators = {x};
  for (std::size_t j = 0; j < k; ++j) {
    Integer others = x / witness.denominators[j];
    Rational bound = witness.errors[j].hi * others;
    bool ok = false;
    DistanceInterval fresh = error_below(x, sources[j], bound, options.budget, ok);
    if (!ok) {
      throw VerificationFailure("transformed witness: ||x zeta_" + std::to_string(j + 1) +
                                "|| exceeds its chained bound");
    }
    unsigned bits = static_cast<unsigned>(bit_length(x)) + 72;
    Integer y = 0;
    if (auto v = sources[j].exact_value()) {
      y = floor(*v * x + Rational(1, 2));
    } else if (auto e = sources[j].try_enclosure(bits)) {
      y = floor(e->lo * x + Rational(1, 2));
    }
    out.numerators.push_back(y);
    DistanceInterval b;
    b.lo = 0;
    b.hi = bound;
    b.target_precision = fresh.target_precision;
    out.errors.push_back(b);
  }
  if (witness.achieved.unbounded) {
    out.achieved.unbounded = true;
  } else {
    out.achieved.lower = (witness.achieved.lower - Rational(static_cast<long>(k) - 1)) /
                         Rational(static_cast<long>(k));
    out.vacuous = sgn(out.achieved.lower) <= 0;
  }
  return out;
}

void verify_witness(const WitnessRecord& witness, std::span<const RealSource> sources, unsigned budget) {
  const std::size_t k = sources.size();
  if (witness.errors.size() != k || witness.numerators.size() != k) {
    throw VerificationFailure("witness dimension does not match the sources");
  }
  bool shared = witness.mode == WitnessMode::SharedDenominator;
  if ((shared && witness.denominators.size() != 1) || (!shared && witness.denominators.size() != k)) {
    throw VerificationFailure("witness has the wrong number of denominators");
  }
  Rational max_hi = 0;
  for (std::size_t j = 0; j < k; ++j) {
    const Integer& x = shared ? witness.denominators[0] : witness.denominators[j];
    if (sgn(x) <= 0 || x > witness.window) {
      throw VerificationFailure("witness denominator outside its window");
    }
    const DistanceInterval& stored = witness.errors[j];
    if (witness.transformed) {
      bool ok = false;
      DistanceInterval fresh = error_below(x, sources[j], stored.hi, budget, ok);
      if (!ok) throw VerificationFailure("fresh error exceeds the chained bound");
      max_hi = std::max(max_hi, stored.hi);
      (void)fresh;
      continue;
    }
    DistanceInterval fresh = nearest_distance_relative(x, sources[j], 128, budget);
    if (!intersects(fresh, stored)) {
      throw VerificationFailure("fresh enclosure of ||x zeta_" + std::to_string(j + 1) +
                                "|| is disjoint from the stored one");
    }
    // |x zeta_j - y_j| must be the nearest-integer distance.
    if (sgn(fresh.hi) > 0 || sgn(stored.hi) > 0) {
      unsigned bits = static_cast<unsigned>(bit_length(x)) + 160;
      if (auto e = sources[j].try_enclosure(bits)) {
        RationalInterval off = abs(RationalInterval{e->lo * x - witness.numerators[j],
                                                    e->hi * x - witness.numerators[j]});
        if (off.lo > fresh.hi) throw VerificationFailure("stored numerator is not the nearest integer");
      }
    } else if (auto v = sources[j].exact_value()) {
      if (*v * x != witness.numerators[j]) throw VerificationFailure("stored numerator is wrong");
    }
    max_hi = std::max(max_hi, std::min(fresh.hi, stored.hi));
  }
  if (witness.achieved.unbounded) {
    if (sgn(max_hi) != 0) throw VerificationFailure("unbounded witness with a nonzero error");
    return;
  }
  if (witness.vacuous) return;
  if (certify_power_bound(max_hi, witness.window, witness.achieved.lower) != Certainty::Yes) {
    throw VerificationFailure("stored exponent is not achieved at window " + to_string(witness.window));
  }
}

SandwichReport sandwich_report(std::span<const RealSource> sources, const ExponentEstimate& omega,
                               const ExponentEstimate& chi,
                               std::span<const ExponentEstimate> per_coordinate,
                               const EstimateOptions& options, std::optional<Rational> lambda1_value) {
  const std::size_t k = sources.size();
  if (omega.windows.size() != chi.windows.size() || per_coordinate.size() != k) {
    throw InvalidArgument("sandwich_report: mismatched schedules");
  }
  for (const auto& e : per_coordinate) {
    if (e.windows.size() != chi.windows.size()) throw InvalidArgument("sandwich_report: mismatched schedules");
  }
  SandwichReport report;
  for (const auto& s : sources) {
    if (s.is_exact_rational()) report.vacuous = true;
  }
  if (lambda1_value) {
    report.veronese_floor = (*lambda1_value - Rational(static_cast<long>(k) - 1)) / Rational(static_cast<long>(k));
  }
  for (std::size_t i = 0; i < chi.windows.size(); ++i) {
    const Integer& window = chi.windows[i].window;
    if (omega.windows[i].window != window) throw InvalidArgument("sandwich_report: mismatched schedules");
    const auto& wc = chi.windows[i].witness;
    const auto& wo = omega.windows[i].witness;
    if (!wc) continue;
    ++report.windows_checked;
    if (wc->achieved.unbounded) report.vacuous = true;
    if (wo && wo->max_error_upper() < wc->max_error_lower()) {
      report.violations.push_back({window, "omega_k <= chi_k",
                                   "shared-denominator error below the per-coordinate error"});
    }
    for (std::size_t j = 0; j < k; ++j) {
      if (per_coordinate[j].windows[i].window != window) {
        throw InvalidArgument("sandwich_report: mismatched schedules");
      }
      const auto& wl = per_coordinate[j].windows[i].witness;
      if (wl && wc->max_error_upper() < wl->errors[0].lo) {
        report.violations.push_back({window, "chi_k <= lambda_1",
                                     "per-coordinate error below coordinate " + std::to_string(j + 1)});
      }
    }
    try {
      WitnessRecord t = chi_witness_to_omega_witness(*wc, sources, options);
      verify_witness(t, sources, options.budget);
      if (t.vacuous) {
        ++report.transforms_vacuous;
      } else {
        ++report.transforms_verified;
      }
      report.transformed.push_back(std::move(t));
    } catch (const VerificationFailure& e) {
      report.violations.push_back({window, "chi-to-omega transform", e.what()});
    }
  }
  return report;
}

UniformChiReport uniform_chi_check(std::span<const RealSource> sources, const Integer& x_max,
                                   const EstimateOptions& options) {
  check_sources(sources);
  WindowSchedule schedule = dense_schedule(sources, x_max, options.budget);
  SearchMethod method = brute_force_allowed(x_max, sources.size(), options.brute_force_guard)
                            ? SearchMethod::Both
                            : SearchMethod::ConvergentCandidates;
  ExponentEstimate est = estimate_chi_k(sources, schedule, method, options);
  UniformChiReport report;
  bool first = true;
  for (auto& w : est.windows) {
    if (w.witness) {
      if (first || w.witness->achieved < report.worst) {
        report.worst = w.witness->achieved;
        report.worst_window = w.window;
        first = false;
      }
      if (!w.witness->achieved.unbounded) {
        RationalInterval lx = log_bounds(w.window);
        // nu >= 1 - 1/log X
        if (w.witness->achieved.lower < 1 - 1 / lx.lo) report.pass = false;
      }
    }
    report.windows.push_back(std::move(w));
  }
  return report;
}

}  // namespace dioph
