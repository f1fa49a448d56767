#include "dioph/real_source.hpp"

#include <algorithm>
#include <mutex>

#include "dioph/error.hpp"

namespace dioph {

struct RealSource::Impl {
  SourceKind kind = SourceKind::ExactRational;
  mutable std::mutex mutex;

  Rational value;

  std::vector<Integer> quotients;
  std::vector<Integer> numerators;    // r_l for l < quotients.size()
  std::vector<Integer> denominators;  // s_l for l < quotients.size()
  QuotientGenerator quotient_gen;
  bool quotient_gen_done = false;

  std::vector<std::uint64_t> exponents;
  ExponentGenerator exponent_gen;
  bool exponent_gen_done = false;

  std::unique_ptr<RealSource> base;
  unsigned power = 1;

  std::vector<Integer> certified;
  unsigned certified_precision = 0;

  std::string provenance;
  unsigned precision_hint = kDefaultPrecision;

  // Continued-fraction helpers; caller holds the mutex.
  void push_quotient(Integer a) {
    std::size_t l = quotients.size();
    if (l > 0 && a < 1) throw InvalidArgument("partial quotients after a_0 must be positive");
    Integer r = l == 0 ? a : a * numerators[l - 1] + (l >= 2 ? numerators[l - 2] : Integer(1));
    Integer s = l == 0 ? Integer(1) : a * denominators[l - 1] + (l >= 2 ? denominators[l - 2] : Integer(0));
    quotients.push_back(std::move(a));
    numerators.push_back(std::move(r));
    denominators.push_back(std::move(s));
  }

  bool extend_quotients() {
    if (!quotient_gen || quotient_gen_done) return false;
    std::optional<Integer> next = quotient_gen();
    if (!next) {
      quotient_gen_done = true;
      return false;
    }
    push_quotient(std::move(*next));
    return true;
  }

  void ensure_quotients(std::size_t n) {
    while (quotients.size() < n && extend_quotients()) {
    }
  }

  const Integer& r_at(long l) const {
    static const Integer one(1), zero(0);
    if (l == -1) return one;
    return numerators[static_cast<std::size_t>(l)];
  }
  const Integer& s_at(long l) const {
    static const Integer one(1), zero(0);
    if (l == -1) return zero;
    return denominators[static_cast<std::size_t>(l)];
  }

  bool cf_width_ok(std::size_t l, const Integer& scale) const {
    return denominators[l] * (denominators[l] + s_at(static_cast<long>(l) - 1)) >= scale;
  }

  std::optional<Enclosure> cf_enclosure(unsigned bits) {
    Integer scale = 1;
    scale <<= bits;
    if (quotients.empty() && !extend_quotients()) return std::nullopt;
    while (!cf_width_ok(quotients.size() - 1, scale)) {
      if (!extend_quotients()) return std::nullopt;
    }
    std::size_t lo_idx = 0, hi_idx = quotients.size() - 1;
    while (lo_idx < hi_idx) {
      std::size_t mid = (lo_idx + hi_idx) / 2;
      if (cf_width_ok(mid, scale)) {
        hi_idx = mid;
      } else {
        lo_idx = mid + 1;
      }
    }
    long l = static_cast<long>(lo_idx);
    Rational a(r_at(l), s_at(l));
    Rational b(r_at(l) + r_at(l - 1), s_at(l) + s_at(l - 1));
    a.canonicalize();
    b.canonicalize();
    if (a > b) std::swap(a, b);
    return Enclosure{a, b};
  }

  // Binary-series helpers; caller holds the mutex.
  void push_exponent(std::uint64_t e) {
    if (e < 1) throw InvalidArgument("series exponents must be positive");
    if (!exponents.empty() && e <= exponents.back()) {
      throw InvalidArgument("series exponents must be strictly increasing");
    }
    exponents.push_back(e);
  }

  bool extend_exponents() {
    if (!exponent_gen || exponent_gen_done) return false;
    std::optional<std::uint64_t> next = exponent_gen();
    if (!next) {
      exponent_gen_done = true;
      return false;
    }
    push_exponent(*next);
    return true;
  }

  std::optional<Enclosure> series_enclosure(unsigned bits) {
    while (exponents.empty() || exponents.back() < static_cast<std::uint64_t>(bits) + 1) {
      if (!extend_exponents()) break;
    }
    std::size_t m = exponents.size();
    // Smallest N whose tail bound 2^(1 - a_{N+1}) is at most 2^-bits.
    std::size_t n = m;
    Integer tail_num = 1;
    std::uint64_t tail_exp = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (exponents[i] >= static_cast<std::uint64_t>(bits) + 1) {
        n = i;
        tail_exp = exponents[i] - 1;
        break;
      }
    }
    if (n == m) {
      if (m == 0 || exponents[m - 1] < bits) return std::nullopt;
      tail_exp = exponents[m - 1];
    }
    std::uint64_t top = n == 0 ? 0 : exponents[n - 1];
    std::uint64_t den_exp = std::max(top, tail_exp);
    Integer sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
      Integer term = 1;
      term <<= static_cast<mp_bitcnt_t>(den_exp - exponents[i]);
      sum += term;
    }
    Integer tail = 1;
    tail <<= static_cast<mp_bitcnt_t>(den_exp - tail_exp);
    Integer den = 1;
    den <<= static_cast<mp_bitcnt_t>(den_exp);
    Rational lo(sum, den), hi(sum + tail, den);
    lo.canonicalize();
    hi.canonicalize();
    return Enclosure{lo, hi};
  }

  std::optional<Enclosure> power_enclosure(unsigned bits) {
    std::optional<Enclosure> rough = base->try_enclosure(4);
    if (!rough) return std::nullopt;
    Rational mag = std::max(abs(rough->lo), abs(rough->hi)) + 1;
    unsigned extra = static_cast<unsigned>(power * (bit_length(ceil(mag)) + 1) + 4);
    Rational target(Integer(1), Integer(1) << bits);
    for (int attempt = 0; attempt < 8; ++attempt) {
      std::optional<Enclosure> e = base->try_enclosure(bits + extra);
      if (!e) return std::nullopt;
      RationalInterval p = pow(RationalInterval{e->lo, e->hi}, power);
      if (p.width() <= target) return Enclosure{p.lo, p.hi};
      extra += 32;
    }
    return std::nullopt;
  }

  std::optional<Enclosure> enclosure(unsigned bits) {
    switch (kind) {
      case SourceKind::ExactRational:
        return Enclosure{value, value};
      case SourceKind::ContinuedFraction:
        return cf_enclosure(bits);
      case SourceKind::BinarySeries:
        return series_enclosure(bits);
      case SourceKind::Power:
        return power_enclosure(bits);
    }
    return std::nullopt;
  }

  std::optional<Rational> exact() const {
    if (kind == SourceKind::ExactRational) return value;
    if (kind == SourceKind::Power) {
      if (auto b = base->exact_value()) return rpow(*b, power);
    }
    return std::nullopt;
  }
};

RealSource RealSource::rational(const Integer& num, const Integer& den) {
  if (sgn(den) == 0) throw InvalidArgument("rational source with zero denominator");
  Rational v(num, den);
  v.canonicalize();
  return rational(v);
}

RealSource RealSource::rational(const Rational& value) {
  auto impl = std::make_shared<Impl>();
  impl->kind = SourceKind::ExactRational;
  impl->value = value;
  impl->value.canonicalize();
  return RealSource(impl);
}

RealSource RealSource::continued_fraction(std::vector<Integer> prefix, QuotientGenerator tail) {
  auto impl = std::make_shared<Impl>();
  impl->kind = SourceKind::ContinuedFraction;
  for (auto& a : prefix) impl->push_quotient(std::move(a));
  impl->quotient_gen = std::move(tail);
  if (impl->quotients.empty() && !impl->quotient_gen) {
    throw InvalidArgument("continued fraction needs at least one quotient");
  }
  return RealSource(impl);
}

RealSource RealSource::periodic_continued_fraction(std::vector<Integer> prefix,
                                                   std::vector<Integer> period) {
  if (period.empty()) throw InvalidArgument("empty period");
  for (const auto& a : period) {
    if (a < 1) throw InvalidArgument("period quotients must be positive");
  }
  auto list = [](const std::vector<Integer>& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ",\"" : "\"") + v[i].get_str() + "\"";
    return out + "]";
  };
  std::string provenance =
      "{\"generator\":\"periodic\",\"prefix\":" + list(prefix) + ",\"period\":" + list(period) + "}";
  auto state = std::make_shared<std::size_t>(0);
  auto gen = [period = std::move(period), state]() -> std::optional<Integer> {
    Integer a = period[*state % period.size()];
    ++*state;
    return a;
  };
  RealSource out = continued_fraction(std::move(prefix), gen);
  out.set_provenance(std::move(provenance));
  return out;
}

RealSource RealSource::binary_series(std::vector<std::uint64_t> exponents, ExponentGenerator tail) {
  auto impl = std::make_shared<Impl>();
  impl->kind = SourceKind::BinarySeries;
  for (auto e : exponents) impl->push_exponent(e);
  impl->exponent_gen = std::move(tail);
  if (impl->exponents.empty() && !impl->exponent_gen) {
    throw InvalidArgument("binary series needs at least one exponent");
  }
  return RealSource(impl);
}

RealSource RealSource::power(const RealSource& base, unsigned exponent) {
  if (exponent < 1) throw InvalidArgument("power exponent must be at least 1");
  if (exponent == 1) return base;
  auto impl = std::make_shared<Impl>();
  impl->kind = SourceKind::Power;
  impl->base = std::make_unique<RealSource>(base);
  impl->power = exponent;
  impl->precision_hint = base.precision_hint();
  return RealSource(impl);
}

SourceKind RealSource::kind() const { return impl_->kind; }

bool RealSource::is_exact_rational() const { return exact_value().has_value(); }

std::optional<Rational> RealSource::exact_value() const {
  std::lock_guard lock(impl_->mutex);
  return impl_->exact();
}

std::optional<Enclosure> RealSource::try_enclosure(unsigned bits) const {
  std::lock_guard lock(impl_->mutex);
  return impl_->enclosure(bits);
}

Enclosure RealSource::enclosure(unsigned bits) const {
  std::optional<Enclosure> e = try_enclosure(bits);
  if (!e) {
    throw Indeterminate("source description does not determine " + std::to_string(bits) +
                        " bits");
  }
  return *e;
}

namespace {

QuotientPrefix rational_prefix(const Rational& v, std::size_t count) {
  QuotientPrefix out;
  out.quotients = cf_expand_rational(v.get_num(), v.get_den());
  if (out.quotients.size() > count) {
    out.quotients.resize(count);
  } else {
    out.terminated = true;
  }
  return out;
}

// Number of leading quotients needed before a convergent denominator exceeds bound.
std::optional<std::size_t> terms_beyond(const std::vector<Integer>& q, const Integer& bound) {
  Integer s_prev = 0, s = 1;
  for (std::size_t l = 0; l < q.size(); ++l) {
    if (l > 0) {
      Integer next = q[l] * s + s_prev;
      s_prev = s;
      s = next;
    }
    if (s > bound) return l + 1;
  }
  return std::nullopt;
}

}  // namespace

QuotientPrefix RealSource::partial_quotients(std::size_t count, unsigned budget) const {
  std::lock_guard lock(impl_->mutex);
  Impl& im = *impl_;
  if (auto v = im.exact()) return rational_prefix(*v, count);
  QuotientPrefix out;
  if (im.kind == SourceKind::ContinuedFraction) {
    im.ensure_quotients(count);
    std::size_t n = std::min(count, im.quotients.size());
    out.quotients.assign(im.quotients.begin(), im.quotients.begin() + static_cast<long>(n));
    out.exhausted = n < count;
    return out;
  }
  unsigned p = std::max(64u, im.certified_precision);
  while (im.certified.size() < count) {
    if (p > budget) break;
    std::optional<Enclosure> e = im.enclosure(p);
    if (!e) break;
    std::vector<Integer> q = common_quotient_prefix(e->lo, e->hi);
    if (q.size() > im.certified.size()) im.certified = std::move(q);
    im.certified_precision = p;
    p *= 2;
  }
  std::size_t n = std::min(count, im.certified.size());
  out.quotients.assign(im.certified.begin(), im.certified.begin() + static_cast<long>(n));
  out.exhausted = n < count;
  return out;
}

QuotientPrefix RealSource::quotients_beyond(const Integer& bound, unsigned budget) const {
  std::lock_guard lock(impl_->mutex);
  Impl& im = *impl_;
  QuotientPrefix out;
  if (auto v = im.exact()) {
    out.quotients = cf_expand_rational(v->get_num(), v->get_den());
    if (auto n = terms_beyond(out.quotients, bound)) {
      if (*n < out.quotients.size()) {
        out.quotients.resize(*n);
        return out;
      }
    }
    out.terminated = true;
    return out;
  }
  if (im.kind == SourceKind::ContinuedFraction) {
    if (im.quotients.empty()) im.extend_quotients();
    while (!im.quotients.empty() && im.denominators.back() <= bound) {
      if (!im.extend_quotients()) break;
    }
    out.quotients = im.quotients;
    if (auto n = terms_beyond(out.quotients, bound)) {
      out.quotients.resize(*n);
    } else {
      out.exhausted = true;
    }
    return out;
  }
  unsigned p = std::max<unsigned>(im.certified_precision,
                                  static_cast<unsigned>(2 * bit_length(bound) + 64));
  while (!terms_beyond(im.certified, bound)) {
    if (p > budget) break;
    std::optional<Enclosure> e = im.enclosure(p);
    if (!e) break;
    std::vector<Integer> q = common_quotient_prefix(e->lo, e->hi);
    if (q.size() > im.certified.size()) im.certified = std::move(q);
    im.certified_precision = p;
    p *= 2;
  }
  out.quotients = im.certified;
  if (auto n = terms_beyond(out.quotients, bound)) {
    out.quotients.resize(*n);
  } else {
    out.exhausted = true;
  }
  return out;
}

std::vector<Integer> RealSource::known_quotients() const {
  std::lock_guard lock(impl_->mutex);
  if (auto v = impl_->exact()) return cf_expand_rational(v->get_num(), v->get_den());
  if (impl_->kind == SourceKind::ContinuedFraction) return impl_->quotients;
  return impl_->certified;
}

std::vector<std::uint64_t> RealSource::known_exponents() const {
  std::lock_guard lock(impl_->mutex);
  return impl_->exponents;
}

bool RealSource::has_generator() const {
  std::lock_guard lock(impl_->mutex);
  return static_cast<bool>(impl_->quotient_gen) || static_cast<bool>(impl_->exponent_gen);
}

const RealSource& RealSource::base() const {
  if (impl_->kind != SourceKind::Power) throw InvalidArgument("source is not a power");
  return *impl_->base;
}

unsigned RealSource::power_exponent() const { return impl_->power; }

void RealSource::materialize(std::size_t count) const {
  std::lock_guard lock(impl_->mutex);
  if (impl_->kind == SourceKind::ContinuedFraction) impl_->ensure_quotients(count);
  if (impl_->kind == SourceKind::BinarySeries) {
    while (impl_->exponents.size() < count && impl_->extend_exponents()) {
    }
  }
}

const std::string& RealSource::provenance() const { return impl_->provenance; }

void RealSource::set_provenance(std::string json) {
  std::lock_guard lock(impl_->mutex);
  impl_->provenance = std::move(json);
}

unsigned RealSource::precision_hint() const { return impl_->precision_hint; }

void RealSource::set_precision_hint(unsigned bits) {
  std::lock_guard lock(impl_->mutex);
  impl_->precision_hint = std::max(bits, kDefaultPrecision);
}

std::vector<Integer> cf_expand_rational(const Integer& num, const Integer& den) {
  if (sgn(den) == 0) throw InvalidArgument("zero denominator");
  Integer p = num, q = den;
  if (sgn(q) < 0) {
    p = -p;
    q = -q;
  }
  std::vector<Integer> out;
  while (sgn(q) != 0) {
    Integer a, r;
    mpz_fdiv_qr(a.get_mpz_t(), r.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
    out.push_back(a);
    p = q;
    q = r;
  }
  return out;
}

std::vector<Integer> common_quotient_prefix(const Rational& lo, const Rational& hi) {
  std::vector<Integer> out;
  Rational x = lo, y = hi;
  while (true) {
    Integer a = floor(x), b = floor(y);
    if (a != b) break;
    out.push_back(a);
    x -= a;
    y -= a;
    if (sgn(x) == 0 || sgn(y) == 0) break;
    x = 1 / x;
    y = 1 / y;
  }
  return out;
}

}  // namespace dioph
