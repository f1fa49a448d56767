#include "dioph/certified.hpp"

#include <mpfr.h>

#include <algorithm>

#include "dioph/error.hpp"

namespace dioph {

namespace {

class Mpfr {
 public:
  explicit Mpfr(unsigned precision) { mpfr_init2(v_, precision); }
  ~Mpfr() { mpfr_clear(v_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
  mpfr_ptr get() { return v_; }

  Rational to_rational() {
    Rational r;
    mpfr_get_q(r.get_mpq_t(), v_);
    return r;
  }

 private:
  mpfr_t v_;
};

// log(v) rounded in direction rnd; v > 0 is given exactly.
Rational directed_log(const Rational& v, unsigned precision, mpfr_rnd_t rnd) {
  // Rounding v itself outward keeps the result on the correct side of log(v).
  Mpfr x(precision + 32);
  mpfr_set_q(x.get(), v.get_mpq_t(), rnd);
  Mpfr y(precision);
  mpfr_log(y.get(), x.get(), rnd);
  return y.to_rational();
}

}  // namespace

Rational RationalInterval::magnitude() const {
  Rational a = abs(lo);
  Rational b = abs(hi);
  return a > b ? a : b;
}

Rational RationalInterval::mignitude() const {
  if (contains_zero()) return 0;
  Rational a = abs(lo);
  Rational b = abs(hi);
  return a < b ? a : b;
}

RationalInterval operator+(const RationalInterval& a, const RationalInterval& b) {
  return {a.lo + b.lo, a.hi + b.hi};
}

RationalInterval operator-(const RationalInterval& a, const RationalInterval& b) {
  return {a.lo - b.hi, a.hi - b.lo};
}

RationalInterval operator*(const RationalInterval& a, const RationalInterval& b) {
  Rational p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {*std::min_element(p, p + 4), *std::max_element(p, p + 4)};
}

RationalInterval operator*(const Rational& s, const RationalInterval& a) {
  if (sgn(s) >= 0) return {s * a.lo, s * a.hi};
  return {s * a.hi, s * a.lo};
}

RationalInterval pow(const RationalInterval& a, unsigned n) {
  if (n == 0) return {1, 1};
  Rational lo = rpow(a.lo, n);
  Rational hi = rpow(a.hi, n);
  if (n % 2 == 1) return {lo, hi};
  if (a.contains_zero()) return {0, std::max(lo, hi)};
  return {std::min(lo, hi), std::max(lo, hi)};
}

RationalInterval abs(const RationalInterval& a) {
  return {a.mignitude(), a.magnitude()};
}

RationalInterval log_bounds(const Rational& v, unsigned precision) {
  if (sgn(v) <= 0) throw InvalidArgument("log of a nonpositive number");
  return {directed_log(v, precision, MPFR_RNDD), directed_log(v, precision, MPFR_RNDU)};
}

RationalInterval log_bounds(const Integer& v, unsigned precision) {
  return log_bounds(Rational(v), precision);
}

Rational exponent_lower_bound(const Rational& error_upper, const Integer& window) {
  if (sgn(error_upper) <= 0 || window < 2) {
    throw InvalidArgument("exponent_lower_bound: error must be positive and window >= 2");
  }
  // -log(e) >= -log_up(e); log(X) <= log_up(X).
  Rational numer = -directed_log(error_upper, 128, MPFR_RNDU);
  Rational denom = directed_log(Rational(window), 128, MPFR_RNDU);
  if (sgn(numer) <= 0) return numer / directed_log(Rational(window), 128, MPFR_RNDD);
  return numer / denom;
}

Rational exponent_upper_bound(const Rational& error_lower, const Integer& window) {
  if (sgn(error_lower) <= 0 || window < 2) {
    throw InvalidArgument("exponent_upper_bound: error must be positive and window >= 2");
  }
  Rational numer = -directed_log(error_lower, 128, MPFR_RNDD);
  Rational denom = directed_log(Rational(window), 128, MPFR_RNDD);
  if (sgn(numer) < 0) return numer / directed_log(Rational(window), 128, MPFR_RNDU);
  return numer / denom;
}

Certainty certify_power_bound(const Rational& error, const Integer& window, const Rational& nu) {
  if (sgn(error) == 0) return Certainty::Yes;
  if (window < 1) throw InvalidArgument("certify_power_bound: window must be positive");
  // error <= X^(-nu)  <=>  log(error) + nu * log(X) <= 0.
  for (unsigned precision : {128u, 512u, 2048u}) {
    RationalInterval le = log_bounds(error, precision);
    RationalInterval lx = log_bounds(window, precision);
    RationalInterval total = le + nu * lx;
    if (sgn(total.hi) <= 0) return Certainty::Yes;
    if (sgn(total.lo) > 0) return Certainty::No;
  }
  return Certainty::Unknown;
}

RationalInterval log_ratio(const Integer& a, const Integer& b) {
  if (a < 1 || b < 2) throw InvalidArgument("log_ratio: arguments out of range");
  RationalInterval la = log_bounds(a);
  RationalInterval lb = log_bounds(b);
  Rational lo = sgn(la.lo) <= 0 ? Rational(0) : la.lo / lb.hi;
  return {lo, la.hi / lb.lo};
}

}  // namespace dioph
