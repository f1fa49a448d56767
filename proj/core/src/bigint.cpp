#include "dioph/bigint.hpp"

#include <mpfr.h>

#include <cctype>

#include "dioph/error.hpp"

namespace dioph {

Integer ipow(const Integer& base, unsigned long exponent) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exponent);
  return r;
}

Rational rpow(const Rational& base, unsigned long exponent) {
  Rational r(ipow(base.get_num(), exponent), ipow(base.get_den(), exponent));
  r.canonicalize();
  return r;
}

std::size_t bit_length(const Integer& v) {
  if (sgn(v) == 0) return 0;
  return mpz_sizeinbase(v.get_mpz_t(), 2);
}

Integer floor(const Rational& v) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), v.get_num_mpz_t(), v.get_den_mpz_t());
  return r;
}

Integer ceil(const Rational& v) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), v.get_num_mpz_t(), v.get_den_mpz_t());
  return r;
}

Integer ceil_pow(const Integer& base, const Rational& exponent) {
  if (base < 1) throw InvalidArgument("ceil_pow: base must be at least 1");
  if (sgn(exponent) < 0) throw InvalidArgument("ceil_pow: exponent must be nonnegative");
  const Integer& p = exponent.get_num();
  const Integer& q = exponent.get_den();
  if (!p.fits_ulong_p() || !q.fits_ulong_p()) throw InvalidArgument("ceil_pow: exponent too large");
  Integer target = ipow(base, p.get_ui());
  Integer root;
  mpz_root(root.get_mpz_t(), target.get_mpz_t(), q.get_ui());
  if (ipow(root, q.get_ui()) < target) ++root;
  return root;
}

Integer floor_pow(const Rational& base, unsigned long n) {
  if (sgn(base) < 0) throw InvalidArgument("floor_pow: base must be nonnegative");
  return floor(rpow(base, n));
}

int compare_powers(const Integer& a, const Rational& ea, const Integer& b, const Rational& eb) {
  if (a < 1 || b < 1 || sgn(ea) < 0 || sgn(eb) < 0) {
    throw InvalidArgument("compare_powers: arguments out of range");
  }
  Integer ea_scaled = ea.get_num() * eb.get_den();
  Integer eb_scaled = eb.get_num() * ea.get_den();
  if (!ea_scaled.fits_ulong_p() || !eb_scaled.fits_ulong_p()) {
    throw InvalidArgument("compare_powers: exponent too large");
  }
  int c = cmp(ipow(a, ea_scaled.get_ui()), ipow(b, eb_scaled.get_ui()));
  return (c > 0) - (c < 0);
}

namespace {

// m^b * W^a * den^b <= num^b, i.e. m <= (num/den) * W^(-a/b).
bool scaled_power_holds(const Integer& m, const Rational& scale, const Integer& window,
                        unsigned long a, unsigned long b) {
  Integer lhs = ipow(m, b) * ipow(window, a) * ipow(scale.get_den(), b);
  return lhs <= ipow(scale.get_num(), b);
}

}  // namespace

Integer floor_scaled_power(const Rational& scale, const Integer& window, const Rational& mu) {
  if (sgn(scale) < 0 || window < 1 || sgn(mu) < 0) {
    throw InvalidArgument("floor_scaled_power: arguments out of range");
  }
  if (sgn(scale) == 0) return 0;
  if (!mu.get_num().fits_ulong_p() || !mu.get_den().fits_ulong_p()) {
    throw InvalidArgument("floor_scaled_power: exponent too large");
  }
  unsigned long a = mu.get_num().get_ui();
  unsigned long b = mu.get_den().get_ui();

  mpfr_t s, w, e;
  mpfr_inits2(256, s, w, e, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_q(s, scale.get_mpq_t(), MPFR_RNDN);
  mpfr_set_z(w, window.get_mpz_t(), MPFR_RNDN);
  mpfr_set_q(e, mu.get_mpq_t(), MPFR_RNDN);
  mpfr_neg(e, e, MPFR_RNDN);
  mpfr_pow(w, w, e, MPFR_RNDN);
  mpfr_mul(s, s, w, MPFR_RNDN);
  Integer m;
  mpfr_get_z(m.get_mpz_t(), s, MPFR_RNDD);
  mpfr_clears(s, w, e, static_cast<mpfr_ptr>(nullptr));

  if (m < 0) m = 0;
  while (m > 0 && !scaled_power_holds(m, scale, window, a, b)) --m;
  while (scaled_power_holds(m + 1, scale, window, a, b)) ++m;
  return m;
}

Integer parse_integer(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw InvalidArgument("empty integer literal");
  std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (start == s.size()) throw InvalidArgument("malformed integer literal: " + s);
  for (std::size_t i = start; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
      throw InvalidArgument("malformed integer literal: " + s);
    }
  }
  if (s[0] == '+') s.erase(0, 1);
  return Integer(s, 10);
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Integer num = parse_integer(s.substr(0, slash));
    Integer den = parse_integer(s.substr(slash + 1));
    if (sgn(den) == 0) throw InvalidArgument("zero denominator in " + s);
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
  std::string mantissa = s;
  long exp10 = 0;
  auto e = s.find_first_of("eE");
  if (e != std::string::npos) {
    mantissa = s.substr(0, e);
    std::string ex = s.substr(e + 1);
    try {
      std::size_t used = 0;
      exp10 = std::stol(ex, &used);
      if (used != ex.size()) throw InvalidArgument("malformed exponent in " + s);
    } catch (const std::logic_error&) {
      throw InvalidArgument("malformed exponent in " + s);
    }
  }
  auto dot = mantissa.find('.');
  std::string digits = mantissa;
  if (dot != std::string::npos) {
    digits = mantissa.substr(0, dot) + mantissa.substr(dot + 1);
    exp10 -= static_cast<long>(mantissa.size() - dot - 1);
    if (digits.empty() || digits == "-" || digits == "+") {
      throw InvalidArgument("malformed number: " + s);
    }
  }
  Integer num = parse_integer(digits);
  Rational r(num);
  if (exp10 > 0) r *= Rational(ipow(10, static_cast<unsigned long>(exp10)));
  if (exp10 < 0) r /= Rational(ipow(10, static_cast<unsigned long>(-exp10)));
  r.canonicalize();
  return r;
}

std::string to_string(const Integer& v) { return v.get_str(10); }

std::string to_string(const Rational& v) { return v.get_str(10); }

double to_double(const Rational& v) { return v.get_d(); }

}  // namespace dioph
