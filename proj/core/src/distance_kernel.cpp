#include "dioph/distance_kernel.hpp"

#include "dioph/error.hpp"

namespace dioph {

std::optional<DistanceKernel> DistanceKernel::make(const RealSource& source,
                                                   const Integer& denominator) {
  if (sgn(denominator) <= 0) throw InvalidArgument("kernel denominator must be positive");
  DistanceKernel k;
  k.den_ = denominator;
  k.half_ = denominator / 2;
  if (auto v = source.exact_value()) {
    if (mpz_divisible_p(denominator.get_mpz_t(), v->get_den_mpz_t())) {
      k.lower_ = v->get_num() * (denominator / v->get_den());
      k.upper_ = k.lower_;
      k.exact_ = true;
      return k;
    }
    Rational scaled = *v * denominator;
    k.lower_ = floor(scaled);
    k.upper_ = ceil(scaled);
    return k;
  }
  unsigned bits = static_cast<unsigned>(bit_length(denominator));
  std::optional<Enclosure> e = source.try_enclosure(bits);
  if (!e) return std::nullopt;
  k.lower_ = floor(e->lo * denominator);
  k.upper_ = ceil(e->hi * denominator);
  return k;
}

Integer DistanceKernel::common_denominator(std::span<const RealSource> sources, unsigned bits) {
  Integer m = 1;
  for (const auto& s : sources) {
    if (auto v = s.exact_value()) mpz_lcm(m.get_mpz_t(), m.get_mpz_t(), v->get_den_mpz_t());
  }
  return m << bits;
}

void DistanceKernel::distance(const Integer& x, Value& out) const {
  // Works on |x|; ||-x zeta|| = ||x zeta||.
  mpz_mul(a_.get_mpz_t(), x.get_mpz_t(), lower_.get_mpz_t());
  mpz_mul(b_.get_mpz_t(), x.get_mpz_t(), upper_.get_mpz_t());
  if (sgn(x) < 0) {
    mpz_neg(a_.get_mpz_t(), a_.get_mpz_t());
    mpz_neg(b_.get_mpz_t(), b_.get_mpz_t());
  }
  finish(out);
}

void DistanceKernel::distance(unsigned long x, Value& out) const {
  mpz_mul_ui(a_.get_mpz_t(), lower_.get_mpz_t(), x);
  mpz_mul_ui(b_.get_mpz_t(), upper_.get_mpz_t(), x);
  finish(out);
}

// a_ <= b_ hold x*L and x*H (or their negatives, reordered).
void DistanceKernel::finish(Value& out) const {
  mpz_sub(w_.get_mpz_t(), b_.get_mpz_t(), a_.get_mpz_t());
  // Width at least 1/2: nothing is known.
  mpz_mul_2exp(t_.get_mpz_t(), w_.get_mpz_t(), 1);
  if (t_ >= den_) {
    out.lo = 0;
    out.hi = den_;
    return;
  }
  mpz_fdiv_r(a_.get_mpz_t(), a_.get_mpz_t(), den_.get_mpz_t());  // a in [0, D)
  mpz_add(b_.get_mpz_t(), a_.get_mpz_t(), w_.get_mpz_t());       // b < 3D/2

  bool contains_int = sgn(a_) == 0 || b_ >= den_;
  // half = D/2 lies in [a, b]  <=>  2a <= D <= 2b
  mpz_mul_2exp(t_.get_mpz_t(), a_.get_mpz_t(), 1);
  bool contains_half = t_ <= den_;
  mpz_mul_2exp(t_.get_mpz_t(), b_.get_mpz_t(), 1);
  contains_half = contains_half && den_ <= t_;

  // distances of the endpoints, doubled to live over 2D
  mpz_sub(r_.get_mpz_t(), den_.get_mpz_t(), a_.get_mpz_t());
  if (r_ > a_) r_ = a_;
  if (b_ >= den_) mpz_sub(b_.get_mpz_t(), b_.get_mpz_t(), den_.get_mpz_t());
  mpz_sub(w_.get_mpz_t(), den_.get_mpz_t(), b_.get_mpz_t());
  if (w_ > b_) w_ = b_;
  const Integer& dmin = r_ < w_ ? r_ : w_;
  const Integer& dmax = r_ < w_ ? w_ : r_;
  if (contains_int) {
    out.lo = 0;
  } else {
    mpz_mul_2exp(out.lo.get_mpz_t(), dmin.get_mpz_t(), 1);
  }
  if (contains_half) {
    out.hi = den_;
  } else {
    mpz_mul_2exp(out.hi.get_mpz_t(), dmax.get_mpz_t(), 1);
  }
}

void DistanceKernel::offset(const Integer& x, const Integer& p, Integer& lo, Integer& hi) const {
  Integer pd = p * den_;
  if (sgn(x) >= 0) {
    lo = x * lower_ - pd;
    hi = x * upper_ - pd;
  } else {
    lo = x * upper_ - pd;
    hi = x * lower_ - pd;
  }
}

DistanceInterval DistanceKernel::to_interval(const Value& v) const {
  Integer two_d = den_ * 2;
  DistanceInterval out;
  out.lo = Rational(v.lo, two_d);
  out.hi = Rational(v.hi, two_d);
  out.lo.canonicalize();
  out.hi.canonicalize();
  return out;
}

}  // namespace dioph
