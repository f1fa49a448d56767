#include "dioph/polynomial.hpp"

#include <algorithm>

#include "dioph/error.hpp"

namespace dioph {

MultiPolynomial::MultiPolynomial(std::size_t variables) : k_(variables) {
  if (variables < 1) throw InvalidArgument("a polynomial needs at least one variable");
}

MultiPolynomial MultiPolynomial::from_terms(std::size_t variables,
                                            const std::vector<std::pair<Monomial, Rational>>& terms) {
  MultiPolynomial p(variables);
  for (const auto& [m, c] : terms) p.add_term(m, c);
  return p;
}

void MultiPolynomial::add_term(const Monomial& exponents, const Rational& coefficient) {
  if (exponents.size() != k_) throw InvalidArgument("monomial has the wrong number of exponents");
  Rational& c = terms_[exponents];
  c += coefficient;
  if (sgn(c) == 0) terms_.erase(exponents);
}

bool MultiPolynomial::has_integer_coefficients() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.second.get_den() == 1; });
}

Rational MultiPolynomial::evaluate(std::span<const Rational> point) const {
  if (point.size() != k_) throw InvalidArgument("point has the wrong dimension");
  Rational sum = 0;
  for (const auto& [m, c] : terms_) {
    Rational term = c;
    for (std::size_t j = 0; j < k_; ++j) {
      if (m[j] > 0) term *= rpow(point[j], m[j]);
    }
    sum += term;
  }
  return sum;
}

RationalInterval MultiPolynomial::evaluate(std::span<const RationalInterval> box) const {
  if (box.size() != k_) throw InvalidArgument("box has the wrong dimension");
  RationalInterval sum{0, 0};
  for (const auto& [m, c] : terms_) {
    RationalInterval term{1, 1};
    for (std::size_t j = 0; j < k_; ++j) {
      if (m[j] > 0) term = term * pow(box[j], m[j]);
    }
    sum = sum + c * term;
  }
  return sum;
}

MultiPolynomial MultiPolynomial::derivative(std::size_t variable) const {
  if (variable >= k_) throw InvalidArgument("derivative variable out of range");
  MultiPolynomial d(k_);
  for (const auto& [m, c] : terms_) {
    if (m[variable] == 0) continue;
    Monomial e = m;
    e[variable] -= 1;
    d.add_term(e, c * m[variable]);
  }
  return d;
}

MultiPolynomial MultiPolynomial::integer_cleared() const {
  Integer l = 1;
  for (const auto& [m, c] : terms_) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  MultiPolynomial out(k_);
  for (const auto& [m, c] : terms_) out.add_term(m, c * l);
  return out;
}

Degrees degrees(const MultiPolynomial& p) {
  Degrees d;
  d.per_variable.assign(p.variables(), 0);
  for (const auto& [m, c] : p.terms()) {
    unsigned total = 0;
    for (std::size_t j = 0; j < m.size(); ++j) {
      total += m[j];
      d.per_variable[j] = std::max(d.per_variable[j], m[j]);
    }
    d.absolute = std::max(d.absolute, total);
  }
  if (d.absolute == 0) throw InvalidArgument("polynomial is constant; it defines no hypersurface");
  for (unsigned r : d.per_variable) d.refined += r;
  return d;
}

}  // namespace dioph
