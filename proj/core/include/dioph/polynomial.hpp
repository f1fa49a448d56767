#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "dioph/bigint.hpp"
#include "dioph/certified.hpp"

namespace dioph {

using Monomial = std::vector<unsigned>;
using Box = std::vector<RationalInterval>;

// Polynomial in k variables with rational coefficients, stored sparsely.
class MultiPolynomial {
 public:
  explicit MultiPolynomial(std::size_t variables = 1);
  static MultiPolynomial from_terms(std::size_t variables,
                                    const std::vector<std::pair<Monomial, Rational>>& terms);

  void add_term(const Monomial& exponents, const Rational& coefficient);

  std::size_t variables() const { return k_; }
  const std::map<Monomial, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool has_integer_coefficients() const;

  Rational evaluate(std::span<const Rational> point) const;
  RationalInterval evaluate(std::span<const RationalInterval> box) const;
  MultiPolynomial derivative(std::size_t variable) const;
  // Multiplied by the lcm of the coefficient denominators.
  MultiPolynomial integer_cleared() const;

  bool operator==(const MultiPolynomial& other) const = default;

 private:
  std::size_t k_;
  std::map<Monomial, Rational> terms_;
};

struct Degrees {
  unsigned absolute = 0;                 // r
  std::vector<unsigned> per_variable;    // r_j
  unsigned refined = 0;                  // sum of r_j
};

// Throws InvalidArgument for constant (including zero) polynomials.
Degrees degrees(const MultiPolynomial& p);

}  // namespace dioph
