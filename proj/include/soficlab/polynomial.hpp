#ifndef SOFICLAB_POLYNOMIAL_HPP
#define SOFICLAB_POLYNOMIAL_HPP

#include <string>
#include <vector>

#include "soficlab/matrix.hpp"

namespace soficlab {

/// Polynomial with rational coefficients, lowest degree first. The zero
/// polynomial has no coefficients.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Rational> coeffs);

  /// Product of (t - r) over the given roots.
  static Polynomial from_roots(const std::vector<Rational>& roots);

  const std::vector<Rational>& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  Rational operator()(const Rational& t) const;

  /// Divides out every factor of t.
  Polynomial without_zero_roots() const;
  /// Remainder of *this modulo divisor (divisor must be nonzero).
  Polynomial mod(const Polynomial& divisor) const;
  bool divides(const Polynomial& other) const;

  std::string to_string() const;

  friend bool operator==(const Polynomial&, const Polynomial&) = default;
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

/// det(tI - A), computed by the Faddeev-LeVerrier recurrence.
Polynomial characteristic_polynomial(const RMatrix& a);

}  // namespace soficlab

#endif
