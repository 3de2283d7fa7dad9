#include "soficlab/polynomial.hpp"

#include "soficlab/error.hpp"

namespace soficlab {

Polynomial::Polynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

void Polynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Polynomial Polynomial::from_roots(const std::vector<Rational>& roots) {
  Polynomial p({Rational(1)});
  for (const auto& r : roots) p = p * Polynomial({-r, Rational(1)});
  return p;
}

Rational Polynomial::operator()(const Rational& t) const {
  Rational acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

Polynomial Polynomial::without_zero_roots() const {
  std::size_t k = 0;
  while (k < coeffs_.size() && coeffs_[k] == 0) ++k;
  return Polynomial(std::vector<Rational>(coeffs_.begin() + static_cast<std::ptrdiff_t>(k), coeffs_.end()));
}

Polynomial Polynomial::mod(const Polynomial& divisor) const {
  if (divisor.is_zero()) throw InternalError("polynomial division by zero");
  std::vector<Rational> r = coeffs_;
  const auto& d = divisor.coeffs_;
  const std::size_t dn = d.size() - 1;
  while (r.size() > dn && !r.empty()) {
    if (r.back() == 0) {
      r.pop_back();
      continue;
    }
    Rational f = r.back() / d.back();
    std::size_t shift = r.size() - 1 - dn;
    for (std::size_t i = 0; i <= dn; ++i) r[shift + i] -= f * d[i];
    r.pop_back();
  }
  return Polynomial(std::move(r));
}

bool Polynomial::divides(const Polynomial& other) const { return other.mod(*this).is_zero(); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return Polynomial();
  std::vector<Rational> c(a.coeffs_.size() + b.coeffs_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return Polynomial(std::move(c));
}

std::string Polynomial::to_string() const {
  if (coeffs_.empty()) return "0";
  std::string out;
  for (int k = degree(); k >= 0; --k) {
    const Rational& c = coeffs_[static_cast<std::size_t>(k)];
    if (c == 0) continue;
    Rational mag = abs(c);
    if (out.empty()) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    bool unit = mag == 1 && k > 0;
    if (!unit) out += soficlab::to_string(Rational(mag));
    if (k > 0) {
      if (!unit) out += "*";
      out += "t";
      if (k > 1) out += "^" + std::to_string(k);
    }
  }
  return out;
}

Polynomial characteristic_polynomial(const RMatrix& a) {
  if (!a.square()) throw InternalError("characteristic_polynomial: matrix not square");
  const std::size_t n = a.rows();
  std::vector<Rational> c(n + 1, Rational(0));
  c[n] = 1;
  RMatrix m(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    m = a * m;
    for (std::size_t i = 0; i < n; ++i) m(i, i) += c[n - k + 1];
    RMatrix am = a * m;
    Rational tr = 0;
    for (std::size_t i = 0; i < n; ++i) tr += am(i, i);
    c[n - k] = -tr / static_cast<long>(k);
  }
  return Polynomial(std::move(c));
}

}  // namespace soficlab
