#ifndef SOFICLAB_RATIONAL_HPP
#define SOFICLAB_RATIONAL_HPP

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace soficlab {

using Rational = mpq_class;
using BigInt = mpz_class;

/// Parses "num/den", "num", or a finite decimal such as "0.25". The result is
/// canonical (gcd 1, positive denominator).
Rational parse_rational(std::string_view text);

/// Canonical text form: "n/d", or "n" when the denominator is 1.
std::string to_string(const Rational& q);
std::string to_string(const BigInt& z);

inline double to_double(const Rational& q) { return q.get_d(); }

}  // namespace soficlab

#endif
