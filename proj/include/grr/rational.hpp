#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace grr {

using Int = boost::multiprecision::cpp_int;

// Exact rational coefficients. cpp_rational keeps the canonical form the
// engine relies on: gcd(|num|, den) = 1 and den > 0.
using Rational = boost::multiprecision::cpp_rational;

Int factorial(unsigned n);
Int binomial(unsigned n, unsigned k);

// C(x + n, n) as a polynomial in x, evaluated at a rational point; this is
// the usual extension of the binomial coefficient to negative arguments.
Rational binomial_poly(const Rational& x, unsigned n);

std::string rat_to_string(const Rational& q);
std::string rat_to_latex(const Rational& q);

}  // namespace grr
