#include "grr/rational.hpp"

#include <sstream>

namespace grr {

Int factorial(unsigned n) {
    Int r = 1;
    for (unsigned i = 2; i <= n; ++i) r *= i;
    return r;
}

Int binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    Int r = 1;
    for (unsigned i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

Rational binomial_poly(const Rational& x, unsigned n) {
    Rational r = 1;
    for (unsigned i = 1; i <= n; ++i) r *= (x + i) / i;
    return r;
}

std::string rat_to_string(const Rational& q) {
    std::ostringstream os;
    os << q;
    return os.str();
}

std::string rat_to_latex(const Rational& q) {
    if (denominator(q) == 1) return rat_to_string(q);
    std::ostringstream os;
    Int num = numerator(q);
    if (num < 0) {
        os << "-";
        num = -num;
    }
    os << "\\tfrac{" << num << "}{" << denominator(q) << "}";
    return os.str();
}

}  // namespace grr
