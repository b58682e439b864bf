#pragma once

#include "grr/rational.hpp"

#include <cstddef>
#include <vector>

namespace grr {

// Coefficient list of a univariate power series, index = exponent.
using Series = std::vector<Rational>;

Series series_exp(std::size_t n);                 // e^x
Series series_exp_scaled(const Rational& a, std::size_t n);  // e^{a x}
Series series_log1p(std::size_t n);               // log(1 + x)
Series series_expm1_over_x(std::size_t n);        // (e^x - 1)/x
Series series_todd_inverse(std::size_t n);        // (1 - e^{-x})/x
Series series_todd(std::size_t n);                // x/(1 - e^{-x})

Series series_mul(const Series& a, const Series& b, std::size_t n);
Series series_inverse(const Series& a);           // needs a[0] != 0

}  // namespace grr
