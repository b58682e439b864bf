#include "grr/series.hpp"

#include "grr/errors.hpp"

namespace grr {

Series series_exp(std::size_t n) {
    Series s(n);
    Rational c = 1;
    for (std::size_t k = 0; k < n; ++k) {
        s[k] = c;
        c /= int(k + 1);
    }
    return s;
}

Series series_exp_scaled(const Rational& a, std::size_t n) {
    Series s(n);
    Rational c = 1;
    for (std::size_t k = 0; k < n; ++k) {
        s[k] = c;
        c = c * a / int(k + 1);
    }
    return s;
}

Series series_log1p(std::size_t n) {
    Series s(n, 0);
    for (std::size_t k = 1; k < n; ++k) {
        s[k] = Rational(k % 2 ? 1 : -1, k);
    }
    return s;
}

Series series_expm1_over_x(std::size_t n) {
    // (e^x - 1)/x = sum x^k/(k+1)!
    Series s(n);
    for (std::size_t k = 0; k < n; ++k) s[k] = Rational(1, factorial(unsigned(k + 1)));
    return s;
}

Series series_todd_inverse(std::size_t n) {
    // (1 - e^{-x})/x = sum (-1)^k x^k/(k+1)!
    Series s(n);
    for (std::size_t k = 0; k < n; ++k) {
        s[k] = Rational(k % 2 ? -1 : 1, factorial(unsigned(k + 1)));
    }
    return s;
}

Series series_todd(std::size_t n) { return series_inverse(series_todd_inverse(n)); }

Series series_mul(const Series& a, const Series& b, std::size_t n) {
    Series s(n, 0);
    for (std::size_t i = 0; i < a.size() && i < n; ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size() && i + j < n; ++j) s[i + j] += a[i] * b[j];
    }
    return s;
}

Series series_inverse(const Series& a) {
    if (a.empty() || a[0] == 0) fail(Errc::NotAUnit, "series has zero constant term");
    std::size_t n = a.size();
    Series b(n, 0);
    b[0] = 1 / a[0];
    for (std::size_t k = 1; k < n; ++k) {
        // coefficient of x^k in a*b must vanish
        Rational acc = 0;
        for (std::size_t i = 1; i <= k; ++i) {
            if (i < a.size()) acc += a[i] * b[k - i];
        }
        b[k] = -acc / a[0];
    }
    return b;
}

}  // namespace grr
