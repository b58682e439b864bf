#pragma once

#include "grr/errors.hpp"
#include "grr/rational.hpp"
#include "grr/report.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace grr {

using LocalVars = std::shared_ptr<const std::vector<std::string>>;
using LocalMono = std::vector<unsigned>;

LocalVars make_local_vars(std::vector<std::string> names);

// Effectively infinite precision for exact polynomial data.
inline constexpr int kExactPrecision = 1 << 20;

/**
 * \brief A truncated multivariate power series over Q.
 *
 * `precision` is the largest total degree whose coefficients are certified;
 * arithmetic propagates it the way interval arithmetic propagates widths.
 * A series is a unit iff its constant term is nonzero.
 */
class LocalSeries {
public:
    LocalSeries() = default;

    static LocalSeries zero(const LocalVars& vars, int precision = kExactPrecision);
    static LocalSeries constant(const LocalVars& vars, const Rational& q,
                                int precision = kExactPrecision);
    static LocalSeries monomial(const LocalVars& vars, const LocalMono& m, const Rational& c,
                                int precision = kExactPrecision);
    static LocalSeries from_terms(const LocalVars& vars, std::map<LocalMono, Rational> terms,
                                  int precision = kExactPrecision);

    const LocalVars& vars() const { return vars_; }
    int precision() const { return precision_; }
    const std::map<LocalMono, Rational>& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }  // up to the precision
    bool is_unit() const;
    int order() const;  // smallest total degree present; kExactPrecision when zero
    Rational coeff(const LocalMono& m) const;

    LocalSeries truncated(int precision) const;
    LocalSeries operator-() const;
    LocalSeries inverse() const;  // NotAUnit unless the constant term is nonzero
    bool divisible_by_monomial(const LocalMono& m) const;
    LocalSeries divided_by_monomial(const LocalMono& m) const;  // NonDivisible on failure

    bool operator==(const LocalSeries& b) const;

    std::string str() const;

    friend LocalSeries operator+(const LocalSeries& a, const LocalSeries& b);
    friend LocalSeries operator-(const LocalSeries& a, const LocalSeries& b);
    friend LocalSeries operator*(const LocalSeries& a, const LocalSeries& b);
    friend LocalSeries operator*(const Rational& q, const LocalSeries& a);

private:
    LocalVars vars_;
    std::map<LocalMono, Rational> terms_;
    int precision_ = kExactPrecision;
};

struct LocalMatrix {
    LocalVars vars;
    int size = 0;
    std::vector<LocalSeries> entries;  // row-major

    static LocalMatrix identity(const LocalVars& vars, int n);
    const LocalSeries& at(int i, int j) const { return entries[std::size_t(i * size + j)]; }
    LocalSeries& at(int i, int j) { return entries[std::size_t(i * size + j)]; }
    int precision() const;  // min over entries
};

LocalSeries det(const LocalMatrix& M);
LocalMatrix mat_mul(const LocalMatrix& A, const LocalMatrix& B);

// All k x k minor determinants of M.
std::vector<LocalSeries> fitting_minors(const LocalMatrix& M, int k);

// Decides whether the span of `gens` is the principal monomial ideal cut out
// by the componentwise-minimal exponent vector; returns that monomial, or
// nullopt when no generator is the candidate times a unit.
std::optional<LocalMono> monomial_principality(const std::vector<LocalSeries>& gens);

struct SmithResult {
    LocalMatrix U, V;                 // unit determinants
    std::vector<LocalMono> diagonal;  // d_k = phi_1...phi_k, monic monomials
    std::vector<LocalMono> quotients; // phi_k = d_k / d_{k-1}
    int certified_precision = 0;
};

// Gauss-elimination diagonalization under the normal-crossing hypothesis:
// every Fitting ideal of M must pass monomial_principality
// (PrincipalityViolation names the failing level otherwise). Produces
// U diag V = M to the certified precision with d_k | d_{k+1}.
SmithResult diagonalize(const LocalMatrix& M);

// Independent certificate check: recomputes U diag V - M and the unit-ness
// of det U and det V at the common precision.
CheckReport verify_smith(const LocalMatrix& M, const SmithResult& R);

// d_k = gen_k / gen_{k-1} from per-level Fitting generators, without any
// elimination; the intrinsic divisor data.
std::vector<LocalMono> divisor_sequence(const std::vector<std::vector<LocalSeries>>& fitting_gens);

}  // namespace grr
