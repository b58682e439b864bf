#pragma once

#include "grr/errors.hpp"
#include "grr/rational.hpp"
#include "grr/series.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace grr {

// Exponent vector over the generators of one presentation. The monomial
// order used everywhere is graded-lexicographic: weighted degree first,
// then plain lexicographic comparison in generator declaration order.
using Exponents = std::vector<unsigned>;

struct Generator {
    std::string name;
    int degree;  // cohomological degree; even and >= 2
};

// A rewrite rule lhs -> rhs. Degree-homogeneous, and every rhs monomial is
// strictly smaller than lhs in the monomial order, so rewriting terminates.
struct RewriteRule {
    Exponents lhs;
    std::map<Exponents, Rational> rhs;
};

class RingPresentation;
using RingPtr = std::shared_ptr<const RingPresentation>;

class GradedElement;

/**
 * \brief Presentation of a truncated graded-commutative Q-algebra.
 *
 * Generators carry even degrees, relations are monomial rewrite rules, and
 * everything above `truncation` is cut off. Construction validates that the
 * rules terminate and are confluent by reducing every monomial up to the
 * truncation degree along every one-step reduction.
 */
class RingPresentation : public std::enable_shared_from_this<RingPresentation> {
public:
    static RingPtr make(std::vector<Generator> gens, int truncation,
                        std::vector<RewriteRule> rules);

    // Same, but additionally demands that the irreducible monomials match
    // `expected_basis` exactly; used by space constructors that know their
    // Leray-Hirsch basis. Throws MissingNormalForm on mismatch.
    static RingPtr make(std::vector<Generator> gens, int truncation,
                        std::vector<RewriteRule> rules,
                        std::vector<Exponents> expected_basis);

    int truncation() const { return truncation_; }
    std::size_t n_gens() const { return gens_.size(); }
    const Generator& gen(std::size_t i) const { return gens_[i]; }
    const std::vector<Generator>& gens() const { return gens_; }
    int find_gen(const std::string& name) const;  // -1 if absent

    int degree_of(const Exponents& m) const;
    const std::vector<RewriteRule>& rules() const { return rules_; }
    // All irreducible monomials of degree <= truncation, in graded-lex order.
    const std::vector<Exponents>& basis() const { return basis_; }

    // Reduction of a monomial of degree <= truncation: nullptr when the
    // monomial is already in normal form, otherwise its normal form (which
    // may be the empty map when it reduces to zero).
    const std::map<Exponents, Rational>* reduction(const Exponents& m) const;

private:
    RingPresentation() = default;
    void validate_and_close(const std::vector<Exponents>* expected_basis);

    std::vector<Generator> gens_;
    int truncation_ = 0;
    std::vector<RewriteRule> rules_;
    std::map<Exponents, std::map<Exponents, Rational>> nf_;  // reducible monomials only
    std::vector<Exponents> basis_;
};

/**
 * \brief An element of a presented ring: normal-form monomials with exact
 * rational coefficients, truncated above the ring's truncation degree.
 *
 * Immutable value type; all operations return new elements.
 */
class GradedElement {
public:
    GradedElement() = default;  // detached zero; owner() == nullptr

    static GradedElement zero(const RingPtr& r);
    static GradedElement constant(const RingPtr& r, const Rational& q);
    static GradedElement generator(const RingPtr& r, std::size_t i);
    static GradedElement generator(const RingPtr& r, const std::string& name);
    // Reduces the given terms to normal form.
    static GradedElement from_terms(const RingPtr& r, std::map<Exponents, Rational> terms);

    const RingPtr& owner() const { return ring_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<Exponents, Rational>& terms() const { return terms_; }

    Rational coeff(const Exponents& m) const;
    Rational degree0() const;  // coefficient of the empty monomial
    GradedElement degree_part(int k) const;
    int max_degree() const;  // -1 for zero

    GradedElement operator-() const;
    GradedElement pow(unsigned k) const;

    bool operator==(const GradedElement& b) const;
    bool operator!=(const GradedElement& b) const { return !(*this == b); }

    std::string str() const;
    std::string latex() const;

    friend GradedElement operator+(const GradedElement& a, const GradedElement& b);
    friend GradedElement operator-(const GradedElement& a, const GradedElement& b);
    friend GradedElement operator*(const GradedElement& a, const GradedElement& b);
    friend GradedElement operator*(const Rational& q, const GradedElement& a);

private:
    // reduces one monomial (degree already <= truncation) and accumulates
    void add_reduced(const Exponents& m, const Rational& c);

    RingPtr ring_;
    std::map<Exponents, Rational> terms_;
};

// Sum_k coeffs[k] x^k for nilpotent x (zero degree-0 part, NotNilpotent
// otherwise). Finite because x^k dies above the truncation degree.
GradedElement apply_series(const Series& coeffs, const GradedElement& x);

// Multiplicative inverse of a unit (nonzero degree-0 part), exact.
GradedElement invert_unit(const GradedElement& a);

// e^x for nilpotent x; the series is sized from the owner's truncation.
GradedElement exp_of(const GradedElement& x);

// Ring morphism fixed by generator images: substitutes images[i] for
// generator i and reduces in the target ring. Images must live in `target`
// and match the source generator degrees (DegreeMismatch otherwise).
GradedElement apply_gen_images(const GradedElement& x, const RingPtr& target,
                               const std::vector<GradedElement>& images);

}  // namespace grr
