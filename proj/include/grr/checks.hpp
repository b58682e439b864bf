#pragma once

#include "grr/report.hpp"
#include "grr/snc.hpp"

#include <optional>

namespace grr {

struct CheckOptions {
    // Deliberately flips the duality convention of the check's Todd or
    // lambda factor so the suite can assert that wrong inputs fail.
    bool perturb = false;
};

CheckPart part_from(const std::string& label, const Cls& lhs, const Cls& rhs);
CheckPart part_from(const std::string& label, const GradedElement& lhs, const GradedElement& rhs);
CheckPart part_rational(const std::string& label, const Rational& lhs, const Rational& rhs);

// Whitney: c(E + F) = c(E) c(F) and ch(E + F) = ch(E) + ch(F).
CheckReport check_whitney(const BundleClass& E, const BundleClass& F,
                          const CheckOptions& opt = {});

// Auto-intersection: i^* i_* alpha = alpha c_d(N).
CheckReport check_self_intersection(const Immersion& Y, const Cls& alpha,
                                    const CheckOptions& opt = {});

// integral_{P^n} e^{dh} td(T) = C(n+d, n), polynomially extended in d.
CheckReport check_hrr_projective_space(int n, int d, const CheckOptions& opt = {});

// An immersion scenario with an independent left-hand side for GRR; for
// linear subspaces the Koszul resolution gives ch(i_! O(d)) = e^{dh}(1-e^{-h})^c.
struct GrrScenario {
    Immersion imm;
    KClass payload;
    std::optional<GradedElement> independent_lhs;
    std::string label;
};
GrrScenario linear_grr_scenario(int n, int k, int twist);

// ch(i_! y) = i_*(ch(y) td(N)^{-1}); skipped when no independent route to
// the left side exists.
CheckReport check_grr_immersion(const GrrScenario& s, const CheckOptions& opt = {});

// p^* i_* alpha = j_*(q^* alpha c_{d-1}(F^*)) on a blowup.
CheckReport check_excess_deligne(const BlowupResult& B, const Immersion& center,
                                 const Cls& alpha_on_center, const CheckOptions& opt = {});

// The K-theory self-intersection and excess formulas at ch level, on the
// linear scenario (i) and its blowup (ii).
CheckReport check_k_theory_formulas(int n, int k, int twist = 0, const CheckOptions& opt = {});

// Deformation to the normal cone along Y in X, carrying F on X and Eb on Y:
// the descended class restricts correctly to the exceptional divisor, to the
// strict transform, and to the fibers (the Whitney conclusion).
CheckReport check_deformation_lemma(const Space& X, const Immersion& Y, const BundleClass& F,
                                    const BundleClass& Eb, const CheckOptions& opt = {});

// Divisor pullback through a blowup, on the built-in family: P^2 blown up at
// a point lying on a line D, with alpha = a + b h_D on D.
struct DivisorPullbackScenario {
    int n = 2;
    bool center_on_divisor = true;
};
CheckReport check_divisor_pullback(const DivisorPullbackScenario& sc, const Rational& a,
                                   const Rational& b);

// mu functional equation, conditions (a)-(c) of the u/zeta construction and
// the combination identity on one configuration.
CheckReport check_snc_suite(const SNCDivisor& D, const CheckOptions& opt = {});

// ch(lambda_{-1} E) = c_r(E^*) td(E^*)^{-1}.
CheckReport check_lambda_identity(const BundleClass& E, const CheckOptions& opt = {});

// Blowup bookkeeping: p_* p^* = id on the monomial basis, slotwise
// injectivity, and the planted integral of e^2 on the point-in-P^2 case.
CheckReport check_blowup_sanity(const Space& X, const Immersion& center,
                                const CheckOptions& opt = {});

}  // namespace grr
