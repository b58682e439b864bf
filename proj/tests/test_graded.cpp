#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "grr/graded.hpp"

#include <random>

using namespace grr;

namespace {

RingPtr p2_ring() {
    // A(P^2) = Q[h]/(h^3), truncated at degree 4
    return RingPresentation::make({{"h", 2}}, 4, {{{3}, {}}});
}

RingPtr p1_ring() { return RingPresentation::make({{"h", 2}}, 2, {{{2}, {}}}); }

GradedElement h_of(const RingPtr& r) { return GradedElement::generator(r, "h"); }

// independent long-division oracle: solves q * a = b coefficientwise
Series divide_series_oracle(const Series& b, const Series& a, std::size_t n) {
    REQUIRE(a[0] != 0);
    Series q(n, 0);
    for (std::size_t k = 0; k < n; ++k) {
        Rational acc = k < b.size() ? b[k] : Rational(0);
        for (std::size_t i = 1; i <= k; ++i) {
            if (i < a.size()) acc -= a[i] * q[k - i];
        }
        q[k] = acc / a[0];
    }
    return q;
}

GradedElement random_element(const RingPtr& r, std::mt19937& rng) {
    std::uniform_int_distribution<int> coef(-4, 4);
    std::map<Exponents, Rational> terms;
    for (const auto& m : r->basis()) {
        int c = coef(rng);
        if (c != 0) terms[m] = Rational(c, 1 + (unsigned(coef(rng)) & 1));
    }
    return GradedElement::from_terms(r, terms);
}

}  // namespace

TEST_CASE("projective space presentation and basic arithmetic") {
    auto r = p2_ring();
    auto h = h_of(r);
    auto one = GradedElement::constant(r, 1);

    auto a = (one + h) * (one + h);
    CHECK(a == one + 2 * h + h * h);

    auto b = (one + h).pow(4);
    CHECK(b == one + 4 * h + 6 * (h * h));  // h^3, h^4 truncated

    auto c = one + 2 * h + 6 * (h * h);
    CHECK(c.degree_part(4) == 6 * (h * h));
    CHECK(c.degree_part(0) == one);
    CHECK(c.degree0() == 1);
}

TEST_CASE("point presentation") {
    auto r = RingPresentation::make({}, 0, {});
    auto one = GradedElement::constant(r, 1);
    CHECK(r->basis().size() == 1);
    CHECK((one + one).degree0() == 2);
}

TEST_CASE("under-determined presentation is rejected") {
    // two degree-2 generators on a curve: the expected rank-2 basis {1, h}
    // is not reached because nothing rewrites xi
    std::vector<Exponents> expected = {{0, 0}, {1, 0}};
    CHECK_THROWS_AS(RingPresentation::make({{"h", 2}, {"xi", 2}}, 2, {{{2, 0}, {}}}, expected),
                    Error);
    try {
        RingPresentation::make({{"h", 2}, {"xi", 2}}, 2, {{{2, 0}, {}}}, expected);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::MissingNormalForm);
    }
}

TEST_CASE("rule validation") {
    SUBCASE("non-homogeneous rhs") {
        try {
            RingPresentation::make({{"h", 2}}, 4, {{{2}, {{{1}, Rational(1)}}}});
            FAIL("expected DegreeMismatch");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::DegreeMismatch);
        }
    }
    SUBCASE("rhs not smaller in the monomial order") {
        try {
            RingPresentation::make({{"h", 2}}, 4, {{{1}, {{{1}, Rational(2)}}}});
            FAIL("expected NonTerminatingRules");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::NonTerminatingRules);
        }
    }
    SUBCASE("two rules with different normal forms") {
        // a^2 -> a*b and a^2 -> b^2 disagree
        try {
            RingPresentation::make({{"a", 2}, {"b", 2}}, 4,
                                   {{{2, 0}, {{{1, 1}, Rational(1)}}},
                                    {{2, 0}, {{{0, 2}, Rational(1)}}}});
            FAIL("expected NonConfluentRules");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::NonConfluentRules);
        }
    }
}

TEST_CASE("apply_series") {
    auto r2 = p2_ring();
    auto h2 = h_of(r2);
    auto one2 = GradedElement::constant(r2, 1);

    SUBCASE("exponential on P^2") {
        auto e = apply_series(series_exp(4), h2);
        CHECK(e == one2 + h2 + Rational(1, 2) * (h2 * h2));
        CHECK(exp_of(h2) == e);
    }
    SUBCASE("todd series from long-division oracle") {
        // oracle: x / (1 - e^{-x}) by explicit division
        Series denom = series_todd_inverse(6);
        Series num(6, 0);
        num[0] = 1;  // dividing x by (1-e^{-x}) = dividing 1 by (1-e^{-x})/x
        Series oracle = divide_series_oracle(num, denom, 6);
        CHECK(oracle == series_todd(6));
        // frozen expansion: 1 + x/2 + x^2/12 + 0 - x^4/720 + 0
        CHECK(oracle[0] == 1);
        CHECK(oracle[1] == Rational(1, 2));
        CHECK(oracle[2] == Rational(1, 12));
        CHECK(oracle[3] == 0);
        CHECK(oracle[4] == Rational(-1, 720));

        auto td = apply_series(series_todd(3), h2);
        CHECK(td == one2 + Rational(1, 2) * h2 + Rational(1, 12) * (h2 * h2));
    }
    SUBCASE("inverse todd series on P^1") {
        auto r1 = p1_ring();
        auto h1 = h_of(r1);
        auto e = apply_series(series_todd_inverse(2), h1);
        CHECK(e == GradedElement::constant(r1, 1) - Rational(1, 2) * h1);
    }
    SUBCASE("non-nilpotent argument") {
        CHECK_THROWS_AS(apply_series(series_exp(3), one2 + h2), Error);
    }
}

TEST_CASE("invert_unit") {
    auto r = p2_ring();
    auto h = h_of(r);
    auto one = GradedElement::constant(r, 1);

    CHECK(invert_unit(one + h) == one - h + h * h);
    CHECK(invert_unit(GradedElement::constant(r, 2)) == GradedElement::constant(r, Rational(1, 2)));
    CHECK_THROWS_AS(invert_unit(h), Error);

    std::mt19937 rng(7);
    for (int i = 0; i < 20; ++i) {
        auto a = random_element(r, rng) + one;  // force a unit
        if (a.degree0() == 0) continue;
        CHECK(invert_unit(a) * a == one);
    }
}

TEST_CASE("ring axioms on random elements") {
    auto bundle_like = RingPresentation::make(
        {{"z", 2}, {"h", 2}}, 6,
        {{{0, 3}, {}}, {{2, 0}, {{{1, 1}, Rational(-2)}, {{0, 2}, Rational(-1)}}}});
    std::mt19937 rng(11);
    for (int i = 0; i < 25; ++i) {
        auto a = random_element(bundle_like, rng);
        auto b = random_element(bundle_like, rng);
        auto c = random_element(bundle_like, rng);
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a * b == b * a);
        CHECK((a * b) * c == a * (b * c));
    }
}

TEST_CASE("exp and log are inverse on nilpotents") {
    auto r = p2_ring();
    auto h = h_of(r);
    std::mt19937 rng(3);
    for (int i = 0; i < 10; ++i) {
        auto x = random_element(r, rng);
        x = x - GradedElement::constant(r, x.degree0());  // strip degree 0
        auto lg = apply_series(series_log1p(4), x);
        CHECK(apply_series(series_exp(4), lg) == GradedElement::constant(r, 1) + x);
    }
}

TEST_CASE("truncation consistency of products") {
    auto r = p2_ring();
    std::mt19937 rng(5);
    for (int i = 0; i < 10; ++i) {
        auto a = random_element(r, rng);
        auto b = random_element(r, rng);
        for (int k = 0; k <= 4; k += 2) {
            auto direct = (a * b).degree_part(k);
            auto split = GradedElement::zero(r);
            for (int j = 0; j <= k; j += 2) split = split + a.degree_part(j) * b.degree_part(k - j);
            CHECK(direct == split);
        }
    }
}

TEST_CASE("normal forms are order-independent") {
    // multiplying in different association orders exercises different
    // reduction sequences; results must agree monomial by monomial
    auto r = RingPresentation::make(
        {{"z", 2}, {"h", 2}}, 8,
        {{{0, 5}, {}}, {{3, 0}, {{{2, 1}, Rational(-1)}, {{1, 2}, Rational(-3)}}}});
    auto z = GradedElement::generator(r, "z");
    auto h = GradedElement::generator(r, "h");
    auto p = ((z * z) * (z * h)) * z;
    auto q = z * (z * ((z * z) * h));
    CHECK(p == q);
}

TEST_CASE("rendering") {
    auto r = p2_ring();
    auto h = h_of(r);
    auto e = GradedElement::constant(r, 1) - Rational(3, 2) * h + 6 * (h * h);
    CHECK(e.str() == "1 - 3/2*h + 6*h^2");
    CHECK((-e).str() == "-1 + 3/2*h - 6*h^2");
    CHECK(GradedElement::zero(r).str() == "0");
    CHECK(e.latex() == "1 - \\tfrac{3}{2} h + 6 h^{2}");
}
