#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "grr/spaces.hpp"

#include <random>

using namespace grr;

namespace {

GradedElement random_element(const RingPtr& r, std::mt19937& rng) {
    std::uniform_int_distribution<int> coef(-3, 3);
    std::map<Exponents, Rational> terms;
    for (const auto& m : r->basis()) {
        int c = coef(rng);
        if (c != 0) terms[m] = c;
    }
    return GradedElement::from_terms(r, terms);
}

Cls random_cls(const Space& X, std::mt19937& rng) {
    if (!X->is_blowup()) return Cls::of(X, random_element(space_ring(X), rng));
    const BlowupData& B = *X->blow;
    std::vector<GradedElement> exc;
    for (int k = 0; k + 1 < B.d; ++k) exc.push_back(random_element(space_ring(B.center.sub), rng));
    return Cls::of_blowup(X, random_element(space_ring(B.base), rng), std::move(exc));
}

void check_immersion_laws(const Immersion& imm, std::mt19937& rng, int reps = 5) {
    // i_*(1) is the cycle class
    CHECK(imm.pushforward(one(imm.sub)) == imm.cycle_class);
    for (int i = 0; i < reps; ++i) {
        Cls x = random_cls(imm.ambient, rng);
        Cls y = random_cls(imm.sub, rng);
        // projection formula
        CHECK(imm.pushforward(imm.restrict_map(x) * y) == x * imm.pushforward(y));
        // self-intersection
        Cls lhs = imm.restrict_map(imm.pushforward(y));
        Cls rhs = y * Cls::of(imm.sub, imm.normal.c(std::size_t(imm.codim)));
        CHECK(lhs == rhs);
    }
}

}  // namespace

TEST_CASE("point and projective space") {
    auto pt = point();
    CHECK(pt->integral(one(pt)) == 1);

    auto p2 = projective_space(2);
    auto h = GradedElement::generator(space_ring(p2), "h");
    CHECK(p2->integral(Cls::of(p2, h.pow(2))) == 1);
    CHECK(p2->integral(Cls::of(p2, h)) == 0);
    CHECK(h.pow(3).is_zero());

    auto p0 = projective_space(0);
    CHECK(space_ring(p0)->basis().size() == 1);
    CHECK(p0->integral(one(p0)) == 1);
}

TEST_CASE("projective bundle") {
    SUBCASE("trivial bundle over a point is projective space") {
        auto pt = point();
        auto pb = projective_bundle(pt, trivial_bundle(pt, 3));
        CHECK(pb.total->dim == 2);
        CHECK(pb.alpha.pow(3).is_zero());
        CHECK(pb.total->integral(Cls::of(pb.total, pb.alpha.pow(2))) == 1);
    }
    SUBCASE("fiber integration normalization and Grothendieck relation") {
        auto p2 = projective_space(2);
        auto h = GradedElement::generator(space_ring(p2), "h");
        auto E = make_bundle(p2, 2, {2 * h, h * h});
        auto pb = projective_bundle(p2, E);
        CHECK(pb.total->dim == 3);
        // pi_*(alpha^{r-1}) = 1
        CHECK(pb.pi.pushforward(Cls::of(pb.total, pb.alpha)) == one(p2));
        // pi_*(alpha^r) = -c_1(E)
        CHECK(pb.pi.pushforward(Cls::of(pb.total, pb.alpha.pow(2))) == Cls::of(p2, -2 * h));
        // pi_* pi^* x = 0 in positive degree, and fiber integration recovers x
        std::mt19937 rng(2);
        for (int i = 0; i < 5; ++i) {
            auto x = Cls::of(p2, random_element(space_ring(p2), rng));
            auto lifted = pb.pi.pullback(x);
            CHECK(pb.pi.pushforward(lifted * Cls::of(pb.total, pb.alpha)) == x);
            // projection formula
            auto g = random_cls(pb.total, rng);
            CHECK(pb.pi.pushforward(g * lifted) == pb.pi.pushforward(g) * x);
        }
        // Fubini through the bundle integral
        CHECK(pb.total->integral(pb.pi.pullback(Cls::of(p2, h * h)) *
                                 Cls::of(pb.total, pb.alpha)) == 1);
    }
}

TEST_CASE("product with P1") {
    auto p1 = projective_space(1);
    auto pr = product_p1(p1);
    auto h = GradedElement::generator(space_ring(pr.total), "h");
    CHECK(pr.total->integral(Cls::of(pr.total, h * pr.t)) == 1);
    CHECK((pr.t * pr.t).is_zero());
    CHECK(pr.total->integral(Cls::of(pr.total, h)) == 0);

    // fiber immersion: restrict(t) = 0, push(1) = t
    auto i0 = pr.fiber0;
    CHECK(i0.restrict_map(Cls::of(pr.total, pr.t)).poly().is_zero());
    CHECK(i0.pushforward(one(p1)) == Cls::of(pr.total, pr.t));
    std::mt19937 rng(3);
    check_immersion_laws(i0, rng);

    // Fubini
    auto hx = GradedElement::generator(space_ring(p1), "h");
    CHECK(pr.total->integral(pr.pr1.pullback(Cls::of(p1, hx)) * Cls::of(pr.total, pr.t)) == 1);
}

TEST_CASE("linear subspaces") {
    std::mt19937 rng(5);
    SUBCASE("line in P2") {
        auto p2 = projective_space(2);
        auto imm = sub_linear_space(p2, 1);
        auto h = GradedElement::generator(space_ring(p2), "h");
        auto hy = GradedElement::generator(space_ring(imm.sub), "h");
        CHECK(imm.cycle_class == Cls::of(p2, h));
        CHECK(imm.normal.c(1) == hy);
        // restrict o push (1) = c_1(N): the auto-intersection formula
        CHECK(imm.restrict_map(imm.pushforward(one(imm.sub))) == Cls::of(imm.sub, hy));
        check_immersion_laws(imm, rng);
    }
    SUBCASE("point in P2") {
        auto p2 = projective_space(2);
        auto imm = sub_linear_space(p2, 0);
        auto h = GradedElement::generator(space_ring(p2), "h");
        CHECK(imm.cycle_class == Cls::of(p2, h * h));
        CHECK(imm.normal.rank == 2);
        CHECK(imm.normal.chern.empty());  // positive-degree classes die on a point
        check_immersion_laws(imm, rng);
    }
    SUBCASE("all linear immersions up to P4 satisfy the Gysin laws") {
        for (int n = 1; n <= 4; ++n) {
            auto pn = projective_space(n);
            for (int k = 0; k < n; ++k) check_immersion_laws(sub_linear_space(pn, k), rng, 3);
        }
    }
    SUBCASE("bad arguments") {
        auto p2 = projective_space(2);
        CHECK_THROWS_AS(sub_linear_space(p2, 2), Error);
        CHECK_THROWS_AS(sub_linear_space(p2, -1), Error);
    }
}

TEST_CASE("blowup of P2 at a point") {
    auto p2 = projective_space(2);
    auto y = sub_linear_space(p2, 0);
    auto bl = blowup(p2, y);
    auto h = GradedElement::generator(space_ring(p2), "h");

    SUBCASE("integral of e^2 is -1") {
        Cls e = bl.exceptional.cycle_class;
        CHECK(bl.total->integral(e * e) == -1);
    }
    SUBCASE("p_* p^* = id and Fubini") {
        std::mt19937 rng(7);
        for (int i = 0; i < 5; ++i) {
            auto x = Cls::of(p2, random_element(space_ring(p2), rng));
            CHECK(bl.p.pushforward(bl.p.pullback(x)) == x);
            CHECK(bl.total->integral(bl.p.pullback(x)) == p2->integral(x));
        }
    }
    SUBCASE("decomposition is injective slotwise") {
        Cls z = Cls::zero(bl.total);
        CHECK(z.is_zero());
        Cls e = bl.exceptional.cycle_class;
        CHECK(!e.is_zero());
        CHECK(e.base().is_zero());  // purely exceptional
        Cls mixed = bl.p.pullback(Cls::of(p2, h)) - e;
        CHECK(!mixed.is_zero());
        CHECK(mixed.base() == h);
    }
    SUBCASE("commutativity j^* p^* = q^* i^*") {
        std::mt19937 rng(11);
        for (int i = 0; i < 5; ++i) {
            auto x = Cls::of(p2, random_element(space_ring(p2), rng));
            auto lhs = bl.exceptional.restrict_map(bl.p.pullback(x));
            auto rhs = bl.q.pullback(y.restrict_map(x));
            CHECK(lhs == rhs);
        }
    }
    SUBCASE("exceptional immersion laws") {
        std::mt19937 rng(13);
        check_immersion_laws(bl.exceptional, rng);
    }
    SUBCASE("blowup along a divisor is rejected") {
        auto line = sub_linear_space(p2, 1);
        CHECK_THROWS_AS(blowup(p2, line), Error);
    }
}

TEST_CASE("blowups along larger linear centers") {
    std::mt19937 rng(17);
    for (auto [n, k] : std::vector<std::pair<int, int>>{{3, 1}, {3, 0}, {4, 2}, {4, 1}}) {
        auto pn = projective_space(n);
        auto y = sub_linear_space(pn, k);
        auto bl = blowup(pn, y);
        CHECK(bl.total->dim == n);
        check_immersion_laws(bl.exceptional, rng, 3);
        // p_* p^* = id on the h-power basis
        for (int j = 0; j <= n; ++j) {
            auto x = Cls::of(pn, GradedElement::generator(space_ring(pn), "h").pow(unsigned(j)));
            CHECK(bl.p.pushforward(bl.p.pullback(x)) == x);
        }
        // excess consistency: p^* i_* a = j_*(q^* a c_{d-1}(F^*)) with
        // c(F^*) = q^* c(N) (1 + xi)^{-1}
        const BlowupData& B = *bl.total->blow;
        const RingPtr& re = space_ring(B.exc);
        GradedElement cn = GradedElement::constant(re, 1);
        for (std::size_t i = 1; i <= std::size_t(y.codim); ++i) cn = cn + B.q_pull(y.normal.c(i));
        GradedElement cfdual = cn * invert_unit(GradedElement::constant(re, 1) + B.xi);
        GradedElement top = cfdual.degree_part(2 * (y.codim - 1));
        for (int i = 0; i < 3; ++i) {
            auto a = random_element(space_ring(y.sub), rng);
            auto lhs = bl.p.pullback(y.pushforward(Cls::of(y.sub, a)));
            auto rhs = B.push_from_exc(B.q_pull(a) * top, bl.total);
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("composite immersion into the product") {
    auto p1 = projective_space(1);
    auto pr = product_p1(p1);
    auto y = sub_linear_space(p1, 0);
    auto y0 = compose_immersions(pr.fiber0, y);
    CHECK(y0.codim == 2);
    CHECK(y0.normal.rank == 2);
    auto h = GradedElement::generator(space_ring(pr.total), "h");
    CHECK(y0.cycle_class == Cls::of(pr.total, h * pr.t));
    std::mt19937 rng(19);
    check_immersion_laws(y0, rng);

    // the deformation-to-the-normal-cone ambient: blowup of X x P1 along Y x {0}
    auto bl = blowup(pr.total, y0);
    CHECK(bl.total->dim == 2);
    check_immersion_laws(bl.exceptional, rng, 3);
    std::mt19937 rng2(23);
    for (int i = 0; i < 3; ++i) {
        auto x = random_cls(pr.total, rng2);
        CHECK(bl.p.pushforward(bl.p.pullback(x)) == x);
        CHECK(bl.total->integral(bl.p.pullback(x)) == pr.total->integral(x));
    }
}

TEST_CASE("formal spaces carry no integral") {
    auto F = formal_space({{"u", 2}}, 2, "F");
    CHECK_THROWS_AS(F->integral(one(F)), Error);
}
