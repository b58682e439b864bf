#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "grr/snc.hpp"

using namespace grr;

namespace {

// condition (c) defect on branch i: ch(u_i) td(N_i)^{-1} - m_i i^* mu
// minus the pushed zeta corrections; zero when the construction works
GradedElement condition_c_defect(const SNCDivisor& D, const UZeta& uz, int i) {
    const auto& b = D.branches[std::size_t(i)];
    GradedElement lhs = uz.u[std::size_t(i)].payload.ch * invert_unit(todd(b.imm.normal)) -
                        Rational(b.mult) * b.imm.restrict_map(Cls::of(D.ambient, mu_series(D))).poly();
    GradedElement rhs = GradedElement::zero(space_ring(b.imm.sub));
    for (int j = 0; j < D.n_branches(); ++j) {
        if (j == i) continue;
        const SNCPair& pd = D.pair(std::min(i, j), std::max(i, j));
        const ClsMap& push = (i < j) ? pd.push_into_i : pd.push_into_j;
        rhs = rhs + push(Cls::of(pd.sub, uz.zeta_at(i, j))).poly();
    }
    return lhs - rhs;
}

}  // namespace

TEST_CASE("mu series") {
    SUBCASE("one reduced branch on P2") {
        auto D = coordinate_lines_p2({1});
        auto h = GradedElement::generator(space_ring(D.ambient), "h");
        auto one = GradedElement::constant(space_ring(D.ambient), 1);
        CHECK(mu_series(D) == one - Rational(1, 2) * h + Rational(1, 6) * (h * h));
    }
    SUBCASE("one branch with multiplicity 2") {
        auto D = coordinate_lines_p2({2});
        auto h = GradedElement::generator(space_ring(D.ambient), "h");
        auto one = GradedElement::constant(space_ring(D.ambient), 1);
        CHECK(mu_series(D) == one - h + Rational(2, 3) * (h * h));
    }
    SUBCASE("empty divisor") {
        auto D = coordinate_lines_p2({});
        CHECK(mu_series(D) == GradedElement::constant(space_ring(D.ambient), 1));
    }
    SUBCASE("functional equation S mu = 1 - e^{-S}") {
        for (const std::vector<int>& m :
             {std::vector<int>{1}, {2}, {3}, {1, 1}, {2, 3}, {1, 2, 3}, {3, 3, 3}}) {
            for (int cfg = 0; cfg < 2; ++cfg) {
                auto D = cfg ? coordinate_planes_p3(m) : coordinate_lines_p2(m);
                auto S = sum_cycle(D);
                auto one = GradedElement::constant(space_ring(D.ambient), 1);
                CHECK(S * mu_series(D) == one - exp_of(-S));
            }
        }
    }
}

TEST_CASE("ch of torsion classes") {
    SUBCASE("structure sheaf of a line in P2") {
        auto D = coordinate_lines_p2({1});
        const auto& imm = D.branches[0].imm;
        auto h = GradedElement::generator(space_ring(D.ambient), "h");
        auto chT = ch_torsion_on_branch(D, TorsionClass{0, KClass{imm.sub, 1,
                                        GradedElement::constant(space_ring(imm.sub), 1)}});
        CHECK(chT == h - Rational(1, 2) * (h * h));
        auto one = GradedElement::constant(space_ring(D.ambient), 1);
        CHECK(chT == one - exp_of(-h));
    }
    SUBCASE("zero payload") {
        auto D = coordinate_lines_p2({1});
        const auto& imm = D.branches[0].imm;
        auto chT = ch_torsion_on_branch(
            D, TorsionClass{0, KClass{imm.sub, 0, GradedElement::zero(space_ring(imm.sub))}});
        CHECK(chT.is_zero());
    }
    SUBCASE("point in P1") {
        auto p1 = projective_space(1);
        auto imm = sub_linear_space(p1, 0);
        auto h = GradedElement::generator(space_ring(p1), "h");
        auto chT = ch_torsion(imm, KClass{imm.sub, 1,
                                          GradedElement::constant(space_ring(imm.sub), 1)});
        CHECK(chT == h);
    }
}

TEST_CASE("ch_structure_sheaf") {
    auto D = coordinate_lines_p2({1});
    auto h = GradedElement::generator(space_ring(D.ambient), "h");
    CHECK(ch_structure_sheaf(D) == h - Rational(1, 2) * (h * h));
    CHECK(ch_structure_sheaf(D, {2}) == 2 * h - 2 * (h * h));
    CHECK(ch_structure_sheaf(coordinate_lines_p2({})).is_zero());
}

TEST_CASE("u and zeta construction") {
    SUBCASE("single branch with multiplicity 2") {
        auto D = coordinate_lines_p2({2});
        auto uz = build_u_zeta(D);
        REQUIRE(uz.u.size() == 1);
        const auto& imm = D.branches[0].imm;
        auto n = imm.normal.c(1);
        auto one = GradedElement::constant(space_ring(imm.sub), 1);
        CHECK(uz.u[0].payload.ch == one + exp_of(-n));
        CHECK(condition_c_defect(D, uz, 0).is_zero());
    }
    SUBCASE("two reduced lines: frozen zeta and both conditions") {
        auto D = coordinate_lines_p2({1, 1});
        auto uz = build_u_zeta(D);
        // zeta_12 lives on a point; its value is the k=2 term 1/2! = 1/2
        CHECK(uz.zeta_at(0, 1).degree0() == Rational(1, 2));
        CHECK(uz.zeta_at(0, 1) + uz.zeta_at(1, 0) ==
              GradedElement::zero(uz.zeta_at(0, 1).owner()));
        CHECK(condition_c_defect(D, uz, 0).is_zero());
        CHECK(condition_c_defect(D, uz, 1).is_zero());
    }
    SUBCASE("empty divisor") {
        auto uz = build_u_zeta(coordinate_lines_p2({}));
        CHECK(uz.u.empty());
        CHECK(uz.zeta.empty());
    }
    SUBCASE("conditions (a), (b), (c) across configurations") {
        for (const std::vector<int>& m :
             {std::vector<int>{1}, {2}, {3}, {1, 2}, {2, 2}, {1, 1, 1}, {1, 2, 3}, {3, 3, 3}}) {
            for (int cfg = 0; cfg < 2; ++cfg) {
                auto D = cfg ? coordinate_planes_p3(m) : coordinate_lines_p2(m);
                auto uz = build_u_zeta(D);
                // (a) at ch level
                GradedElement total = GradedElement::zero(space_ring(D.ambient));
                for (const auto& u : uz.u) total = total + ch_torsion_on_branch(D, u);
                CHECK(total == ch_structure_sheaf(D));
                // (b)
                for (const auto& [key, z] : uz.zeta) {
                    CHECK(z + uz.zeta_at(key.second, key.first) ==
                          GradedElement::zero(z.owner()));
                }
                // (c)
                for (int i = 0; i < D.n_branches(); ++i) {
                    CHECK(condition_c_defect(D, uz, i).is_zero());
                }
            }
        }
    }
}

TEST_CASE("binomial identity behind the induction") {
    // C(k, p+1) - C(k-1, p) = C(k-1, p+1) for p <= k-2 and 0 at p = k-1,
    // against a factorial-based oracle
    auto oracle = [](unsigned n, unsigned k) -> Int {
        if (k > n) return 0;
        return factorial(n) / (factorial(k) * factorial(n - k));
    };
    for (unsigned k = 1; k <= 12; ++k) {
        for (unsigned p = 0; p + 2 <= k; ++p) {
            CHECK(binomial(k, p + 1) - binomial(k - 1, p) == oracle(k - 1, p + 1));
        }
        CHECK(binomial(k, k) - binomial(k - 1, k - 1) == 0);
    }
}

TEST_CASE("combine_alpha") {
    SUBCASE("alpha = 1 reduces to the structure-sheaf identity") {
        for (const std::vector<int>& m : {std::vector<int>{1}, {2}, {1, 1}, {2, 1}, {1, 1, 1}}) {
            auto D = coordinate_lines_p2(m);
            std::vector<GradedElement> alpha;
            for (const auto& b : D.branches) {
                alpha.push_back(GradedElement::constant(space_ring(b.imm.sub), 1));
            }
            auto v = combine_alpha(D, alpha);
            CHECK(v == ch_structure_sheaf(D));
        }
    }
    SUBCASE("single branch with alpha = i^*(h)") {
        auto D = coordinate_lines_p2({1});
        const auto& imm = D.branches[0].imm;
        auto h = GradedElement::generator(space_ring(D.ambient), "h");
        auto a = imm.restrict_map(Cls::of(D.ambient, h)).poly();
        auto v = combine_alpha(D, {a});
        auto n = imm.normal.c(1);
        // i_*(alpha (1 - e^{-n})/n)
        std::size_t len = std::size_t(space_ring(imm.sub)->truncation() / 2) + 2;
        auto expect =
            imm.pushforward(Cls::of(imm.sub, a * apply_series(series_todd_inverse(len), n)))
                .poly();
        CHECK(v == expect);
    }
    SUBCASE("compatible restrictions on planes") {
        auto D = coordinate_planes_p3({1, 2, 1});
        auto h = GradedElement::generator(space_ring(D.ambient), "h");
        std::vector<GradedElement> alpha;
        for (const auto& b : D.branches) {
            alpha.push_back(b.imm.restrict_map(Cls::of(D.ambient, h + 3 * (h * h))).poly());
        }
        CHECK_NOTHROW(combine_alpha(D, alpha));
    }
    SUBCASE("mismatched alphas are rejected") {
        auto D = coordinate_lines_p2({1, 1});
        auto r0 = space_ring(D.branches[0].imm.sub);
        auto r1 = space_ring(D.branches[1].imm.sub);
        std::vector<GradedElement> alpha = {GradedElement::constant(r0, 1),
                                            GradedElement::constant(r1, 2)};
        CHECK_THROWS_AS(combine_alpha(D, alpha), Error);
        try {
            combine_alpha(D, alpha);
        } catch (const Error& e) {
            CHECK(e.code() == Errc::RestrictionMismatch);
        }
    }
}
