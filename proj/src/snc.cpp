#include "grr/snc.hpp"

#include <algorithm>

namespace grr {

const SNCPair& SNCDivisor::pair(int i, int j) const {
    auto it = pairwise.find({i, j});
    if (it == pairwise.end()) fail(Errc::MissingGysinData, "no pairwise data for these branches");
    return it->second;
}

namespace {

void validate_divisor(const SNCDivisor& D) {
    for (const auto& b : D.branches) {
        if (b.mult < 1) fail(Errc::TypeError, "branch multiplicities must be >= 1");
        if (b.imm.codim != 1 || b.imm.normal.rank != 1) {
            fail(Errc::MissingGysinData, "branches must be hypersurfaces with rank-1 normal data");
        }
        if (b.imm.ambient != D.ambient) fail(Errc::SpaceMismatch, "branch in the wrong space");
    }
    // transversality: {D_ij} = {D_i}{D_j}, computed through either branch
    for (const auto& [key, pd] : D.pairwise) {
        const auto& bi = D.branches[std::size_t(key.first)].imm;
        const auto& bj = D.branches[std::size_t(key.second)].imm;
        Cls via_i = bi.pushforward(pd.push_into_i(one(pd.sub)));
        Cls via_j = bj.pushforward(pd.push_into_j(one(pd.sub)));
        Cls prod = bi.cycle_class * bj.cycle_class;
        if (via_i != prod || via_j != prod) {
            fail(Errc::IdentityViolation, "pairwise data violates transversality");
        }
    }
}

}  // namespace

SNCDivisor coordinate_lines_p2(const std::vector<int>& mults) {
    if (mults.size() > 3) {
        fail(Errc::ScenarioUnsupported, "coordinate_lines_p2 supports up to 3 branches");
    }
    SNCDivisor D;
    D.ambient = projective_space(2);
    for (int m : mults) D.branches.push_back({sub_linear_space(D.ambient, 1), m});
    for (int i = 0; i < int(mults.size()); ++i) {
        for (int j = i + 1; j < int(mults.size()); ++j) {
            SNCPair pd;
            pd.sub = point();
            const RingPtr rpt = space_ring(pd.sub);
            const Space pt = pd.sub;
            pd.restrict_from_ambient = [pt, rpt](const Cls& x) {
                return Cls::constant(pt, x.poly().degree0());
            };
            pd.restrict_from_i = pd.restrict_from_ambient;
            pd.restrict_from_j = pd.restrict_from_ambient;
            auto push_point = [](const Space& line) {
                const RingPtr rl = space_ring(line);
                return [line, rl](const Cls& c) {
                    return Cls::of(line,
                                   c.poly().degree0() * GradedElement::generator(rl, "h"));
                };
            };
            pd.push_into_i = push_point(D.branches[std::size_t(i)].imm.sub);
            pd.push_into_j = push_point(D.branches[std::size_t(j)].imm.sub);
            D.pairwise[{i, j}] = std::move(pd);
        }
    }
    validate_divisor(D);
    return D;
}

SNCDivisor coordinate_planes_p3(const std::vector<int>& mults) {
    if (mults.size() > 3) {
        fail(Errc::ScenarioUnsupported, "coordinate_planes_p3 supports up to 3 branches");
    }
    SNCDivisor D;
    D.ambient = projective_space(3);
    for (int m : mults) D.branches.push_back({sub_linear_space(D.ambient, 2), m});
    for (int i = 0; i < int(mults.size()); ++i) {
        for (int j = i + 1; j < int(mults.size()); ++j) {
            SNCPair pd;
            pd.sub = projective_space(1);
            const Space lij = pd.sub;
            const RingPtr rij = space_ring(lij);
            auto restrict_h = [lij, rij](const Cls& x) {
                std::vector<GradedElement> images = {GradedElement::generator(rij, "h")};
                return Cls::of(lij, apply_gen_images(x.poly(), rij, images));
            };
            pd.restrict_from_ambient = restrict_h;
            pd.restrict_from_i = restrict_h;
            pd.restrict_from_j = restrict_h;
            auto push_line = [](const Space& plane) {
                const RingPtr rp = space_ring(plane);
                return [plane, rp](const Cls& c) {
                    std::map<Exponents, Rational> out;
                    for (const auto& [m, coeff] : c.poly().terms()) out[{m[0] + 1}] += coeff;
                    return Cls::of(plane, GradedElement::from_terms(rp, std::move(out)));
                };
            };
            pd.push_into_i = push_line(D.branches[std::size_t(i)].imm.sub);
            pd.push_into_j = push_line(D.branches[std::size_t(j)].imm.sub);
            D.pairwise[{i, j}] = std::move(pd);
        }
    }
    validate_divisor(D);
    return D;
}

GradedElement sum_cycle(const SNCDivisor& D) {
    GradedElement s = GradedElement::zero(space_ring(D.ambient));
    for (const auto& b : D.branches) s = s + Rational(b.mult) * b.imm.cycle_class.poly();
    return s;
}

GradedElement mu_series(const SNCDivisor& D) {
    GradedElement s = sum_cycle(D);
    // mu = sum_{k>=1} (-1)^{k-1}/k! S^{k-1} = ((1 - e^{-S})/S as a series in S)
    std::size_t n = std::size_t(space_ring(D.ambient)->truncation() / 2) + 2;
    return apply_series(series_todd_inverse(n), s);
}

GradedElement ch_torsion(const Immersion& imm, const KClass& payload) {
    if (!imm.restrict_map || !imm.pushforward) {
        fail(Errc::MissingGysinData, "immersion lacks Gysin data");
    }
    if (payload.space != imm.sub) fail(Errc::SpaceMismatch, "payload on the wrong space");
    Cls inner = Cls::of(imm.sub, payload.ch * invert_unit(todd(imm.normal)));
    return imm.pushforward(inner).poly();
}

GradedElement ch_torsion_on_branch(const SNCDivisor& D, const TorsionClass& t) {
    if (t.branch < 0 || t.branch >= D.n_branches()) {
        fail(Errc::MissingGysinData, "torsion class names a missing branch");
    }
    return ch_torsion(D.branches[std::size_t(t.branch)].imm, t.payload);
}

GradedElement ch_structure_sheaf(const SNCDivisor& D, const std::vector<int>& mults) {
    if (!mults.empty() && mults.size() != D.branches.size()) {
        fail(Errc::ScenarioUnsupported, "multiplicity vector does not match the branches");
    }
    const RingPtr& ring = space_ring(D.ambient);
    GradedElement s = GradedElement::zero(ring);
    for (std::size_t i = 0; i < D.branches.size(); ++i) {
        int m = mults.empty() ? D.branches[i].mult : mults[i];
        if (m < 0) fail(Errc::TypeError, "negative multiplicity");
        s = s + Rational(m) * D.branches[i].imm.cycle_class.poly();
    }
    return GradedElement::constant(ring, 1) - exp_of(-s);
}

const GradedElement& UZeta::zeta_at(int i, int j) const {
    auto it = zeta.find({i, j});
    if (it == zeta.end()) fail(Errc::MissingGysinData, "no zeta entry for this pair");
    return it->second;
}

UZeta build_u_zeta(const SNCDivisor& D) {
    UZeta out;
    const RingPtr& rx = space_ring(D.ambient);
    const int K = rx->truncation() / 2 + 2;
    GradedElement s_prev = GradedElement::zero(rx);  // sum_{i<l} m_i {D_i}

    for (int l = 0; l < D.n_branches(); ++l) {
        const auto& bl = D.branches[std::size_t(l)];
        const Immersion& il = bl.imm;
        const RingPtr& rl = space_ring(il.sub);
        int m = bl.mult;

        // ch(u_l) = i^*(e^{-D'}) sum_{q<m} e^{-q n}, n = c1(N_l)
        GradedElement n1 = il.normal.c(1);
        GradedElement geom = GradedElement::zero(rl);
        for (int q = 0; q < m; ++q) geom = geom + exp_of(Rational(-q) * n1);
        GradedElement chu = il.restrict_map(Cls::of(D.ambient, exp_of(-s_prev))).poly() * geom;
        out.u.push_back(TorsionClass{l, KClass{il.sub, m, chu}});

        // zeta_{il} = m_i i^*_{D_il} Z_l with the double binomial sum
        if (l > 0) {
            GradedElement cyc = il.cycle_class.poly();
            GradedElement z = GradedElement::zero(rx);
            GradedElement cyc_pow = GradedElement::constant(rx, 1);  // {D_l}^{j-1}
            // iterate over j first so the cycle powers are reused
            for (int j = 1; j <= K; ++j) {
                if (j > 1) cyc_pow = cyc_pow * cyc;
                if (cyc_pow.is_zero()) break;
                GradedElement sp_pow = GradedElement::constant(rx, 1);  // S'^{k-1-j}
                Rational mj = Rational(Int(1));
                for (int q = 0; q < j; ++q) mj *= m;
                for (int k = j + 1; k <= K; ++k) {
                    int e = k - 1 - j;
                    if (e > 0) sp_pow = sp_pow * s_prev;
                    if (e > 0 && sp_pow.is_zero()) break;
                    Rational coef = Rational(binomial(unsigned(k - 1), unsigned(j))) * mj *
                                    Rational(k % 2 ? -1 : 1, factorial(unsigned(k)));
                    z = z + coef * (sp_pow * cyc_pow);
                }
            }
            for (int i = 0; i < l; ++i) {
                const SNCPair& pd = D.pair(i, l);
                GradedElement zij =
                    Rational(D.branches[std::size_t(i)].mult) *
                    pd.restrict_from_ambient(Cls::of(D.ambient, z)).poly();
                out.zeta[{i, l}] = zij;
                out.zeta[{l, i}] = -zij;
            }
        }

        s_prev = s_prev + Rational(m) * il.cycle_class.poly();
    }
    return out;
}

GradedElement combine_alpha(const SNCDivisor& D, const std::vector<GradedElement>& alpha) {
    const int N = D.n_branches();
    if (int(alpha.size()) != N) fail(Errc::ScenarioUnsupported, "one class per branch required");
    for (int i = 0; i < N; ++i) {
        if (alpha[std::size_t(i)].owner() != space_ring(D.branches[std::size_t(i)].imm.sub)) {
            fail(Errc::OwnerMismatch, "alpha_" + std::to_string(i + 1) + " on the wrong branch");
        }
    }
    for (int i = 0; i < N; ++i) {
        for (int j = i + 1; j < N; ++j) {
            const SNCPair& pd = D.pair(i, j);
            Cls ri = pd.restrict_from_i(Cls::of(D.branches[std::size_t(i)].imm.sub,
                                                alpha[std::size_t(i)]));
            Cls rj = pd.restrict_from_j(Cls::of(D.branches[std::size_t(j)].imm.sub,
                                                alpha[std::size_t(j)]));
            if (ri != rj) {
                fail(Errc::RestrictionMismatch,
                     "alpha classes disagree on the intersection of branches " +
                         std::to_string(i + 1) + " and " + std::to_string(j + 1));
            }
        }
    }

    UZeta uz = build_u_zeta(D);
    const RingPtr& rx = space_ring(D.ambient);
    GradedElement lhs = GradedElement::zero(rx);
    GradedElement weighted = GradedElement::zero(rx);
    for (int i = 0; i < N; ++i) {
        const auto& b = D.branches[std::size_t(i)];
        GradedElement inner = alpha[std::size_t(i)] * uz.u[std::size_t(i)].payload.ch *
                              invert_unit(todd(b.imm.normal));
        lhs = lhs + b.imm.pushforward(Cls::of(b.imm.sub, inner)).poly();
        weighted = weighted +
                   Rational(b.mult) *
                       b.imm.pushforward(Cls::of(b.imm.sub, alpha[std::size_t(i)])).poly();
    }
    GradedElement rhs = weighted * mu_series(D);
    if (lhs != rhs) {
        fail(Errc::IdentityViolation, "combination identity failed; engine inconsistency");
    }
    return lhs;
}

}  // namespace grr
