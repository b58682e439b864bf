#include "grr/checks.hpp"

#include <algorithm>
#include <sstream>

namespace grr {

CheckPart part_from(const std::string& label, const Cls& lhs, const Cls& rhs) {
    Cls diff = lhs - rhs;
    return CheckPart{label,      diff.is_zero(), lhs.str(),   rhs.str(),
                     diff.str(), lhs.latex(),    rhs.latex(), diff.latex()};
}

CheckPart part_from(const std::string& label, const GradedElement& lhs, const GradedElement& rhs) {
    GradedElement diff = lhs - rhs;
    return CheckPart{label,      diff.is_zero(), lhs.str(),   rhs.str(),
                     diff.str(), lhs.latex(),    rhs.latex(), diff.latex()};
}

CheckPart part_rational(const std::string& label, const Rational& lhs, const Rational& rhs) {
    return CheckPart{label,
                     lhs == rhs,
                     rat_to_string(lhs),
                     rat_to_string(rhs),
                     rat_to_string(lhs - rhs),
                     rat_to_latex(lhs),
                     rat_to_latex(rhs),
                     rat_to_latex(lhs - rhs)};
}

namespace {

GradedElement td_inverse_of(const BundleClass& N, bool perturb) {
    return invert_unit(todd(perturb ? dual(N) : N));
}

}  // namespace

CheckReport check_whitney(const BundleClass& E, const BundleClass& F, const CheckOptions& opt) {
    if (E.space != F.space) fail(Errc::SpaceMismatch, "bundles on different spaces");
    auto S = whitney_sum(E, F);
    std::vector<CheckPart> parts;
    parts.push_back(part_from("c(E+F) = c(E) c(F)", S.total_chern(),
                              E.total_chern() * F.total_chern()));
    GradedElement rhs = chern_to_ch(E).ch + chern_to_ch(opt.perturb ? dual(F) : F).ch;
    parts.push_back(part_from("ch(E+F) = ch(E) + ch(F)", chern_to_ch(S).ch, rhs));
    return finish_report("whitney", std::move(parts));
}

CheckReport check_self_intersection(const Immersion& Y, const Cls& alpha,
                                    const CheckOptions& opt) {
    if (!Y.restrict_map || !Y.pushforward) fail(Errc::MissingGysinData, "immersion lacks maps");
    Cls lhs = Y.restrict_map(Y.pushforward(alpha));
    const BundleClass& N = opt.perturb ? dual(Y.normal) : Y.normal;
    Cls rhs = alpha * Cls::of(Y.sub, N.c(std::size_t(Y.codim)));
    return finish_report("self_intersection",
                         {part_from("i^* i_* a = a c_d(N)", lhs, rhs)});
}

CheckReport check_hrr_projective_space(int n, int d, const CheckOptions& opt) {
    Space X = projective_space(n);
    const RingPtr& ring = space_ring(X);
    GradedElement h = n > 0 ? GradedElement::generator(ring, "h") : GradedElement::zero(ring);
    std::vector<GradedElement> chern;
    for (int i = 1; i <= n; ++i) {
        chern.push_back(Rational(binomial(unsigned(n + 1), unsigned(i))) * h.pow(unsigned(i)));
    }
    BundleClass T = make_bundle(X, n + 1, std::move(chern));
    GradedElement td_t = todd(opt.perturb ? dual(T) : T);
    Rational value = X->integral(Cls::of(X, exp_of(Rational(d) * h) * td_t));
    Rational expected = binomial_poly(Rational(d), unsigned(n));
    auto part = part_rational("integral e^{dh} td(T) = C(n+d, n)", value, expected);
    std::ostringstream note;
    note << "n=" << n << " d=" << d << " value=" << value;
    return finish_report("hrr_projective_space", {part}, note.str());
}

GrrScenario linear_grr_scenario(int n, int k, int twist) {
    GrrScenario s;
    s.imm = sub_linear_space(projective_space(n), k);
    const RingPtr& ra = space_ring(s.imm.ambient);
    const RingPtr& rs = space_ring(s.imm.sub);
    GradedElement hy = k > 0 ? GradedElement::generator(rs, "h") : GradedElement::zero(rs);
    s.payload = KClass{s.imm.sub, 1, exp_of(Rational(twist) * hy)};
    GradedElement h = GradedElement::generator(ra, "h");
    // Koszul resolution of a linear subspace: ch(i_! O(d)) = e^{dh}(1 - e^{-h})^c
    GradedElement koszul = exp_of(Rational(twist) * h);
    GradedElement fac = GradedElement::constant(ra, 1) - exp_of(-h);
    for (int i = 0; i < n - k; ++i) koszul = koszul * fac;
    s.independent_lhs = koszul;
    std::ostringstream os;
    os << "P" << k << " in P" << n << ", twist " << twist;
    s.label = os.str();
    return s;
}

CheckReport check_grr_immersion(const GrrScenario& s, const CheckOptions& opt) {
    if (!s.independent_lhs.has_value()) {
        return skipped_report("grr_immersion " + s.label,
                              "NoIndependentLHS: scenario provides no resolution data");
    }
    GradedElement rhs =
        s.imm.pushforward(Cls::of(s.imm.sub, s.payload.ch * td_inverse_of(s.imm.normal,
                                                                          opt.perturb)))
            .poly();
    return finish_report(
        "grr_immersion " + s.label,
        {part_from("ch(i_! y) = i_*(ch(y) td(N)^{-1})", *s.independent_lhs, rhs)});
}

namespace {

// c(F^*) of the excess bundle from 0 -> N_{E/X~} -> q^*N -> F^* -> 0,
// i.e. q^*c(N) (1 + xi)^{-1}; the perturbed variant flips the xi sign.
GradedElement excess_dual_total_chern(const BlowupData& B, bool perturb) {
    const RingPtr& re = space_ring(B.exc);
    GradedElement cn = GradedElement::constant(re, 1);
    for (std::size_t i = 1; i <= std::size_t(B.d); ++i) cn = cn + B.q_pull(B.center.normal.c(i));
    GradedElement denom = GradedElement::constant(re, 1) + (perturb ? -B.xi : B.xi);
    return cn * invert_unit(denom);
}

BundleClass excess_conormal_bundle(const BlowupData& B, bool perturb) {
    GradedElement cf = excess_dual_total_chern(B, perturb);
    std::vector<GradedElement> chern;
    int rank = B.d - 1;
    for (int i = 1; i <= std::min(rank, space_dim(B.exc)); ++i) {
        chern.push_back(cf.degree_part(2 * i));
    }
    // F is the dual of the bundle cut out by cf
    return dual(make_bundle(B.exc, rank, std::move(chern)));
}

}  // namespace

CheckReport check_excess_deligne(const BlowupResult& B, const Immersion& center,
                                 const Cls& alpha_on_center, const CheckOptions& opt) {
    const BlowupData& data = *B.total->blow;
    Cls lhs = B.p.pullback(center.pushforward(alpha_on_center));
    GradedElement cf = excess_dual_total_chern(data, opt.perturb);
    GradedElement top = cf.degree_part(2 * (center.codim - 1));
    GradedElement inner = B.q.pullback(alpha_on_center).poly() * top;
    Cls rhs = B.exceptional.pushforward(Cls::of(data.exc, inner));
    return finish_report("excess_deligne",
                         {part_from("p^* i_* a = j_*(q^* a c_{d-1}(F^*))", lhs, rhs)});
}

CheckReport check_k_theory_formulas(int n, int k, int twist, const CheckOptions& opt) {
    GrrScenario s = linear_grr_scenario(n, k, twist);
    std::vector<CheckPart> parts;

    // (i) i^! i_! x = x lambda_{-1}[N^*], read through ch
    {
        GradedElement lhs = s.imm.restrict_map(Cls::of(s.imm.ambient, *s.independent_lhs)).poly();
        BundleClass nstar = opt.perturb ? s.imm.normal : dual(s.imm.normal);
        GradedElement rhs = s.payload.ch * lambda_minus_one(nstar).ch;
        parts.push_back(part_from("(i) ch(i^! i_! x) = ch(x) ch(lambda_{-1} N^*)", lhs, rhs));
    }

    // (ii) p^! i_! x = j_!(q^! x lambda_{-1} F) on the blowup, codim >= 2
    std::string note;
    if (k <= n - 2) {
        auto B = blowup(s.imm.ambient, s.imm);
        const BlowupData& data = *B.total->blow;
        Cls lhs = B.p.pullback(Cls::of(s.imm.ambient, *s.independent_lhs));
        BundleClass F = excess_conormal_bundle(data, false);
        if (opt.perturb) F = dual(F);
        GradedElement inner = B.q.pullback(Cls::of(s.imm.sub, s.payload.ch)).poly() *
                              lambda_minus_one(F).ch *
                              invert_unit(todd(line_bundle(data.exc, data.xi)));
        Cls rhs = B.exceptional.pushforward(Cls::of(data.exc, inner));
        parts.push_back(part_from("(ii) ch(p^! i_! x) = ch(j_!(q^! x lambda_{-1} F))", lhs, rhs));
    } else {
        note = "codim 1: the blowup side is the identity, (ii) omitted";
    }
    return finish_report("k_theory_formulas " + s.label, std::move(parts), note);
}

// ---------------------------------------------------------------------------
// deformation to the normal cone

namespace {

// restriction A(E_M) -> A(R) onto a subbundle divisor R = P(N) inside
// E_M = P(N + O); the fiber generator maps to R's own hyperplane class.
GradedElement restrict_bundle_divisor(const GradedElement& on_em, const RingPtr& target,
                                      const GradedElement& zeta_image) {
    std::vector<GradedElement> images;
    images.push_back(zeta_image);
    const RingPtr& src = on_em.owner();
    for (std::size_t i = 1; i < src->n_gens(); ++i) {
        int j = target->find_gen(src->gen(i).name);
        if (j < 0) fail(Errc::NameError, "missing generator in restriction target");
        images.push_back(GradedElement::generator(target, std::size_t(j)));
    }
    return apply_gen_images(on_em, target, images);
}

}  // namespace

CheckReport check_deformation_lemma(const Space& X, const Immersion& Y, const BundleClass& F,
                                    const BundleClass& Eb, const CheckOptions& opt) {
    if (Y.ambient != X) fail(Errc::SpaceMismatch, "immersion is not into X");
    if (!Y.restrict_map || !Y.pushforward) fail(Errc::MissingGysinData, "immersion lacks maps");
    if (F.space != X || Eb.space != Y.sub) fail(Errc::SpaceMismatch, "bundle on the wrong space");
    const int d = Y.codim;

    auto W = product_p1(X);
    Immersion Y0 = compose_immersions(W.fiber0, Y);
    auto M = blowup(W.total, Y0);
    const BlowupData& B = *M.total->blow;
    const RingPtr& re = space_ring(B.exc);
    const RingPtr& ry = space_ring(Y.sub);
    const RingPtr& rx = space_ring(X);

    GradedElement chF = chern_to_ch(F).ch;
    GradedElement chEb = chern_to_ch(Eb).ch;
    GradedElement chH = ch_torsion(Y, chern_to_ch(Eb));
    GradedElement chG = chF + chH;

    // ch(pr_1^* G(1)) on X x P^1; e^t = 1 + t exactly
    GradedElement chG_w = lift_between(chG, space_ring(W.total)) *
                          (GradedElement::constant(space_ring(W.total), 1) + W.t);

    // Flipping the sign of the exceptional Todd factor is annihilated by the
    // fiber relation xi(xi - q*n) = 0, so the negative control flips the
    // det-twist exponential in (i) instead; see the `det_sign` use below.
    GradedElement tdinv = invert_unit(todd(line_bundle(B.exc, B.xi)));
    const Rational det_sign = opt.perturb ? Rational(1) : Rational(-1);

    // plain pullback of the central torsion sheaf: the class q^* Eb on E
    GradedElement q_chEb = B.q_pull(chEb);
    Cls ch_tors_plain = M.exceptional.pushforward(Cls::of(B.exc, q_chEb * tdinv));
    Cls chQ = M.p.pullback(Cls::of(W.total, chG_w)) - ch_tors_plain;

    // excess conormal bundle of q: ch(F_exc) = q^* ch(N^*_{Y0/W}) - e^{-xi}
    GradedElement chNstar = B.q_pull(chern_to_ch(dual(Y0.normal)).ch);
    GradedElement chFexc = chNstar - exp_of(-B.xi);
    GradedElement chL = q_chEb * chFexc;

    Cls alpha = chQ + M.exceptional.pushforward(Cls::of(B.exc, chL * tdinv));

    std::vector<CheckPart> parts;

    // (i) restriction to the exceptional divisor
    {
        GradedElement lhs = B.restrict_to_exc(alpha);
        GradedElement n1 = Y.normal.c(1);
        GradedElement rhs_y = Y.restrict_map(Cls::of(X, chF)).poly() + chEb -
                              chEb * exp_of(det_sign * n1);
        GradedElement rhs = B.q_pull(rhs_y);
        parts.push_back(part_from(
            "(i) i_E^* a = q^*[ch(i_Y^* F) + ch(E) - ch(E x det N^*)]", lhs, rhs));
    }

    // (ii) restriction to the strict transform D of the central fiber
    if (d == 1) {
        GradedElement lhs = W.fiber0.restrict_map(Cls::of(W.total, alpha.base())).poly() +
                            Y.pushforward(Cls::of(Y.sub, alpha.exc()[0])).poly();
        parts.push_back(part_from("(ii) i_D^* a = mu^* ch(G_0)", lhs, chG));
    } else {
        auto D = blowup(X, Y);
        const BlowupData& BD = *D.total->blow;
        Cls lhs = D.p.pullback(Cls::of(X, W.fiber0.restrict_map(Cls::of(W.total, alpha.base()))
                                              .poly()));
        for (std::size_t kk = 0; kk < alpha.exc().size(); ++kk) {
            GradedElement layer = B.q_pull(alpha.exc()[kk]) * B.xi.pow(unsigned(kk));
            GradedElement on_r = restrict_bundle_divisor(
                layer, space_ring(BD.exc), GradedElement::generator(space_ring(BD.exc), 0));
            lhs = lhs + D.exceptional.pushforward(Cls::of(BD.exc, on_r));
        }
        Cls rhs = D.p.pullback(Cls::of(X, chG));
        parts.push_back(part_from("(ii) i_D^* a = mu^* ch(G_0)", lhs, rhs));
    }

    // descent and the Whitney conclusion on the two fibers
    {
        bool slots_vanish = true;
        for (const auto& y : alpha.exc()) slots_vanish = slots_vanish && y.is_zero();
        GradedElement slot_sum = GradedElement::zero(ry);
        for (const auto& y : alpha.exc()) slot_sum = slot_sum + y;
        parts.push_back(CheckPart{"a descends: exceptional slots vanish", slots_vanish,
                                  "slots", "0", slots_vanish ? "0" : slot_sum.str()});
        GradedElement beta_fiber =
            W.fiber0.restrict_map(Cls::of(W.total, alpha.base())).poly();
        parts.push_back(
            part_from("fibers: beta|_{X_t} = ch(F) + ch(i_* E) = ch(G)", beta_fiber, chG));
        (void)rx;
    }

    std::ostringstream label;
    label << "deformation_lemma codim " << d;
    return finish_report(label.str(), std::move(parts));
}

CheckReport check_divisor_pullback(const DivisorPullbackScenario& sc, const Rational& a,
                                   const Rational& b) {
    if (sc.n != 2) fail(Errc::ScenarioUnsupported, "only the P^2 family is built in");
    if (!sc.center_on_divisor) {
        fail(Errc::ScenarioUnsupported, "the built-in family needs the center on the divisor");
    }
    Space X = projective_space(2);
    Immersion Yc = sub_linear_space(X, 0);  // the blown-up point, placed on D
    Immersion D = sub_linear_space(X, 1);   // the line through it
    auto B = blowup(X, Yc);
    const RingPtr& rx = space_ring(X);
    GradedElement h = GradedElement::generator(rx, "h");

    // alpha = a + b h_D on D; i_{D*} alpha = a h + b h^2
    GradedElement pushed = a * h + b * (h * h);
    Cls lhs = B.p.pullback(Cls::of(X, pushed));

    // strict transform D~ = D with {D~} = p^*{D} - e; i_{D~ *}(a + b h_D)
    // works out to (a h + b h^2; -a) in the decomposition
    Cls strict = Cls::of_blowup(B.total, pushed, {GradedElement::constant(
                                                     space_ring(Yc.sub), -a)});
    // exceptional branch: f_E = (pt -> D) o q, so f_E^* alpha = a
    Cls exc = B.exceptional.pushforward(
        Cls::of(B.total->blow->exc, GradedElement::constant(space_ring(B.total->blow->exc), a)));
    Cls rhs = strict + exc;

    return finish_report("divisor_pullback",
                         {part_from("p^* i_{D*} a = i_{D~ *} a + i_{E*} f_E^* a", lhs, rhs)});
}

CheckReport check_snc_suite(const SNCDivisor& D, const CheckOptions& opt) {
    std::vector<CheckPart> parts;
    const RingPtr& rx = space_ring(D.ambient);

    GradedElement S = sum_cycle(D);
    GradedElement mu = mu_series(D);
    parts.push_back(part_from("S mu = 1 - e^{-S}", S * mu,
                              GradedElement::constant(rx, 1) - exp_of(-S)));

    UZeta uz = build_u_zeta(D);

    // (a) sum of the torsion characters is the structure-sheaf class
    GradedElement total = GradedElement::zero(rx);
    for (std::size_t i = 0; i < uz.u.size(); ++i) {
        const auto& b = D.branches[i];
        total = total + b.imm.pushforward(Cls::of(b.imm.sub, uz.u[i].payload.ch *
                                                                 td_inverse_of(b.imm.normal,
                                                                               opt.perturb)))
                            .poly();
    }
    parts.push_back(part_from("(a) sum ch(u_i) = ch_D(O_D)", total, ch_structure_sheaf(D)));

    // (b) antisymmetry
    {
        bool anti = true;
        std::string bad;
        for (const auto& [key, z] : uz.zeta) {
            GradedElement sum = z + uz.zeta_at(key.second, key.first);
            if (!sum.is_zero()) {
                anti = false;
                bad = sum.str();
            }
        }
        parts.push_back(CheckPart{"(b) zeta_ij + zeta_ji = 0", anti, "", "", anti ? "0" : bad});
    }

    // (c) per branch
    for (int i = 0; i < D.n_branches(); ++i) {
        const auto& b = D.branches[std::size_t(i)];
        GradedElement lhs =
            uz.u[std::size_t(i)].payload.ch * td_inverse_of(b.imm.normal, opt.perturb) -
            Rational(b.mult) * b.imm.restrict_map(Cls::of(D.ambient, mu)).poly();
        GradedElement rhs = GradedElement::zero(space_ring(b.imm.sub));
        for (int j = 0; j < D.n_branches(); ++j) {
            if (j == i) continue;
            const SNCPair& pd = D.pair(std::min(i, j), std::max(i, j));
            const ClsMap& push = (i < j) ? pd.push_into_i : pd.push_into_j;
            rhs = rhs + push(Cls::of(pd.sub, uz.zeta_at(i, j))).poly();
        }
        parts.push_back(part_from("(c) branch " + std::to_string(i + 1), lhs, rhs));
    }

    // combination identity with a compatible nontrivial family alpha_i = i^*(1 + h)
    if (D.n_branches() > 0 && space_dim(D.ambient) > 0) {
        GradedElement h = GradedElement::generator(rx, "h");
        GradedElement lhs = GradedElement::zero(rx);
        GradedElement weighted = GradedElement::zero(rx);
        for (std::size_t i = 0; i < uz.u.size(); ++i) {
            const auto& b = D.branches[i];
            GradedElement ai =
                b.imm.restrict_map(Cls::of(D.ambient, GradedElement::constant(rx, 1) + h)).poly();
            lhs = lhs + b.imm.pushforward(
                             Cls::of(b.imm.sub, ai * uz.u[i].payload.ch *
                                                    td_inverse_of(b.imm.normal, opt.perturb)))
                            .poly();
            weighted = weighted +
                       Rational(b.mult) * b.imm.pushforward(Cls::of(b.imm.sub, ai)).poly();
        }
        parts.push_back(
            part_from("combination: sum i_*(a_i ch(u_i) td^{-1}) = (sum m_i i_* a_i) mu", lhs,
                      weighted * mu));
    }

    return finish_report("snc_suite", std::move(parts));
}

CheckReport check_lambda_identity(const BundleClass& E, const CheckOptions& opt) {
    GradedElement lhs = lambda_minus_one(E).ch;
    BundleClass Ed = dual(E);
    GradedElement rhs =
        Ed.c(std::size_t(E.rank)) * invert_unit(todd(opt.perturb ? E : Ed));
    return finish_report("lambda_identity rank " + std::to_string(E.rank),
                         {part_from("ch(lambda_{-1} E) = c_r(E^*) td(E^*)^{-1}", lhs, rhs)});
}

CheckReport check_blowup_sanity(const Space& X, const Immersion& center,
                                const CheckOptions& opt) {
    (void)opt;
    auto B = blowup(X, center);
    std::vector<CheckPart> parts;
    const RingPtr& rx = space_ring(X);

    bool roundtrip = true;
    for (const auto& m : rx->basis()) {
        Cls x = Cls::of(X, GradedElement::from_terms(rx, {{m, Rational(1)}}));
        if (!(B.p.pushforward(B.p.pullback(x)) == x)) roundtrip = false;
    }
    parts.push_back(CheckPart{"p_* p^* = id on the monomial basis", roundtrip, "", "",
                              roundtrip ? "0" : "mismatch"});

    Cls e = B.exceptional.cycle_class;
    bool inj = !e.is_zero() && e.base().is_zero();
    Cls probe = B.p.pullback(one(X)) - e;
    inj = inj && !probe.is_zero();
    parts.push_back(CheckPart{"decomposition separates base and exceptional slots", inj, "", "",
                              inj ? "0" : "degenerate"});

    if (X->kind == SpaceKind::Projective && X->dim == 2 && center.codim == 2) {
        Rational v = B.total->integral(e * e);
        parts.push_back(part_rational("integral of e^2 on Bl_pt P^2", v, Rational(-1)));
    }
    return finish_report("blowup_sanity", std::move(parts));
}

}  // namespace grr
