#include "grr/spaces.hpp"

#include <algorithm>
#include <sstream>

namespace grr {

// --- accessors declared in classes.hpp --------------------------------------

const RingPtr& space_ring(const Space& s) {
    if (!s) fail(Errc::SpaceMismatch, "null space");
    if (!s->ring) fail(Errc::ScenarioUnsupported, "space " + s->label + " has no presented ring");
    return s->ring;
}

int space_dim(const Space& s) {
    if (!s) fail(Errc::SpaceMismatch, "null space");
    return s->dim;
}

const std::string& space_label(const Space& s) {
    static const std::string kNull = "<null>";
    return s ? s->label : kNull;
}

// --- Cls --------------------------------------------------------------------

Cls Cls::of(const Space& s, GradedElement poly) {
    if (s->is_blowup()) fail(Errc::SpaceMismatch, "of() needs a presented space");
    if (poly.owner() != s->ring) fail(Errc::OwnerMismatch, "element not in the space's ring");
    Cls c;
    c.space_ = s;
    c.poly_ = std::move(poly);
    return c;
}

Cls Cls::of_blowup(const Space& s, GradedElement base, std::vector<GradedElement> exc) {
    if (!s->is_blowup()) fail(Errc::SpaceMismatch, "of_blowup() needs a blowup space");
    const BlowupData& B = *s->blow;
    if (base.owner() != space_ring(B.base)) fail(Errc::OwnerMismatch, "base part in wrong ring");
    if (int(exc.size()) != B.d - 1) fail(Errc::OwnerMismatch, "wrong number of exceptional slots");
    for (const auto& y : exc) {
        if (y.owner() != space_ring(B.center.sub)) {
            fail(Errc::OwnerMismatch, "exceptional slot in wrong ring");
        }
    }
    Cls c;
    c.space_ = s;
    c.poly_ = std::move(base);
    c.exc_ = std::move(exc);
    return c;
}

Cls Cls::zero(const Space& s) {
    if (s->is_blowup()) {
        const BlowupData& B = *s->blow;
        std::vector<GradedElement> exc(std::size_t(B.d - 1),
                                       GradedElement::zero(space_ring(B.center.sub)));
        return of_blowup(s, GradedElement::zero(space_ring(B.base)), std::move(exc));
    }
    return of(s, GradedElement::zero(s->ring));
}

Cls Cls::constant(const Space& s, const Rational& q) {
    if (s->is_blowup()) {
        Cls c = zero(s);
        c.poly_ = GradedElement::constant(space_ring(s->blow->base), q);
        return c;
    }
    return of(s, GradedElement::constant(s->ring, q));
}

bool Cls::is_zero() const {
    if (!poly_.is_zero()) return false;
    for (const auto& y : exc_) {
        if (!y.is_zero()) return false;
    }
    return true;
}

const GradedElement& Cls::poly() const {
    if (space_ && space_->is_blowup()) fail(Errc::SpaceMismatch, "poly() on a blowup class");
    return poly_;
}

const GradedElement& Cls::base() const {
    if (!space_ || !space_->is_blowup()) fail(Errc::SpaceMismatch, "base() on a presented class");
    return poly_;
}

const std::vector<GradedElement>& Cls::exc() const {
    if (!space_ || !space_->is_blowup()) fail(Errc::SpaceMismatch, "exc() on a presented class");
    return exc_;
}

Cls Cls::operator-() const {
    Cls c = *this;
    c.poly_ = -c.poly_;
    for (auto& y : c.exc_) y = -y;
    return c;
}

bool Cls::operator==(const Cls& b) const {
    if (space_ != b.space_) fail(Errc::SpaceMismatch, "comparing classes on different spaces");
    return poly_ == b.poly_ && exc_ == b.exc_;
}

namespace {

void check_same_space(const Cls& a, const Cls& b) {
    if (a.space() != b.space()) fail(Errc::SpaceMismatch, "classes on different spaces");
}

}  // namespace

Cls operator+(const Cls& a, const Cls& b) {
    check_same_space(a, b);
    if (!a.space()->is_blowup()) return Cls::of(a.space(), a.poly() + b.poly());
    std::vector<GradedElement> exc = a.exc();
    for (std::size_t i = 0; i < exc.size(); ++i) exc[i] = exc[i] + b.exc()[i];
    return Cls::of_blowup(a.space(), a.base() + b.base(), std::move(exc));
}

Cls operator-(const Cls& a, const Cls& b) { return a + (-b); }

Cls operator*(const Rational& q, const Cls& a) {
    if (!a.space()->is_blowup()) return Cls::of(a.space(), q * a.poly());
    std::vector<GradedElement> exc = a.exc();
    for (auto& y : exc) y = q * y;
    return Cls::of_blowup(a.space(), q * a.base(), std::move(exc));
}

Cls operator*(const Cls& a, const Cls& b) {
    check_same_space(a, b);
    if (!a.space()->is_blowup()) return Cls::of(a.space(), a.poly() * b.poly());
    const BlowupData& B = *a.space()->blow;

    // exceptional parts as classes on E
    auto exc_on_e = [&](const Cls& c) {
        GradedElement beta = GradedElement::zero(space_ring(B.exc));
        for (std::size_t k = 0; k < c.exc().size(); ++k) {
            beta = beta + B.q_pull(c.exc()[k]) * B.xi.pow(unsigned(k));
        }
        return beta;
    };
    GradedElement beta_a = exc_on_e(a);
    GradedElement beta_b = exc_on_e(b);

    GradedElement ra = B.center.restrict_map(Cls::of(B.base, a.base())).poly();
    GradedElement rb = B.center.restrict_map(Cls::of(B.base, b.base())).poly();

    // p*x . j_*(beta) = j_*(q*(i^*x) beta) and j_*(beta) j_*(beta') = j_*(beta beta' xi)
    GradedElement cross =
        B.q_pull(ra) * beta_b + B.q_pull(rb) * beta_a + beta_a * beta_b * B.xi;

    Cls result = Cls::zero(a.space());
    result = Cls::of_blowup(a.space(), a.base() * b.base(), result.exc());
    return result + B.push_from_exc(cross, a.space());
}

std::string Cls::str() const {
    if (!space_) return "<invalid>";
    if (!space_->is_blowup()) return poly_.str();
    std::ostringstream os;
    os << "[base: " << poly_.str();
    for (std::size_t k = 0; k < exc_.size(); ++k) os << " | e" << k + 1 << ": " << exc_[k].str();
    os << "]";
    return os.str();
}

std::string Cls::latex() const {
    if (!space_) return "<invalid>";
    if (!space_->is_blowup()) return poly_.latex();
    std::ostringstream os;
    os << "\\left[" << poly_.latex();
    for (const auto& y : exc_) os << " \\,\\middle|\\, " << y.latex();
    os << "\\right]";
    return os.str();
}

// --- SpaceData / BlowupData --------------------------------------------------

Rational SpaceData::integral(const Cls& c) const {
    if (c.space().get() != this) fail(Errc::SpaceMismatch, "class on a different space");
    if (!is_blowup()) {
        if (!integral_fn) fail(Errc::NotIntegrable, "space " + label + " carries no integral");
        return integral_fn(c.poly());
    }
    const BlowupData& B = *blow;
    Rational r = B.base->integral(Cls::of(B.base, c.base()));
    GradedElement beta = GradedElement::zero(space_ring(B.exc));
    for (std::size_t k = 0; k < c.exc().size(); ++k) {
        beta = beta + B.q_pull(c.exc()[k]) * B.xi.pow(unsigned(k));
    }
    return r + B.exc->integral(Cls::of(B.exc, beta));
}

GradedElement BlowupData::q_pull(const GradedElement& on_y) const {
    return q.pullback(Cls::of(center.sub, on_y)).poly();
}

Cls BlowupData::push_from_exc(const GradedElement& on_e, const Space& total) const {
    const RingPtr& ring_e = space_ring(exc);
    const RingPtr& ring_y = space_ring(center.sub);
    const RingPtr& ring_x = space_ring(base);

    // split into zeta-power layers: on_e = sum_k zeta^k q^*(gt_k)
    std::vector<GradedElement> gt(std::size_t(d), GradedElement::zero(ring_y));
    for (const auto& [m, c] : on_e.terms()) {
        unsigned k = m[0];  // fiber generator exponent; < d in normal form
        Exponents rest(m.begin() + 1, m.end());
        gt[k] = gt[k] + GradedElement::from_terms(ring_y, {{rest, c}});
    }
    // xi-coordinates: g_k = (-1)^k gt_k
    std::vector<GradedElement> g(gt.size());
    for (int k = 0; k < d; ++k) {
        g[std::size_t(k)] = (k % 2 ? Rational(-1) : Rational(1)) * gt[std::size_t(k)];
    }

    GradedElement base_part = GradedElement::zero(ring_x);
    std::vector<GradedElement> slots(std::size_t(d - 1), GradedElement::zero(ring_y));
    for (int k = 0; k + 1 < d; ++k) slots[std::size_t(k)] = slots[std::size_t(k)] + g[std::size_t(k)];

    // overflow of the top layer, forced by the excess formula:
    // j_*(q^*g xi^{d-1}) = (-1)^{d-1} [p^*(i_* g) - sum_i (-1)^i j_*(q^*(g c_{d-1-i}(N)) xi^i)]
    const GradedElement& top = g[std::size_t(d - 1)];
    if (!top.is_zero()) {
        GradedElement pushed = center.pushforward(Cls::of(center.sub, top)).poly();
        base_part = base_part + (d % 2 ? Rational(1) : Rational(-1)) * pushed;
        for (int i = 0; i + 1 < d; ++i) {
            Rational sign = ((d + i) % 2 == 0) ? Rational(1) : Rational(-1);
            slots[std::size_t(i)] =
                slots[std::size_t(i)] + sign * (top * center.normal.c(std::size_t(d - 1 - i)));
        }
    }
    return Cls::of_blowup(total, std::move(base_part), std::move(slots));
}

GradedElement BlowupData::restrict_to_exc(const Cls& on_total) const {
    GradedElement r = q_pull(center.restrict_map(Cls::of(base, on_total.base())).poly());
    for (std::size_t k = 0; k < on_total.exc().size(); ++k) {
        r = r + q_pull(on_total.exc()[k]) * xi.pow(unsigned(k + 1));
    }
    return r;
}

// --- generic helpers ----------------------------------------------------------

Cls cls(const Space& X, const GradedElement& g) { return Cls::of(X, g); }
Cls one(const Space& X) { return Cls::constant(X, 1); }

GradedElement lift_between(const GradedElement& x, const RingPtr& target) {
    const RingPtr& src = x.owner();
    std::vector<GradedElement> images;
    images.reserve(src->n_gens());
    for (std::size_t i = 0; i < src->n_gens(); ++i) {
        int j = target->find_gen(src->gen(i).name);
        if (j < 0) fail(Errc::NameError, "generator " + src->gen(i).name + " missing in target");
        images.push_back(GradedElement::generator(target, std::size_t(j)));
    }
    return apply_gen_images(x, target, images);
}

namespace {

Space make_presented(int dim, SpaceKind kind, std::string label, RingPtr ring,
                     std::function<Rational(const GradedElement&)> integral) {
    auto s = std::make_shared<SpaceData>();
    s->dim = dim;
    s->kind = kind;
    s->label = std::move(label);
    s->ring = std::move(ring);
    s->integral_fn = std::move(integral);
    return s;
}

// shifts rule exponents through an index map into a larger generator list
RewriteRule remap_rule(const RewriteRule& r, std::size_t n_new,
                       const std::vector<std::size_t>& at) {
    auto remap = [&](const Exponents& m) {
        Exponents e(n_new, 0);
        for (std::size_t i = 0; i < m.size(); ++i) e[at[i]] = m[i];
        return e;
    };
    RewriteRule out;
    out.lhs = remap(r.lhs);
    for (const auto& [m, c] : r.rhs) out.rhs[remap(m)] = c;
    return out;
}

}  // namespace

// --- constructors -------------------------------------------------------------

Space point() {
    RingPtr ring = RingPresentation::make({}, 0, {});
    auto integral = [](const GradedElement& g) { return g.degree0(); };
    return make_presented(0, SpaceKind::Point, "point", ring, integral);
}

Space projective_space(int n) {
    if (n < 0) fail(Errc::TypeError, "projective_space needs n >= 0");
    RewriteRule rule;
    rule.lhs = {unsigned(n + 1)};
    RingPtr ring = RingPresentation::make({{"h", 2}}, 2 * n, {rule});
    Exponents top = {unsigned(n)};
    auto integral = [top](const GradedElement& g) { return g.coeff(top); };
    return make_presented(n, SpaceKind::Projective, "P" + std::to_string(n), ring, integral);
}

Space formal_space(std::vector<Generator> gens, int dim, const std::string& label) {
    RingPtr ring = RingPresentation::make(std::move(gens), 2 * dim, {});
    return make_presented(dim, SpaceKind::Formal, label, ring, nullptr);
}

ProjBundleResult projective_bundle(const Space& X, const BundleClass& E,
                                   const std::string& fiber_gen) {
    if (E.space != X) fail(Errc::SpaceMismatch, "bundle lives on a different space");
    const RingPtr& rx = space_ring(X);
    int r = E.rank;
    if (r < 1) fail(Errc::TypeError, "projective bundle needs rank >= 1");
    if (rx->find_gen(fiber_gen) >= 0) {
        fail(Errc::NameError, "fiber generator name collides with the base ring");
    }

    int dim = X->dim + r - 1;
    int trunc = 2 * dim;
    std::vector<Generator> gens;
    gens.push_back({fiber_gen, 2});
    for (const auto& g : rx->gens()) gens.push_back(g);

    std::vector<std::size_t> at(rx->n_gens());
    for (std::size_t i = 0; i < at.size(); ++i) at[i] = i + 1;

    std::vector<RewriteRule> rules;
    for (const auto& rule : rx->rules()) rules.push_back(remap_rule(rule, gens.size(), at));

    // Grothendieck relation z^r -> -sum_i p^*c_i(E) z^{r-i}
    RewriteRule groth;
    groth.lhs = Exponents(gens.size(), 0);
    groth.lhs[0] = unsigned(r);
    for (int i = 1; i <= r; ++i) {
        const GradedElement ci = E.c(std::size_t(i));
        for (const auto& [m, c] : ci.terms()) {
            Exponents e(gens.size(), 0);
            e[0] = unsigned(r - i);
            for (std::size_t j = 0; j < m.size(); ++j) e[j + 1] = m[j];
            groth.rhs[e] -= c;
            if (groth.rhs[e] == 0) groth.rhs.erase(e);
        }
    }
    rules.push_back(std::move(groth));

    // Leray-Hirsch basis z^j b, 0 <= j < r
    std::vector<Exponents> expected;
    for (int j = 0; j < r; ++j) {
        for (const auto& b : rx->basis()) {
            Exponents e(gens.size(), 0);
            e[0] = unsigned(j);
            for (std::size_t i = 0; i < b.size(); ++i) e[i + 1] = b[i];
            expected.push_back(e);
        }
    }

    RingPtr ring = RingPresentation::make(std::move(gens), trunc, std::move(rules), expected);

    std::string label = "P(" + space_label(X) + "-bundle)";
    // fiber integration: coefficient of z^{r-1} in the reduced form
    const RingPtr rx_keep = rx;
    auto fiber_push = [ring, rx_keep, r](const GradedElement& g) {
        std::map<Exponents, Rational> out;
        for (const auto& [m, c] : g.terms()) {
            if (int(m[0]) != r - 1) continue;
            out[Exponents(m.begin() + 1, m.end())] += c;
        }
        return GradedElement::from_terms(rx_keep, std::move(out));
    };
    auto integral = [X, fiber_push](const GradedElement& g) {
        return X->integral_fn ? X->integral_fn(fiber_push(g))
                              : throw Error(Errc::NotIntegrable, "base carries no integral");
    };
    Space P = make_presented(dim, SpaceKind::ProjBundle, label, ring, integral);

    Morphism pi;
    pi.source = P;
    pi.target = X;
    pi.pullback = [P, ring](const Cls& c) { return Cls::of(P, lift_between(c.poly(), ring)); };
    pi.pushforward = [X, fiber_push](const Cls& c) { return Cls::of(X, fiber_push(c.poly())); };

    return ProjBundleResult{P, pi, GradedElement::generator(ring, 0)};
}

ProductP1Result product_p1(const Space& X) {
    const RingPtr& rx = space_ring(X);
    if (rx->find_gen("t") >= 0) fail(Errc::NameError, "base ring already has a generator t");

    int dim = X->dim + 1;
    std::vector<Generator> gens = rx->gens();
    gens.push_back({"t", 2});

    std::vector<std::size_t> at(rx->n_gens());
    for (std::size_t i = 0; i < at.size(); ++i) at[i] = i;
    std::vector<RewriteRule> rules;
    for (const auto& rule : rx->rules()) rules.push_back(remap_rule(rule, gens.size(), at));
    RewriteRule tsq;
    tsq.lhs = Exponents(gens.size(), 0);
    tsq.lhs[gens.size() - 1] = 2;
    rules.push_back(std::move(tsq));

    std::vector<Exponents> expected;
    for (int j = 0; j < 2; ++j) {
        for (const auto& b : rx->basis()) {
            Exponents e = b;
            e.push_back(unsigned(j));
            expected.push_back(e);
        }
    }
    RingPtr ring = RingPresentation::make(std::move(gens), 2 * dim, std::move(rules), expected);

    const std::size_t t_index = ring->n_gens() - 1;
    const RingPtr rx_keep = rx;
    auto t_coeff = [ring, rx_keep, t_index](const GradedElement& g) {
        std::map<Exponents, Rational> out;
        for (const auto& [m, c] : g.terms()) {
            if (m[t_index] != 1) continue;
            out[Exponents(m.begin(), m.end() - 1)] += c;
        }
        return GradedElement::from_terms(rx_keep, std::move(out));
    };
    auto integral = [X, t_coeff](const GradedElement& g) {
        return X->integral_fn ? X->integral_fn(t_coeff(g))
                              : throw Error(Errc::NotIntegrable, "base carries no integral");
    };
    Space W = make_presented(dim, SpaceKind::ProductP1, space_label(X) + "xP1", ring, integral);

    Morphism pr1;
    pr1.source = W;
    pr1.target = X;
    pr1.pullback = [W, ring](const Cls& c) { return Cls::of(W, lift_between(c.poly(), ring)); };
    pr1.pushforward = [X, t_coeff](const Cls& c) { return Cls::of(X, t_coeff(c.poly())); };

    GradedElement t = GradedElement::generator(ring, t_index);

    // the two fiber inclusions carry identical Gysin data
    Immersion fiber;
    fiber.sub = X;
    fiber.ambient = W;
    fiber.codim = 1;
    fiber.prov.kind = ImmersionProvenance::Fiber;
    {
        std::vector<GradedElement> images;
        for (std::size_t i = 0; i + 1 < ring->n_gens(); ++i) {
            images.push_back(GradedElement::generator(rx, i));
        }
        images.push_back(GradedElement::zero(rx));  // t -> 0
        fiber.restrict_map = [X, rx, images](const Cls& c) {
            return Cls::of(X, apply_gen_images(c.poly(), rx, images));
        };
    }
    fiber.pushforward = [W, ring, t](const Cls& c) {
        return Cls::of(W, lift_between(c.poly(), ring) * t);
    };
    fiber.normal = trivial_bundle(X, 1);
    fiber.cycle_class = Cls::of(W, t);

    return ProductP1Result{W, pr1, t, fiber, fiber};
}

BlowupResult blowup(const Space& X, const Immersion& Y) {
    if (Y.ambient != X) fail(Errc::SpaceMismatch, "immersion is not into the given space");
    if (Y.codim < 2) fail(Errc::CodimTooSmall, "blowup along a divisor is the identity");
    if (!Y.restrict_map || !Y.pushforward) fail(Errc::MissingGysinData, "immersion lacks maps");
    if (Y.normal.rank != Y.codim) fail(Errc::MissingGysinData, "normal bundle rank != codim");

    auto pe = projective_bundle(Y.sub, Y.normal, "zeta");
    auto B = std::make_shared<BlowupData>();
    B->base = X;
    B->center = Y;
    B->d = Y.codim;
    B->exc = pe.total;
    B->q = pe.pi;
    B->zeta = pe.alpha;
    B->xi = -pe.alpha;

    auto s = std::make_shared<SpaceData>();
    s->dim = X->dim;
    s->kind = SpaceKind::Blowup;
    s->label = "Bl(" + space_label(X) + ")";
    s->blow = B;
    Space total = s;

    Morphism p;
    p.source = total;
    p.target = X;
    p.pullback = [total](const Cls& c) {
        Cls z = Cls::zero(total);
        return Cls::of_blowup(total, c.poly(), z.exc());
    };
    p.pushforward = [X](const Cls& c) { return Cls::of(X, c.base()); };

    Immersion je;
    je.sub = B->exc;
    je.ambient = total;
    je.codim = 1;
    je.prov.kind = ImmersionProvenance::Exceptional;
    je.restrict_map = [total, B](const Cls& c) {
        return Cls::of(B->exc, B->restrict_to_exc(c));
    };
    je.pushforward = [total, B](const Cls& c) { return B->push_from_exc(c.poly(), total); };
    je.normal = line_bundle(B->exc, B->xi);
    je.cycle_class = B->push_from_exc(GradedElement::constant(space_ring(B->exc), 1), total);

    return BlowupResult{total, p, je, pe.pi};
}

Immersion sub_linear_space(const Space& Pn, int k) {
    if (Pn->kind != SpaceKind::Projective) {
        fail(Errc::TypeError, "sub_linear_space requires a projective space");
    }
    int n = Pn->dim;
    if (k < 0 || k >= n) fail(Errc::TypeError, "sub_linear_space requires 0 <= k < n");
    Space Pk = projective_space(k);
    const RingPtr& ra = space_ring(Pn);
    const RingPtr& rs = space_ring(Pk);
    int c = n - k;

    Immersion imm;
    imm.sub = Pk;
    imm.ambient = Pn;
    imm.codim = c;
    imm.prov = ImmersionProvenance{ImmersionProvenance::Linear, n, k};
    {
        std::vector<GradedElement> images = {GradedElement::generator(rs, std::size_t(0))};
        imm.restrict_map = [Pk, rs, images](const Cls& x) {
            return Cls::of(Pk, apply_gen_images(x.poly(), rs, images));
        };
    }
    imm.pushforward = [Pn, ra, c](const Cls& y) {
        std::map<Exponents, Rational> out;
        for (const auto& [m, coeff] : y.poly().terms()) {
            out[{m[0] + unsigned(c)}] += coeff;
        }
        return Cls::of(Pn, GradedElement::from_terms(ra, std::move(out)));
    };
    {
        GradedElement hs = GradedElement::generator(rs, std::size_t(0));
        std::vector<GradedElement> chern;
        for (int i = 1; i <= std::min(c, k); ++i) {
            chern.push_back(Rational(binomial(unsigned(c), unsigned(i))) * hs.pow(unsigned(i)));
        }
        imm.normal = make_bundle(Pk, c, std::move(chern));
    }
    imm.cycle_class = Cls::of(Pn, GradedElement::generator(ra, std::size_t(0)).pow(unsigned(c)));
    return imm;
}

namespace {

BundleClass restrict_bundle(const Immersion& imm, const BundleClass& B) {
    std::vector<GradedElement> chern;
    for (const auto& ci : B.chern) {
        chern.push_back(imm.restrict_map(Cls::of(imm.ambient, ci)).poly());
    }
    while (!chern.empty() && chern.back().is_zero()) chern.pop_back();
    int keep = std::min(B.rank, space_dim(imm.sub));
    if (int(chern.size()) > keep) chern.resize(std::size_t(keep));
    return make_bundle(imm.sub, B.rank, std::move(chern));
}

}  // namespace

Immersion compose_immersions(const Immersion& outer, const Immersion& inner) {
    if (inner.ambient != outer.sub) fail(Errc::SpaceMismatch, "immersions do not compose");
    Immersion imm;
    imm.sub = inner.sub;
    imm.ambient = outer.ambient;
    imm.codim = inner.codim + outer.codim;
    auto ir = inner.restrict_map;
    auto orr = outer.restrict_map;
    imm.restrict_map = [ir, orr](const Cls& c) { return ir(orr(c)); };
    auto ip = inner.pushforward;
    auto op = outer.pushforward;
    imm.pushforward = [ip, op](const Cls& c) { return op(ip(c)); };
    imm.normal = whitney_sum(inner.normal, restrict_bundle(inner, outer.normal));
    imm.cycle_class = outer.pushforward(inner.cycle_class);
    return imm;
}

}  // namespace grr
