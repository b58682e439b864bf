#include "grr/classes.hpp"

#include <algorithm>
#include <functional>

namespace grr {

namespace {

void check_space(const BundleClass& a, const BundleClass& b) {
    if (a.space != b.space) fail(Errc::SpaceMismatch, "bundles on different spaces");
}

int stored_limit(const Space& X, int rank) { return std::min(rank, space_dim(X)); }

}  // namespace

GradedElement BundleClass::c(std::size_t i) const {
    if (i == 0) return GradedElement::constant(space_ring(space), 1);
    if (i > chern.size()) return GradedElement::zero(space_ring(space));
    return chern[i - 1];
}

GradedElement BundleClass::total_chern() const {
    GradedElement t = GradedElement::constant(space_ring(space), 1);
    for (const auto& ci : chern) t = t + ci;
    return t;
}

BundleClass make_bundle(const Space& X, int rank, std::vector<GradedElement> chern) {
    if (rank < 0) fail(Errc::NegativeRank, "bundle rank must be nonnegative");
    const RingPtr& ring = space_ring(X);
    if (int(chern.size()) > stored_limit(X, rank)) {
        fail(Errc::DegreeMismatch, "more Chern classes than min(rank, dim) allows");
    }
    for (std::size_t i = 0; i < chern.size(); ++i) {
        if (chern[i].owner() != ring) fail(Errc::OwnerMismatch, "Chern class in wrong ring");
        if (chern[i].degree_part(2 * int(i + 1)) != chern[i]) {
            fail(Errc::DegreeMismatch, "c_" + std::to_string(i + 1) + " is not pure of degree " +
                                           std::to_string(2 * (i + 1)));
        }
    }
    // drop a zero tail so equality of bundles is representation-independent
    while (!chern.empty() && chern.back().is_zero()) chern.pop_back();
    return BundleClass{X, rank, std::move(chern)};
}

BundleClass trivial_bundle(const Space& X, int rank) { return make_bundle(X, rank, {}); }

BundleClass line_bundle(const Space& X, const GradedElement& c1) {
    if (c1.is_zero()) return make_bundle(X, 1, {});
    if (space_dim(X) < 1) return make_bundle(X, 1, {});
    return make_bundle(X, 1, {c1});
}

KClass make_kclass(const Space& X, int rank, const GradedElement& ch) {
    if (ch.owner() != space_ring(X)) fail(Errc::OwnerMismatch, "ch in wrong ring");
    if (ch.degree0() != rank) fail(Errc::DegreeMismatch, "degree-0 part of ch must equal rank");
    return KClass{X, rank, ch};
}

KClass kclass_of_line(const Space& X, const GradedElement& c1) {
    return KClass{X, 1, exp_of(c1)};
}

KClass operator+(const KClass& a, const KClass& b) {
    if (a.space != b.space) fail(Errc::SpaceMismatch, "K-classes on different spaces");
    return KClass{a.space, a.rank + b.rank, a.ch + b.ch};
}

KClass operator-(const KClass& a, const KClass& b) {
    if (a.space != b.space) fail(Errc::SpaceMismatch, "K-classes on different spaces");
    return KClass{a.space, a.rank - b.rank, a.ch - b.ch};
}

// ---------------------------------------------------------------------------
// Newton identities

namespace {

// power sums p_1..p_K from the Chern classes
std::vector<GradedElement> power_sums(const BundleClass& E, int K) {
    const RingPtr& ring = space_ring(E.space);
    std::vector<GradedElement> p(std::size_t(K) + 1, GradedElement::zero(ring));
    for (int k = 1; k <= K; ++k) {
        GradedElement acc = GradedElement::zero(ring);
        for (int i = 1; i < k; ++i) {
            GradedElement t = E.c(std::size_t(i)) * p[std::size_t(k - i)];
            acc = acc + (i % 2 ? t : -t);
        }
        GradedElement top = Rational(k) * E.c(std::size_t(k));
        p[std::size_t(k)] = acc + (k % 2 ? top : -top);
    }
    return p;
}

}  // namespace

KClass chern_to_ch(const BundleClass& E) {
    const RingPtr& ring = space_ring(E.space);
    int K = ring->truncation() / 2;
    auto p = power_sums(E, K);
    GradedElement ch = GradedElement::constant(ring, E.rank);
    for (int k = 1; k <= K; ++k) {
        ch = ch + Rational(1, factorial(unsigned(k))) * p[std::size_t(k)];
    }
    return KClass{E.space, E.rank, ch};
}

BundleClass ch_to_chern(const KClass& x) {
    if (x.rank < 0) fail(Errc::NegativeRank, "no bundle class for negative rank");
    const RingPtr& ring = space_ring(x.space);
    int K = ring->truncation() / 2;
    std::vector<GradedElement> p(std::size_t(K) + 1, GradedElement::zero(ring));
    for (int k = 1; k <= K; ++k) {
        p[std::size_t(k)] = Rational(factorial(unsigned(k))) * x.ch.degree_part(2 * k);
    }
    std::vector<GradedElement> c(std::size_t(K) + 1, GradedElement::zero(ring));
    int keep = stored_limit(x.space, x.rank);
    std::vector<GradedElement> out;
    for (int k = 1; k <= K; ++k) {
        GradedElement acc = p[std::size_t(k)];
        for (int i = 1; i < k; ++i) {
            GradedElement t = c[std::size_t(i)] * p[std::size_t(k - i)];
            acc = acc - (i % 2 ? t : -t);
        }
        c[std::size_t(k)] = Rational(k % 2 ? 1 : -1, k) * acc;
        if (k <= keep) out.push_back(c[std::size_t(k)]);
    }
    return make_bundle(x.space, x.rank, std::move(out));
}

// ---------------------------------------------------------------------------
// root workspace

namespace {

struct Workspace {
    RingPtr ring;
    std::vector<GradedElement> roots;
    std::vector<GradedElement> elementary;  // e_1..e_r
};

Workspace make_workspace(int r, int trunc) {
    std::vector<Generator> gens;
    for (int i = 0; i < r; ++i) gens.push_back({"x" + std::to_string(i + 1), 2});
    Workspace w;
    w.ring = RingPresentation::make(std::move(gens), trunc, {});
    for (int i = 0; i < r; ++i) w.roots.push_back(GradedElement::generator(w.ring, std::size_t(i)));
    // e_k = sum over k-subsets of the product of roots
    for (int k = 1; k <= r; ++k) {
        GradedElement ek = GradedElement::zero(w.ring);
        std::vector<int> idx(static_cast<std::size_t>(k), 0);
        std::function<void(int, int)> rec = [&](int pos, int start) {
            if (pos == k) {
                GradedElement t = GradedElement::constant(w.ring, 1);
                for (int j = 0; j < k; ++j) t = t * w.roots[std::size_t(idx[std::size_t(j)])];
                ek = ek + t;
                return;
            }
            for (int i = start; i < r; ++i) {
                idx[std::size_t(pos)] = i;
                rec(pos + 1, i + 1);
            }
        };
        rec(0, 0);
        w.elementary.push_back(ek);
    }
    return w;
}

// rewrites a symmetric workspace element in the elementary symmetric
// polynomials and substitutes e_i -> c_i(E)
GradedElement symmetric_to_host(GradedElement sym, const Workspace& w, const BundleClass& E) {
    const RingPtr& host = space_ring(E.space);
    const std::size_t r = w.roots.size();
    GradedElement out = GradedElement::zero(host);
    int trunc = w.ring->truncation();
    for (int d = 0; d <= trunc; d += 2) {
        GradedElement part = sym.degree_part(d);
        while (!part.is_zero()) {
            // leading monomial in lex order
            const auto& lead = *part.terms().rbegin();
            const Exponents& m = lead.first;
            for (std::size_t i = 0; i + 1 < r; ++i) {
                if (m[i] < m[i + 1]) {
                    fail(Errc::NonSymmetricResult, "leading exponents are not dominance-sorted");
                }
            }
            // exponents of the matching elementary monomial
            std::vector<unsigned> mu(r);
            for (std::size_t i = 0; i < r; ++i) {
                mu[i] = m[i] - (i + 1 < r ? m[i + 1] : 0);
            }
            GradedElement model = GradedElement::constant(w.ring, 1);
            GradedElement image = GradedElement::constant(host, lead.second);
            for (std::size_t i = 0; i < r; ++i) {
                if (mu[i] == 0) continue;
                model = model * w.elementary[i].pow(mu[i]);
                if (!image.is_zero()) image = image * E.c(i + 1).pow(mu[i]);
            }
            part = part - lead.second * model;
            out = out + image;
        }
    }
    return out;
}

}  // namespace

GradedElement symmetric_apply(const Series& per_root, const BundleClass& E, SymMode mode,
                              int root_bound) {
    const RingPtr& host = space_ring(E.space);
    if (E.rank > root_bound) fail(Errc::RootBoundExceeded, "rank exceeds the root bound");
    if (E.rank == 0) {
        return GradedElement::constant(host, mode == SymMode::Product ? 1 : 0);
    }
    Workspace w = make_workspace(E.rank, host->truncation());
    GradedElement acc = GradedElement::constant(w.ring, mode == SymMode::Product ? 1 : 0);
    for (const auto& x : w.roots) {
        GradedElement s = apply_series(per_root, x);
        acc = mode == SymMode::Product ? acc * s : acc + s;
    }
    return symmetric_to_host(acc, w, E);
}

GradedElement todd(const BundleClass& E) {
    const RingPtr& host = space_ring(E.space);
    std::size_t n = std::size_t(host->truncation() / 2) + 2;
    return symmetric_apply(series_todd(n), E, SymMode::Product);
}

BundleClass dual(const BundleClass& E) {
    std::vector<GradedElement> c = E.chern;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i % 2 == 0) c[i] = -c[i];  // flip c_odd
    }
    return make_bundle(E.space, E.rank, std::move(c));
}

BundleClass twist_by_line(const BundleClass& E, const BundleClass& L, int root_bound) {
    check_space(E, L);
    if (L.rank != 1) fail(Errc::TypeError, "twist requires a line bundle");
    if (E.rank > root_bound) fail(Errc::RankOverflow, "twist on rank above the root bound");
    const RingPtr& ring = space_ring(E.space);
    GradedElement l = L.c(1);
    int r = E.rank;
    std::vector<GradedElement> out;
    int keep = stored_limit(E.space, r);
    for (int j = 1; j <= keep; ++j) {
        // e_j of the shifted roots x_i + l
        GradedElement cj = GradedElement::zero(ring);
        for (int i = 0; i <= j; ++i) {
            Rational b = Rational(binomial(unsigned(r - i), unsigned(j - i)));
            if (b == 0) continue;
            cj = cj + b * (E.c(std::size_t(i)) * l.pow(unsigned(j - i)));
        }
        out.push_back(cj);
    }
    return make_bundle(E.space, r, std::move(out));
}

BundleClass whitney_sum(const BundleClass& E, const BundleClass& F) {
    check_space(E, F);
    GradedElement total = E.total_chern() * F.total_chern();
    int rank = E.rank + F.rank;
    std::vector<GradedElement> out;
    for (int i = 1; i <= stored_limit(E.space, rank); ++i) {
        out.push_back(total.degree_part(2 * i));
    }
    return make_bundle(E.space, rank, std::move(out));
}

KClass tensor_ch(const KClass& x, const KClass& y) {
    if (x.space != y.space) fail(Errc::SpaceMismatch, "K-classes on different spaces");
    return KClass{x.space, x.rank * y.rank, x.ch * y.ch};
}

GradedElement segre(const BundleClass& E) { return invert_unit(E.total_chern()); }

KClass lambda_minus_one(const BundleClass& E, int root_bound) {
    const RingPtr& host = space_ring(E.space);
    if (E.rank > root_bound) fail(Errc::RootBoundExceeded, "rank exceeds the root bound");
    int r = E.rank;
    if (r == 0) return KClass{E.space, 1, GradedElement::constant(host, 1)};
    Workspace w = make_workspace(r, host->truncation());
    GradedElement acc = GradedElement::zero(w.ring);
    // ch(Lambda^k E) = sum over k-subsets S of exp(sum_{i in S} x_i)
    for (unsigned mask = 0; mask < (1u << r); ++mask) {
        GradedElement lin = GradedElement::zero(w.ring);
        int k = 0;
        for (int i = 0; i < r; ++i) {
            if (mask & (1u << i)) {
                lin = lin + w.roots[std::size_t(i)];
                ++k;
            }
        }
        GradedElement e = exp_of(lin);
        acc = acc + (k % 2 ? -e : e);
    }
    GradedElement ch = symmetric_to_host(acc, w, E);
    // alternating binomial sum: the virtual rank vanishes for r >= 1
    return KClass{E.space, 0, ch};
}

}  // namespace grr
