#include "grr/graded.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace grr {

namespace {

bool divides(const Exponents& a, const Exponents& b) {
    // a | b componentwise
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) return false;
    }
    return true;
}

Exponents quotient(const Exponents& b, const Exponents& a) {
    Exponents q(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) q[i] = b[i] - a[i];
    return q;
}

Exponents mono_mul(const Exponents& a, const Exponents& b) {
    Exponents m(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) m[i] = a[i] + b[i];
    return m;
}

bool is_one(const Exponents& m) {
    return std::all_of(m.begin(), m.end(), [](unsigned e) { return e == 0; });
}

}  // namespace

int RingPresentation::find_gen(const std::string& name) const {
    for (std::size_t i = 0; i < gens_.size(); ++i) {
        if (gens_[i].name == name) return int(i);
    }
    return -1;
}

int RingPresentation::degree_of(const Exponents& m) const {
    int d = 0;
    for (std::size_t i = 0; i < m.size(); ++i) d += int(m[i]) * gens_[i].degree;
    return d;
}

RingPtr RingPresentation::make(std::vector<Generator> gens, int truncation,
                               std::vector<RewriteRule> rules) {
    auto r = std::shared_ptr<RingPresentation>(new RingPresentation());
    r->gens_ = std::move(gens);
    r->truncation_ = truncation;
    r->rules_ = std::move(rules);
    r->validate_and_close(nullptr);
    return r;
}

RingPtr RingPresentation::make(std::vector<Generator> gens, int truncation,
                               std::vector<RewriteRule> rules,
                               std::vector<Exponents> expected_basis) {
    auto r = std::shared_ptr<RingPresentation>(new RingPresentation());
    r->gens_ = std::move(gens);
    r->truncation_ = truncation;
    r->rules_ = std::move(rules);
    r->validate_and_close(&expected_basis);
    return r;
}

void RingPresentation::validate_and_close(const std::vector<Exponents>* expected_basis) {
    if (truncation_ < 0) fail(Errc::DegreeMismatch, "negative truncation degree");
    for (const auto& g : gens_) {
        if (g.degree < 1) fail(Errc::DegreeMismatch, "generator " + g.name + " has degree < 1");
        if (g.degree % 2) {
            fail(Errc::DegreeMismatch,
                 "generator " + g.name + " has odd degree; only even degrees are supported");
        }
    }

    const std::size_t n = gens_.size();
    for (auto& rule : rules_) {
        if (rule.lhs.size() != n) fail(Errc::DegreeMismatch, "rule lhs arity mismatch");
        if (is_one(rule.lhs)) fail(Errc::NonTerminatingRules, "rule rewrites the unit monomial");
        int d = degree_of(rule.lhs);
        for (auto it = rule.rhs.begin(); it != rule.rhs.end();) {
            if (it->first.size() != n) fail(Errc::DegreeMismatch, "rule rhs arity mismatch");
            if (degree_of(it->first) != d) {
                fail(Errc::DegreeMismatch, "rule is not degree-homogeneous");
            }
            // strictly smaller in lex keeps every rewrite chain finite
            if (!(it->first < rule.lhs)) {
                fail(Errc::NonTerminatingRules,
                     "rule rhs monomial is not smaller than its lhs in the monomial order");
            }
            if (it->second == 0) {
                it = rule.rhs.erase(it);
            } else {
                ++it;
            }
        }
    }

    // Enumerate all monomials of degree <= truncation in (degree, lex) order
    // and reduce each one along every applicable first step; a unique common
    // normal form certifies confluence (Newman's lemma on a finite set).
    std::vector<Exponents> all;
    Exponents cur(n, 0);
    std::function<void(std::size_t, int)> enumerate = [&](std::size_t i, int deg_left) {
        if (i == n) {
            all.push_back(cur);
            return;
        }
        for (unsigned e = 0;; ++e) {
            int d = int(e) * gens_[i].degree;
            if (d > deg_left) break;
            cur[i] = e;
            enumerate(i + 1, deg_left - d);
        }
        cur[i] = 0;
    };
    if (n == 0) {
        all.push_back(Exponents{});
    } else {
        enumerate(0, truncation_);
    }
    std::stable_sort(all.begin(), all.end(), [&](const Exponents& a, const Exponents& b) {
        int da = degree_of(a), db = degree_of(b);
        if (da != db) return da < db;
        return a < b;
    });

    bool have_rules = !rules_.empty();
    for (const auto& m : all) {
        if (!have_rules) {
            basis_.push_back(m);
            continue;
        }
        std::map<Exponents, Rational> candidate;
        bool reducible = false;
        bool first = true;
        for (const auto& rule : rules_) {
            if (!divides(rule.lhs, m)) continue;
            reducible = true;
            Exponents cof = quotient(m, rule.lhs);
            std::map<Exponents, Rational> value;
            for (const auto& [rm, rc] : rule.rhs) {
                Exponents prod = mono_mul(rm, cof);
                // same degree as m, hence <= truncation and strictly smaller
                // in the order: its normal form is already available
                const auto it = nf_.find(prod);
                if (it == nf_.end()) {
                    value[prod] += rc;
                    if (value[prod] == 0) value.erase(prod);
                } else {
                    for (const auto& [bm, bc] : it->second) {
                        value[bm] += rc * bc;
                        if (value[bm] == 0) value.erase(bm);
                    }
                }
            }
            if (first) {
                candidate = std::move(value);
                first = false;
            } else if (candidate != value) {
                std::ostringstream os;
                os << "monomial has two distinct normal forms";
                fail(Errc::NonConfluentRules, os.str());
            }
        }
        if (reducible) {
            nf_.emplace(m, std::move(candidate));
        } else {
            basis_.push_back(m);
        }
    }

    if (expected_basis) {
        std::vector<Exponents> want = *expected_basis;
        std::sort(want.begin(), want.end());
        std::vector<Exponents> got = basis_;
        std::sort(got.begin(), got.end());
        if (want != got) {
            fail(Errc::MissingNormalForm,
                 "irreducible monomials do not match the expected module basis");
        }
    }
}

const std::map<Exponents, Rational>* RingPresentation::reduction(const Exponents& m) const {
    auto it = nf_.find(m);
    return it == nf_.end() ? nullptr : &it->second;
}

// ---------------------------------------------------------------------------
// GradedElement

namespace {

void check_same_ring(const GradedElement& a, const GradedElement& b) {
    if (a.owner() != b.owner()) fail(Errc::OwnerMismatch, "elements of different rings");
}

}  // namespace

GradedElement GradedElement::zero(const RingPtr& r) {
    GradedElement e;
    e.ring_ = r;
    return e;
}

GradedElement GradedElement::constant(const RingPtr& r, const Rational& q) {
    GradedElement e;
    e.ring_ = r;
    if (q != 0) e.terms_[Exponents(r->n_gens(), 0)] = q;
    return e;
}

GradedElement GradedElement::generator(const RingPtr& r, std::size_t i) {
    Exponents m(r->n_gens(), 0);
    m[i] = 1;
    return from_terms(r, {{m, Rational(1)}});
}

GradedElement GradedElement::generator(const RingPtr& r, const std::string& name) {
    int i = r->find_gen(name);
    if (i < 0) fail(Errc::NameError, "no generator named " + name);
    return generator(r, std::size_t(i));
}

GradedElement GradedElement::from_terms(const RingPtr& r, std::map<Exponents, Rational> terms) {
    GradedElement e;
    e.ring_ = r;
    for (const auto& [m, c] : terms) {
        if (c == 0) continue;
        if (m.size() != r->n_gens()) fail(Errc::OwnerMismatch, "monomial arity mismatch");
        if (r->degree_of(m) > r->truncation()) continue;
        e.add_reduced(m, c);
    }
    return e;
}

void GradedElement::add_reduced(const Exponents& m, const Rational& c) {
    const auto* red = ring_->reduction(m);
    if (red == nullptr) {
        auto [it, inserted] = terms_.emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
        return;
    }
    for (const auto& [bm, bc] : *red) {
        auto [it, inserted] = terms_.emplace(bm, c * bc);
        if (!inserted) {
            it->second += c * bc;
            if (it->second == 0) terms_.erase(it);
        }
    }
}

GradedElement GradedElement::operator-() const {
    GradedElement e = *this;
    for (auto& [m, c] : e.terms_) c = -c;
    return e;
}

Rational GradedElement::coeff(const Exponents& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
}

Rational GradedElement::degree0() const {
    if (!ring_) return 0;
    return coeff(Exponents(ring_->n_gens(), 0));
}

GradedElement GradedElement::degree_part(int k) const {
    GradedElement e;
    e.ring_ = ring_;
    for (const auto& [m, c] : terms_) {
        if (ring_->degree_of(m) == k) e.terms_[m] = c;
    }
    return e;
}

int GradedElement::max_degree() const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, ring_->degree_of(m));
    return d;
}

GradedElement GradedElement::pow(unsigned k) const {
    GradedElement r = constant(ring_, 1);
    for (unsigned i = 0; i < k; ++i) r = r * *this;
    return r;
}

bool GradedElement::operator==(const GradedElement& b) const {
    check_same_ring(*this, b);
    return terms_ == b.terms_;
}

GradedElement operator+(const GradedElement& a, const GradedElement& b) {
    check_same_ring(a, b);
    GradedElement e = a;
    for (const auto& [m, c] : b.terms_) {
        auto [it, inserted] = e.terms_.emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) e.terms_.erase(it);
        }
    }
    return e;
}

GradedElement operator-(const GradedElement& a, const GradedElement& b) { return a + (-b); }

GradedElement operator*(const GradedElement& a, const GradedElement& b) {
    check_same_ring(a, b);
    GradedElement e = GradedElement::zero(a.owner());
    const auto& ring = *a.owner();
    int trunc = ring.truncation();
    for (const auto& [ma, ca] : a.terms_) {
        int da = ring.degree_of(ma);
        for (const auto& [mb, cb] : b.terms_) {
            if (da + ring.degree_of(mb) > trunc) continue;
            Exponents m = mono_mul(ma, mb);
            e.add_reduced(m, ca * cb);
        }
    }
    return e;
}

GradedElement operator*(const Rational& q, const GradedElement& a) {
    GradedElement e = GradedElement::zero(a.owner());
    if (q == 0) return e;
    e = a;
    for (auto& [m, c] : e.terms_) c *= q;
    return e;
}

// ---------------------------------------------------------------------------

GradedElement apply_series(const Series& coeffs, const GradedElement& x) {
    if (x.degree0() != 0) fail(Errc::NotNilpotent, "series argument has a degree-0 part");
    GradedElement acc = GradedElement::zero(x.owner());
    GradedElement power = GradedElement::constant(x.owner(), 1);
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        if (k > 0) {
            power = power * x;
            if (power.is_zero()) break;
        }
        if (coeffs[k] != 0) acc = acc + coeffs[k] * power;
    }
    return acc;
}

GradedElement invert_unit(const GradedElement& a) {
    Rational c = a.degree0();
    if (c == 0) fail(Errc::NotAUnit, "degree-0 part vanishes");
    // a = c(1 - w) with w nilpotent; a^{-1} = (1/c) sum w^k
    GradedElement w = GradedElement::constant(a.owner(), 1) - (1 / c) * a;
    GradedElement acc = GradedElement::constant(a.owner(), 1);
    GradedElement power = GradedElement::constant(a.owner(), 1);
    while (true) {
        power = power * w;
        if (power.is_zero()) break;
        acc = acc + power;
    }
    return (1 / c) * acc;
}

GradedElement exp_of(const GradedElement& x) {
    std::size_t n = std::size_t(x.owner()->truncation() / 2) + 2;
    return apply_series(series_exp(n), x);
}

GradedElement apply_gen_images(const GradedElement& x, const RingPtr& target,
                               const std::vector<GradedElement>& images) {
    const RingPtr& src = x.owner();
    if (images.size() != src->n_gens()) fail(Errc::DegreeMismatch, "wrong number of images");
    for (std::size_t i = 0; i < images.size(); ++i) {
        if (images[i].owner() != target) fail(Errc::OwnerMismatch, "image in wrong ring");
        // degree-preserving morphism: each image is homogeneous of the
        // generator's degree (zero is allowed)
        if (images[i].degree_part(src->gen(i).degree) != images[i]) {
            fail(Errc::DegreeMismatch,
                 "image of " + src->gen(i).name + " is not homogeneous of its degree");
        }
    }
    GradedElement acc = GradedElement::zero(target);
    for (const auto& [m, c] : x.terms()) {
        GradedElement term = GradedElement::constant(target, c);
        for (std::size_t i = 0; i < m.size() && !term.is_zero(); ++i) {
            for (unsigned e = 0; e < m[i]; ++e) term = term * images[i];
        }
        acc = acc + term;
    }
    return acc;
}

// ---------------------------------------------------------------------------
// printing

namespace {

std::string mono_to_string(const RingPresentation& ring, const Exponents& m, bool latex) {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] == 0) continue;
        if (!first) os << (latex ? " " : "*");
        first = false;
        os << ring.gen(i).name;
        if (m[i] > 1) {
            if (latex) {
                os << "^{" << m[i] << "}";
            } else {
                os << "^" << m[i];
            }
        }
    }
    return os.str();
}

std::string render(const GradedElement& e, bool latex) {
    if (!e.owner()) return "0";
    if (e.is_zero()) return "0";
    const auto& ring = *e.owner();
    std::vector<std::pair<Exponents, Rational>> terms(e.terms().begin(), e.terms().end());
    // graded-lex display order: degree ascending, then lexicographically
    // descending in generator declaration order (c1^2 before c2)
    std::stable_sort(terms.begin(), terms.end(), [&](const auto& a, const auto& b) {
        int da = ring.degree_of(a.first), db = ring.degree_of(b.first);
        if (da != db) return da < db;
        return b.first < a.first;
    });
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms) {
        Rational a = c;
        bool neg = a < 0;
        if (neg) a = -a;
        if (first) {
            if (neg) os << "-";
        } else {
            os << (neg ? " - " : " + ");
        }
        first = false;
        std::string mono = mono_to_string(ring, m, latex);
        if (mono.empty()) {
            os << (latex ? rat_to_latex(a) : rat_to_string(a));
        } else if (a == 1) {
            os << mono;
        } else {
            os << (latex ? rat_to_latex(a) + " " : rat_to_string(a) + "*") << mono;
        }
    }
    return os.str();
}

}  // namespace

std::string GradedElement::str() const { return render(*this, false); }
std::string GradedElement::latex() const { return render(*this, true); }

}  // namespace grr
