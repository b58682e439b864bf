#include "grr/local_smith.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace grr {

LocalVars make_local_vars(std::vector<std::string> names) {
    return std::make_shared<const std::vector<std::string>>(std::move(names));
}

namespace {

int total_degree(const LocalMono& m) {
    int d = 0;
    for (unsigned e : m) d += int(e);
    return d;
}

void check_vars(const LocalSeries& a, const LocalSeries& b) {
    if (a.vars() != b.vars()) fail(Errc::OwnerMismatch, "series over different variable lists");
}

}  // namespace

LocalSeries LocalSeries::zero(const LocalVars& vars, int precision) {
    LocalSeries s;
    s.vars_ = vars;
    s.precision_ = precision;
    return s;
}

LocalSeries LocalSeries::constant(const LocalVars& vars, const Rational& q, int precision) {
    LocalSeries s = zero(vars, precision);
    if (q != 0 && precision >= 0) s.terms_[LocalMono(vars->size(), 0)] = q;
    return s;
}

LocalSeries LocalSeries::monomial(const LocalVars& vars, const LocalMono& m, const Rational& c,
                                  int precision) {
    LocalSeries s = zero(vars, precision);
    if (m.size() != vars->size()) fail(Errc::OwnerMismatch, "monomial arity mismatch");
    if (c != 0 && total_degree(m) <= precision) s.terms_[m] = c;
    return s;
}

LocalSeries LocalSeries::from_terms(const LocalVars& vars, std::map<LocalMono, Rational> terms,
                                    int precision) {
    LocalSeries s = zero(vars, precision);
    for (auto& [m, c] : terms) {
        if (m.size() != vars->size()) fail(Errc::OwnerMismatch, "monomial arity mismatch");
        if (c != 0 && total_degree(m) <= precision) s.terms_[m] = c;
    }
    return s;
}

bool LocalSeries::is_unit() const {
    auto it = terms_.find(LocalMono(vars_->size(), 0));
    return it != terms_.end() && it->second != 0;
}

int LocalSeries::order() const {
    int o = kExactPrecision;
    for (const auto& [m, c] : terms_) o = std::min(o, total_degree(m));
    return o;
}

Rational LocalSeries::coeff(const LocalMono& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
}

LocalSeries LocalSeries::truncated(int precision) const {
    LocalSeries s = zero(vars_, std::min(precision, precision_));
    for (const auto& [m, c] : terms_) {
        if (total_degree(m) <= s.precision_) s.terms_[m] = c;
    }
    return s;
}

LocalSeries LocalSeries::operator-() const {
    LocalSeries s = *this;
    for (auto& [m, c] : s.terms_) c = -c;
    return s;
}

bool LocalSeries::operator==(const LocalSeries& b) const {
    check_vars(*this, b);
    return terms_ == b.terms_ && precision_ == b.precision_;
}

LocalSeries operator+(const LocalSeries& a, const LocalSeries& b) {
    check_vars(a, b);
    LocalSeries s = a.truncated(std::min(a.precision_, b.precision_));
    for (const auto& [m, c] : b.terms_) {
        if (total_degree(m) > s.precision_) continue;
        auto [it, inserted] = s.terms_.emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) s.terms_.erase(it);
        }
    }
    return s;
}

LocalSeries operator-(const LocalSeries& a, const LocalSeries& b) { return a + (-b); }

LocalSeries operator*(const LocalSeries& a, const LocalSeries& b) {
    check_vars(a, b);
    // known-to-degree bookkeeping: unknown terms of one factor meet the other
    // factor's order, so the product is certified to min(pa + ob, pb + oa)
    int oa = std::min(a.order(), a.precision_ + 1);
    int ob = std::min(b.order(), b.precision_ + 1);
    long long p = std::min<long long>(std::min<long long>(a.precision_ + (long long)ob,
                                                          b.precision_ + (long long)oa),
                                      kExactPrecision);
    LocalSeries s = LocalSeries::zero(a.vars_, int(p));
    const std::size_t nv = a.vars_->size();
    if (nv <= 4 && s.precision_ < (1 << 15)) {
        // pack exponents into 16-bit lanes so the accumulation map uses cheap
        // integer keys; degrees stay below the precision cap
        // var 0 in the high lanes keeps the packed order equal to vector lex
        auto pack = [nv](const LocalMono& m) {
            std::uint64_t k = 0;
            for (std::size_t i = 0; i < nv; ++i) k |= std::uint64_t(m[i]) << (16 * (nv - 1 - i));
            return k;
        };
        std::vector<std::pair<std::uint64_t, const Rational*>> ta, tb;
        std::vector<int> da, db;
        for (const auto& [m, c] : a.terms_) {
            ta.emplace_back(pack(m), &c);
            da.push_back(total_degree(m));
        }
        for (const auto& [m, c] : b.terms_) {
            tb.emplace_back(pack(m), &c);
            db.push_back(total_degree(m));
        }
        std::map<std::uint64_t, Rational> acc;
        for (std::size_t i = 0; i < ta.size(); ++i) {
            for (std::size_t j = 0; j < tb.size(); ++j) {
                if (da[i] + db[j] > s.precision_) continue;
                Rational prod = *ta[i].second * *tb[j].second;
                auto [it, inserted] = acc.try_emplace(ta[i].first + tb[j].first, std::move(prod));
                if (!inserted) it->second += prod;
            }
        }
        for (auto& [k, c] : acc) {
            if (c == 0) continue;
            LocalMono m(nv);
            for (std::size_t i = 0; i < nv; ++i) m[i] = unsigned((k >> (16 * (nv - 1 - i))) & 0xffff);
            s.terms_.emplace_hint(s.terms_.end(), std::move(m), std::move(c));
        }
        return s;
    }
    for (const auto& [ma, ca] : a.terms_) {
        int dda = total_degree(ma);
        for (const auto& [mb, cb] : b.terms_) {
            if (dda + total_degree(mb) > s.precision_) continue;
            LocalMono m(ma.size());
            for (std::size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
            auto [it, inserted] = s.terms_.emplace(std::move(m), ca * cb);
            if (!inserted) {
                it->second += ca * cb;
                if (it->second == 0) s.terms_.erase(it);
            }
        }
    }
    return s;
}

LocalSeries operator*(const Rational& q, const LocalSeries& a) {
    if (q == 0) return LocalSeries::zero(a.vars_, a.precision_);
    LocalSeries s = a;
    for (auto& [m, c] : s.terms_) c *= q;
    return s;
}

LocalSeries LocalSeries::inverse() const {
    if (!is_unit()) fail(Errc::NotAUnit, "series has no constant term");
    Rational c0 = coeff(LocalMono(vars_->size(), 0));
    // Newton iteration b <- b(2 - u b) doubles the matched degree per step;
    // the iterates agree with the true inverse up to `certified`, so the
    // final precision tag is the input's
    LocalSeries b = constant(vars_, 1 / c0, precision_);
    LocalSeries two = constant(vars_, 2, precision_);
    int certified = 0;
    while (certified < precision_) {
        certified = std::min(2 * certified + 1, precision_);
        LocalSeries t = (two - (*this * b).truncated(certified)) * b;
        b = from_terms(vars_, t.truncated(certified).terms(), precision_);
    }
    return b;
}

bool LocalSeries::divisible_by_monomial(const LocalMono& m) const {
    for (const auto& [t, c] : terms_) {
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (t[i] < m[i]) return false;
        }
    }
    return true;
}

LocalSeries LocalSeries::divided_by_monomial(const LocalMono& m) const {
    if (!divisible_by_monomial(m)) fail(Errc::NonDivisible, "series not divisible by monomial");
    LocalSeries s = zero(vars_, precision_ - total_degree(m));
    for (const auto& [t, c] : terms_) {
        LocalMono q(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) q[i] = t[i] - m[i];
        s.terms_[q] = c;
    }
    return s;
}

std::string LocalSeries::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        Rational a = c;
        bool neg = a < 0;
        if (neg) a = -a;
        if (first) {
            if (neg) os << "-";
        } else {
            os << (neg ? " - " : " + ");
        }
        first = false;
        std::string mono;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += (*vars_)[i];
            if (m[i] > 1) mono += "^" + std::to_string(m[i]);
        }
        if (mono.empty()) {
            os << rat_to_string(a);
        } else if (a == 1) {
            os << mono;
        } else {
            os << rat_to_string(a) << "*" << mono;
        }
    }
    return os.str();
}

// ---------------------------------------------------------------------------

LocalMatrix LocalMatrix::identity(const LocalVars& vars, int n) {
    LocalMatrix M;
    M.vars = vars;
    M.size = n;
    M.entries.assign(std::size_t(n * n), LocalSeries::zero(vars));
    for (int i = 0; i < n; ++i) M.at(i, i) = LocalSeries::constant(vars, 1);
    return M;
}

int LocalMatrix::precision() const {
    int p = kExactPrecision;
    for (const auto& e : entries) p = std::min(p, e.precision());
    return p;
}

namespace {

// Laplace expansion with shared subminors; map nodes are stable, so the
// recursion can hand out references while inserting.
struct MinorCache {
    const LocalMatrix* M;
    std::map<std::pair<std::vector<int>, std::vector<int>>, LocalSeries> memo;

    const LocalSeries& get(const std::vector<int>& rows, const std::vector<int>& cols) {
        auto key = std::make_pair(rows, cols);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        LocalSeries d;
        if (rows.size() == 1) {
            d = M->at(rows[0], cols[0]);
        } else {
            d = LocalSeries::zero(M->vars);
            std::vector<int> sub_rows(rows.begin() + 1, rows.end());
            for (std::size_t j = 0; j < cols.size(); ++j) {
                std::vector<int> sub_cols;
                for (std::size_t l = 0; l < cols.size(); ++l) {
                    if (l != j) sub_cols.push_back(cols[l]);
                }
                LocalSeries term = M->at(rows[0], cols[j]) * get(sub_rows, sub_cols);
                d = j % 2 ? d - term : d + term;
            }
        }
        return memo.emplace(std::move(key), std::move(d)).first->second;
    }
};

}  // namespace

LocalSeries det(const LocalMatrix& M) {
    std::vector<int> idx(std::size_t(M.size));
    for (int i = 0; i < M.size; ++i) idx[std::size_t(i)] = i;
    MinorCache cache{&M, {}};
    return cache.get(idx, idx);
}

LocalMatrix mat_mul(const LocalMatrix& A, const LocalMatrix& B) {
    if (A.size != B.size) fail(Errc::OwnerMismatch, "matrix size mismatch");
    LocalMatrix C;
    C.vars = A.vars;
    C.size = A.size;
    C.entries.assign(std::size_t(A.size * A.size), LocalSeries::zero(A.vars));
    for (int i = 0; i < A.size; ++i) {
        for (int j = 0; j < A.size; ++j) {
            LocalSeries acc = LocalSeries::zero(A.vars);
            for (int k = 0; k < A.size; ++k) acc = acc + A.at(i, k) * B.at(k, j);
            C.at(i, j) = acc;
        }
    }
    return C;
}

namespace {

std::vector<LocalSeries> fitting_minors_cached(const LocalMatrix& M, int k, MinorCache& cache) {
    if (k < 1 || k > M.size) fail(Errc::TypeError, "minor size out of range");
    std::vector<LocalSeries> out;
    std::vector<int> rows, cols;
    std::function<void(int, int)> pick_cols = [&](int start, int need) {
        if (need == 0) {
            out.push_back(cache.get(rows, cols));
            return;
        }
        for (int c = start; c <= M.size - need; ++c) {
            cols.push_back(c);
            pick_cols(c + 1, need - 1);
            cols.pop_back();
        }
    };
    std::function<void(int, int)> pick_rows = [&](int start, int need) {
        if (need == 0) {
            pick_cols(0, k);
            return;
        }
        for (int r = start; r <= M.size - need; ++r) {
            rows.push_back(r);
            pick_rows(r + 1, need - 1);
            rows.pop_back();
        }
    };
    pick_rows(0, k);
    return out;
}

}  // namespace

std::vector<LocalSeries> fitting_minors(const LocalMatrix& M, int k) {
    MinorCache cache{&M, {}};
    return fitting_minors_cached(M, k, cache);
}

std::optional<LocalMono> monomial_principality(const std::vector<LocalSeries>& gens) {
    std::size_t nv = 0;
    bool any = false;
    for (const auto& g : gens) {
        if (g.is_zero()) continue;
        nv = g.vars()->size();
        any = true;
    }
    if (!any) return std::nullopt;  // the zero ideal is not a monomial unit multiple

    LocalMono cand(nv, ~0u);
    for (const auto& g : gens) {
        if (g.is_zero()) continue;
        for (const auto& [m, c] : g.terms()) {
            for (std::size_t i = 0; i < nv; ++i) cand[i] = std::min(cand[i], m[i]);
        }
    }
    // some generator must be the candidate times a unit; in a local ring this
    // is exactly principality of the span
    for (const auto& g : gens) {
        if (g.is_zero()) continue;
        if (g.coeff(cand) != 0) return cand;
    }
    return std::nullopt;
}

namespace {

struct Elimination {
    LocalMatrix U, D, V;

    void swap_rows(int i, int j) {
        if (i == j) return;
        for (int c = 0; c < D.size; ++c) std::swap(D.at(i, c), D.at(j, c));
        for (int r = 0; r < U.size; ++r) std::swap(U.at(r, i), U.at(r, j));
    }
    void swap_cols(int i, int j) {
        if (i == j) return;
        for (int r = 0; r < D.size; ++r) std::swap(D.at(r, i), D.at(r, j));
        for (int c = 0; c < V.size; ++c) std::swap(V.at(i, c), V.at(j, c));
    }
    // D.row(i) -= c D.row(l)  =>  U.col(l) += c U.col(i)
    void row_op(int i, int l, const LocalSeries& c) {
        for (int col = 0; col < D.size; ++col) D.at(i, col) = D.at(i, col) - c * D.at(l, col);
        for (int r = 0; r < U.size; ++r) U.at(r, l) = U.at(r, l) + c * U.at(r, i);
    }
    // D.col(j) -= c D.col(l)  =>  V.row(l) += c V.row(j)
    void col_op(int j, int l, const LocalSeries& c) {
        for (int r = 0; r < D.size; ++r) D.at(r, j) = D.at(r, j) - c * D.at(r, l);
        for (int col = 0; col < V.size; ++col) V.at(l, col) = V.at(l, col) + c * V.at(j, col);
    }
    // D.row(l) *= u  =>  U.col(l) *= u^{-1}
    void scale_row(int l, const LocalSeries& u) {
        for (int col = 0; col < D.size; ++col) D.at(l, col) = u * D.at(l, col);
        LocalSeries ui = u.inverse();
        for (int r = 0; r < U.size; ++r) U.at(r, l) = ui * U.at(r, l);
    }
};

}  // namespace

SmithResult diagonalize(const LocalMatrix& M) {
    const int r = M.size;
    const int p = M.precision();
    if (p < 0) fail(Errc::PrecisionExhausted, "matrix carries no certified coefficients");

    // the normal-crossing hypothesis: every Fitting ideal is monomial-principal
    std::vector<LocalMono> fit_gens;
    MinorCache cache{&M, {}};
    for (int k = 1; k <= r; ++k) {
        auto g = monomial_principality(fitting_minors_cached(M, k, cache));
        if (!g) {
            fail(Errc::PrincipalityViolation,
                 "Fitting ideal at level " + std::to_string(k) + " is not monomial-principal");
        }
        fit_gens.push_back(*g);
    }

    Elimination e{LocalMatrix::identity(M.vars, r), M, LocalMatrix::identity(M.vars, r)};
    std::vector<LocalMono> diag;

    for (int l = 0; l < r; ++l) {
        // gcd monomial of the trailing block
        LocalMono delta(M.vars->size(), ~0u);
        bool seen = false;
        for (int i = l; i < r; ++i) {
            for (int j = l; j < r; ++j) {
                const auto& s = e.D.at(i, j);
                for (const auto& [m, c] : s.terms()) {
                    seen = true;
                    for (std::size_t v = 0; v < delta.size(); ++v) {
                        delta[v] = std::min(delta[v], m[v]);
                    }
                }
            }
        }
        if (!seen) {
            fail(Errc::PrecisionExhausted,
                 "trailing block vanishes to the working precision at level " +
                     std::to_string(l + 1));
        }
        // pivot: an entry equal to delta times a unit
        int pi = -1, pj = -1;
        for (int i = l; i < r && pi < 0; ++i) {
            for (int j = l; j < r; ++j) {
                if (e.D.at(i, j).coeff(delta) != 0) {
                    pi = i;
                    pj = j;
                    break;
                }
            }
        }
        if (pi < 0) {
            fail(Errc::PrecisionExhausted,
                 "no unit cofactor is certified at the working precision at level " +
                     std::to_string(l + 1));
        }
        e.swap_rows(l, pi);
        e.swap_cols(l, pj);

        // normalize the pivot to the bare monomial
        LocalSeries unit = e.D.at(l, l).divided_by_monomial(delta);
        if (unit.precision() < 0) fail(Errc::PrecisionExhausted, "pivot unit below precision");
        e.scale_row(l, unit.inverse());

        for (int i = l + 1; i < r; ++i) {
            if (e.D.at(i, l).is_zero()) continue;
            e.row_op(i, l, e.D.at(i, l).divided_by_monomial(delta));
        }
        for (int j = l + 1; j < r; ++j) {
            if (e.D.at(l, j).is_zero()) continue;
            e.col_op(j, l, e.D.at(l, j).divided_by_monomial(delta));
        }
        diag.push_back(delta);
    }

    // divisibility chain and the Fitting cross-check d_1...d_k = gen_k
    LocalMono acc(M.vars->size(), 0);
    std::vector<LocalMono> quot;
    for (int k = 0; k < r; ++k) {
        LocalMono q(diag[std::size_t(k)].size());
        for (std::size_t v = 0; v < q.size(); ++v) {
            unsigned prev = k ? diag[std::size_t(k - 1)][v] : 0u;
            if (diag[std::size_t(k)][v] < prev) {
                fail(Errc::IdentityViolation, "diagonal divisibility chain broken");
            }
            q[v] = diag[std::size_t(k)][v] - prev;
            acc[v] += diag[std::size_t(k)][v];
        }
        quot.push_back(q);
        if (acc != fit_gens[std::size_t(k)]) {
            fail(Errc::IdentityViolation,
                 "Fitting generators disagree with the diagonal at level " + std::to_string(k + 1));
        }
    }

    SmithResult R;
    R.U = e.U;
    R.V = e.V;
    R.diagonal = std::move(diag);
    R.quotients = std::move(quot);
    int cp = std::min(e.U.precision(), e.V.precision());
    R.certified_precision = std::min(cp, p);
    return R;
}

CheckReport verify_smith(const LocalMatrix& M, const SmithResult& R) {
    LocalMatrix D = LocalMatrix::identity(M.vars, M.size);
    for (int i = 0; i < M.size; ++i) {
        D.at(i, i) = LocalSeries::monomial(M.vars, R.diagonal[std::size_t(i)], 1);
    }
    LocalMatrix P = mat_mul(mat_mul(R.U, D), R.V);

    std::vector<CheckPart> parts;
    int common = kExactPrecision;
    bool product_ok = true;
    std::string bad;
    for (int i = 0; i < M.size; ++i) {
        for (int j = 0; j < M.size; ++j) {
            LocalSeries diff = P.at(i, j) - M.at(i, j);
            common = std::min(common, diff.precision());
            LocalSeries vis = diff.truncated(diff.precision());
            if (!vis.is_zero()) {
                product_ok = false;
                if (bad.empty()) {
                    bad = "entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                          "): " + vis.str();
                }
            }
        }
    }
    parts.push_back({"U diag V = M to precision " + std::to_string(common), product_ok,
                     "U diag V", "M", product_ok ? "0" : bad});
    bool u_unit = det(R.U).is_unit();
    bool v_unit = det(R.V).is_unit();
    parts.push_back({"det U is a unit", u_unit, det(R.U).str(), "unit", u_unit ? "" : "not a unit"});
    parts.push_back({"det V is a unit", v_unit, det(R.V).str(), "unit", v_unit ? "" : "not a unit"});
    return finish_report("verify_smith", std::move(parts),
                         "common precision " + std::to_string(common));
}

std::vector<LocalMono> divisor_sequence(
    const std::vector<std::vector<LocalSeries>>& fitting_gens) {
    std::vector<LocalMono> out;
    LocalMono prev;
    for (std::size_t k = 0; k < fitting_gens.size(); ++k) {
        auto g = monomial_principality(fitting_gens[k]);
        if (!g) {
            fail(Errc::PrincipalityViolation,
                 "Fitting ideal at level " + std::to_string(k + 1) + " is not monomial-principal");
        }
        if (k == 0) prev = LocalMono(g->size(), 0);
        LocalMono d(g->size());
        for (std::size_t v = 0; v < g->size(); ++v) {
            if ((*g)[v] < prev[v]) {
                fail(Errc::NonDivisible, "generator at level " + std::to_string(k + 1) +
                                             " is not divisible by the previous one");
            }
            d[v] = (*g)[v] - prev[v];
        }
        out.push_back(d);
        prev = *g;
    }
    return out;
}

}  // namespace grr
