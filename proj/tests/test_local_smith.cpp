#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "grr/local_smith.hpp"

#include <random>

using namespace grr;

namespace {

LocalSeries poly(const LocalVars& v, std::map<LocalMono, Rational> terms,
                 int prec = kExactPrecision) {
    return LocalSeries::from_terms(v, std::move(terms), prec);
}

LocalMatrix matrix2(const LocalVars& v, LocalSeries a, LocalSeries b, LocalSeries c,
                    LocalSeries d) {
    LocalMatrix M;
    M.vars = v;
    M.size = 2;
    M.entries = {std::move(a), std::move(b), std::move(c), std::move(d)};
    return M;
}

// random unit conjugation applied as elementary operations
LocalMatrix conjugated_diag(const LocalVars& v, const std::vector<LocalMono>& diag, int precision,
                            std::mt19937& rng) {
    const int n = int(diag.size());
    LocalMatrix M;
    M.vars = v;
    M.size = n;
    M.entries.assign(std::size_t(n * n), LocalSeries::zero(v));
    for (int i = 0; i < n; ++i) {
        M.at(i, i) = LocalSeries::monomial(v, diag[std::size_t(i)], 1);
    }
    std::uniform_int_distribution<int> pick(0, n - 1), coef(-2, 2), varpick(0, int(v->size()) - 1),
        deg(0, 2);
    auto random_series = [&]() {
        std::map<LocalMono, Rational> t;
        for (int terms = 0; terms < 3; ++terms) {
            LocalMono m(v->size(), 0);
            int d = deg(rng);
            for (int q = 0; q < d; ++q) m[std::size_t(varpick(rng))] += 1;
            int c = coef(rng);
            if (c != 0) t[m] += c;
        }
        return LocalSeries::from_terms(v, std::move(t));
    };
    for (int step = 0; step < 2 * n + 2; ++step) {
        int i = pick(rng), j = pick(rng);
        if (i == j) continue;
        LocalSeries c = random_series();
        if (step % 2) {
            for (int col = 0; col < n; ++col) M.at(i, col) = M.at(i, col) + c * M.at(j, col);
        } else {
            for (int row = 0; row < n; ++row) M.at(row, i) = M.at(row, i) + c * M.at(row, j);
        }
    }
    // unit row scalings: a random series with its constant term forced
    for (int i = 0; i < n; ++i) {
        LocalSeries r = random_series();
        LocalSeries u = r - LocalSeries::constant(v, r.coeff(LocalMono(v->size(), 0))) +
                        LocalSeries::constant(v, Rational(1 + (i % 2)));
        for (int col = 0; col < n; ++col) M.at(i, col) = u * M.at(i, col);
    }
    for (auto& e : M.entries) e = e.truncated(precision);
    return M;
}

}  // namespace

TEST_CASE("series arithmetic and precision") {
    auto v = make_local_vars({"x", "y"});
    auto x = LocalSeries::monomial(v, {1, 0}, 1, 16);
    auto y = LocalSeries::monomial(v, {0, 1}, 1, 16);
    auto one = LocalSeries::constant(v, 1, 16);

    SUBCASE("unit inversion") {
        auto u = one + x + 2 * y;
        auto ui = u.inverse();
        auto prod = u * ui;
        CHECK(prod.truncated(prod.precision()).terms() ==
              LocalSeries::constant(v, 1, prod.precision()).terms());
        CHECK_THROWS_AS(x.inverse(), Error);
    }
    SUBCASE("monomial division tracks precision") {
        auto s = (x * x + x * y).truncated(10);
        CHECK(s.divisible_by_monomial({1, 0}));
        auto q = s.divided_by_monomial({1, 0});
        CHECK(q.precision() == 9);
        CHECK(q.coeff({1, 0}) == 1);
        CHECK(q.coeff({0, 1}) == 1);
        CHECK(!s.divisible_by_monomial({0, 1}));
        CHECK_THROWS_AS(s.divided_by_monomial({0, 1}), Error);
    }
    SUBCASE("product precision uses orders") {
        auto a = x.truncated(5);   // known to degree 5, order 1
        auto b = y.truncated(7);   // known to degree 7, order 1
        CHECK((a * b).precision() == 6);
    }
}

TEST_CASE("fitting minors") {
    auto v = make_local_vars({"x"});
    auto x = LocalSeries::monomial(v, {1}, 1, 16);
    SUBCASE("diag(x, x)") {
        auto M = matrix2(v, x, LocalSeries::zero(v, 16), LocalSeries::zero(v, 16), x);
        auto f1 = fitting_minors(M, 1);
        REQUIRE(f1.size() == 4);
        int zeros = 0, xs = 0;
        for (const auto& g : f1) {
            if (g.is_zero()) ++zeros;
            if (g.coeff({1}) == 1) ++xs;
        }
        CHECK(zeros == 2);
        CHECK(xs == 2);
        auto f2 = fitting_minors(M, 2);
        REQUIRE(f2.size() == 1);
        CHECK(f2[0].coeff({2}) == 1);
    }
    SUBCASE("[[x, x], [x, x + x^2]]") {
        auto M = matrix2(v, x, x, x, x + x * x);
        auto f2 = fitting_minors(M, 2);
        REQUIRE(f2.size() == 1);
        // det = x(x + x^2) - x^2 = x^3
        CHECK(f2[0].coeff({3}) == 1);
        CHECK(f2[0].coeff({2}) == 0);
    }
}

TEST_CASE("monomial principality") {
    auto v = make_local_vars({"x", "y"});
    auto x = LocalSeries::monomial(v, {1, 0}, 1, 16);
    auto y = LocalSeries::monomial(v, {0, 1}, 1, 16);
    SUBCASE("gcd of monomials") {
        auto g = monomial_principality({x * x, x * x * y});
        REQUIRE(g.has_value());
        CHECK(*g == LocalMono{2, 0});
    }
    SUBCASE("(x, y) is not principal") {
        CHECK(!monomial_principality({x, y}).has_value());
    }
    SUBCASE("unit cofactor through a non-monomial generator") {
        auto g = monomial_principality({x + x * x, x * y});
        REQUIRE(g.has_value());
        CHECK(*g == LocalMono{1, 0});
    }
}

TEST_CASE("diagonalize") {
    auto v = make_local_vars({"x"});
    auto x = LocalSeries::monomial(v, {1}, 1, 16);
    auto z = LocalSeries::zero(v, 16);
    SUBCASE("already diagonal") {
        auto M = matrix2(v, x, z, z, x);
        auto R = diagonalize(M);
        CHECK(R.diagonal == std::vector<LocalMono>{{1}, {1}});
        CHECK(R.quotients == std::vector<LocalMono>{{1}, {0}});
        CHECK(verify_smith(M, R).passed());
    }
    SUBCASE("hand-eliminated example") {
        auto M = matrix2(v, x, x, x, x + x * x);
        auto R = diagonalize(M);
        // by-hand: factor x, pivot, clear the row and column, leaving x^2
        CHECK(R.diagonal == std::vector<LocalMono>{{1}, {2}});
        CHECK(R.quotients == std::vector<LocalMono>{{1}, {1}});
        CHECK(verify_smith(M, R).passed());
    }
    SUBCASE("antidiagonal symbols violate principality at level 1") {
        auto v2 = make_local_vars({"x", "y"});
        auto x2 = LocalSeries::monomial(v2, {1, 0}, 1, 16);
        auto y2 = LocalSeries::monomial(v2, {0, 1}, 1, 16);
        auto M = matrix2(v2, x2, y2, y2, x2);
        try {
            diagonalize(M);
            FAIL("expected PrincipalityViolation");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::PrincipalityViolation);
        }
    }
    SUBCASE("verify_smith rejects a corrupted diagonal") {
        auto M = matrix2(v, x, x, x, x + x * x);
        auto R = diagonalize(M);
        R.diagonal[1] = {3};
        CHECK(!verify_smith(M, R).passed());
    }
}

TEST_CASE("divisor_sequence") {
    auto v = make_local_vars({"x"});
    auto x = LocalSeries::monomial(v, {1}, 1, 16);
    auto x3 = LocalSeries::monomial(v, {3}, 1, 16);
    SUBCASE("simple chain") {
        auto d = divisor_sequence({{x}, {x3}});
        CHECK(d == std::vector<LocalMono>{{1}, {2}});
    }
    SUBCASE("matches diagonalize on the worked example") {
        auto M = matrix2(v, x, x, x, x + x * x);
        std::vector<std::vector<LocalSeries>> gens = {fitting_minors(M, 1), fitting_minors(M, 2)};
        auto d = divisor_sequence(gens);
        auto R = diagonalize(M);
        CHECK(d == R.diagonal);
    }
    SUBCASE("non-divisible levels are rejected") {
        auto x2 = LocalSeries::monomial(v, {2}, 1, 16);
        try {
            divisor_sequence({{x2}, {x}});
            FAIL("expected NonDivisible");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::NonDivisible);
        }
    }
}

TEST_CASE("random planted diagonals are recovered") {
    std::mt19937 rng(12345);
    std::uniform_int_distribution<int> nv(1, 3), sz(1, 4), bump(0, 1);
    for (int inst = 0; inst < 40; ++inst) {
        int vars_n = nv(rng);
        std::vector<std::string> names;
        for (int i = 0; i < vars_n; ++i) names.push_back(std::string(1, char('x' + i)));
        auto v = make_local_vars(names);
        int n = sz(rng);
        // increasing divisibility chain of monomials
        std::vector<LocalMono> diag;
        LocalMono cur(std::size_t(vars_n), 0);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < vars_n; ++j) cur[std::size_t(j)] += unsigned(bump(rng));
            diag.push_back(cur);
        }
        auto M = conjugated_diag(v, diag, 16, rng);
        auto R = diagonalize(M);
        CHECK(R.diagonal == diag);
        CHECK(verify_smith(M, R).passed());
        std::vector<std::vector<LocalSeries>> gens;
        for (int k = 1; k <= n; ++k) gens.push_back(fitting_minors(M, k));
        CHECK(divisor_sequence(gens) == R.diagonal);
    }
}
