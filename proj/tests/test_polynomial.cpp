#include <doctest.h>

#include <algorithm>
#include <vector>

#include "sosmat/polynomial.hpp"
#include "sosmat/rng.hpp"

using namespace sosmat;

namespace {

// independent enumeration oracle: collect all |alpha| <= d tuples and
// sort them; std::vector's lexicographic order is the paper's order
std::vector<Exponent> enumerate_sorted(int n, int d) {
    std::vector<Exponent> all;
    Exponent cur(static_cast<size_t>(n), 0);
    auto rec = [&](auto&& self, int pos, int remaining) -> void {
        if (pos == n) {
            all.push_back(cur);
            return;
        }
        for (int v = 0; v <= remaining; ++v) {
            cur[static_cast<size_t>(pos)] = v;
            self(self, pos + 1, remaining - v);
        }
        cur[static_cast<size_t>(pos)] = 0;
    };
    rec(rec, 0, d);
    std::sort(all.begin(), all.end());
    return all;
}

Polynomial motzkin() {
    Polynomial f(2, 6);
    f.set_coeff({0, 0}, 1.0);
    f.set_coeff({2, 2}, -3.0);
    f.set_coeff({2, 4}, 1.0);
    f.set_coeff({4, 2}, 1.0);
    return f;
}

Polynomial random_poly(int n, int d, Rng& rng) {
    Polynomial f(n, d);
    for (double& c : f.coeffs()) c = 2.0 * rng.uniform01() - 1.0;
    return f;
}

double rel_diff(const Polynomial& f, const Polynomial& g) {
    return max_abs_diff(f, g) / (1.0 + std::max(f.max_abs(), g.max_abs()));
}

}  // namespace

TEST_CASE("monomial cardinalities match C(n+d,n)") {
    for (int n = 1; n <= 4; ++n)
        for (int d = 0; d <= 10; ++d)
            CHECK(monomial_count(n, d) == static_cast<long long>(enumerate_sorted(n, d).size()));
}

TEST_CASE("lex enumeration matches the sorted oracle") {
    for (int n = 1; n <= 4; ++n)
        for (int d = 0; d <= 8; ++d) {
            auto oracle = enumerate_sorted(n, d);
            for (long long i = 0; i < static_cast<long long>(oracle.size()); ++i) {
                CHECK(lex_unrank(i, n, d) == oracle[static_cast<size_t>(i)]);
                CHECK(lex_rank(oracle[static_cast<size_t>(i)], n, d) == i);
            }
        }
}

TEST_CASE("Omega_{2,6} prints in the documented order") {
    auto basis = monomial_basis(2, 6);
    REQUIRE(basis.size() == 28);
    CHECK(basis[0] == Exponent{0, 0});
    CHECK(basis[1] == Exponent{0, 1});
    CHECK(basis[6] == Exponent{0, 6});
    CHECK(basis[7] == Exponent{1, 0});
    CHECK(basis[25] == Exponent{5, 0});
    CHECK(basis[26] == Exponent{5, 1});
    CHECK(basis[27] == Exponent{6, 0});
}

TEST_CASE("lex_rank pinned values") {
    CHECK(lex_rank({0, 0}, 2, 6) == 0);
    CHECK(lex_rank({0}, 1, 5) == 0);

    // the -3 entry of the stored Motzkin vector sits at the (2,2) slot
    Polynomial f = motzkin();
    long long idx = lex_rank({2, 2}, 2, 6);
    CHECK(f.coeffs()[static_cast<size_t>(idx)] == -3.0);
    auto oracle = enumerate_sorted(2, 6);
    CHECK(oracle[static_cast<size_t>(idx)] == Exponent{2, 2});
    CHECK(f.coeffs()[static_cast<size_t>(lex_rank({2, 4}, 2, 6))] == 1.0);
    CHECK(f.coeffs()[static_cast<size_t>(lex_rank({4, 2}, 2, 6))] == 1.0);
}

TEST_CASE("lex_unrank pinned values") {
    CHECK(lex_unrank(0, 2, 6) == Exponent{0, 0});
    CHECK(lex_unrank(7, 2, 6) == Exponent{1, 0});
    CHECK(monomial_count(2, 6) == 28);
    CHECK(lex_unrank(27, 2, 6) == Exponent{6, 0});
}

TEST_CASE("lex rank/unrank reject out-of-range input") {
    CHECK_THROWS_AS(lex_rank({7, 0}, 2, 6), std::invalid_argument);
    CHECK_THROWS_AS(lex_rank({-1, 0}, 2, 6), std::invalid_argument);
    CHECK_THROWS_AS(lex_unrank(28, 2, 6), std::invalid_argument);
    CHECK_THROWS_AS(lex_unrank(-1, 2, 6), std::invalid_argument);
}

TEST_CASE("add basics") {
    Polynomial t2 = Polynomial::univariate({0, 0, 1});
    Polynomial t1 = Polynomial::univariate({1, 1});
    CHECK(max_abs_diff(add(t2, t1), Polynomial::univariate({1, 1, 1})) == 0.0);

    Polynomial zero(1, 0);
    CHECK(max_abs_diff(add(t2, zero), t2) == 0.0);
    CHECK(add(t2, -t2).max_abs() == 0.0);

    CHECK_THROWS_AS(add(t2, Polynomial(2, 1)), std::invalid_argument);
}

TEST_CASE("mul basics and Example 2 storage shape") {
    Polynomial t2 = Polynomial::univariate({0, 0, 1});
    Polynomial t1 = Polynomial::univariate({1, 1});
    CHECK(max_abs_diff(mul(t2, t1), Polynomial::univariate({0, 0, 1, 1})) == 0.0);

    Polynomial f(2, 6);
    f.set_coeff({0, 0}, 1.0);
    f.set_coeff({4, 2}, 1.0);  // 1 + x^4 y^2
    Polynomial sq = mul(f, f);
    CHECK(sq.degree_bound() == 12);
    CHECK(sq.coeffs().size() == 91);
    int nonzeros = 0;
    for (double c : sq.coeffs())
        if (c != 0.0) ++nonzeros;
    CHECK(nonzeros == 3);
    CHECK(sq.coeff({0, 0}) == 1.0);
    CHECK(sq.coeff({4, 2}) == 2.0);
    CHECK(sq.coeff({8, 4}) == 1.0);

    CHECK_THROWS_AS(mul(t2, Polynomial(2, 1)), std::invalid_argument);
}

TEST_CASE("mul agrees with the evaluation oracle") {
    Rng rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 1 + static_cast<int>(rng.uniform01() * 3);
        Polynomial f = random_poly(n, 3, rng);
        Polynomial g = random_poly(n, 2, rng);
        Polynomial h = mul(f, g);
        for (int k = 0; k < 20; ++k) {
            std::vector<double> p(static_cast<size_t>(n));
            for (double& x : p) x = -2.0 + 4.0 * rng.uniform01();
            double want = f(p) * g(p);
            CHECK(std::abs(h(p) - want) <= 1e-10 * (1.0 + std::abs(want)));
        }
    }
}

TEST_CASE("eval pinned values") {
    Polynomial f = Polynomial::univariate({1, 0, 1});
    CHECK(f({2.0}) == doctest::Approx(5.0));

    Polynomial m = motzkin();
    CHECK(m({1.0, 1.0}) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(m({0.0, 0.0}) == doctest::Approx(1.0));

    CHECK_THROWS_AS(m({1.0}), std::invalid_argument);
}

TEST_CASE("trim") {
    Polynomial f = Polynomial::univariate({1.0, 1e-18, 1.0});
    Polynomial t = trim(f, 1e-12);
    CHECK(t.coeffs() == std::vector<double>{1.0, 0.0, 1.0});

    Polynomial zero(1, 4);
    CHECK(trim(zero, 0.5).max_abs() == 0.0);

    Polynomial m = motzkin();
    CHECK(max_abs_diff(trim(m, 1e-12), m) == 0.0);

    // trim(f, 0) only tightens the bound
    Polynomial g = Polynomial::univariate({1.0, 2.0, 0.0, 0.0});
    Polynomial g0 = trim(g, 0.0);
    CHECK(g0.degree_bound() == 1);
    CHECK(max_abs_diff(g0, g) == 0.0);

    CHECK_THROWS_AS(trim(f, -1.0), std::invalid_argument);
}

TEST_CASE("ring axioms on random instances") {
    Rng rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        int n = 1 + static_cast<int>(rng.uniform01() * 3);
        int d = static_cast<int>(rng.uniform01() * 4);
        Polynomial f = random_poly(n, d, rng);
        Polynomial g = random_poly(n, d, rng);
        Polynomial h = random_poly(n, d, rng);
        CHECK(rel_diff(add(f, g), add(g, f)) <= 1e-12);
        CHECK(rel_diff(mul(f, g), mul(g, f)) <= 1e-12);
        CHECK(rel_diff(mul(mul(f, g), h), mul(f, mul(g, h))) <= 1e-12);
        CHECK(rel_diff(mul(f, add(g, h)), add(mul(f, g), mul(f, h))) <= 1e-12);
    }
}

TEST_CASE("evaluation is a ring homomorphism") {
    Rng rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 1 + static_cast<int>(rng.uniform01() * 2);
        Polynomial f = random_poly(n, 4, rng);
        Polynomial g = random_poly(n, 3, rng);
        std::vector<double> p(static_cast<size_t>(n));
        for (double& x : p) x = -2.0 + 4.0 * rng.uniform01();
        double fg = f(p) * g(p);
        CHECK(std::abs(mul(f, g)(p)-fg) <= 1e-10 * (1.0 + std::abs(fg)));
        double fpg = f(p) + g(p);
        CHECK(std::abs(add(f, g)(p)-fpg) <= 1e-10 * (1.0 + std::abs(fpg)));
    }
}

TEST_CASE("substitute_affine matches evaluation") {
    Rng rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        Polynomial f = random_poly(2, 4, rng);
        double c0 = 2.0 * rng.uniform01() - 1.0;
        double c1 = 0.5 + rng.uniform01();
        Polynomial g = substitute_affine(f, 0, c0, c1);
        for (int k = 0; k < 10; ++k) {
            double x = 2.0 * rng.uniform01() - 1.0;
            double y = 2.0 * rng.uniform01() - 1.0;
            CHECK(g({x, y}) == doctest::Approx(f({c0 + c1 * x, y})).epsilon(1e-10));
        }
    }
}

TEST_CASE("degree bookkeeping") {
    Polynomial zero(1, 3);
    CHECK(zero.degree() == -1);
    Polynomial t = Polynomial::univariate({0, 1});
    CHECK(t.degree() == 1);
    CHECK(mul(t, t).degree_bound() == 2);
    Polynomial m = motzkin();
    CHECK(m.degree() == 6);
}
