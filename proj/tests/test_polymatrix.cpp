#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "sosmat/polymatrix.hpp"
#include "sosmat/rng.hpp"

using namespace sosmat;

namespace {

// Example 1 data: F = [[t^2, t(t+1)], [t(t+1), (t+1)^2]]
PolyMatrix example1_matrix() {
    Polynomial f = Polynomial::univariate({0, 0, 1});
    Polynomial g = Polynomial::univariate({0, 1, 1});
    Polynomial h = Polynomial::univariate({1, 2, 1});
    return PolyMatrix::from_rows({{f, g}, {g, h}});
}

PolyMatrix random_matrix(int rows, int cols, int n, int d, Rng& rng) {
    PolyMatrix out(rows, cols, n);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            Polynomial p(n, d);
            for (double& c : p.coeffs()) c = 2.0 * rng.uniform01() - 1.0;
            out.at(i, j) = p;
        }
    return out;
}

}  // namespace

TEST_CASE("mat_mul with identity and Example 1 congruence") {
    PolyMatrix F = example1_matrix();
    CHECK(mat_max_abs_diff(mat_mul(PolyMatrix::identity(2, 1), F), F) == 0.0);

    Polynomial t2 = Polynomial::univariate({0, 0, 1});
    Polynomial tt1 = Polynomial::univariate({0, 1, 1});
    PolyMatrix xp = PolyMatrix::from_rows({{t2, Polynomial(1, 0)}, {tt1, t2}});
    PolyMatrix D = PolyMatrix::from_rows(
        {{Polynomial::univariate({0, 0, 0, 0, 0, 0, 1}), Polynomial(1, 0)},
         {Polynomial(1, 0), Polynomial(1, 0)}});
    PolyMatrix lhs = mat_mul(xp, mat_mul(D, transpose(xp)));
    Polynomial t8 = Polynomial::univariate({0, 0, 0, 0, 0, 0, 0, 0, 1});
    CHECK(mat_max_abs_diff(lhs, mat_scale(F, t8)) <= 1e-12);

    CHECK_THROWS_AS(mat_mul(F, PolyMatrix(3, 3, 1)), std::invalid_argument);
}

TEST_CASE("mat_mul agrees with numeric products at sample points") {
    Rng rng(5);
    PolyMatrix A = random_matrix(2, 3, 1, 2, rng);
    PolyMatrix B = random_matrix(3, 2, 1, 3, rng);
    PolyMatrix AB = mat_mul(A, B);
    for (int k = 0; k < 20; ++k) {
        double t = -2.0 + 4.0 * rng.uniform01();
        std::vector<double> p{t};
        Eigen::MatrixXd want = eval_mat(A, p) * eval_mat(B, p);
        CHECK((eval_mat(AB, p) - want).cwiseAbs().maxCoeff() <=
              1e-10 * (1.0 + want.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("transpose") {
    PolyMatrix F = example1_matrix();
    CHECK(mat_max_abs_diff(transpose(F), F) == 0.0);

    Polynomial t = Polynomial::univariate({0, 1});
    PolyMatrix up = PolyMatrix::from_rows({{Polynomial(1, 0), t}, {Polynomial(1, 0), Polynomial(1, 0)}});
    CHECK(transpose(up).at(1, 0).coeffs() == t.coeffs());
    CHECK(transpose(up).at(0, 1).max_abs() == 0.0);
    CHECK(mat_max_abs_diff(transpose(transpose(up)), up) == 0.0);

    Rng rng(9);
    PolyMatrix A = random_matrix(2, 2, 1, 2, rng);
    PolyMatrix B = random_matrix(2, 2, 1, 2, rng);
    CHECK(mat_max_abs_diff(transpose(mat_mul(A, B)), mat_mul(transpose(B), transpose(A))) <= 1e-12);
}

TEST_CASE("eval_mat pinned values") {
    // Example 2 matrix at the origin is the identity
    Polynomial f11(2, 6), f22(2, 6), f12(2, 2);
    f11.set_coeff({0, 0}, 1.0);
    f11.set_coeff({4, 2}, 1.0);
    f22.set_coeff({0, 0}, 1.0);
    f22.set_coeff({2, 4}, 1.0);
    f12.set_coeff({1, 1}, 1.0);
    PolyMatrix F2 = PolyMatrix::from_rows({{f11, f12}, {f12, f22}});
    Eigen::MatrixXd at0 = eval_mat(F2, std::vector<double>{0.0, 0.0});
    CHECK((at0 - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);

    PolyMatrix zero(2, 2, 1);
    CHECK(eval_mat(zero, std::vector<double>{1.0}).cwiseAbs().maxCoeff() == 0.0);

    Eigen::MatrixXd at1 = eval_mat(example1_matrix(), std::vector<double>{1.0});
    Eigen::MatrixXd want(2, 2);
    want << 1, 2, 2, 4;
    CHECK((at1 - want).cwiseAbs().maxCoeff() <= 1e-14);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(at1);
    CHECK(es.eigenvalues()(0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(es.eigenvalues()(1) == doctest::Approx(5.0));

    CHECK_THROWS_AS(eval_mat(example1_matrix(), std::vector<double>{1.0, 2.0}),
                    std::invalid_argument);
}

TEST_CASE("random_symmetric contract") {
    PolyMatrix F = random_symmetric(3, 1, 2, 42);
    CHECK(F.is_symmetric(0.0));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            CHECK(F.at(i, j).coeffs().size() == 3);
            for (double c : F.at(i, j).coeffs()) {
                CHECK(c >= 0.0);
                CHECK(c < 1.0);
            }
        }
    CHECK(F.at(2, 1).coeffs() == F.at(1, 2).coeffs());

    PolyMatrix single = random_symmetric(1, 2, 3, 7);
    CHECK(single.is_symmetric(0.0));

    PolyMatrix again = random_symmetric(3, 1, 2, 42);
    CHECK(mat_max_abs_diff(F, again) == 0.0);

    CHECK_THROWS_AS(random_symmetric(0, 1, 2, 1), std::invalid_argument);
}

TEST_CASE("mat_mul associativity on random instances") {
    Rng rng(21);
    for (int m : {2, 3}) {
        for (int trial = 0; trial < 5; ++trial) {
            PolyMatrix A = random_matrix(m, m, 1, 2, rng);
            PolyMatrix B = random_matrix(m, m, 1, 2, rng);
            PolyMatrix C = random_matrix(m, m, 1, 2, rng);
            PolyMatrix left = mat_mul(mat_mul(A, B), C);
            PolyMatrix right = mat_mul(A, mat_mul(B, C));
            CHECK(mat_max_abs_diff(left, right) / (1.0 + left.max_abs()) <= 1e-12);
        }
    }
}

TEST_CASE("congruence preserves symmetry") {
    Rng rng(23);
    for (int trial = 0; trial < 5; ++trial) {
        PolyMatrix F = random_symmetric(3, 1, 2, 100 + static_cast<std::uint64_t>(trial));
        PolyMatrix X = random_matrix(3, 3, 1, 2, rng);
        PolyMatrix out = mat_mul(X, mat_mul(F, transpose(X)));
        CHECK(out.is_symmetric(1e-12 * (1.0 + out.max_abs())));
    }
}

TEST_CASE("eval_mat is a homomorphism on random instances") {
    Rng rng(25);
    PolyMatrix A = random_matrix(2, 2, 2, 2, rng);
    PolyMatrix B = random_matrix(2, 2, 2, 2, rng);
    for (int k = 0; k < 20; ++k) {
        std::vector<double> p{-2.0 + 4.0 * rng.uniform01(), -2.0 + 4.0 * rng.uniform01()};
        Eigen::MatrixXd sum = eval_mat(A, p) + eval_mat(B, p);
        CHECK((eval_mat(mat_add(A, B), p) - sum).cwiseAbs().maxCoeff() <=
              1e-10 * (1.0 + sum.cwiseAbs().maxCoeff()));
        Eigen::MatrixXd tr = eval_mat(A, p).transpose();
        CHECK((eval_mat(transpose(A), p) - tr).cwiseAbs().maxCoeff() <= 1e-12);
    }
}
