#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "sosmat/lmsolver.hpp"
#include "sosmat/polynomial.hpp"

namespace sosmat {

// Affine constraints on a Gram matrix: l(X) = [Tr(A_1^T X) ... Tr(A_l^T X)]
// must equal the target vector.  For constraints built from a polynomial
// f and a monomial basis pi, Tr(A_gamma^T X) reproduces the coefficient
// of x^gamma in pi^T X pi.
struct GramProblem {
    int n = 1;                                   // variable count
    std::vector<Exponent> basis;                 // pi, length e
    std::vector<Exponent> monomials;             // gamma per constraint row
    std::vector<Eigen::MatrixXd> constraint_mats;  // symmetric e x e
    Eigen::VectorXd target;                      // u, length l
};

struct GramSolution {
    Eigen::MatrixXd factor;               // Y, e x r
    int rank = 0;
    double residual = 0.0;                // ||l(YY^T) - u||_2
    std::vector<int> iterations_per_rank; // LM iterations spent at each rank level
    bool success = false;
};

GramProblem gram_constraints(const Polynomial& f, const std::vector<Exponent>& basis);

/// F_i(Y) = Tr(A_i^T Y Y^T) - u_i and the l x (e*r) Jacobian whose rows
/// are 2 vec(A_i Y)^T (columns stacked).
std::pair<Eigen::VectorXd, Eigen::MatrixXd> residual_and_jacobian(const Eigen::MatrixXd& Y,
                                                                  const GramProblem& prob);

// Tries rank r = 1, 2, ..., r_max with `restarts` seeded random starts
// per rank; accepts the first run whose final residual beats the
// residual tolerance.  On exhaustion returns the best attempt with
// success = false.
GramSolution rank_staircase(const GramProblem& prob, const LmOptions& opts, int r_max,
                            int restarts, std::uint64_t seed);

Eigen::MatrixXd gram_from_factor(const Eigen::MatrixXd& Y);

/// Dense symmetric constraints with a planted rank-`rank` solution
/// (benchmark generator; data uniform in [0,1)).
GramProblem random_planted_problem(int e, int l, int rank, std::uint64_t seed);

/// Columns of Y read against the basis: g_i = sum_j Y(j,i) x^{basis[j]}.
std::vector<Polynomial> squares_from_factor(const Eigen::MatrixXd& Y, int n,
                                            const std::vector<Exponent>& basis);

}  // namespace sosmat
