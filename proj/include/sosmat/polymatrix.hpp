#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "sosmat/polynomial.hpp"

namespace sosmat {

// Matrix with polynomial entries.  Inputs to the public algorithms are
// square and symmetric; rectangular shapes appear in intermediates
// (row vectors beta, stacked factors).
class PolyMatrix {
public:
    PolyMatrix() : rows_(0), cols_(0), n_(1) {}
    PolyMatrix(int rows, int cols, int n);

    static PolyMatrix identity(int m, int n);
    /// Constant matrix lifted to polynomial entries.
    static PolyMatrix from_constant(const Eigen::MatrixXd& c, int n);
    static PolyMatrix from_rows(const std::vector<std::vector<Polynomial>>& rows);
    static PolyMatrix diagonal(const std::vector<Polynomial>& d);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int vars() const { return n_; }

    const Polynomial& at(int i, int j) const;
    Polynomial& at(int i, int j);
    const Polynomial& operator()(int i, int j) const { return at(i, j); }
    Polynomial& operator()(int i, int j) { return at(i, j); }

    PolyMatrix block(int i0, int j0, int r, int c) const;

    bool is_symmetric(double tol = 0.0) const;
    double max_abs() const;
    bool is_zero(double tol = 0.0) const { return max_abs() <= tol; }

private:
    int rows_, cols_, n_;
    std::vector<Polynomial> entries_;  // row-major
};

PolyMatrix mat_add(const PolyMatrix& a, const PolyMatrix& b);
PolyMatrix mat_sub(const PolyMatrix& a, const PolyMatrix& b);
PolyMatrix mat_mul(const PolyMatrix& a, const PolyMatrix& b);
PolyMatrix transpose(const PolyMatrix& a);
/// Entrywise product with a scalar polynomial.
PolyMatrix mat_scale(const PolyMatrix& a, const Polynomial& s);

Eigen::MatrixXd eval_mat(const PolyMatrix& a, std::span<const double> point);

/// Entrywise trim with a threshold relative to the matrix-wide
/// max-abs coefficient.
PolyMatrix mat_trim(const PolyMatrix& a, double tol);

double mat_max_abs_diff(const PolyMatrix& a, const PolyMatrix& b);

/// Symmetric random instance: all upper-triangle entries get C(n+d,n)
/// coefficients drawn uniformly from [0,1), deterministic per seed.
PolyMatrix random_symmetric(int m, int n, int d, std::uint64_t seed);

}  // namespace sosmat
