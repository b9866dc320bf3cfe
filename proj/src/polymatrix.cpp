#include "sosmat/polymatrix.hpp"

#include <stdexcept>

#include "sosmat/rng.hpp"

namespace sosmat {

PolyMatrix::PolyMatrix(int rows, int cols, int n) : rows_(rows), cols_(cols), n_(n) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("PolyMatrix: dimensions must be positive");
    entries_.assign(static_cast<size_t>(rows) * cols, Polynomial(n, 0));
}

PolyMatrix PolyMatrix::identity(int m, int n) {
    PolyMatrix out(m, m, n);
    for (int i = 0; i < m; ++i) out.at(i, i) = Polynomial::constant(n, 1.0);
    return out;
}

PolyMatrix PolyMatrix::from_constant(const Eigen::MatrixXd& c, int n) {
    PolyMatrix out(static_cast<int>(c.rows()), static_cast<int>(c.cols()), n);
    for (int i = 0; i < out.rows(); ++i)
        for (int j = 0; j < out.cols(); ++j)
            out.at(i, j) = Polynomial::constant(n, c(i, j));
    return out;
}

PolyMatrix PolyMatrix::from_rows(const std::vector<std::vector<Polynomial>>& rows) {
    if (rows.empty() || rows.front().empty())
        throw std::invalid_argument("PolyMatrix: empty entry grid");
    const int r = static_cast<int>(rows.size());
    const int c = static_cast<int>(rows.front().size());
    const int n = rows.front().front().vars();
    PolyMatrix out(r, c, n);
    for (int i = 0; i < r; ++i) {
        if (static_cast<int>(rows[i].size()) != c)
            throw std::invalid_argument("PolyMatrix: ragged entry grid");
        for (int j = 0; j < c; ++j) {
            if (rows[i][j].vars() != n)
                throw std::invalid_argument("PolyMatrix: entries disagree on variable count");
            out.at(i, j) = rows[i][j];
        }
    }
    return out;
}

PolyMatrix PolyMatrix::diagonal(const std::vector<Polynomial>& d) {
    if (d.empty()) throw std::invalid_argument("PolyMatrix::diagonal: empty diagonal");
    const int m = static_cast<int>(d.size());
    PolyMatrix out(m, m, d.front().vars());
    for (int i = 0; i < m; ++i) {
        if (d[i].vars() != out.vars())
            throw std::invalid_argument("PolyMatrix::diagonal: entries disagree on variable count");
        out.at(i, i) = d[i];
    }
    return out;
}

const Polynomial& PolyMatrix::at(int i, int j) const {
    return entries_[static_cast<size_t>(i) * cols_ + j];
}

Polynomial& PolyMatrix::at(int i, int j) {
    return entries_[static_cast<size_t>(i) * cols_ + j];
}

PolyMatrix PolyMatrix::block(int i0, int j0, int r, int c) const {
    PolyMatrix out(r, c, n_);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) out.at(i, j) = at(i0 + i, j0 + j);
    return out;
}

bool PolyMatrix::is_symmetric(double tol) const {
    if (rows_ != cols_) return false;
    for (int i = 0; i < rows_; ++i)
        for (int j = i + 1; j < cols_; ++j)
            if (max_abs_diff(at(i, j), at(j, i)) > tol) return false;
    return true;
}

double PolyMatrix::max_abs() const {
    double m = 0.0;
    for (const Polynomial& p : entries_) m = std::max(m, p.max_abs());
    return m;
}

namespace {

void require_same_vars(const PolyMatrix& a, const PolyMatrix& b, const char* op) {
    if (a.vars() != b.vars())
        throw std::invalid_argument(std::string(op) + ": operands have different variable counts");
}

}  // namespace

PolyMatrix mat_add(const PolyMatrix& a, const PolyMatrix& b) {
    require_same_vars(a, b, "mat_add");
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("mat_add: shape mismatch");
    PolyMatrix out(a.rows(), a.cols(), a.vars());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) out.at(i, j) = add(a.at(i, j), b.at(i, j));
    return out;
}

PolyMatrix mat_sub(const PolyMatrix& a, const PolyMatrix& b) {
    require_same_vars(a, b, "mat_sub");
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("mat_sub: shape mismatch");
    PolyMatrix out(a.rows(), a.cols(), a.vars());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) out.at(i, j) = sub(a.at(i, j), b.at(i, j));
    return out;
}

PolyMatrix mat_mul(const PolyMatrix& a, const PolyMatrix& b) {
    require_same_vars(a, b, "mat_mul");
    if (a.cols() != b.rows()) throw std::invalid_argument("mat_mul: inner dimensions disagree");
    PolyMatrix out(a.rows(), b.cols(), a.vars());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < b.cols(); ++k) {
            Polynomial acc(a.vars(), 0);
            for (int j = 0; j < a.cols(); ++j) {
                if (a.at(i, j).is_zero() || b.at(j, k).is_zero()) continue;
                acc = add(acc, mul(a.at(i, j), b.at(j, k)));
            }
            out.at(i, k) = acc;
        }
    return out;
}

PolyMatrix transpose(const PolyMatrix& a) {
    PolyMatrix out(a.cols(), a.rows(), a.vars());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) out.at(j, i) = a.at(i, j);
    return out;
}

PolyMatrix mat_scale(const PolyMatrix& a, const Polynomial& s) {
    if (a.vars() != s.vars())
        throw std::invalid_argument("mat_scale: variable counts disagree");
    PolyMatrix out(a.rows(), a.cols(), a.vars());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            out.at(i, j) = a.at(i, j).is_zero() ? Polynomial(a.vars(), 0) : mul(a.at(i, j), s);
    return out;
}

Eigen::MatrixXd eval_mat(const PolyMatrix& a, std::span<const double> point) {
    Eigen::MatrixXd out(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) out(i, j) = a.at(i, j).eval(point);
    return out;
}

PolyMatrix mat_trim(const PolyMatrix& a, double tol) {
    if (tol < 0.0) throw std::invalid_argument("mat_trim: negative tolerance");
    const double threshold = tol * a.max_abs();
    PolyMatrix out(a.rows(), a.cols(), a.vars());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) out.at(i, j) = trim_abs(a.at(i, j), threshold);
    return out;
}

double mat_max_abs_diff(const PolyMatrix& a, const PolyMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("mat_max_abs_diff: shape mismatch");
    double m = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            m = std::max(m, max_abs_diff(a.at(i, j), b.at(i, j)));
    return m;
}

PolyMatrix random_symmetric(int m, int n, int d, std::uint64_t seed) {
    if (m < 1) throw std::invalid_argument("random_symmetric: size must be positive");
    if (d < 0) throw std::invalid_argument("random_symmetric: negative degree");
    Rng rng(seed);
    PolyMatrix out(m, m, n);
    const long long len = monomial_count(n, d);
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
            std::vector<double> coeffs(static_cast<size_t>(len));
            for (double& c : coeffs) c = rng.uniform01();
            Polynomial p(n, d, std::move(coeffs));
            out.at(i, j) = p;
            out.at(j, i) = p;
        }
    return out;
}

}  // namespace sosmat
