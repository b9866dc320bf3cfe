#include "sosmat/schmudgen.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

#include "sosmat/errors.hpp"

namespace sosmat {

namespace {

constexpr double kTrimTol = 1e-12;

bool pivot_is_zero(const PolyMatrix& block) {
    return block.at(0, 0).max_abs() <= kZeroPivotTol * (1.0 + block.max_abs());
}

void require_symmetric(const PolyMatrix& F, const char* op) {
    if (!F.is_symmetric(0.0))
        throw std::invalid_argument(std::string(op) + ": input matrix is not symmetric");
}

// Step with the pivot already known to be usable.  Returns b_next
// pre-trimmed at the formation scale so that exact cancellations
// (Example 1's zero block) become exact zeros.
SchmudgenStep raw_step(const PolyMatrix& F) {
    const int m = F.rows();
    const int n = F.vars();
    const Polynomial& alpha = F.at(0, 0);

    PolyMatrix xp = PolyMatrix(m, m, n);
    PolyMatrix xm = PolyMatrix(m, m, n);
    xp.at(0, 0) = alpha;
    xm.at(0, 0) = alpha;
    for (int i = 1; i < m; ++i) {
        xp.at(i, i) = alpha;
        xm.at(i, i) = alpha;
        xp.at(i, 0) = F.at(0, i);
        xm.at(i, 0) = -F.at(0, i);
    }

    // B = alpha^2 C - alpha beta^T beta
    const Polynomial alpha2 = mul(alpha, alpha);
    PolyMatrix b_next(std::max(m - 1, 1), std::max(m - 1, 1), n);
    double formation_scale = 0.0;
    for (int i = 1; i < m; ++i)
        for (int j = 1; j < m; ++j) {
            Polynomial t1 = mul(alpha2, F.at(i, j));
            Polynomial t2 = mul(alpha, mul(F.at(0, i), F.at(0, j)));
            formation_scale = std::max(formation_scale, std::max(t1.max_abs(), t2.max_abs()));
            b_next.at(i - 1, j - 1) = sub(t1, t2);
        }
    const double threshold = kZeroPivotTol * (1.0 + formation_scale);
    for (int i = 0; i < b_next.rows(); ++i)
        for (int j = 0; j < b_next.cols(); ++j)
            b_next.at(i, j) = trim_abs(b_next.at(i, j), threshold);

    return SchmudgenStep{alpha, std::move(xp), std::move(xm), std::move(b_next)};
}

PolyMatrix block_diag_scalar(const Polynomial& alpha, int leading, const PolyMatrix& tail) {
    // diag(alpha * I_leading, tail)
    const int m = leading + tail.rows();
    PolyMatrix out(m, m, tail.vars());
    for (int i = 0; i < leading; ++i) out.at(i, i) = alpha;
    for (int i = 0; i < tail.rows(); ++i)
        for (int j = 0; j < tail.cols(); ++j) out.at(leading + i, leading + j) = tail.at(i, j);
    return out;
}

}  // namespace

SchmudgenStep schmudgen_step(const PolyMatrix& F) {
    require_symmetric(F, "schmudgen_step");
    if (F.rows() < 2) throw std::invalid_argument("schmudgen_step: matrix must be at least 2x2");
    if (pivot_is_zero(F))
        throw PivotRequiredError("schmudgen_step: (1,1) entry is zero; apply pivot_fix first");
    return raw_step(F);
}

std::pair<Eigen::MatrixXd, PolyMatrix> pivot_fix(const PolyMatrix& F) {
    require_symmetric(F, "pivot_fix");
    const int m = F.rows();
    if (F.max_abs() == 0.0) throw ZeroBlockError("pivot_fix: matrix is identically zero");
    if (!pivot_is_zero(F))
        throw std::invalid_argument("pivot_fix: (1,1) entry is already nonzero");

    const double scale = F.max_abs();
    auto accept = [&](const Eigen::MatrixXd& T) -> bool {
        // rotated pivot = row0(T) * F * row0(T)^T
        Polynomial pivot(F.vars(), 0);
        for (int i = 0; i < m; ++i) {
            if (T(0, i) == 0.0) continue;
            for (int j = 0; j < m; ++j) {
                if (T(0, j) == 0.0 || F.at(i, j).is_zero()) continue;
                pivot = add(pivot, mul(F.at(i, j), T(0, i) * T(0, j)));
            }
        }
        return pivot.max_abs() > kZeroPivotTol * (1.0 + scale);
    };

    std::vector<Eigen::MatrixXd> candidates;
    // permutations swapping row 0 with row k
    for (int k = 1; k < m; ++k) {
        Eigen::MatrixXd T = Eigen::MatrixXd::Identity(m, m);
        T(0, 0) = T(k, k) = 0.0;
        T(0, k) = T(k, 0) = 1.0;
        candidates.push_back(T);
    }
    // Givens rotations mixing row 0 with row k at +-pi/4
    const double c = std::sqrt(0.5);
    for (int k = 1; k < m; ++k)
        for (double s : {c, -c}) {
            Eigen::MatrixXd T = Eigen::MatrixXd::Identity(m, m);
            T(0, 0) = c;
            T(0, k) = s;
            T(k, 0) = -s;
            T(k, k) = c;
            candidates.push_back(T);
        }
    // rotations on later row pairs composed with a swap to the front;
    // together with the candidates above this covers every nonzero F
    for (int j = 1; j < m; ++j)
        for (int k = j + 1; k < m; ++k)
            for (double s : {c, -c}) {
                Eigen::MatrixXd G = Eigen::MatrixXd::Identity(m, m);
                G(j, j) = c;
                G(j, k) = s;
                G(k, j) = -s;
                G(k, k) = c;
                Eigen::MatrixXd P = Eigen::MatrixXd::Identity(m, m);
                P(0, 0) = P(j, j) = 0.0;
                P(0, j) = P(j, 0) = 1.0;
                candidates.push_back(P * G);
            }

    for (const Eigen::MatrixXd& T : candidates) {
        if (!accept(T)) continue;
        PolyMatrix Tp = PolyMatrix::from_constant(T, F.vars());
        PolyMatrix rotated = mat_mul(Tp, mat_mul(F, transpose(Tp)));
        return {T, rotated};
    }
    // unreachable for nonzero symmetric F
    throw std::runtime_error("pivot_fix: no orthogonal candidate produced a nonzero pivot");
}

Diagonalization diagonalize(const PolyMatrix& F) {
    require_symmetric(F, "diagonalize");
    const int m = F.rows();
    const int n = F.vars();
    if (F.max_abs() == 0.0) throw std::invalid_argument("diagonalize: matrix is identically zero");

    Diagonalization out;
    out.b = Polynomial::constant(n, 1.0);
    out.x_plus = PolyMatrix::identity(m, n);
    out.x_minus = PolyMatrix::identity(m, n);

    if (m == 1) {
        out.d.push_back(F.at(0, 0));
        if (!F.at(0, 0).is_zero()) out.pivots.push_back(F.at(0, 0));
        return out;
    }

    PolyMatrix block = F;  // trailing block, shrinks by one each iteration
    int fixed = 0;         // number of settled diagonal entries

    while (true) {
        if (block.max_abs() == 0.0) {
            while (static_cast<int>(out.d.size()) < m) out.d.emplace_back(n, 0);
            break;
        }
        if (block.rows() == 1) {
            out.d.push_back(block.at(0, 0));
            out.pivots.push_back(block.at(0, 0));
            break;
        }
        if (pivot_is_zero(block)) {
            auto [T, rotated] = pivot_fix(block);
            // absorb the constant rotation so the relations keep holding
            // for the original F:  X+ <- X+ * diag(I, T^T),  X- <- diag(I, T) * X-
            Eigen::MatrixXd Tfull = Eigen::MatrixXd::Identity(m, m);
            Tfull.block(fixed, fixed, block.rows(), block.rows()) = T;
            PolyMatrix Tp = PolyMatrix::from_constant(Tfull, n);
            out.x_plus = mat_mul(out.x_plus, transpose(Tp));
            out.x_minus = mat_mul(Tp, out.x_minus);
            block = std::move(rotated);
        }

        SchmudgenStep step = raw_step(block);
        out.b = mul(out.b, mul(step.alpha, step.alpha));
        out.x_plus = mat_mul(out.x_plus, block_diag_scalar(step.alpha, fixed, step.x_plus));
        out.x_minus = mat_mul(block_diag_scalar(step.alpha, fixed, step.x_minus), out.x_minus);
        const Polynomial alpha2 = mul(step.alpha, step.alpha);
        for (Polynomial& dk : out.d) dk = mul(alpha2, dk);
        out.d.push_back(mul(alpha2, step.alpha));
        out.pivots.push_back(step.alpha);
        block = std::move(step.b_next);
        ++fixed;

        out.b = trim(out.b, kTrimTol);
        out.x_plus = mat_trim(out.x_plus, kTrimTol);
        out.x_minus = mat_trim(out.x_minus, kTrimTol);
        for (Polynomial& dk : out.d) dk = trim(dk, kTrimTol);
    }
    return out;
}

std::array<double, 3> verify_diagonalization(const PolyMatrix& F, const Diagonalization& diag) {
    const int m = F.rows();
    if (diag.x_plus.rows() != m || diag.x_minus.rows() != m ||
        static_cast<int>(diag.d.size()) != m)
        throw std::invalid_argument("verify_diagonalization: shape mismatch");

    const PolyMatrix D = PolyMatrix::diagonal(diag.d);
    const PolyMatrix bI = mat_scale(PolyMatrix::identity(m, F.vars()), diag.b);

    const PolyMatrix e1 = mat_sub(mat_mul(diag.x_plus, diag.x_minus), bI);
    const double r1 = e1.max_abs() / (1.0 + bI.max_abs());

    const PolyMatrix e2 = mat_sub(mat_mul(diag.x_minus, mat_mul(F, transpose(diag.x_minus))), D);
    const double r2 = e2.max_abs() / (1.0 + D.max_abs());

    const PolyMatrix b2F = mat_scale(F, mul(diag.b, diag.b));
    const PolyMatrix e3 = mat_sub(mat_mul(diag.x_plus, mat_mul(D, transpose(diag.x_plus))), b2F);
    const double r3 = e3.max_abs() / (1.0 + b2F.max_abs());

    return {r1, r2, r3};
}

std::vector<Polynomial> pivot_sequence(const PolyMatrix& F) {
    return diagonalize(F).pivots;
}

std::pair<bool, PsdWitness> psd_sample_check(const PolyMatrix& F,
                                             const std::vector<std::vector<double>>& points) {
    if (points.empty()) throw std::invalid_argument("psd_sample_check: no sample points");
    PsdWitness worst;
    worst.min_eigenvalue = std::numeric_limits<double>::infinity();
    for (const auto& p : points) {
        Eigen::MatrixXd M = eval_mat(F, p);
        Eigen::MatrixXd sym = 0.5 * (M + M.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
        double lo = es.eigenvalues().minCoeff();
        if (lo < worst.min_eigenvalue) {
            worst.min_eigenvalue = lo;
            worst.point = p;
        }
    }
    return {worst.min_eigenvalue >= -1e-9, worst};
}

}  // namespace sosmat
