#pragma once

#include <array>
#include <utility>
#include <vector>

#include "sosmat/polymatrix.hpp"

namespace sosmat {

// One congruence step on F = [alpha beta; beta^T C]:
//   X_pm = [alpha 0; +-beta^T alpha*I],  B = alpha^2*C - alpha*beta^T*beta,
// with  X+ X- = alpha^2 I,  alpha^4 F = X+ diag(alpha^3, B) X+^T,
//       diag(alpha^3, B) = X- F X-^T.
struct SchmudgenStep {
    Polynomial alpha;
    PolyMatrix x_plus;
    PolyMatrix x_minus;
    PolyMatrix b_next;  // trailing (m-1)x(m-1) block
};

// Full decomposition: X+ X- = X- X+ = b*I,  b^2 F = X+ diag(d) X+^T,
// diag(d) = X- F X-^T,  b = product of the squared processed pivots.
struct Diagonalization {
    Polynomial b;
    PolyMatrix x_plus;
    PolyMatrix x_minus;
    std::vector<Polynomial> d;
    std::vector<Polynomial> pivots;
};

struct PsdWitness {
    std::vector<double> point;
    double min_eigenvalue = 0.0;
};

/// Relative threshold below which a polynomial counts as zero inside the
/// elimination (scale = max-abs coefficient of the enclosing matrix).
inline constexpr double kZeroPivotTol = 1e-12;

SchmudgenStep schmudgen_step(const PolyMatrix& F);

/// Constant orthogonal T with (T F T^T)[0][0] not identically zero.
/// Returns (T, T F T^T).  Throws ZeroBlockError when F is zero.
std::pair<Eigen::MatrixXd, PolyMatrix> pivot_fix(const PolyMatrix& F);

Diagonalization diagonalize(const PolyMatrix& F);

/// (r1, r2, r3): relative max-abs coefficient norms of X+X- - bI,
/// X-FX-^T - D and X+DX+^T - b^2 F, each normalized by 1 + max-abs of
/// the subtrahend.
std::array<double, 3> verify_diagonalization(const PolyMatrix& F, const Diagonalization& diag);

/// The pivot scalarization: F is psd on R^n iff every returned
/// polynomial is nonnegative on R^n.
std::vector<Polynomial> pivot_sequence(const PolyMatrix& F);

/// True iff min eigenvalue of F(p) >= -1e-9 at every sample point;
/// second element is the worst (point, eigenvalue) pair.
std::pair<bool, PsdWitness> psd_sample_check(const PolyMatrix& F,
                                             const std::vector<std::vector<double>>& points);

}  // namespace sosmat
