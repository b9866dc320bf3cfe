#include "sosmat/lmsolver.hpp"

#include <cmath>
#include <stdexcept>

namespace sosmat {

namespace {

bool all_finite(const Eigen::VectorXd& v) { return v.allFinite(); }

// Step for min ||Jp + r|| subject to ||diag(d) p|| <= radius.
// Gauss-Newton step when it fits, otherwise the damped solve
// (J^T J + lambda D^2) p = -J^T r with lambda found by a safeguarded
// Newton iteration on ||Dp(lambda)|| - radius.
Eigen::VectorXd trust_region_step(const Eigen::MatrixXd& J, const Eigen::VectorXd& r,
                                  const Eigen::VectorXd& d, double radius) {
    const Eigen::VectorXd g = J.transpose() * r;
    const Eigen::MatrixXd JtJ = J.transpose() * J;
    const Eigen::VectorXd d2 = d.cwiseProduct(d);

    Eigen::VectorXd p_gn = J.colPivHouseholderQr().solve(-r);
    double gn_norm = d.cwiseProduct(p_gn).norm();
    if (p_gn.allFinite() && gn_norm <= radius) return p_gn;

    // lambda bracket: ||Dp(lambda)|| <= ||D^-1 g|| / lambda
    double hi = d.cwiseInverse().cwiseProduct(g).norm() / radius;
    if (!(hi > 0.0) || !std::isfinite(hi)) hi = 1.0;
    double lo = 0.0;
    double lambda = std::max(1e-3 * hi, 1e-14);

    Eigen::VectorXd p;
    for (int pass = 0; pass < 30; ++pass) {
        Eigen::MatrixXd A = JtJ;
        A.diagonal() += lambda * d2;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
        p = ldlt.solve(-g);
        double q = d.cwiseProduct(p).norm();
        if (!p.allFinite()) {
            lambda = 0.5 * (lambda + hi);
            continue;
        }
        if (q <= radius && q >= 0.9 * radius) break;
        if (q < radius && lambda <= 1e-14) break;  // GN-like step already inside
        if (q > radius) lo = lambda; else hi = lambda;
        // Newton update on phi(lambda) = ||Dp|| - radius
        Eigen::VectorXd z = ldlt.solve(d2.cwiseProduct(p));
        double denom = p.dot(d2.cwiseProduct(z));
        double next = lambda;
        if (denom > 0.0 && q > 0.0) next = lambda + (q - radius) * q / denom;
        if (!(next > lo) || !(next < hi) || !std::isfinite(next)) next = std::sqrt(std::max(lo, 1e-300) * hi);
        if (!std::isfinite(next) || next <= 0.0) next = 0.5 * (lo + hi);
        lambda = next;
    }
    return p;
}

}  // namespace

LmResult lm_minimize(const ResidualFn& residual_fn, const JacobianFn& jacobian_fn,
                     Eigen::VectorXd x0, const LmOptions& opts) {
    if (!(opts.step_tol > 0.0) || !(opts.residual_tol > 0.0) || opts.max_iters < 1)
        throw std::invalid_argument("lm_minimize: invalid options");

    Eigen::VectorXd x = std::move(x0);
    Eigen::VectorXd r = residual_fn(x);
    if (!all_finite(r)) throw std::invalid_argument("lm_minimize: residual not finite at x0");
    Eigen::MatrixXd J = jacobian_fn(x);
    if (J.rows() != r.size() || J.cols() != x.size())
        throw std::invalid_argument("lm_minimize: Jacobian shape does not match residual/x");

    const int N = static_cast<int>(x.size());
    double f2 = r.squaredNorm();

    LmResult out;
    if (std::sqrt(f2) < opts.residual_tol) {
        out.x = x;
        out.residual_norm = std::sqrt(f2);
        out.status = LmStatus::ResidualConverged;
        return out;
    }

    // hyperellipsoid scaling: by-column norms, kept at their historic max
    Eigen::VectorXd d = Eigen::VectorXd::Ones(N);
    auto update_scaling = [&](const Eigen::MatrixXd& jac) {
        if (opts.scaling_mode != ScalingMode::ColumnNorm) return;
        for (int i = 0; i < N; ++i) d(i) = std::max(d(i), jac.col(i).norm());
    };
    if (opts.scaling_mode == ScalingMode::ColumnNorm) {
        for (int i = 0; i < N; ++i) {
            double cn = J.col(i).norm();
            d(i) = cn > 0.0 ? cn : 1.0;
        }
    }

    // start wide enough that a sane first Gauss-Newton step is not cut
    Eigen::VectorXd p_first = J.colPivHouseholderQr().solve(-r);
    double first_norm = p_first.allFinite() ? d.cwiseProduct(p_first).norm() : 0.0;
    double radius = std::max({opts.initial_radius, d.cwiseProduct(x).norm(), first_norm});
    if (!std::isfinite(radius) || radius <= 0.0) radius = opts.initial_radius;

    LmStatus status = LmStatus::MaxIters;
    int iterations = opts.max_iters;

    for (int k = 1; k <= opts.max_iters; ++k) {
        Eigen::VectorXd p = trust_region_step(J, r, d, radius);
        if (!p.allFinite()) p.setZero();
        double pnorm = d.cwiseProduct(p).norm();

        Eigen::VectorXd rt = residual_fn(x + p);
        double ft2 = rt.allFinite() ? rt.squaredNorm() : std::numeric_limits<double>::infinity();
        double predicted = f2 - (r + J * p).squaredNorm();
        double rho;
        if (predicted > 0.0) rho = (f2 - ft2) / predicted;
        else rho = ft2 < f2 ? 1.0 : -1.0;

        const bool accepted = ft2 < f2;
        if (opts.trace) opts.trace(k, std::sqrt(std::min(ft2, f2)), radius, accepted);

        if (accepted) {
            double rel_decrease = std::abs(ft2 - f2) / f2;
            x += p;
            r = std::move(rt);
            f2 = ft2;
            if (std::sqrt(f2) < opts.residual_tol) {
                status = LmStatus::ResidualConverged;
                iterations = k;
                break;
            }
            if (rel_decrease <= opts.step_tol) {
                status = LmStatus::StepConverged;
                iterations = k;
                break;
            }
            J = jacobian_fn(x);
            update_scaling(J);
        }

        if (rho < 0.25) radius = 0.5 * std::max(pnorm, 1e-300);
        else if (rho > 0.75) radius = std::max(radius, 2.0 * pnorm);
    }

    out.x = std::move(x);
    out.residual_norm = std::sqrt(f2);
    out.iterations = iterations;
    out.status = status;
    return out;
}

double check_jacobian(const ResidualFn& residual_fn, const JacobianFn& jacobian_fn,
                      const Eigen::VectorXd& x, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("check_jacobian: step must be positive");
    const Eigen::MatrixXd J = jacobian_fn(x);
    double worst = 0.0;
    Eigen::VectorXd xp = x, xm = x;
    for (int i = 0; i < x.size(); ++i) {
        xp(i) += h;
        xm(i) -= h;
        Eigen::VectorXd rp = residual_fn(xp);
        Eigen::VectorXd rm = residual_fn(xm);
        if (!rp.allFinite() || !rm.allFinite())
            throw std::invalid_argument("check_jacobian: residual not finite near x");
        Eigen::VectorXd col = (rp - rm) / (2.0 * h);
        for (int j = 0; j < col.size(); ++j)
            worst = std::max(worst, std::abs(J(j, i) - col(j)) / (1.0 + std::abs(J(j, i))));
        xp(i) = x(i);
        xm(i) = x(i);
    }
    return worst;
}

}  // namespace sosmat
