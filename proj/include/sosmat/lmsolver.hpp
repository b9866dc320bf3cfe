#pragma once

#include <Eigen/Dense>
#include <functional>

namespace sosmat {

enum class ScalingMode { Identity, ColumnNorm };

enum class LmStatus { ResidualConverged, StepConverged, MaxIters };

struct LmOptions {
    double step_tol = 1e-12;      // tau-hat: relative decrease test on accepted steps
    double residual_tol = 1e-9;   // tau: ||F(x)||_2 target
    int max_iters = 200;
    double initial_radius = 1.0;
    ScalingMode scaling_mode = ScalingMode::ColumnNorm;
    // optional per-trial trace: (iter, residual_norm, radius, accepted)
    std::function<void(int, double, double, bool)> trace;
};

struct LmResult {
    Eigen::VectorXd x;
    double residual_norm = 0.0;
    int iterations = 0;
    LmStatus status = LmStatus::MaxIters;
};

using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using JacobianFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

// Trust-region Levenberg-Marquardt with caller-supplied analytic
// Jacobian.  Accepted iterates have strictly decreasing ||F||^2; a
// rejected trial shrinks the region and keeps the iterate.
LmResult lm_minimize(const ResidualFn& residual_fn, const JacobianFn& jacobian_fn,
                     Eigen::VectorXd x0, const LmOptions& opts = {});

/// Max over entries of |J_analytic - J_central_diff| / (1 + |J_analytic|).
double check_jacobian(const ResidualFn& residual_fn, const JacobianFn& jacobian_fn,
                      const Eigen::VectorXd& x, double h);

}  // namespace sosmat
