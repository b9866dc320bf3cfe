#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace sosmat {

/// Zero (1,1) entry: the caller must rotate with pivot_fix first.
class PivotRequiredError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Identically-zero block handed to pivot_fix; the recursion terminates.
class ZeroBlockError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numeric nonnegativity gate failed; carries the worst sample point.
class NotPsdError : public std::runtime_error {
public:
    NotPsdError(std::string message, std::vector<double> point, double value)
        : std::runtime_error(std::move(message)), point(std::move(point)), value(value) {}
    std::vector<double> point;
    double value;
};

/// Decomposition search exhausted its budget without meeting tolerance.
class NoCertificateError : public std::runtime_error {
public:
    NoCertificateError(std::string message, double best_residual)
        : std::runtime_error(std::move(message)), best_residual(best_residual) {}
    double best_residual;
};

/// Certificate uses a weight outside the domain's allowed set.
class InvalidCertificateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace sosmat
