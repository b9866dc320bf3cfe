#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sosmat/gram.hpp"
#include "sosmat/polymatrix.hpp"

namespace sosmat {

enum class DomainKind { Rn, RealLine, HalfLine, Interval, Strip };

struct Domain {
    DomainKind kind = DomainKind::Rn;
    double a = 0.0;
    double b = 0.0;

    static Domain rn() { return {DomainKind::Rn, 0.0, 0.0}; }
    static Domain real_line() { return {DomainKind::RealLine, 0.0, 0.0}; }
    static Domain half_line() { return {DomainKind::HalfLine, 0.0, 0.0}; }
    static Domain interval(double a, double b) { return {DomainKind::Interval, a, b}; }
    static Domain strip(double a, double b) { return {DomainKind::Strip, a, b}; }

    /// "rn" | "rline" | "halfline" | "interval:a:b" | "strip:a:b"
    static Domain parse(const std::string& text);
    std::string str() const;
};

struct CertTerm {
    Polynomial weight;
    PolyMatrix matrix;
};

// Asserts multiplier^2 * F = sum_k weight_k * matrix_k^T * matrix_k with
// every weight drawn from the domain's allowed set.
struct Certificate {
    Domain domain;
    Polynomial multiplier;
    std::vector<CertTerm> terms;
    double residual = 0.0;
    /// Largest per-diagonal exponent of (1 + sum x_i^2) used (Rn only).
    int reznick_power = 0;
};

struct GramSearchOptions {
    LmOptions lm;
    int restarts = 4;
    int rank_max = 8;
    std::uint64_t seed = 1;
};

struct CertifyOptions {
    GramSearchOptions gram;
    int reznick_max = 3;
    int strip_degree_margin = 2;
};

/// f nonnegative on R -> (u, v) with f = u^2 + v^2 up to 1e-8 relative.
std::pair<Polynomial, Polynomial> sos_univariate_two_squares(const Polynomial& f);

/// f nonnegative on [0, inf) -> (p, q) with f = p^2 + x q^2.
std::pair<Polynomial, Polynomial> sos_halfline(const Polynomial& f);

// Markov-Lukacs pieces on [a,b]: even-degree f = p1^2 + (x-a)(b-x) p2^2,
// odd-degree f = (x-a) p1^2 + (b-x) p2^2.
struct IntervalPieces {
    bool even_case = true;
    Polynomial p1;
    Polynomial p2;
};
IntervalPieces sos_interval_pieces(const Polynomial& f, double a, double b);
Certificate sos_interval(const Polynomial& f, double a, double b);

struct SosrfResult {
    int power = 0;                    // smallest N with (1+|x|^2)^N f admitting a Gram factor
    std::vector<Polynomial> squares;  // g_i with (1+|x|^2)^N f = sum g_i^2
    double residual = 0.0;
};
SosrfResult sosrf_multivariate(const Polynomial& f, int n_max, int r_max,
                               const GramSearchOptions& opts);

// Strip pieces in original coordinates:
// d = sum sigma_t^2 + (x1-a)(b-x1) sum tau_t^2.
struct StripPieces {
    std::vector<Polynomial> sigma_squares;
    std::vector<Polynomial> tau_squares;
};
StripPieces sos_strip_pieces(const Polynomial& d, double a, double b, int degree_bound,
                             const GramSearchOptions& opts);
Certificate sos_strip(const Polynomial& d, double a, double b, int degree_bound,
                      const GramSearchOptions& opts);

/// Two-stage pipeline: Schmudgen diagonalization, then a domain-specific
/// decomposition of every diagonal entry, assembled around X+^T.
Certificate certify_matrix(const PolyMatrix& F, const Domain& domain,
                           const CertifyOptions& opts = {});

/// Expands multiplier^2 F - sum w_k A_k^T A_k symbolically; returns the
/// max-abs coefficient normalized by 1 + max-abs of multiplier^2 F.
/// Throws InvalidCertificateError when a weight is outside the domain set.
double verify_certificate(const PolyMatrix& F, const Certificate& cert);

/// 1 + sum of squared coordinates (the sosrf denominator base).
Polynomial reznick_base(int n);

/// Sample grid used by the psd gate of certify_matrix (exposed for tests).
std::vector<std::vector<double>> domain_sample_points(const Domain& domain, const PolyMatrix& F);

}  // namespace sosmat
