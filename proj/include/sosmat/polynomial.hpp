#pragma once

#include <span>
#include <string>
#include <vector>

namespace sosmat {

/// Exponent vector of a monomial x^alpha = x_1^a1 ... x_n^an.
using Exponent = std::vector<int>;

/// |Omega_{n,d}| = C(n+d, n).  Returns 0 for d < 0.
long long monomial_count(int n, int d);

/// 0-based position of alpha in the lex enumeration of Omega_{n,d}:
/// (0,...,0), (0,...,1), ..., first coordinate slowest.
long long lex_rank(const Exponent& alpha, int n, int d);

/// Inverse of lex_rank.
Exponent lex_unrank(long long index, int n, int d);

/// All of Omega_{n,d} in lex order.
std::vector<Exponent> monomial_basis(int n, int d);

// Dense multivariate polynomial over a fixed monomial box Omega_{n,d}.
// Coefficients are stored in lex order; for n = 1 the vector is
// [c0 c1 ... cd] ascending in power.  Values are immutable in spirit:
// all arithmetic returns new objects.
class Polynomial {
public:
    Polynomial() : Polynomial(1, 0) {}
    Polynomial(int n, int degree_bound);
    Polynomial(int n, int degree_bound, std::vector<double> coeffs);

    static Polynomial constant(int n, double value);
    static Polynomial variable(int n, int index);
    /// Univariate from ascending power coefficients [c0 c1 ... cd].
    static Polynomial univariate(std::vector<double> coeffs);

    int vars() const { return n_; }
    int degree_bound() const { return bound_; }
    /// Effective degree (largest |alpha| with nonzero coefficient); -1 when zero.
    int degree() const;
    const std::vector<double>& coeffs() const { return coeffs_; }
    std::vector<double>& coeffs() { return coeffs_; }

    double coeff(const Exponent& alpha) const;
    void set_coeff(const Exponent& alpha, double value);

    double max_abs() const;
    bool is_zero(double tol = 0.0) const;

    double eval(std::span<const double> point) const;
    double operator()(std::span<const double> point) const { return eval(point); }
    double operator()(std::initializer_list<double> point) const;

private:
    int n_;
    int bound_;
    std::vector<double> coeffs_;
};

Polynomial add(const Polynomial& f, const Polynomial& g);
Polynomial sub(const Polynomial& f, const Polynomial& g);
Polynomial mul(const Polynomial& f, const Polynomial& g);
Polynomial mul(const Polynomial& f, double scalar);
Polynomial pow(const Polynomial& f, int k);

inline Polynomial operator+(const Polynomial& f, const Polynomial& g) { return add(f, g); }
inline Polynomial operator-(const Polynomial& f, const Polynomial& g) { return sub(f, g); }
inline Polynomial operator*(const Polynomial& f, const Polynomial& g) { return mul(f, g); }
inline Polynomial operator*(const Polynomial& f, double s) { return mul(f, s); }
inline Polynomial operator*(double s, const Polynomial& f) { return mul(f, s); }
Polynomial operator-(const Polynomial& f);

/// Copy of f re-embedded into Omega_{n,bound} (bound >= effective degree).
Polynomial embed(const Polynomial& f, int bound);

/// Zeroes coefficients with |c| <= tol * max_abs(f), then shrinks the
/// degree bound to the effective degree.  tol is relative; tol = 0 only
/// tightens the bound.
Polynomial trim(const Polynomial& f, double tol);

/// Same but with an absolute threshold (used where the noise scale is
/// known from the computation that produced f).
Polynomial trim_abs(const Polynomial& f, double threshold);

/// f with x_var replaced by c0 + c1 * x_var.
Polynomial substitute_affine(const Polynomial& f, int var, double c0, double c1);

/// max |f_alpha - g_alpha| over the common embedding.
double max_abs_diff(const Polynomial& f, const Polynomial& g);

std::string to_string(const Polynomial& f);

}  // namespace sosmat
