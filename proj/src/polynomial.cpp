#include "sosmat/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace sosmat {

long long monomial_count(int n, int d) {
    if (n < 0) throw std::invalid_argument("monomial_count: negative variable count");
    if (d < 0) return 0;
    // C(n+d, n), exact in integer arithmetic
    long long r = 1;
    for (int i = 1; i <= n; ++i) r = r * (d + i) / i;
    return r;
}

long long lex_rank(const Exponent& alpha, int n, int d) {
    if (static_cast<int>(alpha.size()) != n)
        throw std::invalid_argument("lex_rank: exponent length does not match variable count");
    long long total = 0;
    for (int i = 0; i < n; ++i) {
        if (alpha[i] < 0) throw std::invalid_argument("lex_rank: negative exponent");
        total += alpha[i];
    }
    if (total > d) throw std::invalid_argument("lex_rank: |alpha| exceeds degree bound");

    long long rank = 0;
    int rem = d;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < alpha[i]; ++j) rank += monomial_count(n - i - 1, rem - j);
        rem -= alpha[i];
    }
    return rank;
}

Exponent lex_unrank(long long index, int n, int d) {
    if (index < 0 || index >= monomial_count(n, d))
        throw std::invalid_argument("lex_unrank: index out of range");
    Exponent alpha(n, 0);
    int rem = d;
    for (int i = 0; i < n; ++i) {
        int j = 0;
        for (;;) {
            long long block = monomial_count(n - i - 1, rem - j);
            if (index < block) break;
            index -= block;
            ++j;
        }
        alpha[i] = j;
        rem -= j;
    }
    return alpha;
}

namespace {

// Lex successor within Omega_{n,d}; returns false past the last element.
bool next_exponent(Exponent& alpha, int d) {
    const int n = static_cast<int>(alpha.size());
    int total = std::accumulate(alpha.begin(), alpha.end(), 0);
    if (total < d) {
        ++alpha[n - 1];
        return true;
    }
    int k = n - 1;
    while (k >= 0 && alpha[k] == 0) --k;
    if (k <= 0) return false;
    ++alpha[k - 1];
    std::fill(alpha.begin() + k, alpha.end(), 0);
    return true;
}

template <typename Fn>
void for_each_exponent(int n, int d, Fn&& fn) {
    Exponent alpha(n, 0);
    long long idx = 0;
    do {
        fn(alpha, idx);
        ++idx;
    } while (next_exponent(alpha, d));
}

}  // namespace

std::vector<Exponent> monomial_basis(int n, int d) {
    std::vector<Exponent> out;
    out.reserve(static_cast<size_t>(monomial_count(n, d)));
    for_each_exponent(n, d, [&](const Exponent& a, long long) { out.push_back(a); });
    return out;
}

Polynomial::Polynomial(int n, int degree_bound)
    : n_(n), bound_(degree_bound) {
    if (n < 1) throw std::invalid_argument("Polynomial: variable count must be >= 1");
    if (degree_bound < 0) throw std::invalid_argument("Polynomial: negative degree bound");
    coeffs_.assign(static_cast<size_t>(monomial_count(n, degree_bound)), 0.0);
}

Polynomial::Polynomial(int n, int degree_bound, std::vector<double> coeffs)
    : n_(n), bound_(degree_bound), coeffs_(std::move(coeffs)) {
    if (n < 1) throw std::invalid_argument("Polynomial: variable count must be >= 1");
    if (degree_bound < 0) throw std::invalid_argument("Polynomial: negative degree bound");
    if (static_cast<long long>(coeffs_.size()) != monomial_count(n, degree_bound))
        throw std::invalid_argument("Polynomial: coefficient vector length must be C(n+d,n)");
}

Polynomial Polynomial::constant(int n, double value) {
    Polynomial p(n, 0);
    p.coeffs_[0] = value;
    return p;
}

Polynomial Polynomial::variable(int n, int index) {
    if (index < 0 || index >= n) throw std::invalid_argument("Polynomial::variable: index out of range");
    Polynomial p(n, 1);
    Exponent alpha(n, 0);
    alpha[index] = 1;
    p.set_coeff(alpha, 1.0);
    return p;
}

Polynomial Polynomial::univariate(std::vector<double> coeffs) {
    if (coeffs.empty()) coeffs.push_back(0.0);
    return Polynomial(1, static_cast<int>(coeffs.size()) - 1, std::move(coeffs));
}

int Polynomial::degree() const {
    int deg = -1;
    for_each_exponent(n_, bound_, [&](const Exponent& a, long long idx) {
        if (coeffs_[static_cast<size_t>(idx)] != 0.0)
            deg = std::max(deg, std::accumulate(a.begin(), a.end(), 0));
    });
    return deg;
}

double Polynomial::coeff(const Exponent& alpha) const {
    int total = std::accumulate(alpha.begin(), alpha.end(), 0);
    if (total > bound_) return 0.0;
    return coeffs_[static_cast<size_t>(lex_rank(alpha, n_, bound_))];
}

void Polynomial::set_coeff(const Exponent& alpha, double value) {
    coeffs_[static_cast<size_t>(lex_rank(alpha, n_, bound_))] = value;
}

double Polynomial::max_abs() const {
    double m = 0.0;
    for (double c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

bool Polynomial::is_zero(double tol) const { return max_abs() <= tol; }

double Polynomial::eval(std::span<const double> point) const {
    if (static_cast<int>(point.size()) != n_)
        throw std::invalid_argument("Polynomial::eval: point length does not match variable count");
    if (n_ == 1) {
        // Horner
        double acc = 0.0;
        for (size_t k = coeffs_.size(); k-- > 0;) acc = acc * point[0] + coeffs_[k];
        return acc;
    }
    // powers[i][k] = point[i]^k
    std::vector<std::vector<double>> powers(static_cast<size_t>(n_));
    for (int i = 0; i < n_; ++i) {
        powers[i].resize(static_cast<size_t>(bound_) + 1);
        powers[i][0] = 1.0;
        for (int k = 1; k <= bound_; ++k) powers[i][k] = powers[i][k - 1] * point[i];
    }
    double acc = 0.0;
    for_each_exponent(n_, bound_, [&](const Exponent& a, long long idx) {
        double c = coeffs_[static_cast<size_t>(idx)];
        if (c == 0.0) return;
        double term = c;
        for (int i = 0; i < n_; ++i) term *= powers[i][a[i]];
        acc += term;
    });
    return acc;
}

double Polynomial::operator()(std::initializer_list<double> point) const {
    std::vector<double> p(point);
    return eval(p);
}

namespace {

void require_same_vars(const Polynomial& f, const Polynomial& g, const char* op) {
    if (f.vars() != g.vars())
        throw std::invalid_argument(std::string(op) + ": operands have different variable counts");
}

}  // namespace

Polynomial embed(const Polynomial& f, int bound) {
    if (bound < f.degree_bound()) {
        // allowed as long as nothing nonzero is dropped
        Polynomial out(f.vars(), bound);
        for_each_exponent(f.vars(), f.degree_bound(), [&](const Exponent& a, long long idx) {
            double c = f.coeffs()[static_cast<size_t>(idx)];
            if (c == 0.0) return;
            int total = std::accumulate(a.begin(), a.end(), 0);
            if (total > bound)
                throw std::invalid_argument("embed: bound smaller than effective degree");
            out.set_coeff(a, c);
        });
        return out;
    }
    Polynomial out(f.vars(), bound);
    for_each_exponent(f.vars(), f.degree_bound(), [&](const Exponent& a, long long idx) {
        double c = f.coeffs()[static_cast<size_t>(idx)];
        if (c != 0.0) out.set_coeff(a, c);
    });
    return out;
}

Polynomial add(const Polynomial& f, const Polynomial& g) {
    require_same_vars(f, g, "add");
    int bound = std::max(f.degree_bound(), g.degree_bound());
    Polynomial a = embed(f, bound);
    const Polynomial b = embed(g, bound);
    for (size_t i = 0; i < a.coeffs().size(); ++i) a.coeffs()[i] += b.coeffs()[i];
    return a;
}

Polynomial sub(const Polynomial& f, const Polynomial& g) {
    require_same_vars(f, g, "sub");
    int bound = std::max(f.degree_bound(), g.degree_bound());
    Polynomial a = embed(f, bound);
    const Polynomial b = embed(g, bound);
    for (size_t i = 0; i < a.coeffs().size(); ++i) a.coeffs()[i] -= b.coeffs()[i];
    return a;
}

Polynomial operator-(const Polynomial& f) { return mul(f, -1.0); }

Polynomial mul(const Polynomial& f, double scalar) {
    Polynomial out = f;
    for (double& c : out.coeffs()) c *= scalar;
    return out;
}

Polynomial mul(const Polynomial& f, const Polynomial& g) {
    require_same_vars(f, g, "mul");
    const int n = f.vars();
    const int bound = f.degree_bound() + g.degree_bound();
    if (n == 1) {
        // univariate product is plain convolution
        std::vector<double> out(static_cast<size_t>(bound) + 1, 0.0);
        const auto& a = f.coeffs();
        const auto& b = g.coeffs();
        for (size_t i = 0; i < a.size(); ++i) {
            if (a[i] == 0.0) continue;
            for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
        }
        return Polynomial(1, bound, std::move(out));
    }
    // gather nonzero terms once, then accumulate products by exponent addition
    struct Term { Exponent alpha; double c; };
    std::vector<Term> ft, gt;
    for_each_exponent(n, f.degree_bound(), [&](const Exponent& a, long long idx) {
        double c = f.coeffs()[static_cast<size_t>(idx)];
        if (c != 0.0) ft.push_back({a, c});
    });
    for_each_exponent(n, g.degree_bound(), [&](const Exponent& a, long long idx) {
        double c = g.coeffs()[static_cast<size_t>(idx)];
        if (c != 0.0) gt.push_back({a, c});
    });
    Polynomial out(n, bound);
    Exponent sum(n);
    for (const Term& u : ft)
        for (const Term& v : gt) {
            for (int i = 0; i < n; ++i) sum[i] = u.alpha[i] + v.alpha[i];
            out.coeffs()[static_cast<size_t>(lex_rank(sum, n, bound))] += u.c * v.c;
        }
    return out;
}

Polynomial pow(const Polynomial& f, int k) {
    if (k < 0) throw std::invalid_argument("pow: negative exponent");
    Polynomial acc = Polynomial::constant(f.vars(), 1.0);
    for (int i = 0; i < k; ++i) acc = mul(acc, f);
    return acc;
}

Polynomial trim(const Polynomial& f, double tol) {
    if (tol < 0.0) throw std::invalid_argument("trim: negative tolerance");
    return trim_abs(f, tol * f.max_abs());
}

Polynomial trim_abs(const Polynomial& f, double threshold) {
    Polynomial work = f;
    for (double& c : work.coeffs())
        if (std::abs(c) <= threshold) c = 0.0;
    int deg = work.degree();
    return embed(work, std::max(deg, 0));
}

Polynomial substitute_affine(const Polynomial& f, int var, double c0, double c1) {
    const int n = f.vars();
    if (var < 0 || var >= n) throw std::invalid_argument("substitute_affine: variable index out of range");
    // binomial table up to the bound
    const int d = f.degree_bound();
    std::vector<std::vector<double>> binom(static_cast<size_t>(d) + 1);
    for (int k = 0; k <= d; ++k) {
        binom[k].resize(static_cast<size_t>(k) + 1);
        for (int j = 0; j <= k; ++j)
            binom[k][j] = static_cast<double>(monomial_count(j, k - j));  // C(k, j)
    }
    Polynomial out(n, d);
    Exponent beta;
    for_each_exponent(n, d, [&](const Exponent& a, long long idx) {
        double c = f.coeffs()[static_cast<size_t>(idx)];
        if (c == 0.0) return;
        const int k = a[var];
        beta = a;
        double c1pow = 1.0;
        for (int j = 0; j <= k; ++j) {
            double c0pow = std::pow(c0, k - j);
            beta[var] = j;
            double term = c * binom[k][j] * c0pow * c1pow;
            out.coeffs()[static_cast<size_t>(lex_rank(beta, n, d))] += term;
            c1pow *= c1;
        }
    });
    return out;
}

double max_abs_diff(const Polynomial& f, const Polynomial& g) {
    return sub(f, g).max_abs();
}

std::string to_string(const Polynomial& f) {
    std::ostringstream os;
    bool first = true;
    for_each_exponent(f.vars(), f.degree_bound(), [&](const Exponent& a, long long idx) {
        double c = f.coeffs()[static_cast<size_t>(idx)];
        if (c == 0.0) return;
        if (!first) os << (c >= 0 ? " + " : " - ");
        else if (c < 0) os << "-";
        first = false;
        double mag = std::abs(c);
        bool all_zero = std::all_of(a.begin(), a.end(), [](int e) { return e == 0; });
        if (mag != 1.0 || all_zero) os << mag;
        for (int i = 0; i < f.vars(); ++i) {
            if (a[i] == 0) continue;
            os << "x" << (i + 1);
            if (a[i] > 1) os << "^" << a[i];
        }
    });
    if (first) os << "0";
    return os.str();
}

}  // namespace sosmat
