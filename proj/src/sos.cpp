#include "sosmat/sos.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <sstream>
#include <stdexcept>

#include "sosmat/errors.hpp"
#include "sosmat/rng.hpp"
#include "sosmat/schmudgen.hpp"

namespace sosmat {

namespace {

constexpr double kGateTol = 1e-9;

// ---------------------------------------------------------------- domains

std::vector<double> linspace(double lo, double hi, int count) {
    std::vector<double> out(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i)
        out[static_cast<size_t>(i)] = lo + (hi - lo) * i / (count - 1);
    return out;
}

std::vector<double> chebyshev_nodes(double a, double b, int count) {
    constexpr double pi = 3.14159265358979323846;
    std::vector<double> out(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i)
        out[static_cast<size_t>(i)] =
            0.5 * (a + b) + 0.5 * (b - a) * std::cos(pi * i / (count - 1));
    return out;
}

// Fujiwara-style bound: all roots lie within this radius.
double coefficient_radius(const Polynomial& f) {
    const Polynomial w = trim(f, 1e-13);
    const int deg = w.degree();
    if (deg <= 0) return 0.0;
    const double lead = std::abs(w.coeffs()[static_cast<size_t>(deg)]);
    double r = 0.0;
    for (int k = 0; k < deg; ++k) {
        double c = std::abs(w.coeffs()[static_cast<size_t>(k)]);
        if (c == 0.0) continue;
        r = std::max(r, std::pow(c / lead, 1.0 / (deg - k)));
    }
    return 2.0 * r;
}

struct ScalarWitness {
    double point = 0.0;
    double value = 0.0;
};

ScalarWitness scalar_minimum(const Polynomial& f, const std::vector<double>& grid) {
    ScalarWitness worst{grid.front(), std::numeric_limits<double>::infinity()};
    for (double t : grid) {
        double v = f({t});
        if (v < worst.value) worst = {t, v};
    }
    return worst;
}

void gate_univariate(const Polynomial& f, const std::vector<double>& grid, const char* what) {
    ScalarWitness w = scalar_minimum(f, grid);
    if (w.value < -kGateTol * f.max_abs())
        throw NotPsdError(std::string(what) + ": negative at sample point", {w.point}, w.value);
}

std::vector<std::vector<double>> grid2d(double x_lo, double x_hi, double y_lo, double y_hi,
                                        int count) {
    std::vector<std::vector<double>> pts;
    for (double x : linspace(x_lo, x_hi, count))
        for (double y : linspace(y_lo, y_hi, count)) pts.push_back({x, y});
    return pts;
}

void gate_multivariate(const Polynomial& f, const std::vector<std::vector<double>>& pts,
                       const char* what) {
    double threshold = -kGateTol * f.max_abs();
    for (const auto& p : pts) {
        double v = f(p);
        if (v < threshold)
            throw NotPsdError(std::string(what) + ": negative at sample point", p, v);
    }
}

std::vector<std::vector<double>> rn_sample_points(int n) {
    if (n == 1) {
        std::vector<std::vector<double>> pts;
        for (double t : linspace(-4.0, 4.0, 201)) pts.push_back({t});
        return pts;
    }
    if (n == 2) return grid2d(-2.0, 2.0, -2.0, 2.0, 21);
    std::vector<std::vector<double>> pts;
    Rng rng(0x5eedULL);
    pts.push_back(std::vector<double>(static_cast<size_t>(n), 0.0));
    for (int i = 0; i < 200; ++i) {
        std::vector<double> p(static_cast<size_t>(n));
        for (double& x : p) x = -2.0 + 4.0 * rng.uniform01();
        pts.push_back(std::move(p));
    }
    return pts;
}

// ------------------------------------------------------- root machinery

std::vector<std::complex<double>> poly_roots(const Polynomial& f) {
    const Polynomial w = trim(f, 1e-13);
    const int deg = w.degree();
    if (deg <= 0) return {};
    const double lead = w.coeffs()[static_cast<size_t>(deg)];
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) C(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) C(i, deg - 1) = -w.coeffs()[static_cast<size_t>(i)] / lead;
    Eigen::EigenSolver<Eigen::MatrixXd> es(C);
    std::vector<std::complex<double>> roots(static_cast<size_t>(deg));
    for (int i = 0; i < deg; ++i) roots[static_cast<size_t>(i)] = es.eigenvalues()(i);
    return roots;
}

// Pair roots into conjugate couples and keep one representative per
// couple (closed upper half-plane; near-real pairs collapse onto the axis).
std::vector<std::complex<double>> select_half_roots(std::vector<std::complex<double>> roots) {
    const size_t count = roots.size();
    std::vector<bool> used(count, false);
    std::vector<std::complex<double>> reps;
    for (size_t step = 0; step + 1 < count; step += 2) {
        size_t zi = count;
        for (size_t i = 0; i < count; ++i)
            if (!used[i] && (zi == count || std::abs(roots[i].imag()) > std::abs(roots[zi].imag())))
                zi = i;
        if (zi == count) break;
        used[zi] = true;
        size_t wi = count;
        double best = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < count; ++i) {
            if (used[i]) continue;
            double dist = std::abs(std::conj(roots[zi]) - roots[i]);
            if (dist < best) {
                best = dist;
                wi = i;
            }
        }
        if (wi == count) {
            reps.push_back({roots[zi].real(), 0.0});
            continue;
        }
        used[wi] = true;
        const std::complex<double> z = roots[zi];
        const std::complex<double> w = roots[wi];
        const bool near_real = std::abs(z.imag()) <= 1e-8 * (1.0 + std::abs(z)) &&
                               std::abs(w.imag()) <= 1e-8 * (1.0 + std::abs(w));
        if (near_real) reps.push_back({0.5 * (z.real() + w.real()), 0.0});
        else if (z.imag() > 0.0) reps.push_back(z);
        else if (w.imag() > 0.0) reps.push_back(w);
        else reps.push_back(std::conj(z));
    }
    return reps;
}

// -------------------------------------------------- square-refine (LM)

// Jointly refines polynomials p_i against f = sum w_i p_i^2 (univariate).
// Near-solution starts make this a cheap cleanup of root-finding noise.
void polish_weighted_squares(const Polynomial& f, const std::vector<Polynomial>& weights,
                             std::vector<Polynomial>& ps) {
    const size_t k = ps.size();
    int res_bound = f.degree_bound();
    std::vector<int> offsets(k + 1, 0);
    for (size_t i = 0; i < k; ++i) {
        offsets[i + 1] = offsets[i] + ps[i].degree_bound() + 1;
        res_bound = std::max(res_bound, weights[i].degree_bound() + 2 * ps[i].degree_bound());
    }
    const int params = offsets[k];
    if (params == 0) return;

    auto unpack = [&](const Eigen::VectorXd& x) {
        std::vector<Polynomial> out;
        for (size_t i = 0; i < k; ++i) {
            std::vector<double> c(x.data() + offsets[i], x.data() + offsets[i + 1]);
            out.emplace_back(1, ps[i].degree_bound(), std::move(c));
        }
        return out;
    };
    auto residual_fn = [&](const Eigen::VectorXd& x) {
        std::vector<Polynomial> cur = unpack(x);
        Polynomial acc(1, 0);
        for (size_t i = 0; i < k; ++i) acc = add(acc, mul(weights[i], mul(cur[i], cur[i])));
        Polynomial diff = embed(sub(acc, f), res_bound);
        return Eigen::Map<const Eigen::VectorXd>(diff.coeffs().data(),
                                                 static_cast<Eigen::Index>(diff.coeffs().size()))
            .eval();
    };
    auto jacobian_fn = [&](const Eigen::VectorXd& x) {
        std::vector<Polynomial> cur = unpack(x);
        Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(res_bound + 1, params);
        for (size_t i = 0; i < k; ++i) {
            const Polynomial wp = mul(weights[i], cur[i]);  // d/dp_j of w p^2 is 2 (w p) shifted
            for (int j = 0; j <= ps[i].degree_bound(); ++j)
                for (size_t g = 0; g < wp.coeffs().size(); ++g) {
                    int row = static_cast<int>(g) + j;
                    if (row <= res_bound) jac(row, offsets[i] + j) = 2.0 * wp.coeffs()[g];
                }
        }
        return jac;
    };

    Eigen::VectorXd x0(params);
    for (size_t i = 0; i < k; ++i)
        for (int j = 0; j <= ps[i].degree_bound(); ++j)
            x0(offsets[i] + j) = ps[i].coeffs()[static_cast<size_t>(j)];

    LmOptions opts;
    opts.residual_tol = 1e-13 * (1.0 + f.max_abs());
    opts.step_tol = 1e-15;
    opts.max_iters = 40;
    LmResult run = lm_minimize(residual_fn, jacobian_fn, x0, opts);
    std::vector<Polynomial> refined = unpack(run.x);
    for (size_t i = 0; i < k; ++i) ps[i] = refined[i];
}

double reconstruction_residual(const Polynomial& f, const std::vector<Polynomial>& weights,
                               const std::vector<Polynomial>& ps) {
    Polynomial acc(f.vars(), 0);
    for (size_t i = 0; i < ps.size(); ++i)
        acc = add(acc, mul(weights[i], mul(ps[i], ps[i])));
    return max_abs_diff(acc, f) / (1.0 + f.max_abs());
}

std::pair<Polynomial, Polynomial> even_odd_compress(const Polynomial& u) {
    // u(s) = even(s^2) + s * odd(s^2)
    const int bound = u.degree_bound();
    std::vector<double> even(static_cast<size_t>(bound / 2) + 1, 0.0);
    std::vector<double> odd(static_cast<size_t>(std::max((bound - 1) / 2, 0)) + 1, 0.0);
    for (int i = 0; i <= bound; ++i) {
        double c = u.coeffs()[static_cast<size_t>(i)];
        if (i % 2 == 0) even[static_cast<size_t>(i / 2)] = c;
        else odd[static_cast<size_t>(i / 2)] = c;
    }
    return {Polynomial(1, bound / 2, std::move(even)),
            Polynomial(1, std::max((bound - 1) / 2, 0), std::move(odd))};
}

void require_univariate(const Polynomial& f, const char* op) {
    if (f.vars() != 1) throw std::invalid_argument(std::string(op) + ": expects a univariate polynomial");
}

}  // namespace

Domain Domain::parse(const std::string& text) {
    if (text == "rn") return rn();
    if (text == "rline") return real_line();
    if (text == "halfline") return half_line();
    auto parse_pair = [&](const std::string& prefix) -> std::pair<double, double> {
        std::string rest = text.substr(prefix.size());
        size_t sep = rest.find(':');
        if (sep == std::string::npos)
            throw std::invalid_argument("Domain::parse: expected '" + prefix + "a:b'");
        return {std::stod(rest.substr(0, sep)), std::stod(rest.substr(sep + 1))};
    };
    if (text.rfind("interval:", 0) == 0) {
        auto [a, b] = parse_pair("interval:");
        if (!(a < b)) throw std::invalid_argument("Domain::parse: interval needs a < b");
        return interval(a, b);
    }
    if (text.rfind("strip:", 0) == 0) {
        auto [a, b] = parse_pair("strip:");
        if (!(a < b)) throw std::invalid_argument("Domain::parse: strip needs a < b");
        return strip(a, b);
    }
    throw std::invalid_argument("Domain::parse: unknown domain '" + text + "'");
}

std::string Domain::str() const {
    std::ostringstream os;
    switch (kind) {
        case DomainKind::Rn: return "rn";
        case DomainKind::RealLine: return "rline";
        case DomainKind::HalfLine: return "halfline";
        case DomainKind::Interval: os << "interval:" << a << ":" << b; return os.str();
        case DomainKind::Strip: os << "strip:" << a << ":" << b; return os.str();
    }
    return "rn";
}

Polynomial reznick_base(int n) {
    Polynomial base = Polynomial::constant(n, 1.0);
    for (int i = 0; i < n; ++i) {
        Polynomial xi = Polynomial::variable(n, i);
        base = add(base, mul(xi, xi));
    }
    return base;
}

std::pair<Polynomial, Polynomial> sos_univariate_two_squares(const Polynomial& f) {
    require_univariate(f, "sos_univariate_two_squares");
    const double radius = 1.0 + std::max(1.0, coefficient_radius(f));
    gate_univariate(f, linspace(-radius, radius, 201), "sos_univariate_two_squares");

    const Polynomial work = trim(f, 1e-13);
    const int deg = work.degree();
    if (deg < 0) return {Polynomial(1, 0), Polynomial(1, 0)};
    if (deg == 0) {
        double c = work.coeffs()[0];
        if (c < 0.0) throw NotPsdError("sos_univariate_two_squares: negative constant", {0.0}, c);
        return {Polynomial::constant(1, std::sqrt(c)), Polynomial(1, 0)};
    }
    const double lead = work.coeffs()[static_cast<size_t>(deg)];
    if (deg % 2 != 0 || lead <= 0.0) {
        ScalarWitness w = scalar_minimum(f, linspace(-radius, radius, 2001));
        throw NotPsdError("sos_univariate_two_squares: not nonnegative on R", {w.point}, w.value);
    }

    const auto reps = select_half_roots(poly_roots(work));
    std::vector<std::complex<double>> q{std::sqrt(lead)};
    for (const auto& rep : reps) {
        q.push_back({0.0, 0.0});
        for (size_t i = q.size() - 1; i > 0; --i) q[i] = q[i - 1] - rep * q[i];
        q[0] = -rep * q[0];
    }
    const int qd = static_cast<int>(q.size()) - 1;
    std::vector<double> uc(q.size()), vc(q.size());
    for (size_t i = 0; i < q.size(); ++i) {
        uc[i] = q[i].real();
        vc[i] = q[i].imag();
    }
    std::vector<Polynomial> ps{Polynomial(1, qd, std::move(uc)), Polynomial(1, qd, std::move(vc))};
    const std::vector<Polynomial> ones{Polynomial::constant(1, 1.0), Polynomial::constant(1, 1.0)};
    polish_weighted_squares(f, ones, ps);

    if (reconstruction_residual(f, ones, ps) > 1e-8)
        throw NoCertificateError("sos_univariate_two_squares: refinement did not reach tolerance",
                                 reconstruction_residual(f, ones, ps));
    return {trim(ps[0], 1e-14), trim(ps[1], 1e-14)};
}

std::pair<Polynomial, Polynomial> sos_halfline(const Polynomial& f) {
    require_univariate(f, "sos_halfline");
    const double radius = 1.0 + std::max(1.0, coefficient_radius(f));
    gate_univariate(f, linspace(0.0, radius, 201), "sos_halfline");

    // g(s) = f(s^2) is even and nonnegative on R exactly when f >= 0 on [0, inf)
    const int fb = f.degree_bound();
    std::vector<double> gc(static_cast<size_t>(2 * fb) + 1, 0.0);
    for (int k = 0; k <= fb; ++k) gc[static_cast<size_t>(2 * k)] = f.coeffs()[static_cast<size_t>(k)];
    const Polynomial g(1, 2 * fb, std::move(gc));

    auto [u, v] = sos_univariate_two_squares(g);
    auto [ue, uo] = even_odd_compress(u);
    auto [ve, vo] = even_odd_compress(v);
    // with a symmetric root selection one of u, v is even and the other odd
    Polynomial p = ue.max_abs() >= ve.max_abs() ? ue : ve;
    Polynomial q = uo.max_abs() >= vo.max_abs() ? uo : vo;

    std::vector<Polynomial> ps{std::move(p), std::move(q)};
    const std::vector<Polynomial> weights{Polynomial::constant(1, 1.0), Polynomial::univariate({0.0, 1.0})};
    polish_weighted_squares(f, weights, ps);

    if (reconstruction_residual(f, weights, ps) > 1e-8)
        throw NoCertificateError("sos_halfline: refinement did not reach tolerance",
                                 reconstruction_residual(f, weights, ps));
    return {trim(ps[0], 1e-14), trim(ps[1], 1e-14)};
}

IntervalPieces sos_interval_pieces(const Polynomial& f, double a, double b) {
    require_univariate(f, "sos_interval");
    if (!(a < b)) throw std::invalid_argument("sos_interval: needs a < b");
    gate_univariate(f, chebyshev_nodes(a, b, 129), "sos_interval");

    const Polynomial work = trim(f, 1e-13);
    const int deg = std::max(work.degree(), 0);
    IntervalPieces out;
    out.even_case = deg % 2 == 0;
    if (work.degree() < 0) {
        out.p1 = Polynomial(1, 0);
        out.p2 = Polynomial(1, 0);
        return out;
    }

    // Goursat transform onto the half line: u in [0,inf) <-> y = cu/(1+u) in [0,c)
    const double c = b - a;
    const Polynomial fhat = substitute_affine(work, 0, a, 1.0);  // y = x - a
    Polynomial G(1, deg);
    {
        const Polynomial one_plus_u = Polynomial::univariate({1.0, 1.0});
        double ck = 1.0;
        for (int k = 0; k <= std::min(deg, fhat.degree_bound()); ++k) {
            double coeff = k < static_cast<int>(fhat.coeffs().size())
                               ? fhat.coeffs()[static_cast<size_t>(k)]
                               : 0.0;
            if (coeff != 0.0) {
                Polynomial term = mul(pow(one_plus_u, deg - k), coeff * ck);
                // shift by u^k
                std::vector<double> shifted(static_cast<size_t>(deg) + 1, 0.0);
                for (size_t i = 0; i < term.coeffs().size() && static_cast<int>(i) + k <= deg; ++i)
                    shifted[i + static_cast<size_t>(k)] = term.coeffs()[i];
                G = add(G, Polynomial(1, deg, std::move(shifted)));
            }
            ck *= c;
        }
    }

    auto [P, Q] = sos_halfline(trim(G, 1e-13));
    const double scale = std::pow(c, 0.5 * deg);
    const int d1 = deg / 2;

    // y^k (c-y)^(slot-k) expansion of a half-line piece back through the transform
    auto back = [&](const Polynomial& piece, int slot) -> Polynomial {
        if (piece.is_zero()) return Polynomial(1, 0);
        if (piece.degree() > slot)
            throw NoCertificateError("sos_interval: transformed piece exceeds its degree slot",
                                     0.0);
        const Polynomial c_minus_y = Polynomial::univariate({c, -1.0});
        Polynomial acc(1, 0);
        for (int k = 0; k <= piece.degree(); ++k) {
            double coeff = piece.coeffs()[static_cast<size_t>(k)];
            if (coeff == 0.0) continue;
            std::vector<double> yk(static_cast<size_t>(k) + 1, 0.0);
            yk.back() = coeff / scale;
            acc = add(acc, mul(Polynomial(1, k, std::move(yk)), pow(c_minus_y, slot - k)));
        }
        return substitute_affine(acc, 0, -a, 1.0);  // back to x = y + a
    };

    std::vector<Polynomial> ps;
    std::vector<Polynomial> weights;
    const Polynomial x_minus_a = Polynomial::univariate({-a, 1.0});
    const Polynomial b_minus_x = Polynomial::univariate({b, -1.0});
    if (out.even_case) {
        out.p1 = back(P, d1);
        out.p2 = back(Q, std::max(d1 - 1, 0));
        weights = {Polynomial::constant(1, 1.0), mul(x_minus_a, b_minus_x)};
    } else {
        out.p1 = back(Q, d1);  // weight (x - a)
        out.p2 = back(P, d1);  // weight (b - x)
        weights = {x_minus_a, b_minus_x};
    }
    ps = {out.p1, out.p2};
    polish_weighted_squares(f, weights, ps);
    out.p1 = trim(ps[0], 1e-14);
    out.p2 = trim(ps[1], 1e-14);

    if (reconstruction_residual(f, weights, {out.p1, out.p2}) > 1e-8)
        throw NoCertificateError("sos_interval: refinement did not reach tolerance",
                                 reconstruction_residual(f, weights, {out.p1, out.p2}));
    return out;
}

Certificate sos_interval(const Polynomial& f, double a, double b) {
    IntervalPieces pieces = sos_interval_pieces(f, a, b);
    Certificate cert;
    cert.domain = Domain::interval(a, b);
    cert.multiplier = Polynomial::constant(1, 1.0);
    const Polynomial x_minus_a = Polynomial::univariate({-a, 1.0});
    const Polynomial b_minus_x = Polynomial::univariate({b, -1.0});
    auto push = [&](const Polynomial& w, const Polynomial& p) {
        if (p.is_zero()) return;
        cert.terms.push_back({w, PolyMatrix::from_rows({{p}})});
    };
    if (pieces.even_case) {
        push(Polynomial::constant(1, 1.0), pieces.p1);
        push(mul(x_minus_a, b_minus_x), pieces.p2);
    } else {
        push(x_minus_a, pieces.p1);
        push(b_minus_x, pieces.p2);
    }
    cert.residual = verify_certificate(PolyMatrix::from_rows({{f}}), cert);
    return cert;
}

SosrfResult sosrf_multivariate(const Polynomial& f, int n_max, int r_max,
                               const GramSearchOptions& opts) {
    if (n_max < 0 || r_max < 1) throw std::invalid_argument("sosrf_multivariate: bad bounds");
    gate_multivariate(f, rn_sample_points(f.vars()), "sosrf_multivariate");

    if (f.is_zero()) return {0, {}, 0.0};
    const Polynomial base = reznick_base(f.vars());

    double best_residual = std::numeric_limits<double>::infinity();
    std::ostringstream attempts;
    Polynomial h = trim(f, 1e-14);
    for (int N = 0; N <= n_max; ++N) {
        if (N > 0) h = trim(mul(h, base), 1e-14);
        const int half = (h.degree() + 1) / 2;
        const auto basis = monomial_basis(f.vars(), half);
        const GramProblem prob = gram_constraints(h, basis);
        const int e = static_cast<int>(basis.size());
        GramSolution sol = rank_staircase(prob, opts.lm, std::min(r_max, e), opts.restarts,
                                          mix_seed(opts.seed, static_cast<std::uint64_t>(N)));
        if (sol.success) {
            SosrfResult out;
            out.power = N;
            out.squares = squares_from_factor(sol.factor, f.vars(), basis);
            Polynomial acc(f.vars(), 0);
            for (const Polynomial& g : out.squares) acc = add(acc, mul(g, g));
            out.residual = max_abs_diff(acc, h) / (1.0 + h.max_abs());
            if (out.residual <= 1e-6) return out;
        }
        best_residual = std::min(best_residual, sol.residual);
        attempts << " N=" << N << ": " << sol.residual;
    }
    throw NoCertificateError("sosrf_multivariate: no Gram factor up to N=" +
                                 std::to_string(n_max) + " (best residuals:" + attempts.str() + ")",
                             best_residual);
}

StripPieces sos_strip_pieces(const Polynomial& d, double a, double b, int degree_bound,
                             const GramSearchOptions& opts) {
    if (d.vars() != 2) throw std::invalid_argument("sos_strip: expects a bivariate polynomial");
    if (!(a < b)) throw std::invalid_argument("sos_strip: needs a < b");
    {
        std::vector<std::vector<double>> pts = grid2d(a, b, -5.0, 5.0, 21);
        gate_multivariate(d, pts, "sos_strip");
    }

    const double c = b - a;
    const Polynomial dh = trim(substitute_affine(d, 0, a, c), 1e-14);  // x1 = a + c*u
    if (dh.is_zero()) return {};
    degree_bound = std::max({degree_bound, dh.degree(), 2});

    const auto basis1 = monomial_basis(2, degree_bound / 2);
    const auto basis2 = monomial_basis(2, (degree_bound - 2) / 2);
    const int e1 = static_cast<int>(basis1.size());
    const int e2 = static_cast<int>(basis2.size());
    const int e = e1 + e2;

    // joint linear system: coeff_gamma(dh) = Tr(A1_gamma G1) + Tr(A2_gamma G2)
    // where the tau block carries the weight u(1-u) = u - u^2
    std::map<Exponent, Eigen::MatrixXd> mats;
    auto mat_for = [&](const Exponent& gamma) -> Eigen::MatrixXd& {
        auto it = mats.find(gamma);
        if (it == mats.end())
            it = mats.emplace(gamma, Eigen::MatrixXd::Zero(e, e)).first;
        return it->second;
    };
    Exponent sum(2);
    for (int i = 0; i < e1; ++i)
        for (int j = i; j < e1; ++j) {
            sum[0] = basis1[i][0] + basis1[j][0];
            sum[1] = basis1[i][1] + basis1[j][1];
            Eigen::MatrixXd& A = mat_for(sum);
            A(i, j) += 1.0;
            if (i != j) A(j, i) += 1.0;
        }
    for (int i = 0; i < e2; ++i)
        for (int j = i; j < e2; ++j) {
            const int ti = e1 + i, tj = e1 + j;
            for (int power : {1, 2}) {
                sum[0] = basis2[i][0] + basis2[j][0] + power;
                sum[1] = basis2[i][1] + basis2[j][1];
                const double w = power == 1 ? 1.0 : -1.0;
                Eigen::MatrixXd& A = mat_for(sum);
                A(ti, tj) += w;
                if (i != j) A(tj, ti) += w;
            }
        }

    GramProblem prob;
    prob.n = 2;
    prob.basis.reserve(static_cast<size_t>(e));
    prob.basis.insert(prob.basis.end(), basis1.begin(), basis1.end());
    prob.basis.insert(prob.basis.end(), basis2.begin(), basis2.end());
    for (auto& [gamma, A] : mats) {
        prob.monomials.push_back(gamma);
        prob.constraint_mats.push_back(std::move(A));
    }
    prob.target = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(prob.monomials.size()));
    for (size_t i = 0; i < prob.monomials.size(); ++i) {
        int total = prob.monomials[i][0] + prob.monomials[i][1];
        if (total <= dh.degree_bound()) prob.target(static_cast<Eigen::Index>(i)) = dh.coeff(prob.monomials[i]);
    }
    const auto dh_basis = monomial_basis(2, dh.degree_bound());
    for (size_t i = 0; i < dh.coeffs().size(); ++i)
        if (dh.coeffs()[i] != 0.0 && !mats.count(dh_basis[i]))
            throw std::invalid_argument("sos_strip: monomial of d outside the search space; raise degree_bound");

    GramSolution sol = rank_staircase(prob, opts.lm, std::min(opts.rank_max, e), opts.restarts,
                                      opts.seed);
    if (!sol.success)
        throw NoCertificateError("sos_strip: no certificate at degree bound " +
                                     std::to_string(degree_bound),
                                 sol.residual);

    StripPieces out;
    for (int col = 0; col < sol.factor.cols(); ++col) {
        Polynomial sigma(2, degree_bound / 2);
        for (int i = 0; i < e1; ++i)
            if (sol.factor(i, col) != 0.0) sigma.set_coeff(basis1[static_cast<size_t>(i)], sol.factor(i, col));
        Polynomial tau(2, (degree_bound - 2) / 2);
        for (int i = 0; i < e2; ++i)
            if (sol.factor(e1 + i, col) != 0.0) tau.set_coeff(basis2[static_cast<size_t>(i)], sol.factor(e1 + i, col));
        // back to original coordinates; fold the 1/c weight normalization
        sigma = substitute_affine(sigma, 0, -a / c, 1.0 / c);
        tau = mul(substitute_affine(tau, 0, -a / c, 1.0 / c), 1.0 / c);
        if (!sigma.is_zero()) out.sigma_squares.push_back(trim(sigma, 1e-14));
        if (!tau.is_zero()) out.tau_squares.push_back(trim(tau, 1e-14));
    }
    return out;
}

Certificate sos_strip(const Polynomial& d, double a, double b, int degree_bound,
                      const GramSearchOptions& opts) {
    StripPieces pieces = sos_strip_pieces(d, a, b, degree_bound, opts);
    Certificate cert;
    cert.domain = Domain::strip(a, b);
    cert.multiplier = Polynomial::constant(2, 1.0);
    const Polynomial weight =
        mul(sub(Polynomial::variable(2, 0), Polynomial::constant(2, a)),
            sub(Polynomial::constant(2, b), Polynomial::variable(2, 0)));
    for (const Polynomial& s : pieces.sigma_squares)
        cert.terms.push_back({Polynomial::constant(2, 1.0), PolyMatrix::from_rows({{s}})});
    for (const Polynomial& t : pieces.tau_squares)
        cert.terms.push_back({weight, PolyMatrix::from_rows({{t}})});
    cert.residual = verify_certificate(PolyMatrix::from_rows({{d}}), cert);
    return cert;
}

std::vector<std::vector<double>> domain_sample_points(const Domain& domain, const PolyMatrix& F) {
    auto univariate_radius = [&]() {
        double r = 1.0;
        for (int i = 0; i < F.rows(); ++i)
            for (int j = 0; j < F.cols(); ++j)
                r = std::max(r, coefficient_radius(F.at(i, j)));
        return 1.0 + r;
    };
    std::vector<std::vector<double>> pts;
    switch (domain.kind) {
        case DomainKind::RealLine:
            for (double t : linspace(-univariate_radius(), univariate_radius(), 201)) pts.push_back({t});
            return pts;
        case DomainKind::HalfLine:
            for (double t : linspace(0.0, univariate_radius(), 201)) pts.push_back({t});
            return pts;
        case DomainKind::Interval:
            for (double t : chebyshev_nodes(domain.a, domain.b, 129)) pts.push_back({t});
            return pts;
        case DomainKind::Strip:
            return grid2d(domain.a, domain.b, -5.0, 5.0, 21);
        case DomainKind::Rn:
            return rn_sample_points(F.vars());
    }
    return pts;
}

Certificate certify_matrix(const PolyMatrix& F, const Domain& domain, const CertifyOptions& opts) {
    if (!F.is_symmetric(0.0)) throw std::invalid_argument("certify_matrix: matrix is not symmetric");
    const int n = F.vars();
    if ((domain.kind == DomainKind::RealLine || domain.kind == DomainKind::HalfLine ||
         domain.kind == DomainKind::Interval) && n != 1)
        throw std::invalid_argument("certify_matrix: univariate domain needs a univariate matrix");
    if (domain.kind == DomainKind::Strip && n != 2)
        throw std::invalid_argument("certify_matrix: strip domain needs a bivariate matrix");

    auto [ok, witness] = psd_sample_check(F, domain_sample_points(domain, F));
    if (!ok)
        throw NotPsdError("certify_matrix: matrix not psd on the domain sample", witness.point,
                          witness.min_eigenvalue);

    const Diagonalization diag = diagonalize(F);
    const int m = F.rows();
    const PolyMatrix xpT = transpose(diag.x_plus);

    Certificate cert;
    cert.domain = domain;
    cert.multiplier = diag.b;

    auto stack_term = [&](const Polynomial& weight, const std::vector<Polynomial>& entries) {
        PolyMatrix mat = mat_mul(PolyMatrix::diagonal(entries), xpT);
        if (mat.max_abs() == 0.0) return;
        cert.terms.push_back({weight, std::move(mat)});
    };
    auto decompose_or_rethrow = [&](int j, auto&& fn) {
        try {
            return fn();
        } catch (const NoCertificateError& err) {
            throw NoCertificateError("certify_matrix: diagonal entry " + std::to_string(j + 1) +
                                         " failed: " + err.what(),
                                     err.best_residual);
        }
    };

    const Polynomial one = Polynomial::constant(n, 1.0);
    switch (domain.kind) {
        case DomainKind::RealLine: {
            std::vector<Polynomial> A(static_cast<size_t>(m), Polynomial(n, 0));
            std::vector<Polynomial> B = A;
            for (int j = 0; j < m; ++j) {
                if (diag.d[static_cast<size_t>(j)].is_zero()) continue;
                auto pair = decompose_or_rethrow(j, [&] {
                    return sos_univariate_two_squares(diag.d[static_cast<size_t>(j)]);
                });
                A[static_cast<size_t>(j)] = pair.first;
                B[static_cast<size_t>(j)] = pair.second;
            }
            stack_term(one, A);
            stack_term(one, B);
            break;
        }
        case DomainKind::HalfLine: {
            std::vector<Polynomial> P(static_cast<size_t>(m), Polynomial(n, 0));
            std::vector<Polynomial> Q = P;
            for (int j = 0; j < m; ++j) {
                if (diag.d[static_cast<size_t>(j)].is_zero()) continue;
                auto pair = decompose_or_rethrow(j, [&] {
                    return sos_halfline(diag.d[static_cast<size_t>(j)]);
                });
                P[static_cast<size_t>(j)] = pair.first;
                Q[static_cast<size_t>(j)] = pair.second;
            }
            stack_term(one, P);
            stack_term(Polynomial::univariate({0.0, 1.0}), Q);
            break;
        }
        case DomainKind::Interval: {
            std::vector<Polynomial> U1(static_cast<size_t>(m), Polynomial(n, 0));
            std::vector<Polynomial> U2 = U1, U3 = U1, U4 = U1;
            for (int j = 0; j < m; ++j) {
                if (diag.d[static_cast<size_t>(j)].is_zero()) continue;
                IntervalPieces pieces = decompose_or_rethrow(j, [&] {
                    return sos_interval_pieces(diag.d[static_cast<size_t>(j)], domain.a, domain.b);
                });
                if (pieces.even_case) {
                    U3[static_cast<size_t>(j)] = pieces.p1;
                    U4[static_cast<size_t>(j)] = pieces.p2;
                } else {
                    U1[static_cast<size_t>(j)] = pieces.p1;
                    U2[static_cast<size_t>(j)] = pieces.p2;
                }
            }
            const Polynomial x_minus_a = Polynomial::univariate({-domain.a, 1.0});
            const Polynomial b_minus_x = Polynomial::univariate({domain.b, -1.0});
            stack_term(x_minus_a, U1);
            stack_term(b_minus_x, U2);
            stack_term(one, U3);
            stack_term(mul(x_minus_a, b_minus_x), U4);
            break;
        }
        case DomainKind::Strip: {
            std::vector<StripPieces> pieces(static_cast<size_t>(m));
            size_t sigma_count = 0, tau_count = 0;
            for (int j = 0; j < m; ++j) {
                if (diag.d[static_cast<size_t>(j)].is_zero()) continue;
                pieces[static_cast<size_t>(j)] = decompose_or_rethrow(j, [&] {
                    const Polynomial& dj = diag.d[static_cast<size_t>(j)];
                    return sos_strip_pieces(dj, domain.a, domain.b,
                                            std::max(dj.degree(), 0) + opts.strip_degree_margin,
                                            opts.gram);
                });
                sigma_count = std::max(sigma_count, pieces[static_cast<size_t>(j)].sigma_squares.size());
                tau_count = std::max(tau_count, pieces[static_cast<size_t>(j)].tau_squares.size());
            }
            const Polynomial weight =
                mul(sub(Polynomial::variable(2, 0), Polynomial::constant(2, domain.a)),
                    sub(Polynomial::constant(2, domain.b), Polynomial::variable(2, 0)));
            for (size_t t = 0; t < sigma_count; ++t) {
                std::vector<Polynomial> stack(static_cast<size_t>(m), Polynomial(n, 0));
                for (int j = 0; j < m; ++j)
                    if (t < pieces[static_cast<size_t>(j)].sigma_squares.size())
                        stack[static_cast<size_t>(j)] = pieces[static_cast<size_t>(j)].sigma_squares[t];
                stack_term(one, stack);
            }
            for (size_t t = 0; t < tau_count; ++t) {
                std::vector<Polynomial> stack(static_cast<size_t>(m), Polynomial(n, 0));
                for (int j = 0; j < m; ++j)
                    if (t < pieces[static_cast<size_t>(j)].tau_squares.size())
                        stack[static_cast<size_t>(j)] = pieces[static_cast<size_t>(j)].tau_squares[t];
                stack_term(weight, stack);
            }
            break;
        }
        case DomainKind::Rn: {
            const Polynomial base = reznick_base(n);
            std::vector<std::vector<Polynomial>> squares(static_cast<size_t>(m));
            std::vector<int> half_powers(static_cast<size_t>(m), 0);
            int power_sum = 0;
            for (int j = 0; j < m; ++j) {
                const Polynomial& dj = diag.d[static_cast<size_t>(j)];
                if (dj.is_zero()) continue;
                SosrfResult res = decompose_or_rethrow(j, [&] {
                    return sosrf_multivariate(dj, opts.reznick_max, opts.gram.rank_max, opts.gram);
                });
                cert.reznick_power = std::max(cert.reznick_power, res.power);
                // the per-diagonal multiplier must be a square: round N up to
                // even with p_j = base^ceil(N/2), expanding the leftover factor
                // base * g^2 = g^2 + sum (x_k g)^2
                const int s = (res.power + 1) / 2;
                half_powers[static_cast<size_t>(j)] = s;
                power_sum += s;
                if (2 * s == res.power) {
                    squares[static_cast<size_t>(j)] = std::move(res.squares);
                } else {
                    for (const Polynomial& g : res.squares) {
                        squares[static_cast<size_t>(j)].push_back(g);
                        for (int v = 0; v < n; ++v)
                            squares[static_cast<size_t>(j)].push_back(mul(g, Polynomial::variable(n, v)));
                    }
                }
            }
            cert.multiplier = mul(diag.b, pow(base, power_sum));
            size_t max_terms = 0;
            for (const auto& sj : squares) max_terms = std::max(max_terms, sj.size());
            for (size_t t = 0; t < max_terms; ++t) {
                std::vector<Polynomial> stack(static_cast<size_t>(m), Polynomial(n, 0));
                for (int j = 0; j < m; ++j) {
                    const auto& sj = squares[static_cast<size_t>(j)];
                    if (t < sj.size())
                        stack[static_cast<size_t>(j)] =
                            mul(sj[t], pow(base, power_sum - half_powers[static_cast<size_t>(j)]));
                }
                stack_term(one, stack);
            }
            break;
        }
    }

    cert.residual = verify_certificate(F, cert);
    if (cert.residual > 1e-4)
        throw NoCertificateError("certify_matrix: assembled certificate does not verify",
                                 cert.residual);
    return cert;
}

double verify_certificate(const PolyMatrix& F, const Certificate& cert) {
    const int n = F.vars();
    const int m = F.rows();
    if (!F.is_symmetric(0.0)) throw std::invalid_argument("verify_certificate: matrix is not symmetric");

    // allowed weight polynomials per domain
    std::vector<Polynomial> allowed;
    const Polynomial one = Polynomial::constant(n, 1.0);
    allowed.push_back(one);
    switch (cert.domain.kind) {
        case DomainKind::Rn:
        case DomainKind::RealLine:
            break;
        case DomainKind::HalfLine:
            allowed.push_back(Polynomial::variable(n, 0));
            break;
        case DomainKind::Interval: {
            const Polynomial xa = sub(Polynomial::variable(n, 0), Polynomial::constant(n, cert.domain.a));
            const Polynomial bx = sub(Polynomial::constant(n, cert.domain.b), Polynomial::variable(n, 0));
            allowed.push_back(xa);
            allowed.push_back(bx);
            allowed.push_back(mul(xa, bx));
            break;
        }
        case DomainKind::Strip: {
            const Polynomial xa = sub(Polynomial::variable(n, 0), Polynomial::constant(n, cert.domain.a));
            const Polynomial bx = sub(Polynomial::constant(n, cert.domain.b), Polynomial::variable(n, 0));
            allowed.push_back(mul(xa, bx));
            break;
        }
    }
    for (const CertTerm& term : cert.terms) {
        bool matched = false;
        for (const Polynomial& cand : allowed)
            if (term.weight.vars() == cand.vars() &&
                max_abs_diff(term.weight, cand) <= 1e-12 * (1.0 + cand.max_abs())) {
                matched = true;
                break;
            }
        if (!matched)
            throw InvalidCertificateError(
                "verify_certificate: weight '" + to_string(term.weight) +
                "' is outside the allowed set for domain " + cert.domain.str());
        if (term.matrix.cols() != m || term.matrix.vars() != n)
            throw std::invalid_argument("verify_certificate: term shape mismatch");
    }

    const PolyMatrix target = mat_scale(F, mul(cert.multiplier, cert.multiplier));
    PolyMatrix acc(m, m, n);
    for (const CertTerm& term : cert.terms)
        acc = mat_add(acc, mat_scale(mat_mul(transpose(term.matrix), term.matrix), term.weight));
    return mat_max_abs_diff(target, acc) / (1.0 + target.max_abs());
}

}  // namespace sosmat
