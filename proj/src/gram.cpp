#include "sosmat/gram.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

#include "sosmat/rng.hpp"

namespace sosmat {

GramProblem gram_constraints(const Polynomial& f, const std::vector<Exponent>& basis) {
    const int n = f.vars();
    const int e = static_cast<int>(basis.size());
    if (e == 0) throw std::invalid_argument("gram_constraints: empty basis");
    for (const Exponent& b : basis)
        if (static_cast<int>(b.size()) != n)
            throw std::invalid_argument("gram_constraints: basis exponent length mismatch");

    // product monomial set; ordered map keyed by exponent gives lex order
    std::map<Exponent, int> index_of;
    std::vector<Exponent> gammas;
    Exponent sum(n);
    for (int i = 0; i < e; ++i)
        for (int j = i; j < e; ++j) {
            for (int k = 0; k < n; ++k) sum[k] = basis[i][k] + basis[j][k];
            if (index_of.emplace(sum, 0).second) gammas.push_back(sum);
        }
    std::sort(gammas.begin(), gammas.end());
    for (int i = 0; i < static_cast<int>(gammas.size()); ++i) index_of[gammas[i]] = i;
    const int l = static_cast<int>(gammas.size());

    GramProblem prob;
    prob.n = n;
    prob.basis = basis;
    prob.monomials = gammas;
    prob.constraint_mats.assign(l, Eigen::MatrixXd::Zero(e, e));
    for (int i = 0; i < e; ++i)
        for (int j = i; j < e; ++j) {
            for (int k = 0; k < n; ++k) sum[k] = basis[i][k] + basis[j][k];
            Eigen::MatrixXd& A = prob.constraint_mats[index_of[sum]];
            A(i, j) += 1.0;
            if (i != j) A(j, i) += 1.0;
        }

    prob.target = Eigen::VectorXd::Zero(l);
    for (int i = 0; i < l; ++i) {
        int total = 0;
        for (int k : gammas[i]) total += k;
        if (total <= f.degree_bound()) prob.target(i) = f.coeff(gammas[i]);
    }
    // every monomial of f must be reachable from the basis
    const auto f_basis = monomial_basis(n, f.degree_bound());
    for (size_t i = 0; i < f.coeffs().size(); ++i) {
        if (f.coeffs()[i] == 0.0) continue;
        if (!index_of.count(f_basis[i])) {
            std::ostringstream os;
            os << "gram_constraints: monomial (";
            for (size_t k = 0; k < f_basis[i].size(); ++k)
                os << f_basis[i][k] << (k + 1 < f_basis[i].size() ? "," : "");
            os << ") of f is outside the basis product set";
            throw std::invalid_argument(os.str());
        }
    }
    return prob;
}

std::pair<Eigen::VectorXd, Eigen::MatrixXd> residual_and_jacobian(const Eigen::MatrixXd& Y,
                                                                  const GramProblem& prob) {
    const int e = static_cast<int>(prob.basis.size());
    const int l = static_cast<int>(prob.constraint_mats.size());
    if (Y.rows() != e) throw std::invalid_argument("residual_and_jacobian: factor row count mismatch");
    const int r = static_cast<int>(Y.cols());

    const Eigen::MatrixXd X = Y * Y.transpose();
    Eigen::VectorXd res(l);
    Eigen::MatrixXd jac(l, e * r);
    for (int i = 0; i < l; ++i) {
        const Eigen::MatrixXd& A = prob.constraint_mats[i];
        res(i) = A.cwiseProduct(X).sum() - prob.target(i);
        Eigen::MatrixXd AY = 2.0 * (A * Y);
        jac.row(i) = Eigen::Map<Eigen::VectorXd>(AY.data(), e * r).transpose();
    }
    return {std::move(res), std::move(jac)};
}

GramSolution rank_staircase(const GramProblem& prob, const LmOptions& opts, int r_max,
                            int restarts, std::uint64_t seed) {
    const int e = static_cast<int>(prob.basis.size());
    if (r_max < 1 || r_max > e) throw std::invalid_argument("rank_staircase: r_max must be in [1, e]");
    if (restarts < 1) throw std::invalid_argument("rank_staircase: restarts must be >= 1");

    GramSolution best;
    best.residual = std::numeric_limits<double>::infinity();

    const int l = static_cast<int>(prob.constraint_mats.size());
    for (int r = 1; r <= r_max; ++r) {
        auto residual_fn = [&prob, e, l, r](const Eigen::VectorXd& x) {
            Eigen::MatrixXd Y = Eigen::Map<const Eigen::MatrixXd>(x.data(), e, r);
            Eigen::MatrixXd X = Y * Y.transpose();
            Eigen::VectorXd res(l);
            for (int i = 0; i < l; ++i)
                res(i) = prob.constraint_mats[i].cwiseProduct(X).sum() - prob.target(i);
            return res;
        };
        auto jacobian_fn = [&prob, e, l, r](const Eigen::VectorXd& x) {
            Eigen::MatrixXd Y = Eigen::Map<const Eigen::MatrixXd>(x.data(), e, r);
            Eigen::MatrixXd jac(l, e * r);
            for (int i = 0; i < l; ++i) {
                Eigen::MatrixXd AY = 2.0 * (prob.constraint_mats[i] * Y);
                jac.row(i) = Eigen::Map<Eigen::VectorXd>(AY.data(), e * r).transpose();
            }
            return jac;
        };

        int level_iters = 0;
        for (int s = 0; s < restarts; ++s) {
            Rng rng(mix_seed(seed, static_cast<std::uint64_t>(r) * 1000 + s));
            Eigen::VectorXd x0(e * r);
            const double scale = 1.0 / std::sqrt(static_cast<double>(e) * r);
            for (int i = 0; i < x0.size(); ++i) x0(i) = scale * rng.gaussian();

            LmResult run = lm_minimize(residual_fn, jacobian_fn, x0, opts);
            level_iters = std::max(level_iters, run.iterations);

            if (run.residual_norm < best.residual) {
                best.factor = Eigen::Map<const Eigen::MatrixXd>(run.x.data(), e, r);
                best.rank = r;
                best.residual = run.residual_norm;
            }
            if (run.residual_norm < opts.residual_tol) {
                GramSolution out;
                out.factor = Eigen::Map<const Eigen::MatrixXd>(run.x.data(), e, r);
                out.rank = r;
                out.residual = run.residual_norm;
                out.iterations_per_rank = best.iterations_per_rank;
                out.iterations_per_rank.push_back(run.iterations);
                out.success = true;
                return out;
            }
        }
        best.iterations_per_rank.push_back(level_iters);
    }
    best.success = false;
    return best;
}

Eigen::MatrixXd gram_from_factor(const Eigen::MatrixXd& Y) { return Y * Y.transpose(); }

GramProblem random_planted_problem(int e, int l, int rank, std::uint64_t seed) {
    if (e < 1 || l < 1 || rank < 1 || rank > e)
        throw std::invalid_argument("random_planted_problem: bad shape");
    Rng rng(seed);
    GramProblem prob;
    prob.n = 1;
    prob.basis = monomial_basis(1, e - 1);  // placeholder exponents; data is synthetic
    prob.constraint_mats.reserve(static_cast<size_t>(l));
    for (int i = 0; i < l; ++i) {
        Eigen::MatrixXd M(e, e);
        for (int a = 0; a < e; ++a)
            for (int b = 0; b < e; ++b) M(a, b) = rng.uniform01();
        prob.constraint_mats.push_back(0.5 * (M + M.transpose()));
    }
    Eigen::MatrixXd Ystar(e, rank);
    for (int a = 0; a < e; ++a)
        for (int b = 0; b < rank; ++b) Ystar(a, b) = rng.uniform01();
    const Eigen::MatrixXd Xstar = Ystar * Ystar.transpose();
    prob.target = Eigen::VectorXd(l);
    for (int i = 0; i < l; ++i) prob.target(i) = prob.constraint_mats[i].cwiseProduct(Xstar).sum();
    prob.monomials = prob.basis;
    return prob;
}

std::vector<Polynomial> squares_from_factor(const Eigen::MatrixXd& Y, int n,
                                            const std::vector<Exponent>& basis) {
    if (Y.rows() != static_cast<Eigen::Index>(basis.size()))
        throw std::invalid_argument("squares_from_factor: factor rows disagree with basis");
    int bound = 0;
    for (const Exponent& b : basis) {
        int total = 0;
        for (int k : b) total += k;
        bound = std::max(bound, total);
    }
    std::vector<Polynomial> out;
    out.reserve(static_cast<size_t>(Y.cols()));
    for (int c = 0; c < Y.cols(); ++c) {
        Polynomial g(n, bound);
        for (size_t j = 0; j < basis.size(); ++j)
            if (Y(static_cast<int>(j), c) != 0.0)
                g.set_coeff(basis[j], Y(static_cast<int>(j), c));
        out.push_back(std::move(g));
    }
    return out;
}

}  // namespace sosmat
