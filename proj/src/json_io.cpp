#include "sosmat/json_io.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <stdexcept>

namespace sosmat {

using nlohmann::json;

namespace {

const json& require_field(const json& j, const char* name) {
    if (!j.contains(name))
        throw std::invalid_argument(std::string("missing field '") + name + "'");
    return j.at(name);
}

}  // namespace

json to_json(const Polynomial& p) {
    return json{{"n", p.vars()}, {"d", p.degree_bound()}, {"coeffs", p.coeffs()}};
}

Polynomial polynomial_from_json(const json& j) {
    const int n = require_field(j, "n").get<int>();
    const int d = require_field(j, "d").get<int>();
    const auto coeffs = require_field(j, "coeffs").get<std::vector<double>>();
    if (n < 1) throw std::invalid_argument("field 'n' must be >= 1");
    if (d < 0) throw std::invalid_argument("field 'd' must be >= 0");
    if (static_cast<long long>(coeffs.size()) != monomial_count(n, d))
        throw std::invalid_argument("field 'coeffs' must have exactly C(n+d,n) entries");
    for (double c : coeffs)
        if (!std::isfinite(c)) throw std::invalid_argument("field 'coeffs' has a non-finite entry");
    return Polynomial(n, d, coeffs);
}

json to_json(const PolyMatrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(to_json(m.at(i, j)));
        rows.push_back(std::move(row));
    }
    return json{{"m", m.rows()}, {"n", m.vars()}, {"entries", std::move(rows)}};
}

PolyMatrix polymatrix_from_json(const json& j) {
    const int m = require_field(j, "m").get<int>();
    const int n = require_field(j, "n").get<int>();
    const json& entries = require_field(j, "entries");
    if (m < 1) throw std::invalid_argument("field 'm' must be >= 1");
    if (!entries.is_array() || static_cast<int>(entries.size()) != m)
        throw std::invalid_argument("field 'entries' must be an m x m grid");
    std::vector<std::vector<Polynomial>> rows;
    rows.reserve(static_cast<size_t>(m));
    for (const json& row : entries) {
        if (!row.is_array() || static_cast<int>(row.size()) != m)
            throw std::invalid_argument("field 'entries' must be an m x m grid");
        std::vector<Polynomial> out_row;
        out_row.reserve(static_cast<size_t>(m));
        for (const json& cell : row) {
            Polynomial p = polynomial_from_json(cell);
            if (p.vars() != n)
                throw std::invalid_argument("field 'entries' disagrees with 'n'");
            out_row.push_back(std::move(p));
        }
        rows.push_back(std::move(out_row));
    }
    return PolyMatrix::from_rows(rows);
}

json to_json(const Diagonalization& d, const std::array<double, 3>& residuals) {
    json dd = json::array();
    for (const Polynomial& p : d.d) dd.push_back(to_json(p));
    json pivots = json::array();
    for (const Polynomial& p : d.pivots) pivots.push_back(to_json(p));
    return json{{"b", to_json(d.b)},
                {"x_plus", to_json(d.x_plus)},
                {"x_minus", to_json(d.x_minus)},
                {"d", std::move(dd)},
                {"pivots", std::move(pivots)},
                {"residuals", residuals}};
}

json to_json(const Certificate& c) {
    json terms = json::array();
    for (const CertTerm& t : c.terms)
        terms.push_back(json{{"weight", to_json(t.weight)}, {"matrix", to_json(t.matrix)}});
    json out{{"domain", c.domain.str()},
             {"multiplier", to_json(c.multiplier)},
             {"terms", std::move(terms)},
             {"residual", c.residual}};
    if (c.domain.kind == DomainKind::Rn) out["reznick_power"] = c.reznick_power;
    return out;
}

Certificate certificate_from_json(const json& j) {
    Certificate cert;
    cert.domain = Domain::parse(require_field(j, "domain").get<std::string>());
    cert.multiplier = polynomial_from_json(require_field(j, "multiplier"));
    const json& terms = require_field(j, "terms");
    if (!terms.is_array()) throw std::invalid_argument("field 'terms' must be an array");
    for (const json& t : terms) {
        CertTerm term;
        term.weight = polynomial_from_json(require_field(t, "weight"));
        term.matrix = polymatrix_from_json(require_field(t, "matrix"));
        cert.terms.push_back(std::move(term));
    }
    if (j.contains("residual")) cert.residual = j.at("residual").get<double>();
    if (j.contains("reznick_power")) cert.reznick_power = j.at("reznick_power").get<int>();
    return cert;
}

json to_json(const GramSolution& s) {
    std::vector<std::vector<double>> factor(static_cast<size_t>(s.factor.rows()));
    for (int i = 0; i < s.factor.rows(); ++i) {
        factor[static_cast<size_t>(i)].resize(static_cast<size_t>(s.factor.cols()));
        for (int j = 0; j < s.factor.cols(); ++j)
            factor[static_cast<size_t>(i)][static_cast<size_t>(j)] = s.factor(i, j);
    }
    return json{{"rank", s.rank},
                {"factor", std::move(factor)},
                {"residual", s.residual},
                {"iters", s.iterations_per_rank}};
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file '" + path + "'");
    json j;
    in >> j;
    return j;
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open file '" + path + "' for writing");
    out << j.dump(2) << "\n";
}

}  // namespace sosmat
