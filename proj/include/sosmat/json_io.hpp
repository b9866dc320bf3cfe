#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>

#include "sosmat/gram.hpp"
#include "sosmat/schmudgen.hpp"
#include "sosmat/sos.hpp"

namespace sosmat {

// JSON schemas:
//   Polynomial      {"n": int, "d": int, "coeffs": [real...]}   (length C(n+d,n))
//   PolyMatrix      {"m": int, "n": int, "entries": [[Polynomial...]...]} row-major
//   Diagonalization {"b", "x_plus", "x_minus", "d": [...], "pivots": [...], "residuals": [r1,r2,r3]}
//   Certificate     {"domain", "multiplier", "terms": [{"weight","matrix"}...], "residual"}
//   GramSolution    {"rank", "factor": [[...]...], "residual", "iters": [...]}

nlohmann::json to_json(const Polynomial& p);
Polynomial polynomial_from_json(const nlohmann::json& j);

nlohmann::json to_json(const PolyMatrix& m);
PolyMatrix polymatrix_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Diagonalization& d, const std::array<double, 3>& residuals);
nlohmann::json to_json(const Certificate& c);
Certificate certificate_from_json(const nlohmann::json& j);

nlohmann::json to_json(const GramSolution& s);

nlohmann::json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace sosmat
