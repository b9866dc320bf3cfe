#pragma once

#include "sosmat/polymatrix.hpp"

namespace fixtures {

using sosmat::Polynomial;
using sosmat::PolyMatrix;

// F = [[t^2, t(t+1)], [t(t+1), (t+1)^2]]
inline PolyMatrix example1() {
    Polynomial f = Polynomial::univariate({0, 0, 1});
    Polynomial g = Polynomial::univariate({0, 1, 1});
    Polynomial h = Polynomial::univariate({1, 2, 1});
    return PolyMatrix::from_rows({{f, g}, {g, h}});
}

// F = [[1 + x^4 y^2, xy], [xy, 1 + x^2 y^4]]
inline PolyMatrix example2() {
    Polynomial f11(2, 6), f22(2, 6), f12(2, 2);
    f11.set_coeff({0, 0}, 1.0);
    f11.set_coeff({4, 2}, 1.0);
    f22.set_coeff({0, 0}, 1.0);
    f22.set_coeff({2, 4}, 1.0);
    f12.set_coeff({1, 1}, 1.0);
    return PolyMatrix::from_rows({{f11, f12}, {f12, f22}});
}

// 1 + x^2 y^4 + x^4 y^2 - 3 x^2 y^2
inline Polynomial motzkin() {
    Polynomial f(2, 6);
    f.set_coeff({0, 0}, 1.0);
    f.set_coeff({2, 2}, -3.0);
    f.set_coeff({2, 4}, 1.0);
    f.set_coeff({4, 2}, 1.0);
    return f;
}

inline Polynomial bivariate(std::initializer_list<std::pair<sosmat::Exponent, double>> terms,
                            int bound) {
    Polynomial f(2, bound);
    for (const auto& [alpha, c] : terms) f.set_coeff(alpha, c);
    return f;
}

}  // namespace fixtures
