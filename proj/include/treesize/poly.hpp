#pragma once

// Small complex polynomials: evaluation, interpolation on the unit circle, roots.

#include <Eigen/Dense>

#include <functional>
#include <numbers>
#include <vector>

#include "mat2.hpp"

namespace treesize {

/// Coefficients in ascending order: p(x) = c[0] + c[1] x + ...
using Poly = std::vector<Complex>;

[[nodiscard]] inline Complex poly_eval(const Poly &p, Complex x) {
    Complex v = 0.0;
    for (std::size_t i = p.size(); i-- > 0;) {
        v = v * x + p[i];
    }
    return v;
}

/// Coefficients of a polynomial of degree <= deg known only through its values,
/// recovered exactly from deg+1 samples on the unit circle.
[[nodiscard]] inline Poly interpolate_on_circle(const std::function<Complex(Complex)> &f, int deg) {
    const int m = deg + 1;
    std::vector<Complex> w(static_cast<std::size_t>(m));
    std::vector<Complex> vals(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
        w[k] = std::polar(1.0, 2.0 * std::numbers::pi * k / m);
        vals[k] = f(w[k]);
    }
    Poly c(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
        Complex s = 0.0;
        for (int k = 0; k < m; ++k) {
            s += vals[k] * std::conj(w[(static_cast<std::size_t>(j) * k) % m]);
        }
        c[j] = s / static_cast<double>(m);
    }
    return c;
}

[[nodiscard]] inline double poly_max_abs(const Poly &p) {
    double m = 0.0;
    for (const auto &c : p) {
        m = std::max(m, std::abs(c));
    }
    return m;
}

/// Roots of p after dropping leading coefficients below rel_tol * max|c|.
/// Returns an empty list for a (numerically) constant polynomial.
[[nodiscard]] inline std::vector<Complex> poly_roots(Poly p, double rel_tol = 1e-12) {
    const double scale = poly_max_abs(p);
    while (!p.empty() && std::abs(p.back()) <= rel_tol * scale) {
        p.pop_back();
    }
    if (p.size() <= 1) {
        return {};
    }
    const int d = static_cast<int>(p.size()) - 1;
    if (d == 1) {
        return {-p[0] / p[1]};
    }
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 1; i < d; ++i) {
        comp(i, i - 1) = 1.0;
    }
    for (int i = 0; i < d; ++i) {
        comp(i, d - 1) = -p[i] / p[d];
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    std::vector<Complex> out;
    for (int i = 0; i < d; ++i) {
        out.push_back(es.eigenvalues()[i]);
    }
    return out;
}

} // namespace treesize
