#pragma once

// Exact low-rank factorizations used to turn a classified state into a tree.

#include <array>
#include <vector>

#include "slocc.hpp"

namespace treesize {

using Vec2 = std::array<Complex, 2>;

/// Orthogonal complement of x with the same norm.
[[nodiscard]] inline Vec2 perp(const Vec2 &x) { return {-std::conj(x[1]), std::conj(x[0])}; }

[[nodiscard]] inline Mat2 from_columns(const Vec2 &c0, const Vec2 &c1) {
    return {c0[0], c1[0], c0[1], c1[1]};
}

/// M ~ u v^T, taking v from the row holding the largest entry.
[[nodiscard]] inline std::pair<Vec2, Vec2> rank1_factor(const Mat2 &m) {
    int best = 0;
    for (int i = 1; i < 4; ++i) {
        if (std::abs(m.v[i]) > std::abs(m.v[best])) {
            best = i;
        }
    }
    const int r = best / 2;
    const int c = best % 2;
    const Complex pivot = m(r, c);
    if (std::abs(pivot) == 0.0) {
        throw Degenerate("rank-one factorization of the zero matrix");
    }
    const Vec2 v{m(r, 0), m(r, 1)};
    const Vec2 u{m(0, c) / pivot, m(1, c) / pivot};
    return {u, v};
}

/// Factors of a (numerically) fully product n-qubit vector; their tensor
/// product reproduces `amps` exactly when it is product.
[[nodiscard]] inline std::vector<Vec2> product_factors(std::span<const Complex> amps) {
    const int n = qubits_for_length(amps.size());
    std::size_t idx = 0;
    for (std::size_t b = 1; b < amps.size(); ++b) {
        if (std::abs(amps[b]) > std::abs(amps[idx])) {
            idx = b;
        }
    }
    const Complex pivot = amps[idx];
    if (std::abs(pivot) == 0.0) {
        throw ZeroVector();
    }
    std::vector<Vec2> out;
    for (int q = 1; q <= n; ++q) {
        const std::size_t mask = std::size_t{1} << (n - q);
        out.push_back({amps[idx & ~mask], amps[idx | mask]});
    }
    // prod_q out[q][x_q] = amps[x] * pivot^(n-1)
    Complex scale = 1.0;
    for (int q = 1; q < n; ++q) {
        scale /= pivot;
    }
    out[0][0] *= scale;
    out[0][1] *= scale;
    return out;
}

/// Two-term decomposition psi = alpha (x) R1 + beta (x) R2 of a GHZ-class
/// state at cut 1|23, with R1, R2 rank one.
struct GhzTerms {
    Vec2 alpha, beta;
    Mat2 r1, r2;
};

[[nodiscard]] inline GhzTerms ghz_terms(std::span<const Complex> amps8) {
    const auto cm = coeff_matrices(amps8, 1);
    const Complex a = cm.c0.det();
    const Complex b = mixed_det(cm.c0, cm.c1);
    const Complex c = cm.c1.det();
    Complex s = std::sqrt(b * b - 4.0 * a * c);
    if (std::abs(b - s) > std::abs(b + s)) {
        s = -s;
    }
    const Complex q = -0.5 * (b + s);
    if (std::abs(q) == 0.0) {
        throw Degenerate("GHZ decomposition: pencil has a repeated root");
    }
    // homogeneous roots (x : y) of a x^2 + b x y + c y^2
    const Mat2 x{q, a, c, q};
    if (std::abs(x.det()) <= 1e-15 * std::max(1.0, x.max_abs() * x.max_abs())) {
        throw Degenerate("GHZ decomposition: pencil roots coincide");
    }
    GhzTerms out;
    out.r1 = cm.c0 * x(0, 0) + cm.c1 * x(0, 1);
    out.r2 = cm.c0 * x(1, 0) + cm.c1 * x(1, 1);
    const Mat2 xi = x.inverse();
    out.alpha = {xi(0, 0), xi(1, 0)};
    out.beta = {xi(0, 1), xi(1, 1)};
    return out;
}

/// Local frame of a W-class state: psi = (A1 (x) A2 (x) A3)(|001>+|010>+|100>).
struct WFrame {
    std::array<Mat2, 3> ops;
    double max_condition = 1.0;
};

inline constexpr double kMaxFrameCondition = 1e8;

[[nodiscard]] inline WFrame w_frame(std::span<const Complex> amps8) {
    const auto cm = coeff_matrices(amps8, 1);
    const Complex a = cm.c0.det();
    const Complex b = mixed_det(cm.c0, cm.c1);
    const Complex c = cm.c1.det();
    // double root of a x^2 + b x y + c y^2
    Complex x;
    Complex y;
    if (std::abs(a) >= std::abs(c)) {
        x = -b;
        y = 2.0 * a;
    } else {
        x = 2.0 * c;
        y = -b;
    }
    const double xy = std::sqrt(std::norm(x) + std::norm(y));
    if (!(xy > 0.0)) {
        throw Degenerate("W frame: both coefficient determinants vanish");
    }
    x /= xy;
    y /= xy;
    const Mat2 mb = cm.c0 * x + cm.c1 * y;

    Mat2 ma;
    Vec2 u1;
    Vec2 v1;
    if (std::abs(y) >= std::abs(x)) {
        ma = cm.c0;
        u1 = {1.0, -x / y};
        v1 = {0.0, 1.0 / y};
    } else {
        ma = cm.c1;
        u1 = {-y / x, 1.0};
        v1 = {1.0 / x, 0.0};
    }

    const auto [u2, u3] = rank1_factor(mb);
    const Mat2 e = from_columns(u2, perp(u2));
    const Mat2 f = from_columns(u3, perp(u3));
    const Mat2 nt = e.inverse() * ma * f.transpose().inverse();
    const Vec2 e1 = perp(u2);
    const Vec2 f1 = perp(u3);
    const Vec2 v2{nt(1, 0) * e1[0], nt(1, 0) * e1[1]};
    const Vec2 v3{nt(0, 1) * f1[0] + nt(0, 0) * u3[0], nt(0, 1) * f1[1] + nt(0, 0) * u3[1]};

    WFrame out;
    out.ops = {from_columns(u1, v1), from_columns(u2, v2), from_columns(u3, v3)};
    for (const auto &m : out.ops) {
        out.max_condition = std::max(out.max_condition, condition_number(m));
    }
    if (!(out.max_condition <= kMaxFrameCondition)) {
        throw Degenerate("W frame: local operators are too ill-conditioned");
    }
    return out;
}

} // namespace treesize
