#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <limits>

namespace treesize {

using Complex = std::complex<double>;

/// Dense 2x2 complex matrix, row-major.
struct Mat2 {
    std::array<Complex, 4> v{};

    constexpr Mat2() = default;
    constexpr Mat2(Complex a, Complex b, Complex c, Complex d) : v{a, b, c, d} {}

    static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static constexpr Mat2 zero() { return {}; }

    [[nodiscard]] constexpr Complex &operator()(int r, int c) { return v[2 * r + c]; }
    [[nodiscard]] constexpr const Complex &operator()(int r, int c) const {
        return v[2 * r + c];
    }

    [[nodiscard]] Complex det() const { return v[0] * v[3] - v[1] * v[2]; }
    [[nodiscard]] Complex trace() const { return v[0] + v[3]; }
    /// Adjugate, so that adj(M) * M = det(M) * I.
    [[nodiscard]] Mat2 adj() const { return {v[3], -v[1], -v[2], v[0]}; }
    [[nodiscard]] Mat2 inverse() const {
        const Complex d = det();
        return adj() * (1.0 / d);
    }
    [[nodiscard]] Mat2 transpose() const { return {v[0], v[2], v[1], v[3]}; }
    [[nodiscard]] double max_abs() const {
        double m = 0.0;
        for (const auto &x : v) {
            m = std::max(m, std::abs(x));
        }
        return m;
    }
    [[nodiscard]] double frobenius() const {
        double s = 0.0;
        for (const auto &x : v) {
            s += std::norm(x);
        }
        return std::sqrt(s);
    }

    friend Mat2 operator+(const Mat2 &a, const Mat2 &b) {
        return {a.v[0] + b.v[0], a.v[1] + b.v[1], a.v[2] + b.v[2], a.v[3] + b.v[3]};
    }
    friend Mat2 operator-(const Mat2 &a, const Mat2 &b) {
        return {a.v[0] - b.v[0], a.v[1] - b.v[1], a.v[2] - b.v[2], a.v[3] - b.v[3]};
    }
    friend Mat2 operator*(const Mat2 &a, Complex s) {
        return {a.v[0] * s, a.v[1] * s, a.v[2] * s, a.v[3] * s};
    }
    friend Mat2 operator*(Complex s, const Mat2 &a) { return a * s; }
    friend Mat2 operator*(const Mat2 &a, const Mat2 &b) {
        return {a.v[0] * b.v[0] + a.v[1] * b.v[2], a.v[0] * b.v[1] + a.v[1] * b.v[3],
                a.v[2] * b.v[0] + a.v[3] * b.v[2], a.v[2] * b.v[1] + a.v[3] * b.v[3]};
    }
    [[nodiscard]] std::array<Complex, 2> apply(const std::array<Complex, 2> &x) const {
        return {v[0] * x[0] + v[1] * x[1], v[2] * x[0] + v[3] * x[1]};
    }
};

/// Mixed coefficient of det(x*A + y*B) = x^2 det A + x y mixed(A,B) + y^2 det B.
inline Complex mixed_det(const Mat2 &a, const Mat2 &b) { return (a.adj() * b).trace(); }

/// tr(M)^2 - 4 det(M): zero iff M has a single (repeated) eigenvalue.
inline Complex discriminant(const Mat2 &m) {
    const Complex t = m.trace();
    return t * t - 4.0 * m.det();
}

/// Spectral norm ratio sigma_min / sigma_max; 0 for the zero matrix.
inline double singular_ratio(const Mat2 &m) {
    const double f2 = std::norm(m.v[0]) + std::norm(m.v[1]) + std::norm(m.v[2]) +
                      std::norm(m.v[3]);
    if (f2 == 0.0) {
        return 0.0;
    }
    const double d = std::abs(m.det());
    // s1^2 + s2^2 = f2, s1 s2 = d
    const double disc = std::sqrt(std::max(0.0, f2 * f2 - 4.0 * d * d));
    const double s1sq = 0.5 * (f2 + disc);
    return d / s1sq;
}

/// Condition number in the spectral norm (infinity for singular input).
inline double condition_number(const Mat2 &m) {
    const double r = singular_ratio(m);
    return r == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / r;
}

} // namespace treesize
