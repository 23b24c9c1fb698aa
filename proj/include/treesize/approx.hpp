#pragma once

/**
 * @file
 * Approximate tree size, the closed-form overlap bounds behind the 14-leaf
 * threshold of Psi4, and the witness that certifies it.
 */

#include <cmath>

#include "treesize.hpp"

namespace treesize {

// ---------------------------------------------------------------------------
// epsilon-approximate tree size

struct EpsilonTsResult {
    int size = 0;
    std::string shape;
    double best_overlap = 0.0;
};

/// Smallest S such that some shape with S leaves reaches squared overlap
/// >= 1 - eps with the target. Shapes are scanned in enumeration order, all
/// qubit assignments included.
[[nodiscard]] inline EpsilonTsResult epsilon_ts_detail(const PureState &target, double eps, const OptOptions &opt = {}) {
    if (!(eps > 0.0 && eps < 1.0)) {
        throw BadParams("eps must lie in (0, 1)");
    }
    const int n = target.n_qubits();
    if (n > 4) {
        throw Unsupported("epsilon_ts supports at most four qubits");
    }
    const int full = 1 << n;
    const auto shapes = enumerate_shapes(n, full);
    OptOptions o = opt;
    o.stop_at = 1.0 - eps;
    for (const auto &s : shapes) {
        const auto r = max_overlap(target, s, o);
        if (r.best_overlap >= 1.0 - eps) {
            return {size(s), shape_key(s), r.best_overlap};
        }
    }
    throw Degenerate("no shape up to 2^n leaves reached the target");
}

[[nodiscard]] inline int epsilon_ts(const PureState &target, double eps, const OptOptions &opt = {}) {
    return epsilon_ts_detail(target, eps, opt).size;
}

// ---------------------------------------------------------------------------
// Closed-form bounds

namespace detail {

/// Value and holomorphic gradient of a function of z = (a, b, c00, c01, c10, c11).
struct Bilinear {
    Complex value;
    std::array<Complex, 6> grad;
};

using BilinearPair = std::array<Bilinear, 2>;

/// (|u|^2 + |v|^2) / (6 (|a|^2+|b|^2) |c|^2) and its Wirtinger gradient.
inline double normalized_sixth(std::span<const Complex> z, std::span<Complex> grad, const BilinearPair &uv) {
    const double nab = std::norm(z[0]) + std::norm(z[1]);
    const double nc = std::norm(z[2]) + std::norm(z[3]) + std::norm(z[4]) + std::norm(z[5]);
    if (!(nab > 1e-300 && nc > 1e-300)) {
        std::fill(grad.begin(), grad.end(), Complex(0.0));
        return 0.0;
    }
    const double num = std::norm(uv[0].value) + std::norm(uv[1].value);
    const double f = num / (6.0 * nab * nc);
    if (!grad.empty()) {
        for (std::size_t k = 0; k < 6; ++k) {
            const Complex dnum = std::conj(uv[0].value) * uv[0].grad[k] + std::conj(uv[1].value) * uv[1].grad[k];
            const Complex dn = k < 2 ? std::conj(z[k]) / nab : std::conj(z[k]) / nc;
            grad[k] = dnum / (6.0 * nab * nc) - f * dn;
        }
    }
    return f;
}

inline BilinearPair f_terms(std::span<const Complex> z) {
    const Complex a = z[0], b = z[1], c00 = z[2], c01 = z[3], c10 = z[4], c11 = z[5];
    const Complex s = c01 + c10;
    return {Bilinear{b * s - 2.0 * a * c11, {-2.0 * c11, s, 0.0, b, b, -2.0 * a}},
            Bilinear{a * s - 2.0 * b * c00, {s, -2.0 * c00, -2.0 * b, a, a, 0.0}}};
}

inline BilinearPair f1_terms(std::span<const Complex> z) {
    const Complex a = z[0], b = z[1], c00 = z[2], c01 = z[3], c10 = z[4], c11 = z[5];
    return {Bilinear{a * c11 + b * (c10 - 2.0 * c01), {c11, c10 - 2.0 * c01, 0.0, -2.0 * b, b, a}},
            Bilinear{b * c00 + a * (c01 - 2.0 * c10), {c01 - 2.0 * c10, c00, b, a, -2.0 * a, 0.0}}};
}

} // namespace detail

/// f(a, b, c) / ((|a|^2+|b|^2) |c|^2) for z = (a, b, c00, c01, c10, c11);
/// its maximum 2/3 bounds one branch of the 12-13 leaf elimination for Psi4.
[[nodiscard]] inline double f_value(std::span<const Complex> z, std::span<Complex> grad = {}) {
    return detail::normalized_sixth(z, grad, detail::f_terms(z));
}

/// Same normalization for f1; its maximum 5/6 gives the 11/12 bound.
[[nodiscard]] inline double f1_value(std::span<const Complex> z, std::span<Complex> grad = {}) {
    return detail::normalized_sixth(z, grad, detail::f1_terms(z));
}

struct FBounds {
    double f_max = 0.0;
    double f1_max = 0.0;
    /// (1 + f1_max) / 2, the bound on overlaps with 12- and 13-leaf trees.
    double chain = 0.0;
    /// Best overlap of Psi4 with any T4+T4+T4 tree.
    double t444_max = 0.0;
};

[[nodiscard]] inline FBounds f_bounds(const OptOptions &opt = {}) {
    FBounds out;
    OptOptions o = opt;
    o.stop_at = 2.0;
    o.restarts = std::min(opt.restarts, 32);
    out.f_max = maximize_complex(
                    [](std::span<const Complex> z, std::span<Complex> g) { return f_value(z, g); }, 6, o)
                    .best;
    out.f1_max = maximize_complex(
                     [](std::span<const Complex> z, std::span<Complex> g) { return f1_value(z, g); }, 6, o)
                     .best;
    out.chain = (1.0 + out.f1_max) / 2.0;
    for (const auto &s : enumerate_shapes(4, 12)) {
        if (shape_family(s) == "T4+T4+T4") {
            OptOptions oo = opt;
            oo.stop_at = 2.0;
            out.t444_max = std::max(out.t444_max, max_overlap(states::psi4(), s, oo).best_overlap);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Witness

/// Threshold overlap: any pure state above it has tree size at least 14.
inline constexpr double kWitnessThreshold = 11.0 / 12.0;
/// Identity coefficient of the experimentally measured variant W' = 3/4 I - P.
inline constexpr double kWPrimeIdentity = 3.0 / 4.0;

struct WitnessReport {
    /// tr(W rho) with W = 11/12 I - |Psi4><Psi4|.
    double expectation = 0.0;
    /// Present (14) iff expectation < 0.
    std::optional<int> certified_ts_floor;
    /// tr(W rho) rebuilt as 1/6 tr(rho) + tr(W' rho).
    double relation_check = 0.0;
    /// |expectation - relation_check|.
    double relation_discrepancy = 0.0;
};

[[nodiscard]] inline double round_to(double x, int digits) {
    const double p = std::pow(10.0, digits);
    return std::round(x * p) / p;
}

[[nodiscard]] inline WitnessReport witness_eval(const DensityMatrix &rho) {
    if (rho.n_qubits() != 4) {
        throw InvalidDensity("the witness acts on four qubits");
    }
    const auto psi = states::psi4();
    const std::size_t d = rho.dim();
    // tr(A rho) for A = c I - |psi><psi|
    const auto tr_with = [&](double c) {
        Complex t = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                const Complex a = (i == j ? c : 0.0) - psi[i] * std::conj(psi[j]);
                t += a * rho(j, i);
            }
        }
        return t.real();
    };
    WitnessReport out;
    out.expectation = tr_with(kWitnessThreshold);
    out.relation_check = rho.trace().real() / 6.0 + tr_with(kWPrimeIdentity);
    out.relation_discrepancy = std::abs(out.expectation - out.relation_check);
    if (out.expectation < 0.0) {
        out.certified_ts_floor = 14;
    }
    return out;
}

/// Report for a measured <W'> on a unit-trace state.
[[nodiscard]] inline WitnessReport witness_from_wprime(double wprime) {
    if (!std::isfinite(wprime)) {
        throw BadParams("<W'> must be finite");
    }
    WitnessReport out;
    out.expectation = 1.0 / 6.0 + wprime;
    out.relation_check = out.expectation;
    if (out.expectation < 0.0) {
        out.certified_ts_floor = 14;
    }
    return out;
}

} // namespace treesize
