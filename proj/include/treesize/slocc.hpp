#pragma once

/**
 * @file
 * SLOCC classification of two- and three-qubit pure states from their
 * coefficient matrices.
 *
 * Three-qubit states are first screened by Schmidt rank across the three
 * one-vs-two cuts (product / biseparable). Genuinely entangled states are
 * then split into GHZ and W by the coefficient-matrix conditions:
 *
 *   1a/2a  C0, C1 independent, det C0 != 0, C0^-1 C1 has two / one eigenvalue(s)
 *   1b/2b  same with C0 and C1 interchanged
 *   1c     every cut independent and some cut has det C0 = det C1 = 0
 *
 * W iff 2a or 2b fires, GHZ otherwise.
 */

#include <algorithm>
#include <array>
#include <optional>
#include <string>

#include "qstate.hpp"

namespace treesize {

struct SloccTolerances {
    double det = 1e-9;
    double disc = 1e-9;
    double rank = 1e-9;
};

enum class Class2 { Product, Entangled };

[[nodiscard]] inline std::string to_string(Class2 c) {
    return c == Class2::Product ? "Product" : "Entangled";
}

/// Product iff det of the 2x2 coefficient matrix vanishes.
[[nodiscard]] inline Class2 classify2(const PureState &s, const SloccTolerances &tol = {}) {
    if (s.n_qubits() != 2) {
        throw DimensionMismatch("classify2 needs a two-qubit state");
    }
    const Mat2 c{s[0], s[1], s[2], s[3]};
    return std::abs(c.det()) > tol.det ? Class2::Entangled : Class2::Product;
}

/// True iff m has a single repeated eigenvalue, i.e.
/// |tr^2 - 4 det| <= tol * max(1, |tr|^2, |det|).
[[nodiscard]] inline bool one_eigenvalue(const Mat2 &m, double tol = 1e-9) {
    const Complex t = m.trace();
    const Complex d = m.det();
    const double scale = std::max({1.0, std::norm(t), std::abs(d)});
    return std::abs(t * t - 4.0 * d) <= tol * scale;
}

/// Ratio sigma_min / sigma_max of the 2x4 matrix [vec(C0); vec(C1)] at a cut.
/// The product of singular values is taken from the 2x2 minors directly,
/// which stays accurate when the matrix is nearly rank one.
[[nodiscard]] inline double schmidt_ratio(const CoeffMatrixPair &cm) {
    const std::array<Complex, 4> r0{cm.c0.v};
    const std::array<Complex, 4> r1{cm.c1.v};
    double f2 = 0.0;
    double p2 = 0.0;
    for (int i = 0; i < 4; ++i) {
        f2 += std::norm(r0[i]) + std::norm(r1[i]);
        for (int j = i + 1; j < 4; ++j) {
            p2 += std::norm(r0[i] * r1[j] - r0[j] * r1[i]);
        }
    }
    if (f2 == 0.0) {
        return 0.0;
    }
    const double p = std::sqrt(p2);
    const double s1sq = 0.5 * (f2 + std::sqrt(std::max(0.0, f2 * f2 - 4.0 * p2)));
    return p / s1sq;
}

/// Cayley hyperdeterminant: discriminant of det(x C0 + y C1) at cut 1|23.
/// Vanishes exactly on the W class and on non-genuinely-entangled states.
[[nodiscard]] inline Complex hyperdeterminant(std::span<const Complex> amps8) {
    const auto cm = coeff_matrices(amps8, 1);
    const Complex m = mixed_det(cm.c0, cm.c1);
    return m * m - 4.0 * cm.c0.det() * cm.c1.det();
}

enum class Kind3 { Product, Biseparable, GHZ, W };

[[nodiscard]] inline std::string to_string(Kind3 k) {
    switch (k) {
    case Kind3::Product:
        return "Product";
    case Kind3::Biseparable:
        return "Biseparable";
    case Kind3::GHZ:
        return "GHZ";
    case Kind3::W:
        return "W";
    }
    return "?";
}

struct SloccEvidence {
    /// "rank" for the Schmidt-rank screen, otherwise one of 1a 1b 1c 2a 2b.
    std::string condition;
    int partition = 1;
};

struct SloccClass3 {
    Kind3 kind = Kind3::Product;
    /// The singleton qubit for Biseparable, 0 otherwise.
    int partition_qubit = 0;
    SloccEvidence evidence;
    bool borderline = false;
    std::array<double, 3> schmidt_ratios{};
};

namespace detail {
inline bool near_threshold(double q, double tol) { return q >= 0.1 * tol && q <= 10.0 * tol; }
} // namespace detail

/// Classifies a three-qubit state. Scan order over partitions is 1, 2, 3 and
/// the first firing condition is recorded.
[[nodiscard]] inline SloccClass3 classify3(std::span<const Complex> amps8,
                                           const SloccTolerances &tol = {}) {
    if (amps8.size() != 8) {
        throw DimensionMismatch("classify3 needs a three-qubit state");
    }
    // Scale-free decisions: work on the normalized vector.
    const double nrm = std::sqrt(norm2(amps8));
    if (!(nrm > kZeroThreshold)) {
        throw ZeroVector();
    }
    Amplitudes v(amps8.begin(), amps8.end());
    for (auto &c : v) {
        c /= nrm;
    }

    SloccClass3 out;
    std::array<CoeffMatrixPair, 3> cms;
    int rank_one = 0;
    int rank_one_cut = 0;
    for (int p = 1; p <= 3; ++p) {
        cms[p - 1] = coeff_matrices(v, p);
        const double r = schmidt_ratio(cms[p - 1]);
        out.schmidt_ratios[p - 1] = r;
        out.borderline = out.borderline || detail::near_threshold(r, tol.rank);
        if (r <= tol.rank) {
            ++rank_one;
            rank_one_cut = p;
        }
    }
    if (rank_one == 3) {
        out.kind = Kind3::Product;
        out.evidence = {"rank", 1};
        return out;
    }
    if (rank_one == 1) {
        out.kind = Kind3::Biseparable;
        out.partition_qubit = rank_one_cut;
        out.evidence = {"rank", rank_one_cut};
        return out;
    }
    if (rank_one == 2) {
        throw Degenerate("Schmidt ranks are inconsistent: two cuts rank one, one cut rank two");
    }

    for (int p = 1; p <= 3; ++p) {
        const auto &cm = cms[p - 1];
        const Complex d0 = cm.c0.det();
        const Complex d1 = cm.c1.det();
        out.borderline = out.borderline || detail::near_threshold(std::abs(d0), tol.det) ||
                         detail::near_threshold(std::abs(d1), tol.det);
        const auto decide = [&](const Mat2 &inv_of, const Mat2 &other, const char *ghz,
                                const char *w) {
            const Mat2 m = inv_of.inverse() * other;
            const Complex t = m.trace();
            const double scale = std::max({1.0, std::norm(t), std::abs(m.det())});
            const double rel = std::abs(t * t - 4.0 * m.det()) / scale;
            out.borderline = out.borderline || detail::near_threshold(rel, tol.disc);
            if (one_eigenvalue(m, tol.disc)) {
                out.kind = Kind3::W;
                out.evidence = {w, p};
            } else {
                out.kind = Kind3::GHZ;
                out.evidence = {ghz, p};
            }
            return out;
        };
        if (std::abs(d0) > tol.det) {
            return decide(cm.c0, cm.c1, "1a", "2a");
        }
        if (std::abs(d1) > tol.det) {
            return decide(cm.c1, cm.c0, "1b", "2b");
        }
        // Both determinants vanish and every cut has independent C0, C1.
        out.kind = Kind3::GHZ;
        out.evidence = {"1c", p};
        return out;
    }
    throw Degenerate("no classification condition fired");
}

[[nodiscard]] inline SloccClass3 classify3(const PureState &s, const SloccTolerances &tol = {}) {
    if (s.n_qubits() != 3) {
        throw DimensionMismatch("classify3 needs a three-qubit state");
    }
    return classify3(s.span(), tol);
}

/// Like classify3 but maps the zero vector to nullopt instead of throwing.
[[nodiscard]] inline std::optional<SloccClass3> classify3_or_zero(std::span<const Complex> amps8,
                                                                  const SloccTolerances &tol = {}) {
    if (std::sqrt(norm2(amps8)) <= kZeroThreshold) {
        return std::nullopt;
    }
    return classify3(amps8, tol);
}

} // namespace treesize
