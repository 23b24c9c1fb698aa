#pragma once

/**
 * @file
 * Four-qubit states whose A|BCD splits stay in the W class under every local
 * operation on qubit A ("irreducible A|BCD form").
 *
 * Splitting at qubit A gives Psi = |0>P + |1>Q. An invertible operator on A
 * replaces the pair (P, Q) by two independent members of the pencil
 * P + lambda Q (plus Q itself), so the form is irreducible at A iff every
 * pencil member is W class. That holds iff the hyperdeterminant
 * Det(P + lambda Q), a quartic in lambda, vanishes identically and no member
 * drops to biseparable, product or zero.
 *
 * The normal form at A maps Q to |001>+|010>+|100> with operators on BCD,
 * clears c2 and rescales c1 with operators on A, leaving
 * |0>|phi_w> + |1>|W> with phi_w = sum_k c_k |k-1> (k = 1..8).
 */

#include <optional>

#include "factorize.hpp"
#include "poly.hpp"
#include "states.hpp"
#include "tree.hpp"

namespace treesize {

// ---------------------------------------------------------------------------
// Splitting

/// The three qubits other than `a` (of four), ascending.
[[nodiscard]] inline std::array<int, 3> others4(int a) {
    if (a < 1 || a > 4) {
        throw BadPartition("partition qubit must be 1..4");
    }
    std::array<int, 3> out{};
    int k = 0;
    for (int q = 1; q <= 4; ++q) {
        if (q != a) {
            out[k++] = q;
        }
    }
    return out;
}

/// Unnormalized halves (h0, h1) with psi = |0>_a h0 + |1>_a h1; the halves
/// are indexed by the other qubits in ascending order.
[[nodiscard]] inline std::array<Amplitudes, 2> split_halves(std::span<const Complex> amps16, int a) {
    if (amps16.size() != 16) {
        throw DimensionMismatch("A|BCD split needs a four-qubit state");
    }
    const auto rest = others4(a);
    std::array<Amplitudes, 2> h{Amplitudes(8), Amplitudes(8)};
    for (std::size_t b = 0; b < 16; ++b) {
        std::size_t sub = 0;
        for (int q : rest) {
            sub = (sub << 1U) | static_cast<std::size_t>(qubit_bit(b, 4, q));
        }
        h[static_cast<std::size_t>(qubit_bit(b, 4, a))][sub] = amps16[b];
    }
    return h;
}

/// Inverse of split_halves.
[[nodiscard]] inline Amplitudes join_halves(std::span<const Complex> h0, std::span<const Complex> h1, int a) {
    const auto rest = others4(a);
    Amplitudes out(16);
    for (std::size_t b = 0; b < 16; ++b) {
        std::size_t sub = 0;
        for (int q : rest) {
            sub = (sub << 1U) | static_cast<std::size_t>(qubit_bit(b, 4, q));
        }
        out[b] = qubit_bit(b, 4, a) == 0 ? h0[sub] : h1[sub];
    }
    return out;
}

struct AbcdForm {
    int partition_qubit = 1;
    /// Normalized halves; empty when the corresponding weight is zero.
    std::optional<PureState> phi0;
    std::optional<PureState> phi1;
    std::array<Complex, 2> weights{};
};

[[nodiscard]] inline AbcdForm abcd_split(const PureState &state, int partition_qubit) {
    if (state.n_qubits() != 4) {
        throw DimensionMismatch("A|BCD split needs a four-qubit state");
    }
    const auto h = split_halves(state.span(), partition_qubit);
    AbcdForm out;
    out.partition_qubit = partition_qubit;
    for (int x = 0; x < 2; ++x) {
        const double nrm = std::sqrt(norm2(h[x]));
        if (nrm > kZeroThreshold) {
            (x == 0 ? out.phi0 : out.phi1) = PureState::normalize(h[x]);
            out.weights[x] = nrm;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Pencils

/// Det(P + lambda Q) as a polynomial of degree <= 4 in lambda.
[[nodiscard]] inline Poly pencil_hyperdeterminant(std::span<const Complex> p, std::span<const Complex> q) {
    return interpolate_on_circle(
        [&](Complex lam) {
            Amplitudes v(8);
            for (std::size_t i = 0; i < 8; ++i) {
                v[i] = p[i] + lam * q[i];
            }
            return hyperdeterminant(v);
        },
        4);
}

/// Roots of Det(phi_w + lambda * pair) (by default pair = |GHZ>), i.e. the
/// lambdas at which the pencil member has a repeated coefficient-matrix
/// eigenvalue. Throws Degenerate when the quartic vanishes identically.
[[nodiscard]] inline std::vector<Complex> quartic_lambda_roots(const PureState &phi_w,
                                                               const PureState &pair = states::ghz3()) {
    if (phi_w.n_qubits() != 3 || pair.n_qubits() != 3) {
        throw DimensionMismatch("pencil roots need three-qubit states");
    }
    const Poly h = pencil_hyperdeterminant(phi_w.span(), pair.span());
    if (poly_max_abs(h) <= 1e-12) {
        throw Degenerate("pencil polynomial vanishes identically");
    }
    return poly_roots(h);
}

/// 2x2 minors of the 2x4 matrix [vec C0; vec C1] of P + lambda Q at cut q,
/// each a polynomial of degree <= 2.
[[nodiscard]] inline std::vector<Poly> pencil_minors(std::span<const Complex> p, std::span<const Complex> q,
                                                     int cut) {
    const auto cp = coeff_matrices(p, cut);
    const auto cq = coeff_matrices(q, cut);
    std::vector<Poly> out;
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            // (a0 + l a1)(d0 + l d1) - (b0 + l b1)(e0 + l e1)
            const Complex a0 = cp.c0.v[i], a1 = cq.c0.v[i];
            const Complex d0 = cp.c1.v[j], d1 = cq.c1.v[j];
            const Complex b0 = cp.c0.v[j], b1 = cq.c0.v[j];
            const Complex e0 = cp.c1.v[i], e1 = cq.c1.v[i];
            out.push_back({a0 * d0 - b0 * e0, a0 * d1 + a1 * d0 - b0 * e1 - b1 * e0, a1 * d1 - b1 * e1});
        }
    }
    return out;
}

/// Finite lambdas at which P + lambda Q loses Schmidt rank at some cut
/// (biseparable, product or zero).
[[nodiscard]] inline std::vector<Complex> rank_drop_lambdas(std::span<const Complex> p,
                                                            std::span<const Complex> q, double tol = 1e-9) {
    std::vector<Complex> out;
    for (int cut = 1; cut <= 3; ++cut) {
        const auto minors = pencil_minors(p, q, cut);
        const auto lead = std::max_element(minors.begin(), minors.end(), [](const Poly &x, const Poly &y) {
            return poly_max_abs(x) < poly_max_abs(y);
        });
        if (poly_max_abs(*lead) <= tol) {
            continue; // rank one along the whole pencil; Q itself is then not W
        }
        for (const Complex lam : poly_roots(*lead)) {
            const double scale = 1.0 + std::norm(lam);
            const bool common = std::all_of(minors.begin(), minors.end(), [&](const Poly &m) {
                return std::abs(poly_eval(m, lam)) <= tol * scale;
            });
            if (common) {
                out.push_back(lam);
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Normal form and families

enum class Family { Case1, Case2, Neither, NotApplicable };

[[nodiscard]] inline std::string to_string(Family f) {
    switch (f) {
    case Family::Case1:
        return "Case1";
    case Family::Case2:
        return "Case2";
    case Family::Neither:
        return "Neither";
    case Family::NotApplicable:
        return "NotApplicable";
    }
    return "?";
}

struct WNormalForm {
    /// c[k-1] is the amplitude of |k-1> in phi_w, k = 1..8.
    std::array<Complex, 8> c{};
    [[nodiscard]] Complex operator()(int k) const { return c[static_cast<std::size_t>(k - 1)]; }
};

inline constexpr double kFamilyTol = 1e-9;

namespace detail {
inline double family_scale(const WNormalForm &nf) {
    return std::max({1.0, std::abs(nf(3)) * std::abs(nf(3)), std::abs(nf(4)), std::abs(nf(5)) * std::abs(nf(5)),
                     std::abs(nf(6)), std::abs(nf(7))});
}

/// Residual of c4 = (sqrt c6 + sign sqrt c7)^2.
inline double case1_residual(const WNormalForm &nf, int sign) {
    const Complex r = std::sqrt(nf(6)) + static_cast<double>(sign) * std::sqrt(nf(7));
    return std::abs(nf(4) - r * r);
}
} // namespace detail

/// Sign s of the Case1 relation c4 = (sqrt c6 + s sqrt c7)^2 that fits best.
[[nodiscard]] inline int case1_sign(const WNormalForm &nf) {
    return detail::case1_residual(nf, 1) <= detail::case1_residual(nf, -1) ? 1 : -1;
}

[[nodiscard]] inline Family check_family(const WNormalForm &nf, double tol = kFamilyTol) {
    const double s = detail::family_scale(nf);
    const auto zero = [&](Complex x) { return std::abs(x) <= tol * s; };
    if (!zero(nf(2)) || !zero(nf(8)) || zero(nf(4)) || zero(nf(6)) || zero(nf(7))) {
        return Family::Neither;
    }
    if (zero(nf(1)) && zero(nf(3)) && zero(nf(5)) &&
        std::min(detail::case1_residual(nf, 1), detail::case1_residual(nf, -1)) <= tol * s) {
        return Family::Case1;
    }
    const Complex c3 = nf(3);
    const Complex c5 = nf(5);
    if (zero(nf(1) + 1.0) && zero(nf(4) - c3 * c3 / 4.0) && zero(nf(6) - c5 * c5 / 4.0) &&
        zero(nf(7) - (c3 - c5) * (c3 - c5) / 4.0)) {
        return Family::Case2;
    }
    return Family::Neither;
}

/// psi = (la (x) frame[0] (x) frame[1] (x) frame[2]) (|0>|phi_w> + |1>|W>) with
/// the tensor factors ordered (A, others ascending).
struct NormalFormReduction {
    int partition_qubit = 1;
    WNormalForm nf;
    Mat2 la;
    std::array<Mat2, 3> frame;
};

/// Threshold below which c1 is treated as zero (Case1 gauge).
inline constexpr double kC1Zero = 1e-9;

[[nodiscard]] inline NormalFormReduction normal_form(std::span<const Complex> amps16, int a) {
    const auto h = split_halves(amps16, a);
    const WFrame fr = w_frame(h[1]);
    Amplitudes phi = h[0];
    for (int k = 0; k < 3; ++k) {
        phi = apply_local(phi, k + 1, fr.ops[k].inverse());
    }
    // clear c2 with |1>_A -> -c2|0> + |1>, i.e. phi -> phi - c2 W
    const Complex c2 = phi[1];
    const Amplitudes w = states::w3_raw();
    for (std::size_t i = 0; i < 8; ++i) {
        phi[i] -= c2 * w[i];
    }
    phi[1] = 0.0;
    Mat2 la{1.0, c2, 0.0, 1.0};
    const double scale = std::sqrt(norm2(phi));
    if (std::abs(phi[0]) > kC1Zero * std::max(1.0, scale)) {
        const Complex c1 = phi[0];
        for (auto &x : phi) {
            x /= -c1;
        }
        la = la * Mat2{-c1, 0.0, 0.0, 1.0};
    } else {
        phi[0] = 0.0;
    }
    NormalFormReduction out;
    out.partition_qubit = a;
    std::copy(phi.begin(), phi.end(), out.nf.c.begin());
    out.la = la;
    out.frame = fr.ops;
    return out;
}

/// The four-qubit state |0>|phi_w> + |1>|W> of the given normal form (unnormalized).
[[nodiscard]] inline Amplitudes normal_form_state(const WNormalForm &nf) {
    Amplitudes out(16);
    const Amplitudes w = states::w3_raw();
    for (std::size_t i = 0; i < 8; ++i) {
        out[i] = nf.c[i];
        out[8 + i] = w[i];
    }
    return out;
}

struct FamilyParams {
    Complex c6 = 1.0;
    Complex c7 = 1.0;
    int sign = 1;
    Complex c3 = 2.0;
    Complex c5 = 4.0;
};

/// Normal form of a family member, with the dependent coefficients completed.
[[nodiscard]] inline WNormalForm family_normal_form(Family family, const FamilyParams &p) {
    WNormalForm nf;
    const double tiny = 1e-12;
    if (family == Family::Case1) {
        if (std::abs(p.c6) <= tiny || std::abs(p.c7) <= tiny || (p.sign != 1 && p.sign != -1)) {
            throw BadParams("Case1 needs nonzero c6, c7 and sign +-1");
        }
        const Complex r = std::sqrt(p.c6) + static_cast<double>(p.sign) * std::sqrt(p.c7);
        if (std::abs(r) <= tiny) {
            throw BadParams("Case1 parameters give c4 = 0");
        }
        nf.c[3] = r * r;
        nf.c[5] = p.c6;
        nf.c[6] = p.c7;
        return nf;
    }
    if (family == Family::Case2) {
        if (std::abs(p.c3) <= tiny || std::abs(p.c5) <= tiny || std::abs(p.c3 - p.c5) <= tiny) {
            throw BadParams("Case2 needs c3, c5 nonzero and distinct");
        }
        nf.c[0] = -1.0;
        nf.c[2] = p.c3;
        nf.c[4] = p.c5;
        nf.c[3] = p.c3 * p.c3 / 4.0;
        nf.c[5] = p.c5 * p.c5 / 4.0;
        nf.c[6] = (p.c3 - p.c5) * (p.c3 - p.c5) / 4.0;
        return nf;
    }
    throw BadParams("family must be Case1 or Case2");
}

/// |0>|phi_w> + |1>|W>, normalized, for a family member.
[[nodiscard]] inline PureState build_family_state(Family family, const FamilyParams &p) {
    return PureState::normalize(normal_form_state(family_normal_form(family, p)));
}

// ---------------------------------------------------------------------------
// Verdict

struct ReducibilityWitness {
    int partition_qubit = 1;
    ILO ilo = ILO::identity(1);
    Complex lambda_star = 0.0;
    Kind3 escaped_class = Kind3::GHZ;
};

struct IrreducibilityVerdict {
    bool irreducible = false;
    Family family = Family::NotApplicable;
    std::optional<ReducibilityWitness> witness;
};

/// Class of a (possibly zero) three-qubit vector; zero counts as Product.
[[nodiscard]] inline Kind3 half_class(std::span<const Complex> h) {
    const auto c = classify3_or_zero(h);
    return c ? c->kind : Kind3::Product;
}

/// Applies the witness and returns the classes of the two resulting halves.
[[nodiscard]] inline std::array<Kind3, 2> execute_witness(const PureState &state, const ReducibilityWitness &w) {
    const Amplitudes moved = apply_local(state.span(), w.ilo.qubit(), w.ilo.matrix());
    const auto h = split_halves(moved, w.partition_qubit);
    return {half_class(h[0]), half_class(h[1])};
}

inline constexpr double kPencilTol = 1e-9;

/// Pencil analysis at one partition; returns a witness when reducible there.
[[nodiscard]] inline std::optional<ReducibilityWitness> reducibility_at(const PureState &state, int a) {
    const auto h = split_halves(state.span(), a);
    for (int x = 0; x < 2; ++x) {
        const Kind3 k = half_class(h[x]);
        if (k != Kind3::W) {
            return ReducibilityWitness{a, ILO::identity(a), 0.0, k};
        }
    }
    // both halves W: normalize them so the pencil coefficients are O(1)
    Amplitudes p = h[0];
    Amplitudes q = h[1];
    for (auto *v : {&p, &q}) {
        const double nrm = std::sqrt(norm2(*v));
        for (auto &x : *v) {
            x /= nrm;
        }
    }
    const Poly det = pencil_hyperdeterminant(p, q);
    if (poly_max_abs(det) > kPencilTol) {
        double r = 0.0;
        for (const Complex z : poly_roots(det)) {
            r = std::max(r, std::abs(z));
        }
        // halves become P + l1 Q and P - l1 Q, both off the roots, hence GHZ;
        // s converts a lambda for (p, q) into one for the raw halves
        const double l1 = 1.0 + r;
        const double s = std::sqrt(norm2(h[0])) / std::sqrt(norm2(h[1]));
        const Mat2 m{1.0, l1 * s, 1.0, -l1 * s};
        ReducibilityWitness w{a, ILO(a, m), l1 * s, Kind3::GHZ};
        return w;
    }
    const auto drops = rank_drop_lambdas(p, q);
    if (!drops.empty()) {
        const double s = std::sqrt(norm2(h[0])) / std::sqrt(norm2(h[1]));
        const Complex lam = drops.front() * s;
        ReducibilityWitness w{a, ILO(a, {1.0, lam, 0.0, 1.0}), lam, Kind3::Biseparable};
        w.escaped_class = execute_witness(state, w)[0];
        return w;
    }
    return std::nullopt;
}

[[nodiscard]] inline IrreducibilityVerdict is_irreducible(const PureState &state) {
    if (state.n_qubits() != 4) {
        throw DimensionMismatch("irreducibility is defined for four-qubit states");
    }
    IrreducibilityVerdict out;
    for (int a = 1; a <= 4; ++a) {
        if (auto w = reducibility_at(state, a)) {
            out.witness = w;
            return out;
        }
    }
    const auto nf = normal_form(state.span(), 1);
    out.family = check_family(nf.nf);
    if (out.family == Family::Neither) {
        throw Degenerate("pencil test reports irreducible but the normal form fits neither family");
    }
    out.irreducible = true;
    return out;
}

} // namespace treesize
