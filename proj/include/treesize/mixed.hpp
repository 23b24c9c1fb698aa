#pragma once

/**
 * @file
 * Mixed-state tree size for three qubits: the generalized Werner family
 * p |GHZ><GHZ| + (1-p) I/8, and upper bounds from explicit ensembles.
 */

#include "approx.hpp"

namespace treesize {

/// Werner parameter above which the state leaves the W class (literature value).
inline constexpr double kWernerPW = 0.6955427;
inline constexpr double kWernerBoundaryTol = 1e-9;
inline constexpr std::array<double, 3> kWernerBreakpoints{1.0 / 5.0, 3.0 / 7.0, kWernerPW};

[[nodiscard]] inline DensityMatrix werner_state(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw BadParams("Werner parameter p must lie in [0, 1]");
    }
    const auto ghz = states::ghz3();
    std::vector<Complex> m(64);
    for (std::size_t i = 0; i < 8; ++i) {
        for (std::size_t j = 0; j < 8; ++j) {
            m[i * 8 + j] = p * ghz[i] * std::conj(ghz[j]) + (i == j ? (1.0 - p) / 8.0 : 0.0);
        }
    }
    return {3, std::move(m)};
}

struct WernerTs {
    int ts = 3;
    /// One of "S", "B\\S", "W\\B", "GHZ\\W".
    std::string cls;
    /// True when p is within kWernerBoundaryTol of a breakpoint.
    bool boundary = false;
};

/// Piecewise-constant tree size; each breakpoint belongs to the class below
/// it. Not monotone in p: 8 on W\B, then 6 on GHZ\W.
[[nodiscard]] inline WernerTs werner_ts(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw BadParams("Werner parameter p must lie in [0, 1]");
    }
    WernerTs out;
    if (p <= kWernerBreakpoints[0]) {
        out = {3, "S", false};
    } else if (p <= kWernerBreakpoints[1]) {
        out = {5, "B\\S", false};
    } else if (p <= kWernerBreakpoints[2]) {
        out = {8, "W\\B", false};
    } else {
        out = {6, "GHZ\\W", false};
    }
    for (const double b : kWernerBreakpoints) {
        out.boundary = out.boundary || std::abs(p - b) < kWernerBoundaryTol;
    }
    return out;
}

/// max over components of ts3: an upper bound on the tree size of the mixture.
[[nodiscard]] inline int mixed_ts_from_decomposition(const std::vector<std::pair<double, PureState>> &ensemble) {
    if (ensemble.empty()) {
        throw BadEnsemble("ensemble is empty");
    }
    double total = 0.0;
    int out = 0;
    for (const auto &[w, s] : ensemble) {
        if (!(w > 0.0)) {
            throw BadEnsemble("ensemble weights must be positive");
        }
        if (s.n_qubits() != 3) {
            throw BadEnsemble("ensemble states must have three qubits");
        }
        total += w;
        out = std::max(out, ts3(s).upper);
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw BadEnsemble("ensemble weights must sum to 1");
    }
    return out;
}

} // namespace treesize
