#pragma once

/**
 * @file
 * Amplitude-vector pure states of up to four qubits, density matrices,
 * invertible local operators and coefficient matrices.
 *
 * Basis indices are big-endian: qubit 1 is the most significant bit, so the
 * amplitude of |q1 q2 ... qn> sits at index q1*2^(n-1) + ... + qn.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "mat2.hpp"

namespace treesize {

inline constexpr int kMaxQubits = 4;
inline constexpr double kZeroThreshold = 1e-14;
/// States are rays: two states are "equal" when their squared overlap is
/// at least 1 - kStateEqualityTol.
inline constexpr double kStateEqualityTol = 1e-10;

using Amplitudes = std::vector<Complex>;

/// Bit value of 1-based `qubit` in basis index `b` of an `n`-qubit register.
[[nodiscard]] constexpr int qubit_bit(std::size_t b, int n, int qubit) {
    return static_cast<int>((b >> (n - qubit)) & 1U);
}

[[nodiscard]] inline double norm2(std::span<const Complex> v) {
    double s = 0.0;
    for (const auto &x : v) {
        s += std::norm(x);
    }
    return s;
}

/// <a|b>, conjugating the first argument.
[[nodiscard]] inline Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.size() != b.size()) {
        throw DimensionMismatch("inner product of vectors with different lengths");
    }
    Complex s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += std::conj(a[i]) * b[i];
    }
    return s;
}

[[nodiscard]] inline int qubits_for_length(std::size_t len) {
    for (int n = 1; n <= kMaxQubits; ++n) {
        if (len == (std::size_t{1} << n)) {
            return n;
        }
    }
    throw DimensionMismatch("amplitude vector length " + std::to_string(len) +
                            " is not 2^n for n in 1..4");
}

/// A normalized pure state of 1..4 qubits.
class PureState {
  public:
    /// Normalizes `amps`; throws ZeroVector when every |amp| <= 1e-14.
    static PureState normalize(std::span<const Complex> amps) {
        const int n = qubits_for_length(amps.size());
        const bool any = std::any_of(amps.begin(), amps.end(), [](const Complex &c) {
            return std::abs(c) > kZeroThreshold;
        });
        if (!any) {
            throw ZeroVector();
        }
        for (const auto &c : amps) {
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
                throw InputError("non-finite amplitude");
            }
        }
        const double nrm = std::sqrt(norm2(amps));
        Amplitudes out(amps.begin(), amps.end());
        for (auto &c : out) {
            c /= nrm;
        }
        return PureState(n, std::move(out));
    }
    static PureState normalize(std::initializer_list<Complex> amps) {
        const Amplitudes v(amps);
        return normalize(std::span<const Complex>(v));
    }

    [[nodiscard]] int n_qubits() const noexcept { return n_; }
    [[nodiscard]] std::size_t dim() const noexcept { return amps_.size(); }
    [[nodiscard]] const Amplitudes &amps() const noexcept { return amps_; }
    [[nodiscard]] Complex operator[](std::size_t i) const { return amps_[i]; }
    [[nodiscard]] std::span<const Complex> span() const noexcept { return amps_; }

  private:
    PureState(int n, Amplitudes a) : n_(n), amps_(std::move(a)) {}
    int n_;
    Amplitudes amps_;
};

/// Squared overlap |<a|b>|^2.
[[nodiscard]] inline double overlap2(const PureState &a, const PureState &b) {
    if (a.n_qubits() != b.n_qubits()) {
        throw DimensionMismatch("overlap of states with different qubit counts");
    }
    return std::min(1.0, std::norm(inner(a.span(), b.span())));
}

/// Equality of rays.
[[nodiscard]] inline bool same_state(const PureState &a, const PureState &b,
                                     double tol = kStateEqualityTol) {
    return a.n_qubits() == b.n_qubits() && overlap2(a, b) >= 1.0 - tol;
}

/// Invertible local operator acting on one 1-based qubit.
class ILO {
  public:
    static constexpr double kMinDet = 1e-12;

    ILO(int qubit, const Mat2 &m) : qubit_(qubit), m_(m) {
        if (qubit < 1) {
            throw BadPartition("ILO qubit index must be >= 1");
        }
        if (!(std::abs(m.det()) > kMinDet)) {
            throw BadParams("ILO matrix is not invertible (|det| <= 1e-12)");
        }
    }
    static ILO identity(int qubit) { return {qubit, Mat2::identity()}; }

    [[nodiscard]] int qubit() const noexcept { return qubit_; }
    [[nodiscard]] const Mat2 &matrix() const noexcept { return m_; }
    [[nodiscard]] ILO inverse() const { return {qubit_, m_.inverse()}; }

  private:
    int qubit_;
    Mat2 m_;
};

/// Applies `m` to 1-based `qubit` of a raw amplitude vector, no normalization.
[[nodiscard]] inline Amplitudes apply_local(std::span<const Complex> amps, int qubit,
                                            const Mat2 &m) {
    const int n = qubits_for_length(amps.size());
    if (qubit < 1 || qubit > n) {
        throw BadPartition("qubit " + std::to_string(qubit) + " outside 1.." +
                           std::to_string(n));
    }
    const std::size_t mask = std::size_t{1} << (n - qubit);
    Amplitudes out(amps.begin(), amps.end());
    for (std::size_t b = 0; b < amps.size(); ++b) {
        if ((b & mask) != 0U) {
            continue;
        }
        const Complex a0 = amps[b];
        const Complex a1 = amps[b | mask];
        out[b] = m(0, 0) * a0 + m(0, 1) * a1;
        out[b | mask] = m(1, 0) * a0 + m(1, 1) * a1;
    }
    return out;
}

/// op applied to the state, renormalized.
[[nodiscard]] inline PureState apply_ilo(const PureState &state, const ILO &op) {
    if (op.qubit() > state.n_qubits()) {
        throw BadPartition("ILO qubit outside the state's register");
    }
    return PureState::normalize(apply_local(state.span(), op.qubit(), op.matrix()));
}

[[nodiscard]] inline PureState apply_ilos(const PureState &state, std::span<const ILO> ops) {
    Amplitudes v = state.amps();
    for (const auto &op : ops) {
        if (op.qubit() > state.n_qubits()) {
            throw BadPartition("ILO qubit outside the state's register");
        }
        v = apply_local(v, op.qubit(), op.matrix());
    }
    return PureState::normalize(v);
}

/// Reorders qubits: qubit `perm[k]` of the input becomes qubit k+1 of the output.
[[nodiscard]] inline Amplitudes permute_qubits(std::span<const Complex> amps,
                                               std::span<const int> perm) {
    const int n = qubits_for_length(amps.size());
    if (static_cast<int>(perm.size()) != n) {
        throw DimensionMismatch("permutation length differs from qubit count");
    }
    Amplitudes out(amps.size());
    for (std::size_t ob = 0; ob < amps.size(); ++ob) {
        std::size_t ib = 0;
        for (int k = 0; k < n; ++k) {
            const int bit = qubit_bit(ob, n, k + 1);
            ib |= static_cast<std::size_t>(bit) << (n - perm[k]);
        }
        out[ob] = amps[ib];
    }
    return out;
}

[[nodiscard]] inline PureState permute_qubits(const PureState &s, std::span<const int> perm) {
    return PureState::normalize(permute_qubits(s.span(), perm));
}

/// Tensor product a (x) b with a on the leading qubits.
[[nodiscard]] inline Amplitudes kron(std::span<const Complex> a, std::span<const Complex> b) {
    Amplitudes out(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            out[i * b.size() + j] = a[i] * b[j];
        }
    }
    return out;
}

/// Amplitude vector of the basis ket given as a bit string, e.g. "0110".
[[nodiscard]] inline Amplitudes basis_ket(const std::string &bits) {
    const std::size_t n = bits.size();
    Amplitudes v(std::size_t{1} << n, 0.0);
    std::size_t idx = 0;
    for (char c : bits) {
        idx = (idx << 1U) | (c == '1' ? 1U : 0U);
    }
    v[idx] = 1.0;
    return v;
}

// ---------------------------------------------------------------------------
// Coefficient matrices

/// The 2x2 matrices C0, C1 of a three-qubit state split by one qubit's value.
struct CoeffMatrixPair {
    int partition_qubit = 1;
    Mat2 c0;
    Mat2 c1;
};

/// The two qubits other than `q` in ascending order.
[[nodiscard]] inline std::array<int, 2> others3(int q) {
    switch (q) {
    case 1:
        return {2, 3};
    case 2:
        return {1, 3};
    case 3:
        return {1, 2};
    default:
        throw BadPartition("partition qubit must be 1, 2 or 3");
    }
}

[[nodiscard]] inline CoeffMatrixPair coeff_matrices(std::span<const Complex> amps,
                                                    int partition_qubit) {
    if (amps.size() != 8) {
        throw DimensionMismatch("coefficient matrices need a three-qubit state");
    }
    const auto [r, c] = others3(partition_qubit);
    CoeffMatrixPair out;
    out.partition_qubit = partition_qubit;
    for (std::size_t b = 0; b < 8; ++b) {
        const int p = qubit_bit(b, 3, partition_qubit);
        const int row = qubit_bit(b, 3, r);
        const int col = qubit_bit(b, 3, c);
        (p == 0 ? out.c0 : out.c1)(row, col) = amps[b];
    }
    return out;
}

[[nodiscard]] inline CoeffMatrixPair coeff_matrices(const PureState &s, int partition_qubit) {
    if (s.n_qubits() != 3) {
        throw DimensionMismatch("coefficient matrices need a three-qubit state");
    }
    return coeff_matrices(s.span(), partition_qubit);
}

/// Inverse of coeff_matrices.
[[nodiscard]] inline Amplitudes reassemble(const CoeffMatrixPair &cm) {
    const auto [r, c] = others3(cm.partition_qubit);
    Amplitudes out(8);
    for (std::size_t b = 0; b < 8; ++b) {
        const int p = qubit_bit(b, 3, cm.partition_qubit);
        out[b] = (p == 0 ? cm.c0 : cm.c1)(qubit_bit(b, 3, r), qubit_bit(b, 3, c));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Density matrices

class DensityMatrix {
  public:
    static constexpr double kTol = 1e-12;
    static constexpr double kEigTol = 1e-10;

    /// Row-major 2^n x 2^n matrix. Throws InvalidDensity unless Hermitian,
    /// unit trace and positive semidefinite.
    DensityMatrix(int n_qubits, std::vector<Complex> mat);

    static DensityMatrix pure(const PureState &s) {
        const std::size_t d = s.dim();
        std::vector<Complex> m(d * d);
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                m[i * d + j] = s[i] * std::conj(s[j]);
            }
        }
        return {s.n_qubits(), std::move(m)};
    }
    static DensityMatrix maximally_mixed(int n) {
        const std::size_t d = std::size_t{1} << n;
        std::vector<Complex> m(d * d, 0.0);
        for (std::size_t i = 0; i < d; ++i) {
            m[i * d + i] = 1.0 / static_cast<double>(d);
        }
        return {n, std::move(m)};
    }

    [[nodiscard]] int n_qubits() const noexcept { return n_; }
    [[nodiscard]] std::size_t dim() const noexcept { return std::size_t{1} << n_; }
    [[nodiscard]] Complex operator()(std::size_t r, std::size_t c) const {
        return mat_[r * dim() + c];
    }
    [[nodiscard]] const std::vector<Complex> &data() const noexcept { return mat_; }
    [[nodiscard]] Complex trace() const {
        Complex t = 0.0;
        for (std::size_t i = 0; i < dim(); ++i) {
            t += (*this)(i, i);
        }
        return t;
    }
    /// <psi|rho|psi>
    [[nodiscard]] double expectation(const PureState &psi) const {
        if (psi.dim() != dim()) {
            throw DimensionMismatch("state and density matrix sizes differ");
        }
        Complex s = 0.0;
        for (std::size_t i = 0; i < dim(); ++i) {
            for (std::size_t j = 0; j < dim(); ++j) {
                s += std::conj(psi[i]) * (*this)(i, j) * psi[j];
            }
        }
        return s.real();
    }
    /// Eigenvalues in ascending order.
    [[nodiscard]] std::vector<double> eigenvalues() const;

  private:
    int n_;
    std::vector<Complex> mat_;
};

// ---------------------------------------------------------------------------
// Random generation

namespace detail {
inline Complex gaussian_complex(std::mt19937_64 &rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    const double re = nd(rng);
    const double im = nd(rng);
    return {re, im};
}
} // namespace detail

/// Haar-like random state: complex Gaussian amplitudes, normalized.
[[nodiscard]] inline PureState random_state(int n, std::uint64_t seed) {
    if (n < 1 || n > kMaxQubits) {
        throw Unsupported("random_state supports 1..4 qubits");
    }
    std::mt19937_64 rng(seed);
    Amplitudes v(std::size_t{1} << n);
    for (auto &c : v) {
        c = detail::gaussian_complex(rng);
    }
    return PureState::normalize(v);
}

/// Random ILO with complex Gaussian entries, resampled until |det| > 0.1.
[[nodiscard]] inline ILO random_ilo(int qubit, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (;;) {
        Mat2 m;
        for (auto &c : m.v) {
            c = detail::gaussian_complex(rng);
        }
        if (std::abs(m.det()) > 0.1) {
            return {qubit, m};
        }
    }
}

/// One random ILO per qubit 1..n; the k-th draws from a seed derived from `seed`.
[[nodiscard]] inline std::vector<ILO> random_ilos(int n, std::uint64_t seed) {
    std::vector<ILO> out;
    std::vector<std::uint64_t> seeds(static_cast<std::size_t>(n));
    std::mt19937_64 mix(seed ^ 0x9e3779b97f4a7c15ULL);
    for (auto &s : seeds) {
        s = mix();
    }
    for (int q = 1; q <= n; ++q) {
        out.push_back(random_ilo(q, seeds[static_cast<std::size_t>(q - 1)]));
    }
    return out;
}

} // namespace treesize

#include "detail/density_impl.hpp"
