#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "treesize/states.hpp"

using namespace treesize;

namespace {

void expect_mat_near(const Mat2 &m, const Mat2 &ref, double tol = 1e-14) {
    for (int i = 0; i < 4; ++i) {
        EXPECT_NEAR(std::abs(m.v[i] - ref.v[i]), 0.0, tol) << "entry " << i;
    }
}

} // namespace

TEST(Normalize, AlreadyNormalized) {
    const auto s = PureState::normalize({1.0, 0.0, 0.0, 0.0});
    EXPECT_EQ(s.n_qubits(), 2);
    EXPECT_EQ(s[0], Complex(1.0));
}

TEST(Normalize, BellDirection) {
    const auto s = PureState::normalize({1.0, 0.0, 0.0, 1.0});
    EXPECT_NEAR(s[0].real(), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(s[3].real(), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(Normalize, Scaling) {
    const auto s = PureState::normalize({2.0, 0, 0, 0, 0, 0, 0, 0});
    EXPECT_EQ(s.n_qubits(), 3);
    EXPECT_EQ(s[0], Complex(1.0));
}

TEST(Normalize, ZeroVectorThrows) {
    EXPECT_THROW((void)PureState::normalize({1e-15, 0.0}), ZeroVector);
    EXPECT_THROW((void)PureState::normalize({0.0, 0.0, 0.0}), DimensionMismatch);
}

TEST(CoeffMatrices, WAtQubit1) {
    const auto cm = coeff_matrices(states::w3(), 1);
    const double k = 1.0 / std::sqrt(3.0);
    expect_mat_near(cm.c0, {0.0, k, k, 0.0});
    expect_mat_near(cm.c1, {k, 0.0, 0.0, 0.0});
}

TEST(CoeffMatrices, ProductAtQubit1) {
    const auto cm = coeff_matrices(states::product3(), 1);
    expect_mat_near(cm.c0, {1.0, 0.0, 0.0, 0.0});
    expect_mat_near(cm.c1, Mat2::zero());
}

TEST(CoeffMatrices, GhzAtQubit2) {
    const auto cm = coeff_matrices(states::ghz3(), 2);
    const double k = 1.0 / std::sqrt(2.0);
    expect_mat_near(cm.c0, {k, 0.0, 0.0, 0.0});
    expect_mat_near(cm.c1, {0.0, 0.0, 0.0, k});
}

TEST(CoeffMatrices, BadPartition) {
    EXPECT_THROW((void)coeff_matrices(states::w3(), 4), BadPartition);
    EXPECT_THROW((void)coeff_matrices(states::w3(), 0), BadPartition);
}

TEST(CoeffMatrices, RoundTrip) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto s = random_state(3, seed);
        for (int q = 1; q <= 3; ++q) {
            const auto back = reassemble(coeff_matrices(s, q));
            for (std::size_t i = 0; i < 8; ++i) {
                EXPECT_EQ(back[i], s[i]);
            }
        }
    }
}

TEST(ApplyIlo, Identity) {
    const auto s = random_state(4, 7);
    const auto t = apply_ilo(s, ILO::identity(3));
    EXPECT_TRUE(same_state(s, t, 1e-14));
}

TEST(ApplyIlo, BitFlipSwapsHalves) {
    const auto s = random_state(4, 3);
    const auto t = apply_ilo(s, ILO(1, {0.0, 1.0, 1.0, 0.0}));
    for (std::size_t b = 0; b < 8; ++b) {
        EXPECT_NEAR(std::abs(t[b] - s[b + 8]), 0.0, 1e-15);
        EXPECT_NEAR(std::abs(t[b + 8] - s[b]), 0.0, 1e-15);
    }
}

TEST(ApplyIlo, QubitOutOfRange) {
    EXPECT_THROW((void)apply_ilo(states::w3(), ILO::identity(4)), BadPartition);
    EXPECT_THROW((void)ILO(0, Mat2::identity()), BadPartition);
    EXPECT_THROW((void)ILO(1, Mat2::zero()), BadParams);
}

TEST(ApplyIlo, InverseRoundTrip) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto s = random_state(4, seed);
        const auto op = random_ilo(1 + static_cast<int>(seed % 4), seed + 1000);
        const auto back = apply_ilo(apply_ilo(s, op), op.inverse());
        EXPECT_GE(overlap2(s, back), 1.0 - 1e-12);
    }
}

TEST(Overlap, Examples) {
    const auto w = states::w3();
    EXPECT_DOUBLE_EQ(overlap2(w, w), 1.0);
    // |B> = (|001>+|010>)/sqrt2 is the closest biseparable state
    EXPECT_NEAR(overlap2(w, states::biseparable3()), 2.0 / 3.0, 1e-15);
    EXPECT_EQ(overlap2(PureState::normalize(basis_ket("000")), PureState::normalize(basis_ket("111"))),
              0.0);
    EXPECT_THROW((void)overlap2(w, states::bell()), DimensionMismatch);
}

TEST(Overlap, SymmetricAndPhaseInvariant) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto a = random_state(3, seed);
        const auto b = random_state(3, seed + 5000);
        Amplitudes ph(a.amps());
        const Complex phase = std::polar(1.0, 0.37 * static_cast<double>(seed));
        for (auto &c : ph) {
            c *= phase;
        }
        EXPECT_NEAR(overlap2(a, b), overlap2(b, a), 1e-15);
        EXPECT_NEAR(overlap2(PureState::normalize(ph), b), overlap2(a, b), 1e-14);
    }
}

TEST(Random, Deterministic) {
    const auto a = random_state(4, 42);
    const auto b = random_state(4, 42);
    EXPECT_EQ(a.amps(), b.amps());
    EXPECT_NE(a.amps(), random_state(4, 43).amps());
    const auto u = random_ilo(2, 9);
    const auto v = random_ilo(2, 9);
    EXPECT_EQ(u.matrix().v, v.matrix().v);
}

TEST(Random, IloConditioned) {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        EXPECT_GT(std::abs(random_ilo(1, seed).matrix().det()), 0.1);
    }
}

TEST(Permute, MovesQubits) {
    // |0110> with perm {2,1,3,4}: output qubit 1 = input qubit 2 -> |1010>
    const auto s = PureState::normalize(basis_ket("0110"));
    const std::array<int, 4> perm{2, 1, 3, 4};
    const auto t = permute_qubits(s, perm);
    EXPECT_EQ(t[0b1010], Complex(1.0));
}

TEST(Density, PureAndMixed) {
    const auto psi = states::psi4();
    const auto rho = DensityMatrix::pure(psi);
    EXPECT_NEAR(rho.expectation(psi), 1.0, 1e-14);
    const auto mm = DensityMatrix::maximally_mixed(4);
    EXPECT_NEAR(mm.expectation(psi), 1.0 / 16.0, 1e-15);
    const auto ev = rho.eigenvalues();
    EXPECT_NEAR(*std::max_element(ev.begin(), ev.end()), 1.0, 1e-12);
}

TEST(Density, Validation) {
    std::vector<Complex> m(4, 0.0);
    m[0] = 1.0;
    m[1] = Complex(0.0, 0.5); // not Hermitian
    EXPECT_THROW((DensityMatrix(1, m)), InvalidDensity);
    std::vector<Complex> neg{1.5, 0.0, 0.0, -0.5};
    EXPECT_THROW((DensityMatrix(1, neg)), InvalidDensity);
    std::vector<Complex> tr{0.7, 0.0, 0.0, 0.7};
    EXPECT_THROW((DensityMatrix(1, tr)), InvalidDensity);
}
