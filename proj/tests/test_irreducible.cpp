#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "treesize/irreducible.hpp"

using namespace treesize;

namespace {

PureState d2() { return states::dicke2(); }

void expect_witness_escapes(const PureState &s, const IrreducibilityVerdict &v) {
    ASSERT_FALSE(v.irreducible);
    ASSERT_TRUE(v.witness.has_value());
    const auto k = execute_witness(s, *v.witness);
    EXPECT_TRUE(k[0] != Kind3::W || k[1] != Kind3::W);
}

} // namespace

TEST(AbcdSplit, Psi4AtQubitOne) {
    const auto f = abcd_split(states::psi4(), 1);
    ASSERT_TRUE(f.phi0 && f.phi1);
    EXPECT_TRUE(same_state(*f.phi0, states::w0()));
    EXPECT_TRUE(same_state(*f.phi1, states::w1()));
    EXPECT_NEAR(std::abs(f.weights[0]), 1.0 / std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(std::abs(f.weights[1]), 1.0 / std::sqrt(2.0), 1e-12);
}

TEST(AbcdSplit, ProductHasZeroHalf) {
    for (int a = 1; a <= 4; ++a) {
        const auto f = abcd_split(states::product4(), a);
        ASSERT_TRUE(f.phi0);
        EXPECT_FALSE(f.phi1);
        EXPECT_TRUE(same_state(*f.phi0, states::product3()));
        EXPECT_EQ(f.weights[1], Complex(0.0));
    }
}

TEST(AbcdSplit, DickeHalves) {
    const auto f = abcd_split(d2(), 1);
    EXPECT_TRUE(same_state(*f.phi0, PureState::normalize(states::sum_of_kets({{1, "011"}, {1, "101"}, {1, "110"}}))));
    EXPECT_TRUE(same_state(*f.phi1, states::w3()));
}

TEST(AbcdSplit, ReassemblyProperty) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto s = random_state(4, seed);
        const int a = 1 + static_cast<int>(seed % 4);
        const auto f = abcd_split(s, a);
        Amplitudes h0(8), h1(8);
        for (std::size_t i = 0; i < 8; ++i) {
            h0[i] = f.weights[0] * (*f.phi0)[i];
            h1[i] = f.weights[1] * (*f.phi1)[i];
        }
        const auto back = join_halves(h0, h1, a);
        for (std::size_t i = 0; i < 16; ++i) {
            ASSERT_NEAR(std::abs(back[i] - s[i]), 0.0, 1e-12);
        }
    }
}

TEST(CheckFamily, Examples) {
    WNormalForm a;
    a.c[3] = 4.0;
    a.c[5] = 1.0;
    a.c[6] = 1.0;
    EXPECT_EQ(check_family(a), Family::Case1);
    EXPECT_EQ(case1_sign(a), 1);

    const auto b = family_normal_form(Family::Case2, {.c3 = 2.0, .c5 = 4.0});
    EXPECT_EQ(b(4), Complex(1.0));
    EXPECT_EQ(b(6), Complex(4.0));
    EXPECT_EQ(b(7), Complex(1.0));
    EXPECT_EQ(check_family(b), Family::Case2);

    WNormalForm c;
    c.c[3] = 1.0;
    c.c[5] = 1.0;
    c.c[6] = 1.0;
    EXPECT_EQ(check_family(c), Family::Neither);
}

TEST(BuildFamily, Case1Explicit) {
    const auto s = build_family_state(Family::Case1, {.c6 = 1.0, .c7 = 1.0, .sign = 1});
    const auto want = PureState::normalize(
        states::sum_of_kets({{4, "0011"}, {1, "0101"}, {1, "0110"}, {1, "1001"}, {1, "1010"}, {1, "1100"}}));
    EXPECT_TRUE(same_state(s, want));
    const auto v = is_irreducible(s);
    EXPECT_TRUE(v.irreducible);
    EXPECT_EQ(v.family, Family::Case1);
}

TEST(BuildFamily, Case2Example) {
    const auto v = is_irreducible(build_family_state(Family::Case2, {.c3 = 2.0, .c5 = 4.0}));
    EXPECT_TRUE(v.irreducible);
}

TEST(BuildFamily, BadParams) {
    EXPECT_THROW((void)build_family_state(Family::Case1, {.c6 = 0.0, .c7 = 1.0}), BadParams);
    EXPECT_THROW((void)build_family_state(Family::Case1, {.c6 = 1.0, .c7 = 1.0, .sign = -1}), BadParams);
    EXPECT_THROW((void)build_family_state(Family::Case2, {.c3 = 2.0, .c5 = 2.0}), BadParams);
    EXPECT_THROW((void)build_family_state(Family::Case2, {.c3 = 0.0, .c5 = 2.0}), BadParams);
    EXPECT_THROW((void)build_family_state(Family::Neither, {}), BadParams);
}

TEST(BuildFamily, RandomParamsAreIrreducible) {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 100; ++i) {
        const FamilyParams p1{.c6 = detail::gaussian_complex(rng), .c7 = detail::gaussian_complex(rng),
                              .sign = i % 2 == 0 ? 1 : -1};
        const auto v1 = is_irreducible(build_family_state(Family::Case1, p1));
        EXPECT_TRUE(v1.irreducible) << i;
        EXPECT_EQ(v1.family, Family::Case1) << i;

        const FamilyParams p2{.c3 = detail::gaussian_complex(rng), .c5 = detail::gaussian_complex(rng)};
        const auto v2 = is_irreducible(build_family_state(Family::Case2, p2));
        EXPECT_TRUE(v2.irreducible) << i;
    }
}

TEST(IsIrreducible, Psi4) {
    const auto v = is_irreducible(states::psi4());
    EXPECT_TRUE(v.irreducible);
    EXPECT_FALSE(v.witness);
    EXPECT_NE(v.family, Family::NotApplicable);
}

TEST(IsIrreducible, Psi4AllPermutations) {
    std::array<int, 4> perm{1, 2, 3, 4};
    int count = 0;
    do {
        const auto v = is_irreducible(permute_qubits(states::psi4(), perm));
        EXPECT_TRUE(v.irreducible);
        ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    EXPECT_EQ(count, 24);
}

TEST(IsIrreducible, SloccInvariant) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto ops = random_ilos(4, 1000 + seed);
        const auto v = is_irreducible(apply_ilos(states::psi4(), ops));
        EXPECT_TRUE(v.irreducible) << seed;
    }
}

TEST(IsIrreducible, DickeEscapesToGhz) {
    const auto v = is_irreducible(d2());
    expect_witness_escapes(d2(), v);
    const auto k = execute_witness(d2(), *v.witness);
    EXPECT_EQ(k[0], Kind3::GHZ);
    EXPECT_EQ(k[1], Kind3::GHZ);
    EXPECT_EQ(v.witness->escaped_class, Kind3::GHZ);
    EXPECT_EQ(v.family, Family::NotApplicable);

    // the hand-picked operator works too
    const ReducibilityWitness hand{1, ILO(1, {1.0, 1.0, 1.0, -1.0}), 1.0, Kind3::GHZ};
    const auto kh = execute_witness(d2(), hand);
    EXPECT_EQ(kh[0], Kind3::GHZ);
    EXPECT_EQ(kh[1], Kind3::GHZ);
}

TEST(IsIrreducible, Ghz4UsesIdentityWitness) {
    const auto v = is_irreducible(states::ghz4());
    expect_witness_escapes(states::ghz4(), v);
    EXPECT_EQ(v.witness->partition_qubit, 1);
    EXPECT_EQ(v.witness->ilo.matrix().v, Mat2::identity().v);
    EXPECT_EQ(v.witness->escaped_class, Kind3::Product);
}

TEST(IsIrreducible, RandomStatesAreReducibleWithValidWitness) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto s = random_state(4, seed);
        const auto v = is_irreducible(s);
        expect_witness_escapes(s, v);
    }
}

TEST(IsIrreducible, WTimesQubitIsReducible) {
    // |W>|0>: halves at qubit 4 are W and zero
    const auto s = PureState::normalize(kron(states::w3_raw(), basis_ket("0")));
    const auto v = is_irreducible(s);
    expect_witness_escapes(s, v);
}

TEST(IsIrreducible, BiseparableEscape) {
    // |0>|W> + |1>(|W> + |001>): every pencil member is W or biseparable
    const auto w = states::w3_raw();
    Amplitudes h1 = w;
    h1[1] += 1.0;
    const auto s = PureState::normalize(join_halves(w, h1, 1));
    const auto v = is_irreducible(s);
    expect_witness_escapes(s, v);
}

TEST(IsIrreducible, RejectsWrongSize) {
    EXPECT_THROW((void)is_irreducible(states::w3()), DimensionMismatch);
}

TEST(QuarticRoots, SelfConsistent) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto phi = apply_ilos(states::w3(), random_ilos(3, seed));
        const auto roots = quartic_lambda_roots(phi);
        EXPECT_LE(roots.size(), 4U);
        double rmax = 0.0;
        for (const Complex lam : roots) {
            rmax = std::max(rmax, std::abs(lam));
            Amplitudes v(8);
            for (std::size_t i = 0; i < 8; ++i) {
                v[i] = phi[i] + lam * states::ghz3()[i];
            }
            EXPECT_NEAR(std::abs(hyperdeterminant(v)), 0.0, 1e-8 * (1.0 + std::pow(std::abs(lam), 4)));
        }
        const double star = 1.0 + rmax;
        Amplitudes v(8);
        for (std::size_t i = 0; i < 8; ++i) {
            v[i] = phi[i] + star * states::ghz3()[i];
        }
        EXPECT_EQ(classify3(v).kind, Kind3::GHZ);
    }
}

TEST(QuarticRoots, DegenerateWhenPairIsInPencilOfW) {
    EXPECT_THROW((void)quartic_lambda_roots(states::w3(), states::w3()), Degenerate);
}

TEST(NormalForm, ReproducesState) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto s = apply_ilos(states::psi4(), random_ilos(4, seed));
        for (int a = 1; a <= 4; ++a) {
            const auto r = normal_form(s.span(), a);
            Amplitudes v = normal_form_state(r.nf);
            v = apply_local(v, 1, r.la);
            for (int k = 0; k < 3; ++k) {
                v = apply_local(v, k + 2, r.frame[k]);
            }
            // v is in local order (a, others ascending)
            const auto rest = others4(a);
            std::array<int, 4> perm{};
            // output qubit q takes local slot: a -> 1, rest[k] -> k+2
            perm[a - 1] = 1;
            for (int k = 0; k < 3; ++k) {
                perm[rest[k] - 1] = k + 2;
            }
            const auto back = permute_qubits(v, perm);
            for (std::size_t i = 0; i < 16; ++i) {
                ASSERT_NEAR(std::abs(back[i] - s[i]), 0.0, 1e-9) << seed << " " << a;
            }
        }
    }
}
