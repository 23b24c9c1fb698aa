#include <gtest/gtest.h>

#include <Eigen/Dense>

#include "treesize/approx.hpp"
#include "treesize/mixed.hpp"

using namespace treesize;

namespace {

// max over unit (a, b) of sigma_max(L(a, b))^2 / 6, where [u; v] = L c.
double grid_max(bool first) {
    double best = 0.0;
    const int steps = 400;
    for (int i = 0; i <= steps; ++i) {
        const double th = std::numbers::pi / 2.0 * i / steps;
        for (int j = 0; j < steps; ++j) {
            const Complex a = std::cos(th);
            const Complex b = std::polar(std::sin(th), 2.0 * std::numbers::pi * j / steps);
            Eigen::Matrix<Complex, 2, 4> l;
            if (first) {
                l << 0.0, b, b, -2.0 * a, -2.0 * b, a, a, 0.0;
            } else {
                l << 0.0, -2.0 * b, b, a, b, a, -2.0 * a, 0.0;
            }
            const Eigen::JacobiSVD<Eigen::Matrix<Complex, 2, 4>> svd(l);
            best = std::max(best, svd.singularValues()(0) * svd.singularValues()(0) / 6.0);
        }
    }
    return best;
}

std::vector<TreeShape> family(int n, int max_leaves, const std::string &name) {
    std::vector<TreeShape> out;
    for (auto &s : enumerate_shapes(n, max_leaves)) {
        if (shape_family(s) == name) {
            out.push_back(std::move(s));
        }
    }
    return out;
}

} // namespace

TEST(FBounds, GridOracle) {
    EXPECT_NEAR(grid_max(true), 2.0 / 3.0, 1e-4);
    EXPECT_NEAR(grid_max(false), 5.0 / 6.0, 1e-4);
}

TEST(FBounds, GradientMatchesFiniteDifference) {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 20; ++t) {
        std::vector<Complex> z(6);
        for (auto &x : z) {
            x = detail::gaussian_complex(rng);
        }
        for (const auto fn : {&f_value, &f1_value}) {
            std::vector<Complex> g(6);
            (void)fn(z, g);
            for (std::size_t k = 0; k < 6; ++k) {
                for (int part = 0; part < 2; ++part) {
                    auto zp = z;
                    auto zm = z;
                    const Complex d = part == 0 ? Complex(1e-6, 0) : Complex(0, 1e-6);
                    zp[k] += d;
                    zm[k] -= d;
                    const double fd = (fn(zp, {}) - fn(zm, {})) / 2e-6;
                    const double an = part == 0 ? 2.0 * g[k].real() : -2.0 * g[k].imag();
                    EXPECT_NEAR(an, fd, 1e-6);
                }
            }
        }
    }
}

TEST(FBounds, Values) {
    const auto b = f_bounds();
    EXPECT_NEAR(b.f_max, 2.0 / 3.0, 1e-6);
    EXPECT_NEAR(b.f1_max, 5.0 / 6.0, 1e-6);
    EXPECT_NEAR(b.chain, 11.0 / 12.0, 1e-6);
    EXPECT_NEAR(b.t444_max, 8.0 / 9.0, 1e-4);
}

TEST(MaxOverlap, Psi4AgainstT444) {
    const auto shapes = family(4, 12, "T4+T4+T4");
    ASSERT_FALSE(shapes.empty());
    EXPECT_NEAR(max_overlap(states::psi4(), shapes.front()).best_overlap, 8.0 / 9.0, 1e-4);
}

TEST(EpsilonTs, W) {
    EXPECT_EQ(epsilon_ts(states::w3(), 0.1), 6);
    EXPECT_EQ(epsilon_ts(states::w3(), 0.5), 5);
    EXPECT_EQ(epsilon_ts(states::w3(), 0.6), 3);
}

TEST(EpsilonTs, Ghz) {
    EXPECT_EQ(epsilon_ts(states::ghz3(), 1e-6), 6);
}

TEST(EpsilonTs, NonIncreasingInEpsAndBelowExact) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const auto s = apply_ilos(states::w3(), random_ilos(3, seed));
        int prev = 1 << 10;
        for (const double eps : {1e-3, 1e-2, 0.1, 0.3, 0.6}) {
            const int v = epsilon_ts(s, eps, {.restarts = 16});
            EXPECT_LE(v, prev);
            EXPECT_LE(v, ts3(s).upper);
            prev = v;
        }
    }
}

TEST(EpsilonTs, Errors) {
    EXPECT_THROW((void)epsilon_ts(states::w3(), 0.0), BadParams);
    EXPECT_THROW((void)epsilon_ts(states::w3(), 1.0), BadParams);
}

TEST(Witness, PurePsi4) {
    const auto r = witness_eval(DensityMatrix::pure(states::psi4()));
    EXPECT_NEAR(r.expectation, -1.0 / 12.0, 1e-12);
    EXPECT_EQ(r.certified_ts_floor, std::optional<int>(14));
    EXPECT_LT(r.relation_discrepancy, 1e-12);
}

TEST(Witness, MaximallyMixed) {
    const auto r = witness_eval(DensityMatrix::maximally_mixed(4));
    EXPECT_NEAR(r.expectation, 11.0 / 12.0 - 1.0 / 16.0, 1e-12);
    EXPECT_FALSE(r.certified_ts_floor);
}

TEST(Witness, FromWPrime) {
    const auto r = witness_from_wprime(-0.151);
    EXPECT_NEAR(r.expectation, 1.0 / 6.0 - 0.151, 1e-15);
    EXPECT_EQ(round_to(r.expectation, 2), 0.02);
    EXPECT_FALSE(r.certified_ts_floor);
}

TEST(Witness, MatchesOverlapOnRandomMixtures) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto a = random_state(4, seed);
        const auto b = random_state(4, seed + 1000);
        const double w = 0.3;
        std::vector<Complex> m(256);
        for (std::size_t i = 0; i < 16; ++i) {
            for (std::size_t j = 0; j < 16; ++j) {
                m[i * 16 + j] = w * a[i] * std::conj(a[j]) + (1 - w) * b[i] * std::conj(b[j]);
            }
        }
        const DensityMatrix rho(4, m);
        const auto r = witness_eval(rho);
        EXPECT_NEAR(r.expectation, 11.0 / 12.0 - rho.expectation(states::psi4()), 1e-12);
        EXPECT_LT(r.relation_discrepancy, 1e-12);
    }
}

TEST(Witness, RejectsWrongSize) {
    EXPECT_THROW((void)witness_eval(DensityMatrix::maximally_mixed(3)), InvalidDensity);
}

TEST(Werner, States) {
    const auto r0 = werner_state(0.0);
    EXPECT_NEAR(r0(0, 0).real(), 1.0 / 8.0, 1e-15);
    EXPECT_NEAR(werner_state(1.0).expectation(states::ghz3()), 1.0, 1e-12);
    EXPECT_NEAR(werner_state(0.5).eigenvalues().back(), 9.0 / 16.0, 1e-12);
    EXPECT_THROW((void)werner_state(1.5), BadParams);
}

TEST(Werner, Ts) {
    EXPECT_EQ(werner_ts(0.5).ts, 8);
    EXPECT_EQ(werner_ts(0.5).cls, "W\\B");
    EXPECT_EQ(werner_ts(0.1).ts, 3);
    EXPECT_EQ(werner_ts(0.9).ts, 6);
    EXPECT_EQ(werner_ts(0.2).ts, 3);
    EXPECT_TRUE(werner_ts(0.2).boundary);
    EXPECT_FALSE(werner_ts(0.3).boundary);
    EXPECT_THROW((void)werner_ts(-0.1), BadParams);
}

TEST(Werner, PiecewiseConstantWithThreeBreakpoints) {
    std::vector<int> seq;
    std::vector<double> jumps;
    int prev = werner_ts(0.0).ts;
    seq.push_back(prev);
    const int steps = 100000;
    for (int i = 1; i <= steps; ++i) {
        const double p = static_cast<double>(i) / steps;
        const int v = werner_ts(p).ts;
        if (v != prev) {
            seq.push_back(v);
            jumps.push_back(p);
            prev = v;
        }
    }
    EXPECT_EQ(seq, (std::vector<int>{3, 5, 8, 6}));
    ASSERT_EQ(jumps.size(), 3U);
    for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_NEAR(jumps[k], kWernerBreakpoints[k], 1.0 / steps);
    }
}

TEST(MixedTs, Ensembles) {
    EXPECT_EQ(mixed_ts_from_decomposition({{1.0, states::w3()}}), 8);
    EXPECT_EQ(mixed_ts_from_decomposition({{0.5, states::product3()},
                                           {0.5, PureState::normalize(basis_ket("111"))}}),
              3);
    EXPECT_EQ(mixed_ts_from_decomposition({{0.5, states::ghz3()}, {0.5, states::w3()}}), 8);
    EXPECT_THROW((void)mixed_ts_from_decomposition({}), BadEnsemble);
    EXPECT_THROW((void)mixed_ts_from_decomposition({{0.4, states::w3()}}), BadEnsemble);
    EXPECT_THROW((void)mixed_ts_from_decomposition({{1.0, states::bell()}}), BadEnsemble);
}

TEST(MixedTs, WernerEigendecompositionIsUpperBound) {
    // eigenvectors: GHZ, its sign-flipped partner and the six other basis pairs
    for (const double p : {0.7, 0.8, 0.95, 1.0}) {
        std::vector<std::pair<double, PureState>> ens;
        const double rest = (1.0 - p) / 8.0;
        ens.emplace_back(p + rest, states::ghz3());
        if (rest > 0.0) {
            ens.emplace_back(rest, PureState::normalize(states::sum_of_kets({{1, "000"}, {-1, "111"}})));
            for (const char *k : {"001", "010", "011", "100", "101", "110"}) {
                ens.emplace_back(rest, PureState::normalize(basis_ket(k)));
            }
        }
        EXPECT_GE(mixed_ts_from_decomposition(ens), werner_ts(p).ts);
    }
}
