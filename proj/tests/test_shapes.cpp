#include <gtest/gtest.h>

#include <map>
#include <set>

#include "treesize/braket.hpp"
#include "treesize/shapes.hpp"
#include "treesize/states.hpp"

using namespace treesize;

namespace {

std::map<std::string, int> family_counts(const std::vector<TreeShape> &shapes) {
    std::map<std::string, int> out;
    for (const auto &s : shapes) {
        ++out[shape_family(s)];
    }
    return out;
}

} // namespace

TEST(Enumerate, TwoQubits) {
    const auto s = enumerate_shapes(2, 4);
    ASSERT_EQ(s.size(), 2U);
    EXPECT_EQ(size(s[0]), 2);
    EXPECT_EQ(size(s[1]), 4);
    EXPECT_EQ(shape_family(s[1]), "T_E");
}

TEST(Enumerate, ThreeQubits) {
    const auto s = enumerate_shapes(3, 8);
    const std::map<std::string, int> expect{{"T_P", 1}, {"T_B", 3}, {"T_GHZ", 1}, {"T_W", 3}};
    EXPECT_EQ(family_counts(s), expect);
    std::multiset<int> sizes;
    for (const auto &x : s) {
        sizes.insert(size(x));
    }
    EXPECT_EQ(sizes, (std::multiset<int>{3, 5, 5, 5, 6, 8, 8, 8}));
}

TEST(Enumerate, FourQubitProducts) {
    const auto s = enumerate_shapes(4, 16);
    std::map<std::string, int> prods;
    for (const auto &x : s) {
        if (!x.is_sum()) {
            ++prods[shape_family(x)];
        }
    }
    const std::map<std::string, int> expect{{"T4", 1}, {"T6", 6}, {"T7", 4}, {"T8", 3}, {"T9", 12}};
    EXPECT_EQ(prods, expect);
}

TEST(Enumerate, InvariantsAndUniqueness) {
    for (int n = 1; n <= 4; ++n) {
        const auto all = enumerate_shapes(n, 16);
        std::set<std::string> keys;
        for (const auto &s : all) {
            EXPECT_EQ(covered_qubits(s), n);
            EXPECT_LE(size(s), 1 << n);
            EXPECT_EQ(canonicalize(s), s);
            keys.insert(shape_key(s));
        }
        EXPECT_EQ(keys.size(), all.size()) << "n=" << n;
    }
}

TEST(Enumerate, BudgetAndCap) {
    EXPECT_THROW((void)enumerate_shapes(4, 17), BudgetTooLarge);
    EXPECT_THROW((void)enumerate_shapes(4, 16, 10), BudgetTooLarge);
    EXPECT_THROW((void)enumerate_shapes(5, 8), Unsupported);
    for (const auto &s : enumerate_shapes(4, 13)) {
        EXPECT_LE(size(s), 13);
    }
}

TEST(Catalog, ThreeQubits) {
    const auto c = catalog(3);
    std::set<std::string> names;
    for (const auto &x : c) {
        names.insert(x.name);
    }
    EXPECT_EQ(names, (std::set<std::string>{"T_P", "T_B", "T_GHZ", "T_W"}));
    EXPECT_THROW((void)catalog(5), Unsupported);
}

TEST(Catalog, FourQubitComposites) {
    std::set<std::string> fifteen;
    std::set<std::string> twelve_thirteen;
    for (const auto &x : catalog(4)) {
        const int k = size(x.shape);
        if (k == 15) {
            fifteen.insert(x.name);
        }
        if ((k == 12 || k == 13) && x.shape.is_sum()) {
            twelve_thirteen.insert(x.name);
        }
    }
    EXPECT_EQ(fifteen, (std::set<std::string>{"T6+T9", "T7+T8", "T4+T4+T7"}));
    EXPECT_EQ(twelve_thirteen, (std::set<std::string>{"T4+T4+T4", "T4+T8", "T6+T7", "T4+T9"}));
}

TEST(Catalog, ContainedInEnumeration) {
    std::set<std::string> all;
    for (const auto &s : enumerate_shapes(4, 16)) {
        all.insert(shape_key(s));
    }
    for (const auto &x : catalog(4)) {
        EXPECT_TRUE(all.count(shape_key(x.shape)) == 1) << x.name;
    }
}

TEST(Catalog, SpecializationChain) {
    // T_P inside T_B inside T_GHZ: set the extra branches to realize the smaller shape
    const auto prod = PureState::normalize(kron(kron(std::vector<Complex>{1.0, 2.0}, std::vector<Complex>{0.5, -1.0}),
                                                std::vector<Complex>{Complex(0, 1), 1.0}));
    // T_B: a1 (x) (b2 c3 + 0 * d2 e3)
    const auto tb = parse_braket("(|0>+2|1>)((0.5|0>+(-1)|1>)(i|0>+|1>) + |0>(0|0>+0|1>))");
    EXPECT_EQ(size(tb), 5);
    EXPECT_GE(overlap2(evaluate(tb), prod), 1.0 - 1e-14);
    // T_GHZ: the product plus a zero-weight product
    const auto tg = parse_braket("(|0>+2|1>)(0.5|0>+(-1)|1>)(i|0>+|1>) + (0|0>+0|1>)|00>");
    EXPECT_EQ(size(tg), 6);
    EXPECT_GE(overlap2(evaluate(tg), prod), 1.0 - 1e-14);
}

TEST(Braket, Examples) {
    const auto bell = parse_braket("(1/sqrt2)(|00> + |11>)");
    EXPECT_EQ(size(bell), 4);
    EXPECT_TRUE(same_state(evaluate(bell), states::bell()));
    const auto b = parse_braket("|0>(|01>+|10>)");
    EXPECT_EQ(size(b), 5);
    EXPECT_TRUE(same_state(evaluate(b), states::biseparable3()));
    const auto w = parse_braket("(|001>+|010>+|100>)/sqrt3");
    EXPECT_TRUE(same_state(evaluate(w), states::w3()));
    const auto d = parse_braket("-0.5|0> + (0.25-1e-3i)|1>");
    EXPECT_EQ(size(d), 1);
    EXPECT_EQ(d.leaf().a, Complex(-0.5));
    EXPECT_EQ(d.leaf().b, Complex(0.25, -1e-3));
}

TEST(Braket, Crossing) {
    const auto t = parse_braket("(|00>+|11>)@[1,3](|01>+|10>)@[2,4]");
    const auto s = evaluate(t);
    // |0_1 0_3>|0_2 1_4> -> |0001>
    EXPECT_NEAR(std::abs(s[0b0001]), 0.5, 1e-15);
    EXPECT_NEAR(std::abs(s[0b1011]), 0.5, 1e-15);
    EXPECT_EQ(s[0b0011], Complex(0.0));
    const auto printed = print_braket(t);
    EXPECT_NE(printed.find("@["), std::string::npos);
    EXPECT_EQ(parse_braket(printed), t);
}

TEST(Braket, Errors) {
    EXPECT_THROW((void)parse_braket("|01"), SyntaxError);
    EXPECT_THROW((void)parse_braket("|0> +"), SyntaxError);
    EXPECT_THROW((void)parse_braket("|2>"), SyntaxError);
    EXPECT_THROW((void)parse_braket("|0> + |01>"), QubitCoverage);
    EXPECT_THROW((void)parse_braket("|0>@[3]|1>"), QubitCoverage);
    EXPECT_THROW((void)parse_braket("|00000>"), QubitCoverage);
    try {
        (void)parse_braket("|01> & |10>");
        FAIL();
    } catch (const SyntaxError &e) {
        EXPECT_EQ(e.position(), 5U);
    }
}

TEST(Braket, RoundTripRandomShapes) {
    int cases = 0;
    std::uint64_t seed = 0;
    for (int n = 1; n <= 4; ++n) {
        const auto shapes = enumerate_shapes(n, 16);
        for (int rep = 0; cases < 1000 * n / 4 || rep == 0; ++rep) {
            for (const auto &sh : shapes) {
                const auto t = canonicalize(random_instance(sh, ++seed));
                const auto text = print_braket(t);
                const auto back = parse_braket(text);
                EXPECT_EQ(back, t) << text;
                EXPECT_GE(overlap2(evaluate(back), evaluate(t)), 1.0 - 1e-12);
                ++cases;
                if (cases >= 1000 * n / 4 && rep > 0) {
                    break;
                }
            }
        }
    }
    EXPECT_GE(cases, 1000);
}
