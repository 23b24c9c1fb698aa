#include <gtest/gtest.h>

#include "treesize/json_io.hpp"

using namespace treesize;

TEST(Json, ComplexPairs) {
    EXPECT_EQ(to_json(Complex(1.5, -2.0)).dump(), "[1.5,-2.0]");
    EXPECT_EQ(complex_from_json(Json::parse("[0.25, 3]")), Complex(0.25, 3.0));
    EXPECT_EQ(complex_from_json(Json::parse("2")), Complex(2.0, 0.0));
    EXPECT_THROW((void)complex_from_json(Json::parse("[1]")), InputError);
    EXPECT_THROW((void)complex_from_json(Json::parse("[\"a\", 1]")), InputError);
}

TEST(Json, StateRoundTrip) {
    for (int n = 1; n <= 4; ++n) {
        const auto s = random_state(n, 40 + static_cast<std::uint64_t>(n));
        const auto back = state_from_json(Json::parse(to_json(s).dump()));
        EXPECT_TRUE(same_state(back, s));
        EXPECT_EQ(back.n_qubits(), n);
    }
}

TEST(Json, StateNormalizesAndValidates) {
    const auto s = state_from_json(Json::parse(R"({"n":1,"amps":[[3,0],[0,4]]})"));
    EXPECT_NEAR(std::abs(s[0]), 0.6, 1e-15);
    EXPECT_THROW((void)state_from_json(Json::parse(R"({"n":2,"amps":[[1,0],[0,0]]})")), DimensionMismatch);
    EXPECT_THROW((void)state_from_json(Json::parse(R"({"n":1,"amps":[[0,0],[0,0]]})")), ZeroVector);
    EXPECT_THROW((void)state_from_json(Json::parse(R"({"n":1})")), InputError);
    EXPECT_THROW((void)state_from_json(Json::parse(R"({"amps":[[1,0],[0,0],[0,0]]})")), InputError);
}

TEST(Json, Density) {
    const auto rho = density_from_json(Json::parse(R"({"n":1,"mat":[[[0.5,0],[0,0]],[[0,0],[0.5,0]]]})"));
    EXPECT_EQ(rho.n_qubits(), 1);
    EXPECT_NEAR(rho(1, 1).real(), 0.5, 1e-15);
    EXPECT_THROW((void)density_from_json(Json::parse(R"({"mat":[[[1,0]],[[0,0]]]})")), InvalidDensity);
}

TEST(Json, TreeRoundTrip) {
    std::uint64_t seed = 0;
    for (int n = 1; n <= 4; ++n) {
        for (const auto &sh : enumerate_shapes(n, 1 << n)) {
            const auto t = random_instance(sh, ++seed);
            EXPECT_EQ(tree_from_json(Json::parse(to_json(t).dump())), t);
        }
    }
}

TEST(Json, TreeErrors) {
    EXPECT_THROW((void)tree_from_json(Json::parse(R"({"leaf":{"a":[1,0],"b":[0,0]}})")), InputError);
    EXPECT_THROW((void)tree_from_json(Json::parse(R"({"sum":[{"leaf":{"qubit":1,"a":1,"b":0}}]})")), InputError);
    EXPECT_THROW((void)tree_from_json(Json::parse(R"({"tensor":[]})")), InputError);
    // a product may not repeat a qubit
    EXPECT_THROW((void)tree_from_json(Json::parse(
                     R"({"prod":[{"leaf":{"qubit":1,"a":1,"b":0}},{"leaf":{"qubit":1,"a":1,"b":0}}]})")),
                 InputError);
}

TEST(Json, Reports) {
    const auto c = to_json(classify3(states::w3()));
    EXPECT_EQ(c["class"], "W");
    EXPECT_EQ(c["condition"], "2a");
    const auto r = to_json(tree_size(states::w3()));
    EXPECT_EQ(r["lower"], 8);
    EXPECT_EQ(r["upper"], 8);
    EXPECT_EQ(r["exact"], true);
    EXPECT_TRUE(same_state(evaluate(tree_from_json(r["tree_json"])), states::w3()));
    const auto w = to_json(witness_from_wprime(-0.151));
    EXPECT_EQ(w["expectation_2dp"], 0.02);
    EXPECT_TRUE(w["certified_ts_floor"].is_null());
    const auto v = to_json(is_irreducible(states::psi4()));
    EXPECT_EQ(v["irreducible"], true);
    EXPECT_TRUE(v["witness"].is_null());
}
