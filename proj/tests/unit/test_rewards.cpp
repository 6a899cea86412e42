#include <gtest/gtest.h>

#include <cmath>

#include "srrd/envs.hpp"
#include "srrd/rewards.hpp"

using namespace srrd;

namespace {

TransitionFeatures no_features(const TransitionKey&) { return {}; }

}  // namespace

TEST(Rewards, RandomKindIsReproducible) {
    const RewardSpec spec{FunctionKind::random, 1, 42, {-1.0, 1.0}};
    const auto a = make_reward_table(spec, {2, 1}, no_features);
    const auto b = make_reward_table(spec, {2, 1}, no_features);
    ASSERT_EQ(a.values().size(), 4u);
    EXPECT_TRUE(std::equal(a.values().begin(), a.values().end(), b.values().begin()));
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j) EXPECT_NE(a.values()[i], a.values()[j]);
    const auto c = make_reward_table({FunctionKind::random, 1, 43, {-1.0, 1.0}}, {2, 1}, no_features);
    EXPECT_NE(a.values()[0], c.values()[0]);
}

TEST(Rewards, LinearWithUnitCoefficients) {
    // Features (x, y) per state and (dx, dy) per action; east is (1, 0).
    const EnvCfg env = GridworldCfg{};
    const FeatureMap f = env_features(env);
    const RewardSpec spec{FunctionKind::linear, 1, 7, {1.0, 1.0}};
    const RewardModel m(spec, env_space(env), f);
    // r = (0 + 0) + (1 + 0) + (1 + 0)
    EXPECT_DOUBLE_EQ(m({{0}, {3}, {1}}), 2.0);
    // From (2, 3) north to (2, 4): 5 + (0 + 1) + 6
    EXPECT_DOUBLE_EQ(m({{32}, {0}, {42}}), 12.0);
}

TEST(Rewards, PolynomialHandEvaluated) {
    const FeatureExtractor f = [](const TransitionKey& k) {
        return TransitionFeatures{{double(k.s.index) - 1.0}, {2.0}, {double(k.s_next.index)}};
    };
    const RewardSpec spec{FunctionKind::polynomial, 3, 1, {1.0, 1.0}};
    const auto t = make_reward_table(spec, {3, 1}, f);
    // (0 - 1)^3 + 2^3 + 2^3
    EXPECT_DOUBLE_EQ(t.at(0, 0, 2), -1.0 + 8.0 + 8.0);
}

TEST(Rewards, SinusoidalAtZero) {
    const FeatureExtractor f = [](const TransitionKey&) { return TransitionFeatures{{0.0, 0.0}, {0.0}, {0.0, 0.0}}; };
    const auto t = make_reward_table({FunctionKind::sinusoidal, 1, 3, {1.0, 1.0}}, {2, 2}, f);
    for (double v : t.values()) EXPECT_EQ(v, 0.0);
}

TEST(Rewards, DegreeOutOfRangeRejected) {
    EXPECT_THROW((void)make_reward_table({FunctionKind::polynomial, 0, 1, {-1, 1}}, {2, 1}, no_features), Error);
    EXPECT_THROW((void)make_reward_table({FunctionKind::polynomial, 11, 1, {-1, 1}}, {2, 1}, no_features), Error);
}

TEST(Rewards, CoefficientsWithinRange) {
    const auto t = make_reward_table({FunctionKind::random, 1, 5, {2.0, 3.0}}, {10, 2}, no_features);
    for (double v : t.values()) {
        EXPECT_GE(v, 2.0);
        EXPECT_LT(v, 3.0);
    }
}

TEST(Rewards, ModelMatchesTable) {
    const EnvCfg env = GridworldCfg{};
    const RewardSpec spec{FunctionKind::polynomial, 4, 9, {-1.0, 1.0}};
    const auto table = make_reward_table(spec, env_space(env), env_features(env));
    const RewardModel m(spec, env_space(env), env_features(env));
    for (const auto& k : table.keys()) ASSERT_EQ(m(k), table.at(k));
}

TEST(Rewards, KindNames) {
    EXPECT_EQ(parse_function_kind("sinusoidal"), FunctionKind::sinusoidal);
    EXPECT_EQ(to_string(FunctionKind::polynomial), "polynomial");
    EXPECT_THROW((void)parse_function_kind("cubic"), Error);
}
