#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "oracle.hpp"
#include "srrd/reward.hpp"

using namespace srrd;

namespace {

TransitionKey key(std::uint32_t s, std::uint32_t a, std::uint32_t t) { return {{s}, {a}, {t}}; }

std::vector<StateId> ids(std::initializer_list<std::uint32_t> xs) {
    std::vector<StateId> out;
    for (auto x : xs) out.push_back({x});
    return out;
}

}  // namespace

TEST(BuildSample, DuplicateKeepsFirst) {
    const auto s = build_sample({{key(0, 0, 1), 1.0}, {key(0, 0, 1), 2.0}}, {3, 1});
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(s.rewards()[0], 1.0);
}

TEST(BuildSample, EmptyRejected) {
    EXPECT_THROW(build_sample(std::vector<std::pair<TransitionKey, double>>{}, Space{2, 1}), Error);
}

TEST(BuildSample, InvalidIndexRejectedWithKey) {
    try {
        (void)build_sample({{key(0, 0, 5), 1.0}}, {3, 1});
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("5"), std::string::npos);
    }
    EXPECT_THROW(build_sample({{key(0, 2, 1), 1.0}}, {3, 2}), Error);
}

TEST(BuildSample, NonFiniteRejected) {
    EXPECT_THROW(build_sample({{key(0, 0, 1), std::numeric_limits<double>::infinity()}}, {3, 1}), Error);
}

TEST(BuildSample, ChainDerivedSets) {
    const auto s = build_sample({{key(0, 0, 1), 1.0}, {key(1, 0, 2), 1.0}}, {3, 1});
    EXPECT_EQ(s.initiators(), ids({0, 1}));
    EXPECT_EQ(s.terminals(), ids({2}));
    EXPECT_EQ(s.sampled_states(), ids({0, 1, 2}));
    EXPECT_EQ(s.all_successors(), ids({1, 2}));
    EXPECT_TRUE(s.is_terminal({2}));
    EXPECT_FALSE(s.is_terminal({0}));
}

TEST(BuildSample, KeysSortedAndLookup) {
    const auto s = build_sample({{key(2, 0, 0), 3.0}, {key(0, 1, 1), 1.0}, {key(0, 0, 2), 2.0}}, {3, 2});
    EXPECT_TRUE(std::is_sorted(s.keys().begin(), s.keys().end()));
    EXPECT_EQ(s.find(key(2, 0, 0)), 3.0);
    EXPECT_FALSE(s.find(key(1, 0, 0)).has_value());
}

TEST(BuildSample, RebuildFromEntriesIsIdempotent) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = oracle::random_sample(rng, 7, 3, 0.2);
        std::vector<std::pair<TransitionKey, double>> entries;
        for (std::size_t i = 0; i < a.size(); ++i) entries.push_back({a.keys()[i], a.rewards()[i]});
        const auto b = build_sample(entries, a.space());
        EXPECT_EQ(a.keys(), b.keys());
        EXPECT_EQ(a.rewards(), b.rewards());
        EXPECT_EQ(a.initiators(), b.initiators());
        EXPECT_EQ(a.terminals(), b.terminals());
        EXPECT_EQ(a.sampled_states(), b.sampled_states());
        EXPECT_EQ(a.sampled_actions(), b.sampled_actions());
        for (std::uint32_t x = 0; x < 7; ++x) {
            const auto sa = a.successors({x});
            const auto sb = b.successors({x});
            EXPECT_TRUE(std::equal(sa.begin(), sa.end(), sb.begin(), sb.end()));
        }
    }
}

TEST(BuildSample, DerivedSetsMatchDefinitions) {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        const auto s = oracle::random_sample(rng, 8, 2, 0.1);
        const auto e = oracle::entries(s);
        for (std::uint32_t x = 0; x < 8; ++x) {
            const auto want = oracle::succ(e, x);
            const auto got = s.successors({x});
            ASSERT_EQ(got.size(), want.size());
            std::size_t i = 0;
            for (unsigned y : want) EXPECT_EQ(got[i++].index, y);
            const bool reached = std::any_of(e.begin(), e.end(), [&](auto& kv) { return std::get<2>(kv.first) == x; });
            EXPECT_EQ(s.is_terminal({x}), reached && want.empty());
            EXPECT_EQ(s.is_initiator({x}), !want.empty());
        }
    }
}

TEST(CommonSupport, Cases) {
    const Space sp{4, 1};
    const auto a = build_sample({{key(0, 0, 1), 1.0}, {key(1, 0, 2), 1.0}, {key(2, 0, 3), 1.0}}, sp);
    const auto b = build_sample({{key(1, 0, 2), 5.0}, {key(2, 0, 3), 5.0}, {key(3, 0, 0), 5.0}}, sp);
    const auto c = build_sample({{key(3, 0, 3), 5.0}}, sp);
    EXPECT_EQ(common_support(a, a), a.keys());
    EXPECT_TRUE(common_support(a, c).empty());
    const std::vector<TransitionKey> want{key(1, 0, 2), key(2, 0, 3)};
    EXPECT_EQ(common_support(a, b), want);
    EXPECT_EQ(common_support(b, a), want);
}

TEST(CommonSupport, MismatchedSpacesRejected) {
    const auto a = build_sample({{key(0, 0, 1), 1.0}}, {4, 1});
    const auto b = build_sample({{key(0, 0, 1), 1.0}}, {4, 2});
    EXPECT_THROW((void)common_support(a, b), Error);
}

TEST(Coverage, Examples) {
    std::vector<std::pair<TransitionKey, double>> t;
    for (std::uint32_t s = 0; s < 100; ++s)
        for (std::uint32_t a = 0; a < 4; ++a) t.push_back({key(s, a, (s + 1) % 100), 1.0});
    EXPECT_DOUBLE_EQ(coverage(build_sample(t, {100, 4})), 0.01);

    std::mt19937_64 rng(1);
    EXPECT_DOUBLE_EQ(coverage(full_sample(oracle::random_table(rng, 3, 2))), 1.0);
    EXPECT_DOUBLE_EQ(coverage(build_sample({{key(0, 0, 1), 1.0}}, {2, 1})), 0.25);
    EXPECT_DOUBLE_EQ(coverage(build_sample({{key(0, 0, 1), 1.0}}, {2, 1}), 2), 0.5);
}

TEST(Coverage, MonotoneUnderAddition) {
    std::vector<std::pair<TransitionKey, double>> t;
    double last = 0.0;
    for (std::uint32_t i = 0; i < 18; ++i) {
        t.push_back({key(i % 3, i % 2, (i * 7) % 3), 1.0});
        const double c = coverage(build_sample(t, {3, 2}));
        EXPECT_GE(c, last);
        last = c;
    }
}

TEST(SampleCsv, RoundTrip) {
    std::mt19937_64 rng(3);
    const auto s = oracle::random_sample(rng, 6, 2, 0.3);
    std::stringstream ss;
    write_sample_csv(ss, s);
    EXPECT_EQ(ss.str().substr(0, 18), "s,a,s_next,reward\n");
    const auto back = read_sample_csv(ss, s.space());
    EXPECT_EQ(back.keys(), s.keys());
    EXPECT_EQ(back.rewards(), s.rewards());
}

TEST(SampleCsv, BadRowRejected) {
    std::stringstream ss("s,a,s_next,reward\n0,0,x,1\n");
    EXPECT_THROW((void)read_sample_csv(ss, {3, 1}), Error);
}

TEST(RewardTable, SizeChecked) {
    EXPECT_THROW(RewardTable(Space{2, 1}, std::vector<double>(3, 0.0)), Error);
    const RewardTable t(Space{2, 2});
    EXPECT_EQ(t.values().size(), 8u);
    EXPECT_EQ(t.keys().size(), 8u);
}
