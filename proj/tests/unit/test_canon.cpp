#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "oracle.hpp"
#include "srrd/canon.hpp"
#include "srrd/shaping.hpp"

using namespace srrd;

namespace {

constexpr Method kCanonical[] = {Method::epic, Method::dard, Method::srrd};

TransitionKey key(std::uint32_t s, std::uint32_t t) { return {{s}, {0}, {t}}; }

std::vector<StateId> ids(std::initializer_list<std::uint32_t> xs) {
    std::vector<StateId> out;
    for (auto x : xs) out.push_back({x});
    return out;
}

RewardSample one_action(std::initializer_list<std::pair<std::uint32_t, std::uint32_t>> edges, std::size_t n) {
    std::vector<std::pair<TransitionKey, double>> t;
    for (auto [s, y] : edges) t.push_back({key(s, y), 1.0});
    return build_sample(t, {n, 1});
}

PotentialFn random_phi(std::mt19937_64& rng, std::size_t n, double bound) {
    std::uniform_real_distribution<double> d(-bound, bound);
    PotentialFn p;
    for (std::size_t i = 0; i < n; ++i) p.values.push_back(d(rng));
    return p;
}

double max_diff(const CanonResult& a, const CanonResult& b) {
    EXPECT_EQ(a.keys, b.keys);
    double m = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
    return m;
}

}  // namespace

TEST(SrrdSets, ThreeCycle) {
    const auto s = one_action({{0, 1}, {1, 2}, {2, 0}}, 3);
    const auto z = derive_srrd_sets(s, key(0, 1));
    EXPECT_EQ(z.s1, ids({2}));
    EXPECT_EQ(z.s2, ids({1}));
    EXPECT_EQ(z.s3, ids({0, 1, 2}));
    EXPECT_EQ(z.s4, ids({0, 1, 2}));
    EXPECT_EQ(z.s5, ids({0}));
    EXPECT_EQ(z.s6, ids({2}));
}

TEST(SrrdSets, ChainExcludesTerminal) {
    const auto s = one_action({{0, 1}, {1, 2}}, 3);
    const auto z = derive_srrd_sets(s, key(0, 1));
    EXPECT_EQ(z.s1, ids({2}));
    EXPECT_EQ(z.s2, ids({1}));
    EXPECT_EQ(z.s3, ids({0, 1}));
    EXPECT_TRUE(z.s5.empty());
    const auto z2 = derive_srrd_sets(s, key(1, 2));
    EXPECT_TRUE(z2.s2.empty());  // the only successor of x1 is terminal
}

TEST(SrrdSets, SelfLoop) {
    const auto s = one_action({{0, 0}}, 1);
    const auto z = derive_srrd_sets(s, key(0, 0));
    for (const auto* set : {&z.s1, &z.s2, &z.s3, &z.s4, &z.s5, &z.s6}) EXPECT_EQ(*set, ids({0}));
}

TEST(SrrdSets, TenStateGraph) {
    // x0 -> x1, x2; x1 -> x3, x4; x2 -> x5; x3 -> x6; x4 -> x7; x5 -> x8; x7 -> x9; x9 -> x4
    const auto s = one_action({{0, 1}, {0, 2}, {1, 3}, {1, 4}, {2, 5}, {3, 6}, {4, 7}, {5, 8}, {7, 9}, {9, 4}}, 10);
    const auto z = derive_srrd_sets(s, key(0, 1));
    EXPECT_EQ(z.s1, ids({3, 4}));
    EXPECT_EQ(z.s2, ids({1, 2}));
    EXPECT_EQ(z.s3, ids({0, 1, 2, 3, 4, 5, 7, 9}));  // terminals x6 and x8 absent
    EXPECT_EQ(z.s4, ids({1, 2, 3, 4, 5, 6, 7, 8, 9}));
    EXPECT_EQ(z.s5, ids({6, 7}));
    EXPECT_EQ(z.s6, ids({3, 4, 5}));
}

TEST(SrrdSets, InvariantsOnRandomSamples) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 30; ++trial) {
        const auto s = oracle::random_sample(rng, 9, 2, 0.08);
        for (const auto& k : s.keys()) {
            const auto z = derive_srrd_sets(s, k);
            EXPECT_TRUE(std::includes(z.s4.begin(), z.s4.end(), z.s1.begin(), z.s1.end()));
            EXPECT_TRUE(std::includes(z.s3.begin(), z.s3.end(), z.s2.begin(), z.s2.end()));
            for (StateId x : z.s2) EXPECT_FALSE(s.is_terminal(x));
            const auto e = oracle::entries(s);
            const auto want = oracle::sets(e, k.s.index, k.s_next.index);
            auto as_set = [](const std::vector<StateId>& v) {
                oracle::States out;
                for (auto x : v) out.insert(x.index);
                return out;
            };
            EXPECT_EQ(as_set(z.s1), want.s1);
            EXPECT_EQ(as_set(z.s2), want.s2);
            EXPECT_EQ(as_set(z.s5), want.s5);
            EXPECT_EQ(as_set(z.s6), want.s6);
        }
    }
}

TEST(SrrdSets, MissingKeyRejected) {
    const auto s = one_action({{0, 1}}, 3);
    EXPECT_THROW((void)derive_srrd_sets(s, key(1, 2)), Error);
}

TEST(CanonExact, MatchesTermByTermOracle) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 10; ++trial) {
        const auto t = oracle::random_table(rng, 3, 2);
        for (auto m : kCanonical) {
            const auto c = canon_exact(t, m, 0.6);
            for (std::size_t i = 0; i < c.keys.size(); ++i) {
                const auto& k = c.keys[i];
                EXPECT_NEAR(c.values[i], oracle::exact(t, m, 0.6, k.s.index, k.a.index, k.s_next.index), 1e-12);
            }
        }
    }
}

TEST(CanonExact, ConstantsCancel) {
    const RewardTable t(Space{4, 2}, std::vector<double>(32, 3.7));
    for (auto m : kCanonical)
        for (double v : canon_exact(t, m, 0.9).values) EXPECT_NEAR(v, 0.0, 1e-12);
}

TEST(CanonExact, FullCoverageEquivalence) {
    std::mt19937_64 rng(22);
    const auto t = oracle::random_table(rng, 3, 2);
    const auto e = canon_exact(t, Method::epic, 0.5);
    EXPECT_LT(max_diff(e, canon_exact(t, Method::dard, 0.5)), 1e-9);
    EXPECT_LT(max_diff(e, canon_exact(t, Method::srrd, 0.5)), 1e-9);
}

TEST(CanonExact, ShapingInvariance) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        const auto t = oracle::random_table(rng, 5, 3);
        const double g = std::uniform_real_distribution<double>(0, 1)(rng);
        const auto shaped = apply_shaping(t, random_phi(rng, 5, 10.0), g);
        for (auto m : kCanonical) EXPECT_LT(max_diff(canon_exact(t, m, g), canon_exact(shaped, m, g)), 1e-9);
    }
}

TEST(CanonExact, Idempotent) {
    std::mt19937_64 rng(24);
    const auto t = oracle::random_table(rng, 4, 2);
    for (auto m : kCanonical) {
        const auto once = canon_exact(t, m, 0.7);
        const auto twice = canon_exact(RewardTable(t.space(), once.values), m, 0.7);
        EXPECT_LT(max_diff(once, twice), 1e-9);
    }
}

TEST(CanonExact, Guards) {
    const RewardTable t(Space{4, 2});
    EXPECT_THROW((void)canon_exact(t, Method::srrd, 1.2), Error);
    EXPECT_THROW((void)canon_exact(t, Method::srrd, 0.5, 10), Error);
    const auto d = canon_exact(t, Method::direct, 0.5);
    EXPECT_EQ(d.values.size(), 32u);
}

TEST(CanonSampled, FullCoverageMatchesExact) {
    std::mt19937_64 rng(25);
    const auto t = oracle::random_table(rng, 4, 3);
    const auto s = full_sample(t);
    for (auto mode : {MissingMode::zero_fill, MissingMode::renormalize}) {
        BatchCfg b;
        b.missing_mode = mode;
        for (auto m : kCanonical) {
            EXPECT_LT(max_diff(canon_sampled(s, m, 0.7, b), canon_exact(t, m, 0.7)), 1e-9);
            EXPECT_LT(max_diff(canon_unbiased(s, m, 0.7), canon_exact(t, m, 0.7)), 1e-9);
        }
    }
}

TEST(CanonSampled, MatchesBruteForceOracle) {
    std::mt19937_64 rng(26);
    for (int trial = 0; trial < 12; ++trial) {
        const auto s = oracle::random_sample(rng, 8, 3, 0.12);
        for (auto mode : {MissingMode::zero_fill, MissingMode::renormalize}) {
            BatchCfg b;
            b.missing_mode = mode;
            b.n_m = trial % 3 == 0 ? 0 : 6 + trial;
            b.batch_seed = trial;
            for (auto m : kCanonical) {
                const auto c = canon_sampled(s, m, 0.8, b);
                ASSERT_EQ(c.keys, s.keys());
                for (std::size_t i = 0; i < c.keys.size(); ++i)
                    ASSERT_NEAR(c.values[i], oracle::double_batch(s, m, 0.8, b, c.keys[i]), 1e-12)
                        << to_string(m) << ' ' << to_string(mode) << ' ' << to_string(c.keys[i]);
            }
        }
    }
}

TEST(CanonSampled, BatchDrawIsUniqueSubset) {
    std::mt19937_64 rng(27);
    const auto s = oracle::random_sample(rng, 10, 3, 0.1);
    BatchCfg b;
    b.n_m = 7;
    b.batch_seed = 3;
    const auto batch = draw_state_action_batch(s, b);
    EXPECT_EQ(batch.size(), 7u);
    std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
    for (auto [x, u] : batch) {
        EXPECT_TRUE(std::binary_search(s.sampled_states().begin(), s.sampled_states().end(), x));
        EXPECT_TRUE(std::binary_search(s.sampled_actions().begin(), s.sampled_actions().end(), u));
        seen.insert({x.index, u.index});
    }
    EXPECT_EQ(seen.size(), 7u);
    EXPECT_EQ(draw_state_action_batch(s, b), batch);
    b.n_m = 100000;
    EXPECT_EQ(draw_state_action_batch(s, b).size(), s.sampled_states().size() * s.sampled_actions().size());
}

TEST(CanonSampled, InvariantWhenCrossProductDefined) {
    // Every transition between sampled states is defined, so each term's
    // cross-product is complete and shaping cancels exactly.
    std::mt19937_64 rng(28);
    for (int trial = 0; trial < 10; ++trial) {
        const auto t = oracle::random_table(rng, 6, 2);
        const double g = std::uniform_real_distribution<double>(0, 1)(rng);
        const auto phi = random_phi(rng, 6, 20.0);
        const auto r = full_sample(t);
        const auto shaped = apply_shaping(r, phi, g);
        for (auto m : kCanonical) {
            EXPECT_LT(max_diff(canon_sampled(r, m, g), canon_sampled(shaped, m, g)), 1e-9);
            EXPECT_LT(max_diff(canon_unbiased(r, m, g), canon_unbiased(shaped, m, g)), 1e-9);
        }
    }
}

TEST(CanonUnbiased, SingleTransitionEpic) {
    const auto s = build_sample({{key(0, 1), 2.5}}, {2, 1});
    const auto c = canon_unbiased(s, Method::epic, 0.5);
    // 2.5 + 0.5 * 0 (x1 has no outgoing) - 2.5 - 0.5 * 2.5
    ASSERT_EQ(c.values.size(), 1u);
    EXPECT_DOUBLE_EQ(c.values[0], -1.25);
    EXPECT_GT(c.stats.empty_terms, 0u);
}

TEST(CanonUnbiased, MatchesBruteForceOracle) {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 15; ++trial) {
        const auto s = oracle::random_sample(rng, 9, 2, 0.1);
        for (auto m : kCanonical) {
            const auto c = canon_unbiased(s, m, 0.7);
            for (std::size_t i = 0; i < c.keys.size(); ++i)
                ASSERT_NEAR(c.values[i], oracle::unbiased(s, m, 0.7, c.keys[i]), 1e-12)
                    << to_string(m) << ' ' << to_string(c.keys[i]);
        }
    }
}

TEST(CanonSampled, DirectIsIdentity) {
    std::mt19937_64 rng(30);
    const auto s = oracle::random_sample(rng, 6, 2, 0.3);
    EXPECT_EQ(canon_sampled(s, Method::direct, 0.5).values, s.rewards());
    EXPECT_EQ(canon_unbiased(s, Method::direct, 0.5).values, s.rewards());
}

TEST(CanonSampled, WorkCountersRespectComplexity) {
    std::mt19937_64 rng(31);
    for (double keep : {0.02, 0.05, 0.1}) {
        const auto s = oracle::random_sample(rng, 30, 4, keep);
        for (std::size_t n_m : {std::size_t{5}, std::size_t{20}, std::size_t{60}}) {
            BatchCfg b;
            b.n_m = n_m;
            const double nv = double(s.size());
            const double nm = double(std::min(n_m, s.sampled_states().size() * s.sampled_actions().size()));
            const auto epic = canon_sampled(s, Method::epic, 0.7, b);
            EXPECT_EQ(epic.stats.batch_size, std::size_t(nm));
            EXPECT_GT(epic.stats.reward_visits, 0u);
            EXPECT_LE(double(epic.stats.reward_visits), 4.0 * std::max(nv * nm, nm * nm));
            for (auto m : {Method::dard, Method::srrd}) {
                const auto c = canon_sampled(s, m, 0.7, b);
                EXPECT_LE(double(c.stats.reward_visits), 8.0 * nv * nm * nm) << to_string(m);
            }
        }
    }
}

TEST(CanonSampled, EmptyTermsAreCounted) {
    const auto s = one_action({{0, 1}, {1, 2}}, 3);
    const auto c = canon_sampled(s, Method::srrd, 0.5);
    EXPECT_GT(c.stats.empty_terms, 0u);
    for (double v : c.values) EXPECT_TRUE(std::isfinite(v));
}

TEST(CanonNames, ParseAndPrint) {
    EXPECT_EQ(parse_method("srrd"), Method::srrd);
    EXPECT_EQ(parse_method("EPIC"), Method::epic);
    EXPECT_EQ(to_string(Method::dard), "DARD");
    EXPECT_THROW((void)parse_method("L2"), Error);
    EXPECT_EQ(parse_missing_mode("zero_fill"), MissingMode::zero_fill);
    EXPECT_EQ(parse_x_set_mode("batch_actions"), XSetMode::batch_actions);
}

TEST(CanonCsv, Header) {
    const auto s = one_action({{0, 1}}, 2);
    std::ostringstream os;
    write_canon_csv(os, canon_sampled(s, Method::direct, 0.5));
    EXPECT_EQ(os.str(), "s,a,s_next,canonical_value\n0,0,1,1\n");
}
