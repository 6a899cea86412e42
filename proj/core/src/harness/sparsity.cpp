#include "srrd/harness/sparsity.hpp"

#include <ostream>

#include "generate.hpp"
#include "srrd/csv.hpp"
#include "srrd/harness/pool.hpp"
#include "srrd/harness/stats.hpp"
#include "srrd/rng.hpp"

namespace srrd::harness {

namespace {

struct TrialOutcome {
    double coverage = 0.0;
    std::vector<DistanceResult> distances;
};

TrialOutcome run_trial(const SweepCfg& cfg, const FeatureMap& features, std::size_t rollouts, std::uint64_t seed) {
    const RewardModel gt = detail::ground_truth(cfg.reward, cfg.env, features, derive_seed(seed, {1}));
    const PotentialFn phi = detail::scaled_potential(cfg.shaping, gt, features, cfg.gamma, derive_seed(seed, {2}),
                                                       goal_states(cfg.env));
    const StaticPolicy policy = uniform_policy(env_action_count(cfg.env));

    const auto trajs_a = rollout(cfg.env, policy, rollouts, derive_seed(seed, {3}));
    const auto trajs_b = rollout(cfg.env, policy, rollouts, derive_seed(seed, {4}));
    const auto keys_a = trajectories_to_keys(trajs_a);
    const auto keys_b = trajectories_to_keys(trajs_b);
    const RewardSample r = sample_rewards(keys_a, gt);
    RewardSample r_shaped = apply_shaping(sample_rewards(keys_b, gt), phi, cfg.gamma);
    r_shaped = add_noise(r_shaped, cfg.noise, derive_seed(seed, {5}));

    TrialOutcome out;
    if (cfg.coverage == CoverageBasis::full) {
        out.coverage = 0.5 * (coverage(r) + coverage(r_shaped));
    } else {
        const auto feasible = feasible_transition_count(cfg.env);
        out.coverage = 0.5 * (coverage(r, feasible) + coverage(r_shaped, feasible));
    }
    DistanceCfg dcfg;
    dcfg.gamma = cfg.gamma;
    dcfg.approximation = cfg.approximation;
    dcfg.batch = cfg.batch;
    dcfg.batch.batch_seed = derive_seed(seed, {6});
    for (Method m : cfg.methods) {
        dcfg.method = m;
        out.distances.push_back(reward_distance(r, r_shaped, dcfg));
    }
    return out;
}

}  // namespace

SweepResult run_sparsity(const SweepCfg& cfg) {
    if (cfg.trials == 0) throw Error("sparsity: trials must be at least 1");
    if (cfg.rollout_counts.empty()) throw Error("sparsity: no rollout counts");
    const FeatureMap features = env_features(cfg.env);
    const std::size_t n_counts = cfg.rollout_counts.size();
    std::vector<TrialOutcome> outcomes(n_counts * cfg.trials);
    parallel_for(outcomes.size(), cfg.threads, [&](std::size_t job) {
        const std::size_t ci = job / cfg.trials;
        const std::size_t trial = job % cfg.trials;
        outcomes[job] = run_trial(cfg, features, cfg.rollout_counts[ci], derive_seed(cfg.seed, {0x5a, ci, trial}));
    });

    SweepResult result;
    result.methods = cfg.methods;
    for (std::size_t ci = 0; ci < n_counts; ++ci) {
        SweepRow row;
        row.rollouts = cfg.rollout_counts[ci];
        std::vector<std::vector<double>> per_method(cfg.methods.size());
        row.methods.resize(cfg.methods.size());
        for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
            const auto& o = outcomes[ci * cfg.trials + trial];
            row.coverage += o.coverage;
            for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
                const auto& d = o.distances[m];
                if (d.flags & kFlagDegenerateVariance) ++row.methods[m].degenerate;
                if (d.flags & kFlagEmptySupport) ++row.methods[m].empty_support;
                if (d.flags == kFlagNone) per_method[m].push_back(d.distance);
            }
        }
        row.coverage /= static_cast<double>(cfg.trials);
        for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
            const Summary s = summarize(per_method[m]);
            row.methods[m].mean = s.mean;
            row.methods[m].stddev = s.stddev;
            row.methods[m].used = s.n;
        }
        result.rows.push_back(std::move(row));
    }
    return result;
}

void write_sweep_csv(std::ostream& os, const SweepResult& result) {
    csv::Writer w(os);
    w.cell("rollouts").cell("coverage");
    for (Method m : result.methods) {
        w.cell(std::string(to_string(m)) + "_mean");
        w.cell(std::string(to_string(m)) + "_std");
    }
    w.cell("flags");
    w.end_row();
    for (const auto& row : result.rows) {
        w.cell(row.rollouts).cell(row.coverage);
        std::string flags;
        for (std::size_t m = 0; m < result.methods.size(); ++m) {
            const auto& s = row.methods[m];
            w.cell(s.mean).cell(s.stddev);
            auto add = [&](const char* name, std::size_t count) {
                if (count == 0) return;
                if (!flags.empty()) flags += ';';
                flags += std::string(to_string(result.methods[m])) + ":" + name + "=" + std::to_string(count);
            };
            add("degenerate_variance", s.degenerate);
            add("empty_support", s.empty_support);
        }
        w.cell(flags);
        w.end_row();
    }
}

}  // namespace srrd::harness
