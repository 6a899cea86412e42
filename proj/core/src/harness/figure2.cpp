#include "srrd/harness/figure2.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "srrd/csv.hpp"
#include "srrd/harness/stats.hpp"
#include "srrd/rng.hpp"

namespace srrd::harness {

namespace {

constexpr TransitionKey kProbe{{0}, {0}, {1}};

// Every state keeps the same number of distinct successors, round(level * n);
// state 0 always keeps state 1 among them.
RewardSample draw_graph(std::uint32_t n, double level, std::uint64_t seed) {
    const auto k = std::clamp<std::uint32_t>(static_cast<std::uint32_t>(std::lround(level * n)), 1, n);
    Rng rng(seed);
    std::vector<std::pair<TransitionKey, double>> entries;
    for (std::uint32_t s = 0; s < n; ++s) {
        std::vector<std::uint32_t> targets;
        for (std::uint32_t t = 0; t < n; ++t)
            if (!(s == 0 && t == 1)) targets.push_back(t);
        rng.shuffle(targets);
        if (s == 0) targets.insert(targets.begin(), 1);
        for (std::uint32_t i = 0; i < k; ++i) entries.push_back({{{s}, {0}, {targets[i]}}, 0.0});
    }
    return build_sample(entries, Space{n, 1});
}

}  // namespace

Figure2Result run_figure2(const Figure2Cfg& cfg) {
    if (cfg.states < 2) throw Error("figure2: need at least 2 states");
    if (cfg.sims < 2) throw Error("figure2: need at least 2 simulations");
    for (double level : cfg.levels)
        if (!(level > 0.0 && level <= 1.0)) throw Error("figure2: coverage levels must lie in (0, 1]");

    Figure2Result result;
    result.methods = {Method::epic, Method::dard, Method::srrd};
    std::vector<FeatureVector> state_features(cfg.states, FeatureVector{0.0});

    for (std::size_t rep = 0; rep < cfg.replications; ++rep) {
        for (std::size_t li = 0; li < cfg.levels.size(); ++li) {
            const std::uint64_t seed = derive_seed(cfg.seed, {0xf2, rep, li});
            std::vector<std::vector<double>> values(result.methods.size());
            Figure2Row row;
            row.replication = rep;
            row.level = cfg.levels[li];
            row.empty_terms.assign(result.methods.size(), 0);
            for (std::size_t sim = 0; sim < cfg.sims; ++sim) {
                const RewardSample graph = draw_graph(cfg.states, cfg.levels[li], derive_seed(seed, {1, sim}));
                const auto probe = static_cast<std::size_t>(
                    std::lower_bound(graph.keys().begin(), graph.keys().end(), kProbe) - graph.keys().begin());
                row.coverage += coverage(graph);
                ShapingSpec spec;
                spec.kind = FunctionKind::random;
                spec.magnitude_bound = cfg.phi_bound;
                spec.seed = derive_seed(seed, {2, sim});
                const PotentialFn phi = gen_potential(spec, state_features);
                std::vector<double> rewards;
                rewards.reserve(graph.size());
                for (const auto& k : graph.keys()) rewards.push_back(1.0 + cfg.gamma * phi(k.s_next) - phi(k.s));
                const RewardSample r = with_rewards(graph, rewards);

                DistanceCfg dcfg;
                dcfg.gamma = cfg.gamma;
                dcfg.approximation = cfg.approximation;
                dcfg.batch = cfg.batch;
                dcfg.batch.batch_seed = derive_seed(seed, {3, sim});
                for (std::size_t m = 0; m < result.methods.size(); ++m) {
                    dcfg.method = result.methods[m];
                    const CanonResult c = canonicalize(r, dcfg);
                    values[m].push_back(c.values[probe]);
                    row.empty_terms[m] += c.stats.empty_terms;
                }
            }
            row.coverage /= static_cast<double>(cfg.sims);
            for (const auto& v : values) {
                const Summary s = summarize(v);
                row.mean.push_back(s.mean);
                row.stddev.push_back(s.stddev);
            }
            result.rows.push_back(std::move(row));
        }
    }
    return result;
}

void write_figure2_csv(std::ostream& os, const Figure2Result& result) {
    csv::Writer w(os);
    w.cell("replication").cell("level").cell("coverage");
    for (Method m : result.methods) {
        w.cell(std::string(to_string(m)) + "_mean");
        w.cell(std::string(to_string(m)) + "_std");
    }
    w.cell("flags");
    w.end_row();
    for (const auto& row : result.rows) {
        w.cell(row.replication).cell(row.level).cell(row.coverage);
        std::string flags;
        for (std::size_t m = 0; m < result.methods.size(); ++m) {
            w.cell(row.mean[m]).cell(row.stddev[m]);
            if (row.empty_terms[m] == 0) continue;
            if (!flags.empty()) flags += ';';
            flags += std::string(to_string(result.methods[m])) + ":empty_terms=" + std::to_string(row.empty_terms[m]);
        }
        w.cell(flags);
        w.end_row();
    }
}

}  // namespace srrd::harness
