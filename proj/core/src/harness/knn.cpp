#include "srrd/harness/knn.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>

#include "generate.hpp"
#include "srrd/csv.hpp"
#include "srrd/harness/pool.hpp"
#include "srrd/rng.hpp"

namespace srrd::harness {

namespace {

struct Neighbour {
    double distance;
    std::size_t label;
    std::size_t index;
};

// `sorted` is ordered by (distance, index).
std::size_t vote_sorted(std::span<const Neighbour> sorted, std::size_t k) {
    std::map<std::size_t, std::pair<std::size_t, double>> tally;  // label -> (votes, distance sum)
    for (std::size_t i = 0; i < k; ++i) {
        auto& [votes, sum] = tally[sorted[i].label];
        ++votes;
        sum += sorted[i].distance;
    }
    std::size_t best = tally.begin()->first;
    for (const auto& [label, t] : tally) {
        const auto& b = tally[best];
        const double mean = t.second / static_cast<double>(t.first);
        const double best_mean = b.second / static_cast<double>(b.first);
        if (t.first > b.first || (t.first == b.first && mean < best_mean)) best = label;
    }
    return best;
}

std::vector<Neighbour> sorted_neighbours(std::span<const double> distances, std::span<const std::size_t> labels,
                                         std::span<const std::size_t> refs) {
    std::vector<Neighbour> out;
    out.reserve(refs.size());
    for (std::size_t r : refs) out.push_back({distances[r], labels[r], r});
    std::sort(out.begin(), out.end(), [](const Neighbour& a, const Neighbour& b) {
        return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
    });
    return out;
}

std::size_t majority(std::span<const std::size_t> labels, std::span<const std::size_t> refs) {
    std::map<std::size_t, std::size_t> count;
    for (std::size_t r : refs) ++count[labels[r]];
    return std::max_element(count.begin(), count.end(), [](const auto& a, const auto& b) { return a.second < b.second; })
        ->first;
}

// Distances from every item (train then test) to every train item.
struct DistanceBlock {
    std::vector<double> d;
    std::vector<char> usable;
    std::size_t cols = 0;
    [[nodiscard]] std::span<const double> row(std::size_t i) const { return {d.data() + i * cols, cols}; }
    [[nodiscard]] bool any_usable(std::size_t i, std::span<const std::size_t> refs) const {
        return std::any_of(refs.begin(), refs.end(), [&](std::size_t r) { return usable[i * cols + r] != 0; });
    }
};

DistanceBlock distances_to_train(const std::vector<const RewardSample*>& items, std::size_t n_train, const KnnCfg& cfg,
                                 Method method, double gamma, std::uint64_t seed) {
    std::vector<CanonResult> canon;
    canon.reserve(items.size());
    DistanceCfg dcfg;
    dcfg.method = method;
    dcfg.gamma = gamma;
    dcfg.approximation = cfg.approximation;
    dcfg.batch = cfg.batch;
    for (std::size_t i = 0; i < items.size(); ++i) {
        dcfg.batch.batch_seed = derive_seed(seed, {i});
        canon.push_back(canonicalize(*items[i], dcfg));
    }
    DistanceBlock block;
    block.cols = n_train;
    block.d.assign(items.size() * n_train, 1.0);
    block.usable.assign(items.size() * n_train, 0);
    for (std::size_t i = 0; i < items.size(); ++i) {
        for (std::size_t j = 0; j < n_train; ++j) {
            if (i == j) continue;
            if (j < i && i < n_train) {
                block.d[i * n_train + j] = block.d[j * n_train + i];
                block.usable[i * n_train + j] = block.usable[j * n_train + i];
                continue;
            }
            const DistanceResult r = canonical_distance(canon[i], canon[j]);
            block.d[i * n_train + j] = r.distance;
            block.usable[i * n_train + j] = (r.flags & kFlagEmptySupport) == 0;
        }
    }
    return block;
}

}  // namespace

std::size_t knn_vote(std::span<const double> distances, std::span<const std::size_t> labels, std::size_t k) {
    if (distances.size() != labels.size()) throw Error("knn_vote: distances and labels differ in length");
    if (k == 0 || k > distances.size()) throw Error("knn_vote: k must lie in [1, number of references]");
    std::vector<std::size_t> refs(distances.size());
    std::iota(refs.begin(), refs.end(), 0);
    return vote_sorted(sorted_neighbours(distances, labels, refs), k);
}

KnnOutcome classify_split(const std::vector<KnnItem>& train, const std::vector<KnnItem>& test, const KnnCfg& cfg,
                          Method method, std::uint64_t seed) {
    if (train.empty() || test.empty()) throw Error("classify: empty train or test set");
    if (cfg.ks.empty() || cfg.gammas.empty()) throw Error("classify: empty hyperparameter grid");
    if (cfg.cv_folds < 2 || cfg.cv_folds > train.size()) throw Error("classify: cv_folds must lie in [2, train size]");

    std::vector<const RewardSample*> items;
    std::vector<std::size_t> labels;
    for (const auto* set : {&train, &test}) {
        for (const auto& it : *set) {
            items.push_back(&it.sample);
            labels.push_back(it.label);
        }
    }
    const std::size_t n_train = train.size();
    std::vector<double> gammas = cfg.gammas;
    if (method == Method::direct) gammas.resize(1);

    std::vector<std::vector<std::size_t>> fold_refs(cfg.cv_folds);
    for (std::size_t f = 0; f < cfg.cv_folds; ++f)
        for (std::size_t j = 0; j < n_train; ++j)
            if (j % cfg.cv_folds != f) fold_refs[f].push_back(j);

    KnnChoice best;
    best.cv_accuracy = -1.0;
    std::vector<DistanceBlock> blocks;
    for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
        blocks.push_back(distances_to_train(items, n_train, cfg, method, gammas[gi], derive_seed(seed, {gi})));
        const DistanceBlock& block = blocks.back();
        std::vector<std::size_t> correct(cfg.ks.size(), 0);
        std::vector<char> feasible(cfg.ks.size(), 1);
        for (std::size_t i = 0; i < n_train; ++i) {
            const auto& refs = fold_refs[i % cfg.cv_folds];
            const auto sorted = sorted_neighbours(block.row(i), labels, refs);
            const bool usable = block.any_usable(i, refs);
            for (std::size_t ki = 0; ki < cfg.ks.size(); ++ki) {
                const std::size_t k = cfg.ks[ki];
                if (k == 0 || k > refs.size()) {
                    feasible[ki] = 0;
                    continue;
                }
                const std::size_t predicted = usable ? vote_sorted(sorted, k) : majority(labels, refs);
                if (predicted == labels[i]) ++correct[ki];
            }
        }
        for (std::size_t ki = 0; ki < cfg.ks.size(); ++ki) {
            if (!feasible[ki]) continue;
            const double acc = static_cast<double>(correct[ki]) / static_cast<double>(n_train);
            if (acc > best.cv_accuracy) best = {gammas[gi], cfg.ks[ki], acc};
        }
    }
    if (best.cv_accuracy < 0.0) throw Error("classify: every k exceeds the cross-validation reference set");

    const auto gi = static_cast<std::size_t>(std::find(gammas.begin(), gammas.end(), best.gamma) - gammas.begin());
    const DistanceBlock& block = blocks[gi];
    std::vector<std::size_t> all_train(n_train);
    std::iota(all_train.begin(), all_train.end(), 0);
    const std::size_t global = majority(labels, all_train);

    KnnOutcome out;
    out.choice = best;
    std::size_t correct = 0;
    for (std::size_t t = 0; t < test.size(); ++t) {
        const std::size_t i = n_train + t;
        std::size_t predicted = global;
        if (block.any_usable(i, all_train)) {
            predicted = vote_sorted(sorted_neighbours(block.row(i), labels, all_train), best.k);
        } else {
            ++out.no_neighbour;
        }
        if (predicted == labels[i]) ++correct;
    }
    out.accuracy = static_cast<double>(correct) / static_cast<double>(test.size());
    return out;
}

KnnResult run_knn(const KnnCfg& cfg) {
    if (cfg.policies.size() < 2) throw Error("classify: need at least two policy classes");
    if (cfg.sets_per_policy == 0 || cfg.trajectories_per_set == 0) throw Error("classify: empty trajectory sets");
    if (cfg.repeats == 0) throw Error("classify: repeats must be at least 1");
    if (cfg.methods.empty()) throw Error("classify: no methods");
    const std::size_t n_items = cfg.policies.size() * cfg.sets_per_policy;
    const auto n_train = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::lround(cfg.train_fraction * static_cast<double>(n_items))), 1, n_items - 1);
    for (std::size_t k : cfg.ks)
        if (k > n_train) throw Error("classify: k = " + std::to_string(k) + " exceeds the training set size");
    for (const auto& p : cfg.policies) validate_policy(p, env_action_count(cfg.env), env_space(cfg.env).state_count);

    const FeatureMap features = env_features(cfg.env);
    const std::vector<StateId> goals = goal_states(cfg.env);
    KnnResult result;
    for (Method m : cfg.methods) result.methods.push_back({m, std::vector<KnnOutcome>(cfg.repeats), {}});

    parallel_for(cfg.repeats, cfg.threads, [&](std::size_t rep) {
        const std::uint64_t seed = derive_seed(cfg.seed, {0xcc, rep});
        std::vector<KnnItem> items;
        items.reserve(n_items);
        for (std::size_t c = 0; c < cfg.policies.size(); ++c) {
            const RewardModel gt = detail::ground_truth(cfg.reward, cfg.env, features, derive_seed(seed, {1, c}));
            for (std::size_t j = 0; j < cfg.sets_per_policy; ++j) {
                const auto trajs = rollout(cfg.env, cfg.policies[c], cfg.trajectories_per_set, derive_seed(seed, {2, c, j}));
                const RewardSample sample = sample_rewards(trajectories_to_keys(trajs), gt);
                const PotentialFn phi = detail::scaled_potential(cfg.shaping, gt, features, cfg.shaping_gamma,
                                                                 derive_seed(seed, {3, c, j}), goals);
                items.push_back({apply_shaping(sample, phi, cfg.shaping_gamma), c});
            }
        }
        Rng rng(derive_seed(seed, {4}));
        rng.shuffle(items);
        const std::vector<KnnItem> train(items.begin(), items.begin() + static_cast<std::ptrdiff_t>(n_train));
        const std::vector<KnnItem> test(items.begin() + static_cast<std::ptrdiff_t>(n_train), items.end());
        for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
            result.methods[m].repeats[rep] = classify_split(train, test, cfg, cfg.methods[m], derive_seed(seed, {5}));
        }
    });

    for (auto& mr : result.methods) {
        std::vector<double> acc;
        for (const auto& o : mr.repeats) acc.push_back(o.accuracy);
        mr.accuracy = summarize(acc);
    }
    return result;
}

void write_knn_csv(std::ostream& os, const KnnResult& result) {
    csv::Writer w(os);
    w.cell("method").cell("repeat").cell("accuracy").cell("gamma").cell("k").cell("cv_accuracy").cell("flags");
    w.end_row();
    for (const auto& mr : result.methods) {
        for (std::size_t r = 0; r < mr.repeats.size(); ++r) {
            const auto& o = mr.repeats[r];
            w.cell(to_string(mr.method)).cell(r).cell(o.accuracy).cell(o.choice.gamma).cell(o.choice.k);
            w.cell(o.choice.cv_accuracy);
            w.cell(o.no_neighbour > 0 ? "no_neighbour=" + std::to_string(o.no_neighbour) : std::string());
            w.end_row();
        }
    }
}

void write_knn_summary_csv(std::ostream& os, const KnnResult& result) {
    csv::Writer w(os);
    w.cell("method").cell("mean").cell("std").cell("n");
    for (const auto& mr : result.methods) {
        w.cell("t_vs_" + std::string(to_string(mr.method)));
        w.cell("p_vs_" + std::string(to_string(mr.method)));
    }
    w.end_row();
    auto accuracies = [](const KnnMethodResult& mr) {
        std::vector<double> v;
        for (const auto& o : mr.repeats) v.push_back(o.accuracy);
        return v;
    };
    for (const auto& a : result.methods) {
        w.cell(to_string(a.method)).cell(a.accuracy.mean).cell(a.accuracy.stddev).cell(a.accuracy.n);
        for (const auto& b : result.methods) {
            if (&a == &b) {
                w.cell("").cell("");
                continue;
            }
            try {
                const WelchResult t = welch_t_test(accuracies(a), accuracies(b));
                w.cell(t.t).cell(t.p_one_sided);
            } catch (const Error&) {
                w.cell("").cell("");
            }
        }
        w.end_row();
    }
}

}  // namespace srrd::harness
