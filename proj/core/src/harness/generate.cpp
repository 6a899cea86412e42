#include "generate.hpp"

#include <cmath>

#include "srrd/rng.hpp"

namespace srrd::harness::detail {

RewardModel ground_truth(const RewardCfg& cfg, const EnvCfg& env, const FeatureMap& features, std::uint64_t seed) {
    Rng rng(derive_seed(seed, {0xde6}));
    RewardSpec spec;
    spec.kind = cfg.kind;
    spec.degree = cfg.degree > 0 ? cfg.degree : 1 + static_cast<int>(rng.below(10));
    spec.coefficient_seed = derive_seed(seed, {0xc0ef});
    spec.coefficient_range = cfg.coefficient_range;
    return RewardModel(spec, env_space(env), [features](const TransitionKey& k) { return features(k); });
}

PotentialFn scaled_potential(const ShapingCfg& cfg, const RewardModel& gt, const FeatureMap& features, double gamma,
                             std::uint64_t seed, std::span<const StateId> zeroed) {
    constexpr std::size_t kProbe = 4096;
    constexpr int kRetries = 16;
    const Space space = gt.space();
    Rng rng(derive_seed(seed, {0x5ca1e}));
    std::vector<TransitionKey> probe;
    if (space.transition_count() <= kProbe) {
        probe.reserve(space.transition_count());
        for (std::uint32_t s = 0; s < space.state_count; ++s)
            for (std::uint32_t a = 0; a < space.action_count; ++a)
                for (std::uint32_t x = 0; x < space.state_count; ++x) probe.push_back({{s}, {a}, {x}});
    } else {
        for (std::size_t i = 0; i < kProbe; ++i) {
            probe.push_back({{static_cast<std::uint32_t>(rng.below(space.state_count))},
                             {static_cast<std::uint32_t>(rng.below(space.action_count))},
                             {static_cast<std::uint32_t>(rng.below(space.state_count))}});
        }
    }
    double mean_r = 0.0;
    for (const auto& k : probe) mean_r += std::abs(gt(k));
    mean_r /= static_cast<double>(probe.size());

    const double ratio = rng.uniform(cfg.ratio_range.first, cfg.ratio_range.second);
    ShapingSpec spec;
    spec.kind = cfg.kind.value_or(gt.spec().kind);
    spec.degree = gt.spec().degree;
    spec.magnitude_bound = 1.0;
    for (int attempt = 0; attempt < kRetries; ++attempt) {
        spec.seed = derive_seed(seed, {0x9e7, static_cast<std::uint64_t>(attempt)});
        PotentialFn phi = gen_potential(spec, features.state);
        for (StateId z : zeroed) phi.values.at(z.index) = 0.0;
        double mean_f = 0.0;
        for (const auto& k : probe) mean_f += std::abs(gamma * phi(k.s_next) - phi(k.s));
        mean_f /= static_cast<double>(probe.size());
        if (mean_f > 1e-12) return (ratio * mean_r / mean_f) * phi;
    }
    // Every draw was flat: gamma = 1 with a constant potential, or a one-state space.
    return PotentialFn{std::vector<double>(space.state_count, 0.0)};
}

}  // namespace srrd::harness::detail
