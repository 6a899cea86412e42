#ifndef SRRD_REWARDS_HPP
#define SRRD_REWARDS_HPP

#include <cstdint>
#include <functional>
#include <utility>

#include "srrd/features.hpp"
#include "srrd/reward.hpp"

namespace srrd {

/// Manual reward family. Coefficients (one per feature) are drawn fresh for
/// every transition from coefficient_range; `random` draws the reward itself.
struct RewardSpec {
    FunctionKind kind = FunctionKind::polynomial;
    /// Polynomial degree, shared by the whole table. 1..10.
    int degree = 1;
    std::uint64_t coefficient_seed = 0;
    std::pair<double, double> coefficient_range{-1.0, 1.0};
};

using FeatureExtractor = std::function<TransitionFeatures(const TransitionKey&)>;

/// Deterministic reward function defined by a spec and a feature extractor.
/// Each transition's coefficients come from a counter-based stream keyed by the
/// transition, so any single value can be evaluated without building the table.
class RewardModel {
public:
    RewardModel(RewardSpec spec, Space space, FeatureExtractor features);

    [[nodiscard]] double operator()(const TransitionKey& k) const;
    [[nodiscard]] const Space& space() const { return space_; }
    [[nodiscard]] const RewardSpec& spec() const { return spec_; }

private:
    RewardSpec spec_;
    Space space_;
    FeatureExtractor features_;
};

/// Evaluates the model on every transition. Throws Error if a polynomial
/// degree is outside [1, 10].
RewardTable make_reward_table(const RewardSpec& spec, Space space, const FeatureExtractor& features);

}  // namespace srrd

#endif  // SRRD_REWARDS_HPP
