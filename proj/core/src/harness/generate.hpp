#ifndef SRRD_HARNESS_GENERATE_HPP
#define SRRD_HARNESS_GENERATE_HPP

#include <cstdint>
#include <span>

#include "srrd/harness/config.hpp"
#include "srrd/rewards.hpp"
#include "srrd/shaping.hpp"

namespace srrd::harness::detail {

/// Ground-truth reward model; a zero degree is drawn from 1..10.
RewardModel ground_truth(const RewardCfg& cfg, const EnvCfg& env, const FeatureMap& features, std::uint64_t seed);

/// Potential of the configured family, scaled so that the mean shaping
/// magnitude is a seeded multiple (ratio_range) of the mean |R|, both
/// estimated on a fixed random subset of transitions. States in `zeroed`
/// (episode ends) get phi = 0, since no sampled transition ever leaves them.
PotentialFn scaled_potential(const ShapingCfg& cfg, const RewardModel& gt, const FeatureMap& features, double gamma,
                             std::uint64_t seed, std::span<const StateId> zeroed = {});

}  // namespace srrd::harness::detail

#endif  // SRRD_HARNESS_GENERATE_HPP
