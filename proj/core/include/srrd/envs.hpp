#ifndef SRRD_ENVS_HPP
#define SRRD_ENVS_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

#include "srrd/features.hpp"
#include "srrd/reward.hpp"
#include "srrd/rewards.hpp"

namespace srrd {

/// N x M grid, four cardinal actions. State index = y * width + x.
/// Actions: 0 north (y+1), 1 west (x-1), 2 south (y-1), 3 east (x+1).
/// Moves off the grid leave the agent in place.
struct GridworldCfg {
    std::uint32_t width = 10;
    std::uint32_t height = 10;
    /// Probability of jumping to a uniformly random state regardless of the action.
    double epsilon = 0.0;
    StateId start{0};
    StateId terminal{99};
    std::uint32_t horizon = 200;
};

/// Ball on an N x M grid with randomly moving obstacles and eight actions
/// (N, NE, E, SE, S, SW, W, NW). State index = (y * width + x) * d_bins + d,
/// where d is the quantized Euclidean distance to the nearest obstacle:
/// bin = min(d_bins - 1, floor(dist / danger_distance)).
/// `start` and `target` are cell indices (y * width + x) since d is dynamic.
struct BouncingCfg {
    std::uint32_t width = 10;
    std::uint32_t height = 10;
    std::uint32_t n_obstacles = 5;
    double danger_distance = 3.0;
    std::uint32_t d_bins = 3;
    double epsilon = 0.0;
    std::uint32_t start = 0;
    std::uint32_t target = 99;
    std::uint32_t horizon = 200;
    /// When set, a ball inside the danger distance moves away from the nearest
    /// obstacle instead of following its policy.
    bool flee = false;
};

using EnvCfg = std::variant<GridworldCfg, BouncingCfg>;

/// Integer action weights, normally summing to 100; actions are drawn in
/// proportion to them. Either one shared vector or one per state.
struct StaticPolicy {
    std::vector<int> weights;
    std::vector<std::vector<int>> per_state;

    [[nodiscard]] std::span<const int> weights_for(StateId s) const {
        return per_state.empty() ? std::span<const int>(weights) : std::span<const int>(per_state.at(s.index));
    }
};

StaticPolicy uniform_policy(std::size_t action_count);

/// Throws Error unless every weight vector is non-negative, has a positive sum, and
/// has one entry per action.
void validate_policy(const StaticPolicy& policy, std::size_t action_count, std::size_t state_count);

Space env_space(const EnvCfg& env);
std::size_t env_action_count(const EnvCfg& env);

/// State features ((x, y) or (x, y, d)) and action features (unit displacement).
FeatureMap env_features(const EnvCfg& env);

/// States that end an episode: the Gridworld terminal, or every distance bin of
/// the Bouncing Balls target cell.
std::vector<StateId> goal_states(const EnvCfg& env);

/// Number of transitions the dynamics can produce: the full cross-product when
/// epsilon > 0, otherwise only the action-adjacent ones.
std::size_t feasible_transition_count(const EnvCfg& env);

/// Trajectory i uses the stream derive_seed(seed, {i}), so the result does not
/// depend on how rollouts are scheduled. Each trajectory starts at the start
/// state and ends on reaching the terminal/target or after `horizon` steps.
std::vector<Trajectory> rollout(const EnvCfg& env, const StaticPolicy& policy, std::size_t n_rollouts,
                                std::uint64_t seed);

/// Union of all (s_t, a_t, s_{t+1}) triples, ascending and without duplicates.
std::vector<TransitionKey> trajectories_to_keys(std::span<const Trajectory> trajs);

RewardSample sample_rewards(std::span<const TransitionKey> keys, const RewardTable& table);
RewardSample sample_rewards(std::span<const TransitionKey> keys, const RewardModel& model);

/// CSV `traj_id,step,s,a,s_next`.
void write_trajectories_csv(std::ostream& os, std::span<const Trajectory> trajs);

}  // namespace srrd

#endif  // SRRD_ENVS_HPP
