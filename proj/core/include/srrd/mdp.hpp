#ifndef SRRD_MDP_HPP
#define SRRD_MDP_HPP

#include <cstdint>
#include <vector>

#include "srrd/metric.hpp"
#include "srrd/reward.hpp"

namespace srrd {

/// Finite MDP with dense dynamics T(s, a, s') stored like RewardTable.
struct FiniteMdp {
    std::size_t state_count = 0;
    std::size_t action_count = 0;
    std::vector<double> transition;
    std::vector<double> initial;
    double gamma = 0.9;

    [[nodiscard]] Space space() const {
        return {static_cast<std::uint32_t>(state_count), static_cast<std::uint32_t>(action_count)};
    }
    [[nodiscard]] double T(std::size_t s, std::size_t a, std::size_t s_next) const {
        return transition[(s * action_count + a) * state_count + s_next];
    }
};

/// Throws Error if shapes are inconsistent, rows or d0 do not sum to 1
/// within 1e-9, or gamma is outside [0, 1).
void validate_mdp(const FiniteMdp& mdp);

/// Dirichlet(1) rows and a Dirichlet(1) initial distribution.
FiniteMdp random_mdp(std::size_t states, std::size_t actions, double gamma, std::uint64_t seed);

struct PolicyDet {
    std::vector<ActionId> action;
};

struct ValueIterationResult {
    std::vector<double> values;
    PolicyDet policy;
    std::size_t iterations = 0;
};

/// Q(s,a) = sum_s' T (R + gamma V(s')). Stops once the sup-norm Bellman
/// residual drops below tol; ties in the greedy policy go to the lowest action.
ValueIterationResult value_iteration(const FiniteMdp& mdp, const RewardTable& r, double tol = 1e-12);

/// E_{s0 ~ d0}[sum_t gamma^t R] for a deterministic policy, by solving the
/// linear Bellman system exactly.
double policy_return(const FiniteMdp& mdp, const PolicyDet& policy, const RewardTable& r);

struct RegretReport {
    double regret = 0.0;
    double bound = 0.0;
    double distance = 0.0;
    /// max over t, transitions and both optimal policies of D_pi(t, .) / D(.).
    double K = 0.0;
    /// sqrt(E_D[R_A^2]) with D uniform over S x A x S.
    double reward_norm = 0.0;
    bool holds = false;
    /// Distance flags from the metric; flagged cases are reported separately.
    unsigned flags = kFlagNone;
};

/// Regret of executing pi*_B under R_A against 32 K ||R_A|| / (1 - gamma) * D,
/// with D the distance under cfg (typically SRRD, exact). The discount of
/// the MDP is used for planning; cfg.gamma for canonicalization.
RegretReport regret_check(const RewardTable& r_a, const RewardTable& r_b, const FiniteMdp& mdp,
                          const DistanceCfg& cfg);

}  // namespace srrd

#endif  // SRRD_MDP_HPP
