#ifndef SRRD_REWARD_HPP
#define SRRD_REWARD_HPP

#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "srrd/types.hpp"

namespace srrd {

/// Dense reward function over the whole S x A x S space.
class RewardTable {
public:
    RewardTable() = default;
    RewardTable(Space space, std::vector<double> values);
    /// All-zero table.
    explicit RewardTable(Space space);

    [[nodiscard]] const Space& space() const { return space_; }
    [[nodiscard]] std::size_t state_count() const { return space_.state_count; }
    [[nodiscard]] std::size_t action_count() const { return space_.action_count; }

    [[nodiscard]] double at(std::size_t s, std::size_t a, std::size_t s_next) const {
        return values_[index(s, a, s_next)];
    }
    [[nodiscard]] double at(const TransitionKey& k) const { return at(k.s.index, k.a.index, k.s_next.index); }
    double& at(std::size_t s, std::size_t a, std::size_t s_next) { return values_[index(s, a, s_next)]; }

    [[nodiscard]] std::span<const double> values() const { return values_; }

    /// Every transition in lexicographic order.
    [[nodiscard]] std::vector<TransitionKey> keys() const;

private:
    [[nodiscard]] std::size_t index(std::size_t s, std::size_t a, std::size_t s_next) const {
        return (s * space_.action_count + a) * space_.state_count + s_next;
    }

    Space space_;
    std::vector<double> values_;
};

/// A sampled outgoing edge: action taken, state reached, reward observed.
struct OutEdge {
    ActionId a;
    StateId s_next;
    double reward;
};

/// Incoming edge, used for set queries driven by the destination side.
struct InEdge {
    StateId s;
    ActionId a;
    double reward;
};

/// Partial reward function restricted to the sampled transitions, plus the
/// index sets derived from them. Immutable after construction.
class RewardSample {
public:
    RewardSample() = default;

    [[nodiscard]] const Space& space() const { return space_; }
    [[nodiscard]] std::size_t size() const { return keys_.size(); }
    [[nodiscard]] bool empty() const { return keys_.empty(); }

    /// Keys in ascending order, aligned with rewards().
    [[nodiscard]] const std::vector<TransitionKey>& keys() const { return keys_; }
    [[nodiscard]] const std::vector<double>& rewards() const { return rewards_; }

    [[nodiscard]] std::optional<double> find(const TransitionKey& k) const;
    [[nodiscard]] bool contains(const TransitionKey& k) const { return find(k).has_value(); }

    /// States appearing anywhere in the sample (as s or s'), ascending.
    [[nodiscard]] const std::vector<StateId>& sampled_states() const { return sampled_states_; }
    [[nodiscard]] const std::vector<ActionId>& sampled_actions() const { return sampled_actions_; }
    /// States with at least one outgoing sampled transition.
    [[nodiscard]] const std::vector<StateId>& initiators() const { return initiators_; }
    /// States reached by some transition but never left.
    [[nodiscard]] const std::vector<StateId>& terminals() const { return terminals_; }
    /// States that appear as s' of any transition.
    [[nodiscard]] const std::vector<StateId>& all_successors() const { return all_successors_; }

    /// Distinct successors of `s`, ascending. Empty for unseen states.
    [[nodiscard]] std::span<const StateId> successors(StateId s) const;
    [[nodiscard]] std::span<const OutEdge> outgoing(StateId s) const;
    [[nodiscard]] std::span<const InEdge> incoming(StateId s) const;

    [[nodiscard]] bool is_initiator(StateId s) const { return !outgoing(s).empty(); }
    [[nodiscard]] bool is_terminal(StateId s) const;

    [[nodiscard]] double max_abs_reward() const;

    friend RewardSample build_sample(std::span<const std::pair<TransitionKey, double>> transitions, Space space);

private:
    Space space_;
    std::vector<TransitionKey> keys_;
    std::vector<double> rewards_;

    std::vector<StateId> sampled_states_;
    std::vector<ActionId> sampled_actions_;
    std::vector<StateId> initiators_;
    std::vector<StateId> terminals_;
    std::vector<StateId> all_successors_;

    // CSR adjacency indexed by state.
    std::vector<std::size_t> succ_offsets_;
    std::vector<StateId> succ_;
    std::vector<std::size_t> out_offsets_;
    std::vector<OutEdge> out_;
    std::vector<std::size_t> in_offsets_;
    std::vector<InEdge> in_;
};

/// Builds a sample. Duplicate keys keep the first value. Throws Error on an
/// empty input, an out-of-range key, or a non-finite reward.
RewardSample build_sample(std::span<const std::pair<TransitionKey, double>> transitions, Space space);
RewardSample build_sample(const std::vector<std::pair<TransitionKey, double>>& transitions, Space space);

/// Sample with new reward values on the same keys (values aligned with keys()).
RewardSample with_rewards(const RewardSample& sample, std::span<const double> rewards);

/// Sample covering every transition of a table.
RewardSample full_sample(const RewardTable& table);

/// Sorted intersection of the two key sets.
std::vector<TransitionKey> common_support(const RewardSample& a, const RewardSample& b);

/// |entries| / |S x A x S|.
double coverage(const RewardSample& sample);
/// |entries| / feasible_count, for callers that know how many transitions are realizable.
double coverage(const RewardSample& sample, std::size_t feasible_count);

/// CSV with header `s,a,s_next,reward`, rows in key order.
void write_sample_csv(std::ostream& os, const RewardSample& sample);
/// Inverse of write_sample_csv. The ambient space must be supplied since the
/// CSV only lists sampled keys.
RewardSample read_sample_csv(std::istream& is, Space space);

}  // namespace srrd

#endif  // SRRD_REWARD_HPP
