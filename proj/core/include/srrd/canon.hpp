#ifndef SRRD_CANON_HPP
#define SRRD_CANON_HPP

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <utility>
#include <vector>

#include "srrd/reward.hpp"

namespace srrd {

enum class Method { direct, epic, dard, srrd };

std::string_view to_string(Method m);
/// Accepts DIRECT/EPIC/DARD/SRRD in any case.
Method parse_method(std::string_view name);

/// How expectation terms treat transitions that are not in the sample.
enum class MissingMode {
    /// Missing rewards count as 0; the denominator is the full term size.
    zero_fill,
    /// Average over defined rewards only; a term with none contributes 0.
    renormalize,
};

std::string_view to_string(MissingMode m);
MissingMode parse_missing_mode(std::string_view name);

/// How the per-transition state-action sets are formed from the batch.
enum class XSetMode {
    /// Batch pairs (x, u) whose state x lies in the derived state set.
    batch_pairs,
    /// Every derived state paired with every action present in the batch.
    batch_actions,
};

std::string_view to_string(XSetMode m);
XSetMode parse_x_set_mode(std::string_view name);

/// Double-batch settings: the state-action batch B_M is drawn without
/// replacement from sampled_states x sampled_actions.
struct BatchCfg {
    /// Batch size; 0 means every available pair.
    std::size_t n_m = 0;
    std::uint64_t batch_seed = 0;
    MissingMode missing_mode = MissingMode::renormalize;
    XSetMode x_sets = XSetMode::batch_pairs;
};

/// State sets used by the sparsity-resilient canonicalization of one transition.
///   s1: successors of s'            s2: non-terminal successors of s
///   s3: every state with an outgoing transition
///   s4: successors of s3            s5: successors of s1     s6: successors of s2
struct SrrdSets {
    std::vector<StateId> s1, s2, s3, s4, s5, s6;
};

/// Counters for the work done by a canonicalization call.
struct CanonStats {
    /// Reward entries visited while summing expectation terms.
    std::size_t reward_visits = 0;
    /// Terms whose state-action set was empty (contributed 0).
    std::size_t empty_terms = 0;
    /// |B_M| for double-batch runs.
    std::size_t batch_size = 0;
};

struct CanonResult {
    std::vector<TransitionKey> keys;
    std::vector<double> values;
    Method method = Method::direct;
    double gamma = 0.0;
    CanonStats stats;
};

/// Default guard on |S x A x S| for exact canonicalization.
inline constexpr std::size_t kExactTransitionCap = std::size_t{1} << 22;

/// Exact canonicalization of a full table with uniform state and action
/// distributions over the whole space. Throws Error if gamma is outside
/// [0, 1] or the table exceeds `cap` (use canon_sampled instead).
CanonResult canon_exact(const RewardTable& table, Method method, double gamma,
                        std::size_t cap = kExactTransitionCap);

/// Throws Error if `key` is not in the sample.
SrrdSets derive_srrd_sets(const RewardSample& sample, const TransitionKey& key);

/// The batch B_M used by canon_sampled, in draw order.
std::vector<std::pair<StateId, ActionId>> draw_state_action_batch(const RewardSample& sample, const BatchCfg& batch);

/// Double-batch approximation over every key of the sample (B_V = sample).
CanonResult canon_sampled(const RewardSample& sample, Method method, double gamma, const BatchCfg& batch = {});

/// Approximation where each term is the mean reward of the sampled
/// transitions matching that term's state sets; no batch involved.
CanonResult canon_unbiased(const RewardSample& sample, Method method, double gamma);

/// CSV `s,a,s_next,canonical_value`.
void write_canon_csv(std::ostream& os, const CanonResult& result);

}  // namespace srrd

#endif  // SRRD_CANON_HPP
