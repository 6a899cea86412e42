#ifndef SRRD_TYPES_HPP
#define SRRD_TYPES_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace srrd {

/// Raised for contract violations on inputs (bad indices, empty samples,
/// malformed configs). The message names the offending value.
class Error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct StateId {
    std::uint32_t index = 0;

    friend constexpr auto operator<=>(StateId, StateId) = default;
};

struct ActionId {
    std::uint32_t index = 0;

    friend constexpr auto operator<=>(ActionId, ActionId) = default;
};

/// (s, a, s') with lexicographic ordering.
struct TransitionKey {
    StateId s;
    ActionId a;
    StateId s_next;

    friend constexpr auto operator<=>(const TransitionKey&, const TransitionKey&) = default;
};

std::string to_string(const TransitionKey& key);

/// Sizes of a finite S x A x S transition space.
struct Space {
    std::size_t state_count = 0;
    std::size_t action_count = 0;

    [[nodiscard]] std::size_t transition_count() const {
        return state_count * state_count * action_count;
    }
    [[nodiscard]] bool contains(const TransitionKey& k) const {
        return k.s.index < state_count && k.s_next.index < state_count && k.a.index < action_count;
    }

    friend bool operator==(const Space&, const Space&) = default;
};

/// One episode: (s_t, a_t) pairs followed by the state reached after the last action.
struct Trajectory {
    std::vector<std::pair<StateId, ActionId>> steps;
    StateId final_state;

    [[nodiscard]] StateId state_after(std::size_t t) const {
        return t + 1 < steps.size() ? steps[t + 1].first : final_state;
    }
};

}  // namespace srrd

#endif  // SRRD_TYPES_HPP
