#ifndef SRRD_FEATURES_HPP
#define SRRD_FEATURES_HPP

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "srrd/types.hpp"

namespace srrd {

/// Functional family used for both manual rewards and shaping potentials.
enum class FunctionKind { linear, polynomial, sinusoidal, random };

std::string_view to_string(FunctionKind kind);
/// Throws Error for unknown names.
FunctionKind parse_function_kind(std::string_view name);

using FeatureVector = std::vector<double>;

/// Feature views of the three parts of a transition.
struct TransitionFeatures {
    FeatureVector state;
    FeatureVector action;
    FeatureVector next_state;
};

/// Feature extractor for the environments: state features indexed by state,
/// action features indexed by action.
struct FeatureMap {
    std::vector<FeatureVector> state;
    std::vector<FeatureVector> action;

    [[nodiscard]] TransitionFeatures operator()(const TransitionKey& k) const {
        return {state.at(k.s.index), action.at(k.a.index), state.at(k.s_next.index)};
    }
};

}  // namespace srrd

#endif  // SRRD_FEATURES_HPP
