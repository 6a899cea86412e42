#include "srrd/rewards.hpp"

#include <cmath>
#include <string>

#include "detail/feature_terms.hpp"
#include "srrd/rng.hpp"

namespace srrd {

namespace {

// Counter-based uniform draw: the j-th coefficient of transition `index`.
double coefficient(std::uint64_t seed, std::uint64_t index, std::uint64_t j, std::pair<double, double> range) {
    const std::uint64_t bits = derive_seed(seed, {index, j});
    const double u = static_cast<double>(bits >> 11) * 0x1.0p-53;
    return range.first + (range.second - range.first) * u;
}

}  // namespace

RewardModel::RewardModel(RewardSpec spec, Space space, FeatureExtractor features)
    : spec_(spec), space_(space), features_(std::move(features)) {
    if (spec_.kind == FunctionKind::polynomial && (spec_.degree < 1 || spec_.degree > 10)) {
        throw Error("polynomial degree must be in [1, 10], got " + std::to_string(spec_.degree));
    }
    if (!(spec_.coefficient_range.first <= spec_.coefficient_range.second)) {
        throw Error("coefficient range must satisfy lo <= hi");
    }
}

double RewardModel::operator()(const TransitionKey& k) const {
    const std::uint64_t index =
        (static_cast<std::uint64_t>(k.s.index) * space_.action_count + k.a.index) * space_.state_count +
        k.s_next.index;
    if (spec_.kind == FunctionKind::random) return coefficient(spec_.coefficient_seed, index, 0, spec_.coefficient_range);

    const TransitionFeatures f = features_(k);
    double r = 0.0;
    std::uint64_t j = 0;
    for (const auto* part : {&f.state, &f.action, &f.next_state}) {
        for (double x : *part) {
            r += coefficient(spec_.coefficient_seed, index, j++, spec_.coefficient_range) *
                 detail::feature_term(spec_.kind, x, spec_.degree);
        }
    }
    return r;
}

RewardTable make_reward_table(const RewardSpec& spec, Space space, const FeatureExtractor& features) {
    const RewardModel model(spec, space, features);
    std::vector<double> values;
    values.reserve(space.transition_count());
    for (std::uint32_t s = 0; s < space.state_count; ++s)
        for (std::uint32_t a = 0; a < space.action_count; ++a)
            for (std::uint32_t t = 0; t < space.state_count; ++t) values.push_back(model({{s}, {a}, {t}}));
    return RewardTable(space, std::move(values));
}

}  // namespace srrd
