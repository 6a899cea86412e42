#ifndef SRRD_SHAPING_HPP
#define SRRD_SHAPING_HPP

#include <cstdint>
#include <string_view>
#include <vector>

#include "srrd/features.hpp"
#include "srrd/reward.hpp"

namespace srrd {

/// State potential phi(s), one value per state.
struct PotentialFn {
    std::vector<double> values;

    [[nodiscard]] double operator()(StateId s) const { return values.at(s.index); }
    [[nodiscard]] double max_abs() const;
};

PotentialFn operator+(const PotentialFn& a, const PotentialFn& b);
PotentialFn operator*(double k, const PotentialFn& p);
PotentialFn operator-(const PotentialFn& p);

struct ShapingSpec {
    FunctionKind kind = FunctionKind::random;
    double magnitude_bound = 1.0;
    /// Polynomial degree, 1..10.
    int degree = 1;
    std::uint64_t seed = 0;
};

enum class NoiseSeverity { none, mild, high };

std::string_view to_string(NoiseSeverity s);
NoiseSeverity parse_noise_severity(std::string_view name);

/// R'(s,a,s') = R(s,a,s') + gamma * phi(s') - phi(s). Throws if gamma is
/// outside [0, 1] or phi does not cover the state space.
RewardTable apply_shaping(const RewardTable& r, const PotentialFn& phi, double gamma);
RewardSample apply_shaping(const RewardSample& r, const PotentialFn& phi, double gamma);

/// phi(s) = sum_i c_i f(x_i) over the state features, with coefficients drawn
/// afresh for every state (the random kind draws phi(s) directly), then
/// rescaled so that max |phi| equals magnitude_bound.
PotentialFn gen_potential(const ShapingSpec& spec, const std::vector<FeatureVector>& state_features);

/// R'' = R' + N with N uniform on [-b, b] per entry; b = 0, max|R'| or
/// 5 max|R'| for none, mild, high.
RewardSample add_noise(const RewardSample& shaped, NoiseSeverity severity, std::uint64_t seed);

}  // namespace srrd

#endif  // SRRD_SHAPING_HPP
