#include "srrd/shaping.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "detail/feature_terms.hpp"
#include "srrd/rng.hpp"

namespace srrd {

double PotentialFn::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

PotentialFn operator+(const PotentialFn& a, const PotentialFn& b) {
    if (a.values.size() != b.values.size()) throw Error("potential sizes differ");
    PotentialFn out = a;
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += b.values[i];
    return out;
}

PotentialFn operator*(double k, const PotentialFn& p) {
    PotentialFn out = p;
    for (double& v : out.values) v *= k;
    return out;
}

PotentialFn operator-(const PotentialFn& p) { return -1.0 * p; }

std::string_view to_string(NoiseSeverity s) {
    switch (s) {
        case NoiseSeverity::none: return "none";
        case NoiseSeverity::mild: return "mild";
        case NoiseSeverity::high: return "high";
    }
    return "?";
}

NoiseSeverity parse_noise_severity(std::string_view name) {
    if (name == "none") return NoiseSeverity::none;
    if (name == "mild") return NoiseSeverity::mild;
    if (name == "high") return NoiseSeverity::high;
    throw Error("unknown noise severity `" + std::string(name) + "`");
}

namespace {

void check_shaping_args(const Space& space, const PotentialFn& phi, double gamma) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw Error("discount must lie in [0, 1], got " + std::to_string(gamma));
    if (phi.values.size() < space.state_count) {
        throw Error("potential covers " + std::to_string(phi.values.size()) + " states, space has " +
                    std::to_string(space.state_count));
    }
}

}  // namespace

RewardTable apply_shaping(const RewardTable& r, const PotentialFn& phi, double gamma) {
    check_shaping_args(r.space(), phi, gamma);
    RewardTable out = r;
    const std::size_t n = r.state_count();
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t a = 0; a < r.action_count(); ++a)
            for (std::size_t t = 0; t < n; ++t) out.at(s, a, t) += gamma * phi.values[t] - phi.values[s];
    return out;
}

RewardSample apply_shaping(const RewardSample& r, const PotentialFn& phi, double gamma) {
    check_shaping_args(r.space(), phi, gamma);
    std::vector<double> shaped(r.rewards());
    for (std::size_t i = 0; i < shaped.size(); ++i) {
        const auto& k = r.keys()[i];
        shaped[i] += gamma * phi.values[k.s_next.index] - phi.values[k.s.index];
    }
    return with_rewards(r, shaped);
}

PotentialFn gen_potential(const ShapingSpec& spec, const std::vector<FeatureVector>& state_features) {
    if (spec.kind == FunctionKind::polynomial && (spec.degree < 1 || spec.degree > 10)) {
        throw Error("polynomial degree must be in [1, 10], got " + std::to_string(spec.degree));
    }
    if (!(spec.magnitude_bound >= 0.0)) throw Error("potential magnitude bound must be non-negative");
    Rng rng(derive_seed(spec.seed, {0x9071}));
    PotentialFn phi;
    phi.values.reserve(state_features.size());
    for (const auto& f : state_features) {
        if (spec.kind == FunctionKind::random) {
            phi.values.push_back(rng.uniform(-1.0, 1.0));
            continue;
        }
        double v = 0.0;
        for (double x : f) v += rng.uniform(-1.0, 1.0) * detail::feature_term(spec.kind, x, spec.degree);
        phi.values.push_back(v);
    }
    const double raw_max = phi.max_abs();
    const double scale = raw_max > 0.0 ? spec.magnitude_bound / raw_max : 0.0;
    for (double& v : phi.values) {
        v *= scale;
        // Keep |phi| <= bound exactly despite the rounding in the product.
        v = std::clamp(v, -spec.magnitude_bound, spec.magnitude_bound);
    }
    return phi;
}

RewardSample add_noise(const RewardSample& shaped, NoiseSeverity severity, std::uint64_t seed) {
    if (shaped.empty()) throw Error("empty sample");
    if (severity == NoiseSeverity::none) return shaped;
    const double bound = (severity == NoiseSeverity::mild ? 1.0 : 5.0) * shaped.max_abs_reward();
    Rng rng(derive_seed(seed, {0x401e}));
    std::vector<double> noisy(shaped.rewards());
    for (double& r : noisy) r += rng.uniform(-bound, bound);
    return with_rewards(shaped, noisy);
}

}  // namespace srrd
