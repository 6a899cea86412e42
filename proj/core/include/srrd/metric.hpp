#ifndef SRRD_METRIC_HPP
#define SRRD_METRIC_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "srrd/canon.hpp"
#include "srrd/reward.hpp"
#include "srrd/shaping.hpp"

namespace srrd {

/// Bit flags attached to distance results and propagated into output files.
enum DistanceFlag : unsigned {
    kFlagNone = 0,
    /// A compared vector had zero variance; the distance was set to 0.5.
    kFlagDegenerateVariance = 1U << 0,
    /// Fewer than two common transitions; the distance was set to 1.0.
    kFlagEmptySupport = 1U << 1,
};

/// `|`-separated flag names, or empty for kFlagNone.
std::string flags_to_string(unsigned flags);

struct PearsonResult {
    double distance = 0.0;
    double rho = 0.0;
    unsigned flags = kFlagNone;
};

/// sqrt(1 - rho) / sqrt(2) with a two-pass covariance. Throws Error on a
/// length mismatch or fewer than two entries.
PearsonResult pearson(std::span<const double> x, std::span<const double> y);
double pearson_distance(std::span<const double> x, std::span<const double> y);

enum class Approximation { exact, double_batch, unbiased };
std::string_view to_string(Approximation a);
Approximation parse_approximation(std::string_view name);

struct DistanceCfg {
    Method method = Method::srrd;
    double gamma = 0.7;
    Approximation approximation = Approximation::double_batch;
    BatchCfg batch;
};

struct DistanceResult {
    double distance = 0.0;
    std::size_t support = 0;
    unsigned flags = kFlagNone;
};

/// Canonical values for a sample under cfg (exact is rejected for samples).
CanonResult canonicalize(const RewardSample& sample, const DistanceCfg& cfg);

/// Pearson distance of two canonical vectors over their common keys. Fewer
/// than two common keys give 1.0 with kFlagEmptySupport.
DistanceResult canonical_distance(const CanonResult& a, const CanonResult& b);

/// Canonicalize both inputs, restrict to their common support and take the
/// Pearson distance.
DistanceResult reward_distance(const RewardSample& a, const RewardSample& b, const DistanceCfg& cfg);
/// Tables use canon_exact under Approximation::exact and are otherwise
/// treated as full-coverage samples.
DistanceResult reward_distance(const RewardTable& a, const RewardTable& b, const DistanceCfg& cfg);

/// Relative shaping error bounds for a sample and a family of potentials.
struct RseReport {
    double M = 0.0;
    double Z = 0.0;
    struct Bounds {
        double srrd = 0.0;
        double dard = 0.0;
        double epic = 0.0;
    } bounds;
};

/// M is taken over the sample's states only. Throws Error when every reward
/// in the sample is zero or a potential misses a sampled state.
RseReport rse_report(const RewardSample& unshaped, std::span<const PotentialFn> potentials);

/// Square matrix CSV: header `id,<id_0>,...`, then one row per id.
void write_distance_matrix_csv(std::ostream& os, std::span<const std::string> ids,
                               std::span<const std::vector<double>> matrix);

}  // namespace srrd

#endif  // SRRD_METRIC_HPP
