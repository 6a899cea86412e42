#ifndef SRRD_HARNESS_CONFIG_HPP
#define SRRD_HARNESS_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "srrd/canon.hpp"
#include "srrd/envs.hpp"
#include "srrd/features.hpp"
#include "srrd/metric.hpp"
#include "srrd/shaping.hpp"

namespace srrd::harness {

/// Rollout counts swept by default.
std::vector<std::size_t> default_rollout_counts();

/// Manual reward family. degree 0 draws the polynomial degree from 1..10
/// once per generated table.
struct RewardCfg {
    FunctionKind kind = FunctionKind::polynomial;
    int degree = 0;
    std::pair<double, double> coefficient_range{-1.0, 1.0};
};

/// Potential shaping for generated pairs. The potential is rescaled so that
/// mean |gamma phi(s') - phi(s)| is k times mean |R| with k drawn uniformly
/// from ratio_range.
struct ShapingCfg {
    /// Potential family; unset means the reward's family.
    std::optional<FunctionKind> kind;
    std::pair<double, double> ratio_range{1.0, 5.0};
};

enum class CoverageBasis { full, feasible };
std::string_view to_string(CoverageBasis c);
CoverageBasis parse_coverage_basis(std::string_view name);

struct SweepCfg {
    EnvCfg env = GridworldCfg{};
    RewardCfg reward;
    ShapingCfg shaping;
    std::vector<std::size_t> rollout_counts = default_rollout_counts();
    std::size_t trials = 50;
    double gamma = 0.7;
    std::vector<Method> methods{Method::direct, Method::epic, Method::dard, Method::srrd};
    Approximation approximation = Approximation::double_batch;
    BatchCfg batch;
    NoiseSeverity noise = NoiseSeverity::none;
    CoverageBasis coverage = CoverageBasis::full;
    std::uint64_t seed = 1;
    std::size_t threads = 0;
};

struct Figure2Cfg {
    std::uint32_t states = 8;
    double gamma = 0.5;
    double phi_bound = 20.0;
    std::size_t sims = 1000;
    /// Coverage fractions of the 8 x 1 x 8 space.
    std::vector<double> levels{1.0, 0.67, 0.23};
    std::size_t replications = 20;
    Approximation approximation = Approximation::double_batch;
    BatchCfg batch;
    std::uint64_t seed = 1;
};

struct KnnCfg {
    EnvCfg env = GridworldCfg{};
    RewardCfg reward;
    ShapingCfg shaping;
    std::vector<StaticPolicy> policies;
    std::size_t sets_per_policy = 20;
    std::size_t trajectories_per_set = 5;
    /// Discount used when shaping each set's reward; the classifier searches
    /// its own discount over `gammas`.
    double shaping_gamma = 0.9;
    double train_fraction = 0.7;
    std::vector<double> gammas{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    std::vector<std::size_t> ks{10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
    std::size_t cv_folds = 2;
    std::size_t repeats = 20;
    std::vector<Method> methods{Method::direct, Method::epic, Method::dard, Method::srrd};
    Approximation approximation = Approximation::double_batch;
    BatchCfg batch;
    std::uint64_t seed = 1;
    std::size_t threads = 0;
};

/// Random small MDPs for the regret-bound check.
struct RegretCfg {
    std::size_t cases = 100;
    std::size_t max_states = 6;
    std::size_t max_actions = 3;
    /// Planning discount; canonicalization uses the same value.
    double gamma = 0.9;
    /// Scale of the noise added to R_A for the perturbed pair.
    double perturbation = 0.1;
    std::uint64_t seed = 1;
};

/// The ten Gridworld behaviour classes (weights over north, west, south, east).
std::vector<StaticPolicy> gridworld_classes();
/// The ten Bouncing Balls classes over the eight compass actions.
std::vector<StaticPolicy> bouncing_classes();

/// Desk defaults: 10 x 10 grids, 50 trials, 20 repeats. Full scale: 20 x 20
/// grids, 200 trials, 200 repeats, 100 sets per class.
SweepCfg sweep_defaults(bool paper_scale);
KnnCfg knn_defaults(bool paper_scale);

/// Everything a config file can hold; absent blocks keep their defaults.
struct ExperimentConfig {
    SweepCfg sparsity;
    Figure2Cfg figure2;
    KnnCfg classify;
    RegretCfg regret;
    std::filesystem::path out_dir = ".";
};

/// Parses the JSON config. Unknown keys and type errors raise Error with the
/// offending field path (for example `sparsity.env.width`).
ExperimentConfig parse_config(const std::string& text, bool paper_scale);
ExperimentConfig load_config(const std::filesystem::path& path, bool paper_scale);

/// A config with the given master seed applied to every block.
void apply_seed(ExperimentConfig& cfg, std::uint64_t seed);

}  // namespace srrd::harness

#endif  // SRRD_HARNESS_CONFIG_HPP
