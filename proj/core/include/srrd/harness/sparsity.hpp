#ifndef SRRD_HARNESS_SPARSITY_HPP
#define SRRD_HARNESS_SPARSITY_HPP

#include <iosfwd>
#include <map>
#include <vector>

#include "srrd/harness/config.hpp"

namespace srrd::harness {

struct MethodStats {
    double mean = 0.0;
    double stddev = 0.0;
    /// Trials entering the mean (flagged trials are left out).
    std::size_t used = 0;
    std::size_t degenerate = 0;
    std::size_t empty_support = 0;
};

struct SweepRow {
    std::size_t rollouts = 0;
    double coverage = 0.0;
    /// Aligned with SweepCfg::methods.
    std::vector<MethodStats> methods;
};

struct SweepResult {
    std::vector<Method> methods;
    std::vector<SweepRow> rows;
};

/// For each rollout count and trial: draw a ground-truth reward and a shaped
/// copy, sample each from an independent batch of rollouts, and measure every
/// method's distance on the common support.
SweepResult run_sparsity(const SweepCfg& cfg);

/// Columns: rollouts, coverage, then `<METHOD>_mean,<METHOD>_std` per method,
/// then flags (`METHOD:flag=count` joined by `;`).
void write_sweep_csv(std::ostream& os, const SweepResult& result);

}  // namespace srrd::harness

#endif  // SRRD_HARNESS_SPARSITY_HPP
