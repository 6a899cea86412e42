#ifndef SRRD_HARNESS_FIGURE2_HPP
#define SRRD_HARNESS_FIGURE2_HPP

#include <iosfwd>
#include <vector>

#include "srrd/harness/config.hpp"

namespace srrd::harness {

/// Spread of the canonical value at the probe transition (state 0 -> state 1)
/// across potential draws, for one replication and one coverage level.
struct Figure2Row {
    std::size_t replication = 0;
    double level = 0.0;
    /// Realised coverage, averaged over simulations.
    double coverage = 0.0;
    /// EPIC, DARD, SRRD in that order.
    std::vector<double> mean;
    std::vector<double> stddev;
    /// Terms that found no defined reward, summed over all simulations.
    std::vector<std::size_t> empty_terms;
};

struct Figure2Result {
    std::vector<Method> methods;
    std::vector<Figure2Row> rows;
};

/// Rewards are R(s_i, a, s_j) = 1 + gamma phi(s_j) - phi(s_i) on a one-action
/// space. Every simulation draws a fresh sample in which each state has
/// round(level * states) distinct successors (state 0 always reaches state 1)
/// and a fresh random potential with |phi| <= phi_bound.
Figure2Result run_figure2(const Figure2Cfg& cfg);

/// Columns: replication, level, coverage, `<METHOD>_mean,<METHOD>_std` per
/// method, flags (`METHOD:empty_terms=count`).
void write_figure2_csv(std::ostream& os, const Figure2Result& result);

}  // namespace srrd::harness

#endif  // SRRD_HARNESS_FIGURE2_HPP
