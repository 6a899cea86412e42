#ifndef SRRD_HARNESS_REGRET_HPP
#define SRRD_HARNESS_REGRET_HPP

#include <iosfwd>
#include <string_view>
#include <vector>

#include "srrd/harness/config.hpp"
#include "srrd/mdp.hpp"

namespace srrd::harness {

/// independent: R_B drawn independently of R_A. perturbed: R_A plus uniform
/// noise. shaped: R_A shaped by a random potential.
enum class PairKind { independent, perturbed, shaped };
std::string_view to_string(PairKind k);

struct RegretCase {
    std::size_t index = 0;
    PairKind kind = PairKind::independent;
    std::size_t states = 0;
    std::size_t actions = 0;
    RegretReport report;
};

/// Every case draws an MDP with 2..max_states states and 1..max_actions
/// actions, a uniform random R_A, and checks all three pair kinds with exact
/// SRRD at the MDP's discount.
std::vector<RegretCase> run_regret(const RegretCfg& cfg);

/// Columns: case, kind, states, actions, regret, bound, distance, K,
/// reward_norm, holds, flags.
void write_regret_csv(std::ostream& os, const std::vector<RegretCase>& cases);

}  // namespace srrd::harness

#endif  // SRRD_HARNESS_REGRET_HPP
