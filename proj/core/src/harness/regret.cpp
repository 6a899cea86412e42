#include "srrd/harness/regret.hpp"

#include <ostream>

#include "srrd/csv.hpp"
#include "srrd/rng.hpp"
#include "srrd/shaping.hpp"

namespace srrd::harness {

std::string_view to_string(PairKind k) {
    switch (k) {
        case PairKind::independent: return "independent";
        case PairKind::perturbed: return "perturbed";
        case PairKind::shaped: return "shaped";
    }
    return "?";
}

namespace {

RewardTable uniform_table(Space space, Rng& rng) {
    std::vector<double> v(space.transition_count());
    for (double& x : v) x = rng.uniform(-1.0, 1.0);
    return RewardTable(space, std::move(v));
}

}  // namespace

std::vector<RegretCase> run_regret(const RegretCfg& cfg) {
    if (cfg.max_states < 2 || cfg.max_actions < 1) throw Error("regret: need at least 2 states and 1 action");
    DistanceCfg dcfg;
    dcfg.method = Method::srrd;
    dcfg.gamma = cfg.gamma;
    dcfg.approximation = Approximation::exact;

    std::vector<RegretCase> out;
    for (std::size_t i = 0; i < cfg.cases; ++i) {
        const std::uint64_t seed = derive_seed(cfg.seed, {0x4e, i});
        Rng rng(derive_seed(seed, {0}));
        const std::size_t states = 2 + rng.below(cfg.max_states - 1);
        const std::size_t actions = 1 + rng.below(cfg.max_actions);
        const FiniteMdp mdp = random_mdp(states, actions, cfg.gamma, derive_seed(seed, {1}));
        const Space space = mdp.space();
        const RewardTable r_a = uniform_table(space, rng);

        std::vector<double> noisy(r_a.values().begin(), r_a.values().end());
        for (double& x : noisy) x += rng.uniform(-cfg.perturbation, cfg.perturbation);
        PotentialFn phi;
        for (std::size_t s = 0; s < states; ++s) phi.values.push_back(rng.uniform(-5.0, 5.0));

        const std::pair<PairKind, RewardTable> pairs[] = {
            {PairKind::independent, uniform_table(space, rng)},
            {PairKind::perturbed, RewardTable(space, std::move(noisy))},
            {PairKind::shaped, apply_shaping(r_a, phi, cfg.gamma)},
        };
        for (const auto& [kind, r_b] : pairs) {
            out.push_back({i, kind, states, actions, regret_check(r_a, r_b, mdp, dcfg)});
        }
    }
    return out;
}

void write_regret_csv(std::ostream& os, const std::vector<RegretCase>& cases) {
    csv::Writer w(os);
    for (const char* h : {"case", "kind", "states", "actions", "regret", "bound", "distance", "K", "reward_norm", "holds",
                          "flags"})
        w.cell(h);
    w.end_row();
    for (const auto& c : cases) {
        const auto& r = c.report;
        w.cell(c.index).cell(to_string(c.kind)).cell(c.states).cell(c.actions);
        w.cell(r.regret).cell(r.bound).cell(r.distance).cell(r.K).cell(r.reward_norm);
        w.cell(r.holds ? "true" : "false").cell(flags_to_string(r.flags));
        w.end_row();
    }
}

}  // namespace srrd::harness
