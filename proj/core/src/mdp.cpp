#include "srrd/mdp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "srrd/rng.hpp"

namespace srrd {

void validate_mdp(const FiniteMdp& mdp) {
    const std::size_t n = mdp.state_count;
    const std::size_t m = mdp.action_count;
    if (n == 0 || m == 0) throw Error("mdp: empty state or action space");
    if (mdp.transition.size() != n * m * n) throw Error("mdp: transition tensor has the wrong size");
    if (mdp.initial.size() != n) throw Error("mdp: initial distribution has the wrong size");
    if (!(mdp.gamma >= 0.0 && mdp.gamma < 1.0)) throw Error("mdp: gamma must lie in [0, 1)");
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t a = 0; a < m; ++a) {
            double row = 0.0;
            for (std::size_t x = 0; x < n; ++x) {
                const double p = mdp.T(s, a, x);
                if (!(p >= 0.0)) throw Error("mdp: negative or non-finite transition probability");
                row += p;
            }
            if (std::abs(row - 1.0) > 1e-9) throw Error("mdp: transition row does not sum to 1");
        }
    }
    double d0 = 0.0;
    for (double p : mdp.initial) {
        if (!(p >= 0.0)) throw Error("mdp: negative initial probability");
        d0 += p;
    }
    if (std::abs(d0 - 1.0) > 1e-9) throw Error("mdp: initial distribution does not sum to 1");
}

namespace {

std::vector<double> dirichlet_one(Rng& rng, std::size_t n) {
    std::vector<double> v(n);
    double sum = 0.0;
    for (double& x : v) {
        x = -std::log1p(-rng.uniform01());
        sum += x;
    }
    for (double& x : v) x /= sum;
    return v;
}

void check_reward(const FiniteMdp& mdp, const RewardTable& r) {
    if (r.space() != mdp.space()) throw Error("mdp: reward table does not match the MDP's space");
}

double q_value(const FiniteMdp& mdp, const RewardTable& r, const std::vector<double>& v, std::size_t s,
               std::size_t a) {
    double q = 0.0;
    for (std::size_t x = 0; x < mdp.state_count; ++x) q += mdp.T(s, a, x) * (r.at(s, a, x) + mdp.gamma * v[x]);
    return q;
}

}  // namespace

FiniteMdp random_mdp(std::size_t states, std::size_t actions, double gamma, std::uint64_t seed) {
    Rng rng(seed);
    FiniteMdp mdp;
    mdp.state_count = states;
    mdp.action_count = actions;
    mdp.gamma = gamma;
    mdp.transition.reserve(states * actions * states);
    for (std::size_t i = 0; i < states * actions; ++i) {
        const auto row = dirichlet_one(rng, states);
        mdp.transition.insert(mdp.transition.end(), row.begin(), row.end());
    }
    mdp.initial = dirichlet_one(rng, states);
    validate_mdp(mdp);
    return mdp;
}

ValueIterationResult value_iteration(const FiniteMdp& mdp, const RewardTable& r, double tol) {
    validate_mdp(mdp);
    check_reward(mdp, r);
    if (!(tol > 0.0)) throw Error("value_iteration: tol must be positive");
    ValueIterationResult out;
    std::vector<double> v(mdp.state_count, 0.0), next(mdp.state_count);
    // Residual below tol*(1-gamma)/gamma keeps the value error itself under tol.
    const double stop = mdp.gamma > 0.0 ? tol * (1.0 - mdp.gamma) / mdp.gamma : tol;
    for (;;) {
        ++out.iterations;
        double residual = 0.0;
        for (std::size_t s = 0; s < mdp.state_count; ++s) {
            double best = q_value(mdp, r, v, s, 0);
            for (std::size_t a = 1; a < mdp.action_count; ++a) best = std::max(best, q_value(mdp, r, v, s, a));
            next[s] = best;
            residual = std::max(residual, std::abs(best - v[s]));
        }
        v.swap(next);
        if (residual < stop || residual == 0.0) break;
    }
    out.values = v;
    out.policy.action.resize(mdp.state_count);
    for (std::size_t s = 0; s < mdp.state_count; ++s) {
        std::size_t best_a = 0;
        double best = q_value(mdp, r, v, s, 0);
        for (std::size_t a = 1; a < mdp.action_count; ++a) {
            const double q = q_value(mdp, r, v, s, a);
            // Near-equal Q-values count as ties so shaped and unshaped runs agree.
            if (q > best + 1e-9 * std::max(1.0, std::abs(best))) {
                best = q;
                best_a = a;
            }
        }
        out.policy.action[s] = ActionId{static_cast<std::uint32_t>(best_a)};
    }
    return out;
}

double policy_return(const FiniteMdp& mdp, const PolicyDet& policy, const RewardTable& r) {
    validate_mdp(mdp);
    check_reward(mdp, r);
    const auto n = static_cast<Eigen::Index>(mdp.state_count);
    if (policy.action.size() != mdp.state_count) throw Error("policy_return: policy has the wrong length");
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    for (Eigen::Index s = 0; s < n; ++s) {
        const std::size_t act = policy.action[s].index;
        if (act >= mdp.action_count) throw Error("policy_return: invalid action");
        for (Eigen::Index x = 0; x < n; ++x) {
            const double p = mdp.T(s, act, x);
            a(s, x) -= mdp.gamma * p;
            b(s) += p * r.at(s, act, x);
        }
    }
    const Eigen::VectorXd v = a.partialPivLu().solve(b);
    double g = 0.0;
    for (Eigen::Index s = 0; s < n; ++s) g += mdp.initial[s] * v(s);
    return g;
}

namespace {

// max over t and transitions of D_pi(t, s, a, s') / D(s, a, s') with D uniform.
double occupancy_ratio(const FiniteMdp& mdp, const PolicyDet& policy) {
    const std::size_t n = mdp.state_count;
    const double uniform = 1.0 / static_cast<double>(n * n * mdp.action_count);
    std::vector<double> p = mdp.initial, next(n);
    double k = 0.0;
    double discount = 1.0;
    for (std::size_t t = 0; discount >= 1e-9 && t < 100000; ++t) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t s = 0; s < n; ++s) {
            const std::size_t a = policy.action[s].index;
            for (std::size_t x = 0; x < n; ++x) {
                const double mass = p[s] * mdp.T(s, a, x);
                k = std::max(k, mass / uniform);
                next[x] += mass;
            }
        }
        p.swap(next);
        discount *= mdp.gamma;
    }
    return k;
}

}  // namespace

RegretReport regret_check(const RewardTable& r_a, const RewardTable& r_b, const FiniteMdp& mdp,
                          const DistanceCfg& cfg) {
    const auto opt_a = value_iteration(mdp, r_a);
    const auto opt_b = value_iteration(mdp, r_b);
    RegretReport rep;
    rep.regret = policy_return(mdp, opt_a.policy, r_a) - policy_return(mdp, opt_b.policy, r_a);
    const DistanceResult d = reward_distance(r_a, r_b, cfg);
    rep.distance = d.distance;
    rep.flags = d.flags;
    rep.K = std::max(occupancy_ratio(mdp, opt_a.policy), occupancy_ratio(mdp, opt_b.policy));
    double sq = 0.0;
    for (double v : r_a.values()) sq += v * v;
    rep.reward_norm = std::sqrt(sq / static_cast<double>(r_a.values().size()));
    rep.bound = 32.0 * rep.K * rep.reward_norm / (1.0 - mdp.gamma) * rep.distance;
    // Regret from two optimal policies can differ from 0 by solver round-off.
    const double slack = 1e-9 * std::max(1.0, rep.reward_norm / (1.0 - mdp.gamma));
    rep.holds = rep.regret <= rep.bound + slack;
    return rep;
}

}  // namespace srrd
