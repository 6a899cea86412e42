#include "srrd/envs.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

#include "srrd/rng.hpp"

namespace srrd {

namespace {

constexpr std::array<std::array<int, 2>, 4> kCardinal{{{0, 1}, {-1, 0}, {0, -1}, {1, 0}}};
constexpr std::array<std::array<int, 2>, 8> kCompass{{{0, 1}, {1, 1}, {1, 0}, {1, -1}, {0, -1}, {-1, -1}, {-1, 0}, {-1, 1}}};

struct Cell {
    int x;
    int y;
};

Cell step_on_grid(Cell c, std::array<int, 2> d, std::uint32_t w, std::uint32_t h) {
    const int nx = c.x + d[0];
    const int ny = c.y + d[1];
    if (nx < 0 || ny < 0 || nx >= static_cast<int>(w) || ny >= static_cast<int>(h)) return c;
    return {nx, ny};
}

std::size_t sample_action(Rng& rng, std::span<const int> weights) {
    std::array<double, 8> w{};
    for (std::size_t i = 0; i < weights.size(); ++i) w[i] = weights[i];
    return rng.weighted(std::span<const double>(w.data(), weights.size()));
}

void validate_grid(const GridworldCfg& g) {
    if (g.width == 0 || g.height == 0) throw Error("gridworld dimensions must be positive");
    const std::uint32_t n = g.width * g.height;
    if (g.start.index >= n || g.terminal.index >= n) throw Error("gridworld start/terminal outside the grid");
    if (g.start == g.terminal) throw Error("gridworld start equals terminal");
    if (!(g.epsilon >= 0.0 && g.epsilon <= 1.0)) throw Error("epsilon must lie in [0, 1]");
    if (g.horizon == 0) throw Error("horizon must be positive");
}

void validate_bouncing(const BouncingCfg& b) {
    if (b.width == 0 || b.height == 0) throw Error("bouncing-balls dimensions must be positive");
    const std::uint32_t n = b.width * b.height;
    if (b.start >= n || b.target >= n) throw Error("bouncing-balls start/target outside the grid");
    if (b.start == b.target) throw Error("bouncing-balls start equals target");
    if (b.d_bins == 0) throw Error("d_bins must be positive");
    if (!(b.danger_distance > 0.0)) throw Error("danger distance must be positive");
    if (!(b.epsilon >= 0.0 && b.epsilon <= 1.0)) throw Error("epsilon must lie in [0, 1]");
    if (b.horizon == 0) throw Error("horizon must be positive");
}

Trajectory grid_episode(const GridworldCfg& g, const StaticPolicy& policy, Rng& rng) {
    Trajectory traj;
    const std::uint32_t n = g.width * g.height;
    std::uint32_t s = g.start.index;
    for (std::uint32_t t = 0; t < g.horizon; ++t) {
        const auto a = static_cast<std::uint32_t>(sample_action(rng, policy.weights_for({s})));
        traj.steps.push_back({{s}, {a}});
        if (g.epsilon > 0.0 && rng.uniform01() < g.epsilon) {
            s = static_cast<std::uint32_t>(rng.below(n));
        } else {
            const Cell c = step_on_grid({static_cast<int>(s % g.width), static_cast<int>(s / g.width)}, kCardinal[a],
                                        g.width, g.height);
            s = static_cast<std::uint32_t>(c.y) * g.width + static_cast<std::uint32_t>(c.x);
        }
        if (s == g.terminal.index) break;
    }
    traj.final_state = {s};
    return traj;
}

double nearest_obstacle(Cell c, const std::vector<Cell>& obstacles) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& o : obstacles) best = std::min(best, std::hypot(double(c.x - o.x), double(c.y - o.y)));
    return best;
}

std::uint32_t distance_bin(const BouncingCfg& b, double dist) {
    if (!std::isfinite(dist)) return b.d_bins - 1;
    const double q = std::floor(dist / b.danger_distance);
    return static_cast<std::uint32_t>(std::min<double>(b.d_bins - 1, q));
}

Trajectory bouncing_episode(const BouncingCfg& b, const StaticPolicy& policy, Rng& rng) {
    const std::uint32_t cells = b.width * b.height;
    std::vector<Cell> obstacles;
    for (std::uint32_t i = 0; i < b.n_obstacles; ++i) {
        const auto idx = static_cast<std::uint32_t>(rng.below(cells));
        obstacles.push_back({static_cast<int>(idx % b.width), static_cast<int>(idx / b.width)});
    }
    auto state_of = [&](Cell c) {
        const std::uint32_t cell = static_cast<std::uint32_t>(c.y) * b.width + static_cast<std::uint32_t>(c.x);
        return StateId{cell * b.d_bins + distance_bin(b, nearest_obstacle(c, obstacles))};
    };

    Trajectory traj;
    Cell ball{static_cast<int>(b.start % b.width), static_cast<int>(b.start / b.width)};
    StateId s = state_of(ball);
    for (std::uint32_t t = 0; t < b.horizon; ++t) {
        auto a = static_cast<std::uint32_t>(sample_action(rng, policy.weights_for(s)));
        if (b.flee && s.index % b.d_bins == 0 && !obstacles.empty()) {
            double best = -1.0;
            for (std::uint32_t cand = 0; cand < kCompass.size(); ++cand) {
                const double d = nearest_obstacle(step_on_grid(ball, kCompass[cand], b.width, b.height), obstacles);
                if (d > best) {
                    best = d;
                    a = cand;
                }
            }
        }
        traj.steps.push_back({s, {a}});
        if (b.epsilon > 0.0 && rng.uniform01() < b.epsilon) {
            const auto idx = static_cast<std::uint32_t>(rng.below(cells));
            ball = {static_cast<int>(idx % b.width), static_cast<int>(idx / b.width)};
        } else {
            ball = step_on_grid(ball, kCompass[a], b.width, b.height);
        }
        for (auto& o : obstacles) o = step_on_grid(o, kCompass[rng.below(kCompass.size())], b.width, b.height);
        s = state_of(ball);
        if (static_cast<std::uint32_t>(ball.y) * b.width + static_cast<std::uint32_t>(ball.x) == b.target) break;
    }
    traj.final_state = s;
    return traj;
}

}  // namespace

StaticPolicy uniform_policy(std::size_t action_count) {
    StaticPolicy p;
    p.weights.assign(action_count, 0);
    // Spread 100 as evenly as possible, remainder to the last actions.
    const int base = static_cast<int>(100 / action_count);
    int rest = 100 - base * static_cast<int>(action_count);
    for (std::size_t i = action_count; i > 0; --i) {
        p.weights[i - 1] = base + (rest > 0 ? 1 : 0);
        if (rest > 0) --rest;
    }
    return p;
}

void validate_policy(const StaticPolicy& policy, std::size_t action_count, std::size_t state_count) {
    auto check = [&](std::span<const int> w, const std::string& where) {
        if (w.size() != action_count) {
            throw Error("policy" + where + " has " + std::to_string(w.size()) + " weights, expected " +
                        std::to_string(action_count));
        }
        int sum = 0;
        for (int x : w) {
            if (x < 0) throw Error("policy" + where + " has a negative weight");
            sum += x;
        }
        if (sum <= 0) throw Error("policy" + where + " has no positive weight");
    };
    if (policy.per_state.empty()) {
        check(policy.weights, "");
        return;
    }
    if (policy.per_state.size() != state_count) throw Error("per-state policy does not cover every state");
    for (std::size_t s = 0; s < policy.per_state.size(); ++s) check(policy.per_state[s], " state " + std::to_string(s));
}

Space env_space(const EnvCfg& env) {
    return std::visit(
        [](const auto& e) -> Space {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, GridworldCfg>) {
                return {std::size_t{e.width} * e.height, 4};
            } else {
                return {std::size_t{e.width} * e.height * e.d_bins, 8};
            }
        },
        env);
}

std::size_t env_action_count(const EnvCfg& env) { return env_space(env).action_count; }

FeatureMap env_features(const EnvCfg& env) {
    FeatureMap f;
    std::visit(
        [&](const auto& e) {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, GridworldCfg>) {
                for (std::uint32_t s = 0; s < e.width * e.height; ++s)
                    f.state.push_back({double(s % e.width), double(s / e.width)});
                for (const auto& d : kCardinal) f.action.push_back({double(d[0]), double(d[1])});
            } else {
                for (std::uint32_t cell = 0; cell < e.width * e.height; ++cell)
                    for (std::uint32_t d = 0; d < e.d_bins; ++d)
                        f.state.push_back({double(cell % e.width), double(cell / e.width), double(d)});
                for (const auto& d : kCompass) f.action.push_back({double(d[0]), double(d[1])});
            }
        },
        env);
    return f;
}

std::vector<StateId> goal_states(const EnvCfg& env) {
    if (const auto* g = std::get_if<GridworldCfg>(&env)) {
        validate_grid(*g);
        return {g->terminal};
    }
    const auto& b = std::get<BouncingCfg>(env);
    validate_bouncing(b);
    std::vector<StateId> out;
    for (std::uint32_t d = 0; d < b.d_bins; ++d) out.push_back({b.target * b.d_bins + d});
    return out;
}

std::size_t feasible_transition_count(const EnvCfg& env) {
    return std::visit(
        [](const auto& e) -> std::size_t {
            using T = std::decay_t<decltype(e)>;
            const Space sp = env_space(EnvCfg{e});
            if (e.epsilon > 0.0) return sp.transition_count();
            if constexpr (std::is_same_v<T, GridworldCfg>) {
                return sp.state_count * sp.action_count;
            } else {
                return sp.state_count * sp.action_count * e.d_bins;
            }
        },
        env);
}

std::vector<Trajectory> rollout(const EnvCfg& env, const StaticPolicy& policy, std::size_t n_rollouts,
                                std::uint64_t seed) {
    if (n_rollouts == 0) throw Error("rollout count must be at least 1");
    const Space sp = env_space(env);
    validate_policy(policy, sp.action_count, sp.state_count);
    std::visit(
        [](const auto& e) {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, GridworldCfg>) validate_grid(e);
            else validate_bouncing(e);
        },
        env);

    std::vector<Trajectory> out;
    out.reserve(n_rollouts);
    for (std::size_t i = 0; i < n_rollouts; ++i) {
        Rng rng(derive_seed(seed, {i}));
        out.push_back(std::visit(
            [&](const auto& e) {
                using T = std::decay_t<decltype(e)>;
                if constexpr (std::is_same_v<T, GridworldCfg>) return grid_episode(e, policy, rng);
                else return bouncing_episode(e, policy, rng);
            },
            env));
    }
    return out;
}

std::vector<TransitionKey> trajectories_to_keys(std::span<const Trajectory> trajs) {
    std::vector<TransitionKey> keys;
    for (const auto& tr : trajs)
        for (std::size_t t = 0; t < tr.steps.size(); ++t)
            keys.push_back({tr.steps[t].first, tr.steps[t].second, tr.state_after(t)});
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    return keys;
}

RewardSample sample_rewards(std::span<const TransitionKey> keys, const RewardTable& table) {
    std::vector<std::pair<TransitionKey, double>> entries;
    entries.reserve(keys.size());
    for (const auto& k : keys) {
        if (!table.space().contains(k)) throw Error("transition " + to_string(k) + " outside the table");
        entries.emplace_back(k, table.at(k));
    }
    return build_sample(entries, table.space());
}

RewardSample sample_rewards(std::span<const TransitionKey> keys, const RewardModel& model) {
    std::vector<std::pair<TransitionKey, double>> entries;
    entries.reserve(keys.size());
    for (const auto& k : keys) {
        if (!model.space().contains(k)) throw Error("transition " + to_string(k) + " outside the model space");
        entries.emplace_back(k, model(k));
    }
    return build_sample(entries, model.space());
}

void write_trajectories_csv(std::ostream& os, std::span<const Trajectory> trajs) {
    os << "traj_id,step,s,a,s_next\n";
    for (std::size_t i = 0; i < trajs.size(); ++i) {
        const auto& tr = trajs[i];
        for (std::size_t t = 0; t < tr.steps.size(); ++t) {
            os << i << ',' << t << ',' << tr.steps[t].first.index << ',' << tr.steps[t].second.index << ','
               << tr.state_after(t).index << '\n';
        }
    }
}

}  // namespace srrd
