#include "srrd/harness/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"

namespace srrd::harness {

using nlohmann::json;

std::vector<std::size_t> default_rollout_counts() {
    return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 15, 20, 30, 40, 50, 75, 100, 200, 300, 400, 500, 1000, 2000};
}

std::string_view to_string(CoverageBasis c) { return c == CoverageBasis::full ? "full" : "feasible"; }

CoverageBasis parse_coverage_basis(std::string_view name) {
    if (name == "full") return CoverageBasis::full;
    if (name == "feasible") return CoverageBasis::feasible;
    throw Error("unknown coverage basis `" + std::string(name) + "`");
}

std::vector<StaticPolicy> gridworld_classes() {
    const std::vector<std::vector<int>> w{{25, 25, 25, 25}, {5, 5, 5, 85},   {85, 5, 5, 5},   {5, 85, 5, 5},
                                          {5, 5, 85, 5},    {5, 15, 30, 55}, {55, 30, 15, 5}, {15, 5, 55, 30},
                                          {5, 55, 30, 15},  {15, 30, 5, 55}};
    std::vector<StaticPolicy> out;
    for (const auto& v : w) out.push_back({v, {}});
    return out;
}

std::vector<StaticPolicy> bouncing_classes() {
    const std::vector<std::vector<int>> w{
        {12, 12, 12, 12, 13, 13, 13, 13}, {5, 5, 25, 25, 25, 5, 5, 5}, {25, 25, 25, 5, 5, 5, 5, 5},
        {5, 5, 5, 5, 5, 25, 25, 25},      {5, 5, 65, 5, 5, 5, 5, 5},   {5, 5, 5, 65, 5, 5, 5, 5},
        {5, 5, 5, 5, 65, 5, 5, 5},        {5, 25, 5, 25, 5, 25, 5, 5}, {20, 5, 20, 5, 20, 5, 20, 5},
        {5, 20, 5, 20, 5, 20, 5, 20}};
    std::vector<StaticPolicy> out;
    for (const auto& v : w) out.push_back({v, {}});
    return out;
}

namespace {

GridworldCfg grid(std::uint32_t side) {
    GridworldCfg g;
    g.width = side;
    g.height = side;
    g.start = StateId{0};
    g.terminal = StateId{side * side - 1};
    return g;
}

}  // namespace

SweepCfg sweep_defaults(bool paper_scale) {
    SweepCfg c;
    c.env = grid(paper_scale ? 20 : 10);
    c.trials = paper_scale ? 200 : 50;
    return c;
}

KnnCfg knn_defaults(bool paper_scale) {
    KnnCfg c;
    c.env = grid(paper_scale ? 20 : 10);
    c.policies = gridworld_classes();
    c.sets_per_policy = paper_scale ? 100 : 20;
    c.repeats = paper_scale ? 200 : 20;
    return c;
}

namespace {

// JSON view that remembers its path for error messages.
class Node {
public:
    Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

    [[nodiscard]] const std::string& path() const { return path_; }
    [[nodiscard]] const json& raw() const { return j_; }

    [[noreturn]] void fail(const std::string& what) const {
        throw Error("config: " + (path_.empty() ? std::string("<root>") : path_) + ": " + what);
    }

    void expect_object(std::initializer_list<std::string_view> allowed) const {
        if (!j_.is_object()) fail("expected an object");
        for (const auto& [key, value] : j_.items()) {
            bool ok = false;
            for (auto a : allowed) ok = ok || a == key;
            if (!ok) Node(value, join(key)).fail("unknown key");
        }
    }

    [[nodiscard]] bool has(std::string_view key) const { return j_.contains(std::string(key)); }

    [[nodiscard]] Node at(std::string_view key) const { return {j_.at(std::string(key)), join(key)}; }

    [[nodiscard]] std::vector<Node> items() const {
        if (!j_.is_array()) fail("expected an array");
        std::vector<Node> out;
        for (std::size_t i = 0; i < j_.size(); ++i) out.emplace_back(j_[i], path_ + "[" + std::to_string(i) + "]");
        return out;
    }

    [[nodiscard]] double real() const {
        if (!j_.is_number()) fail("expected a number");
        return j_.get<double>();
    }
    [[nodiscard]] std::uint64_t uint() const {
        if (!j_.is_number_unsigned() && !(j_.is_number_integer() && j_.get<long long>() >= 0)) {
            fail("expected a non-negative integer");
        }
        return j_.get<std::uint64_t>();
    }
    [[nodiscard]] std::string str() const {
        if (!j_.is_string()) fail("expected a string");
        return j_.get<std::string>();
    }
    [[nodiscard]] bool boolean() const {
        if (!j_.is_boolean()) fail("expected a boolean");
        return j_.get<bool>();
    }

    template <typename T, typename Parse>
    [[nodiscard]] T parsed(Parse&& parse) const {
        try {
            return parse(str());
        } catch (const Error& e) {
            fail(e.what());
        }
    }

private:
    [[nodiscard]] std::string join(std::string_view key) const {
        return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
    }

    const json& j_;
    std::string path_;
};

std::uint32_t u32(const Node& n) {
    const auto v = n.uint();
    if (v > 0xffffffffULL) n.fail("value too large");
    return static_cast<std::uint32_t>(v);
}

std::pair<double, double> range(const Node& n) {
    const auto v = n.items();
    if (v.size() != 2) n.fail("expected [lo, hi]");
    const std::pair<double, double> r{v[0].real(), v[1].real()};
    if (!(r.first <= r.second)) n.fail("expected lo <= hi");
    return r;
}

EnvCfg parse_env(const Node& n) {
    const std::string type = n.has("type") ? n.at("type").str() : "gridworld";
    if (type == "gridworld") {
        n.expect_object({"type", "width", "height", "epsilon", "start", "terminal", "horizon"});
        GridworldCfg g;
        if (n.has("width")) g.width = u32(n.at("width"));
        if (n.has("height")) g.height = u32(n.at("height"));
        g.start = StateId{0};
        g.terminal = StateId{g.width * g.height - 1};
        if (n.has("epsilon")) g.epsilon = n.at("epsilon").real();
        if (n.has("start")) g.start = StateId{u32(n.at("start"))};
        if (n.has("terminal")) g.terminal = StateId{u32(n.at("terminal"))};
        if (n.has("horizon")) g.horizon = u32(n.at("horizon"));
        return g;
    }
    if (type == "bouncing_balls") {
        n.expect_object({"type", "width", "height", "n_obstacles", "danger_distance", "d_bins", "epsilon", "start",
                         "target", "horizon", "flee"});
        BouncingCfg b;
        if (n.has("width")) b.width = u32(n.at("width"));
        if (n.has("height")) b.height = u32(n.at("height"));
        b.target = b.width * b.height - 1;
        if (n.has("n_obstacles")) b.n_obstacles = u32(n.at("n_obstacles"));
        if (n.has("danger_distance")) b.danger_distance = n.at("danger_distance").real();
        if (n.has("d_bins")) b.d_bins = u32(n.at("d_bins"));
        if (n.has("epsilon")) b.epsilon = n.at("epsilon").real();
        if (n.has("start")) b.start = u32(n.at("start"));
        if (n.has("target")) b.target = u32(n.at("target"));
        if (n.has("horizon")) b.horizon = u32(n.at("horizon"));
        if (n.has("flee")) b.flee = n.at("flee").boolean();
        return b;
    }
    n.at("type").fail("expected `gridworld` or `bouncing_balls`");
}

RewardCfg parse_reward(const Node& n, RewardCfg r) {
    n.expect_object({"kind", "degree", "coefficient_range"});
    if (n.has("kind")) r.kind = n.at("kind").parsed<FunctionKind>(parse_function_kind);
    if (n.has("degree")) {
        const auto d = n.at("degree").uint();
        if (d > 10) n.at("degree").fail("degree must be 0 (random) or 1..10");
        r.degree = static_cast<int>(d);
    }
    if (n.has("coefficient_range")) r.coefficient_range = range(n.at("coefficient_range"));
    return r;
}

ShapingCfg parse_shaping(const Node& n, ShapingCfg s) {
    n.expect_object({"kind", "ratio_range"});
    if (n.has("kind")) s.kind = n.at("kind").parsed<FunctionKind>(parse_function_kind);
    if (n.has("ratio_range")) s.ratio_range = range(n.at("ratio_range"));
    return s;
}

BatchCfg parse_batch(const Node& n, BatchCfg b) {
    n.expect_object({"n_m", "missing_mode", "x_sets"});
    if (n.has("n_m")) b.n_m = n.at("n_m").uint();
    if (n.has("missing_mode")) b.missing_mode = n.at("missing_mode").parsed<MissingMode>(parse_missing_mode);
    if (n.has("x_sets")) b.x_sets = n.at("x_sets").parsed<XSetMode>(parse_x_set_mode);
    return b;
}

std::vector<Method> parse_methods(const Node& n) {
    std::vector<Method> out;
    for (const auto& m : n.items()) out.push_back(m.parsed<Method>(parse_method));
    if (out.empty()) n.fail("expected at least one method");
    return out;
}

template <typename T>
std::vector<T> uint_list(const Node& n) {
    std::vector<T> out;
    for (const auto& v : n.items()) out.push_back(static_cast<T>(v.uint()));
    return out;
}

std::vector<double> real_list(const Node& n) {
    std::vector<double> out;
    for (const auto& v : n.items()) out.push_back(v.real());
    return out;
}

double gamma_value(const Node& n) {
    const double g = n.real();
    if (!(g >= 0.0 && g <= 1.0)) n.fail("gamma must lie in [0, 1]");
    return g;
}

void parse_sweep(const Node& n, SweepCfg& c) {
    n.expect_object({"env", "reward", "shaping", "rollout_counts", "trials", "gamma", "methods", "approximation",
                     "batch", "noise", "coverage", "seed", "threads"});
    if (n.has("env")) c.env = parse_env(n.at("env"));
    if (n.has("reward")) c.reward = parse_reward(n.at("reward"), c.reward);
    if (n.has("shaping")) c.shaping = parse_shaping(n.at("shaping"), c.shaping);
    if (n.has("rollout_counts")) {
        c.rollout_counts = uint_list<std::size_t>(n.at("rollout_counts"));
        for (auto r : c.rollout_counts)
            if (r == 0) n.at("rollout_counts").fail("rollout counts must be positive");
    }
    if (n.has("trials")) {
        c.trials = n.at("trials").uint();
        if (c.trials == 0) n.at("trials").fail("trials must be at least 1");
    }
    if (n.has("gamma")) c.gamma = gamma_value(n.at("gamma"));
    if (n.has("methods")) c.methods = parse_methods(n.at("methods"));
    if (n.has("approximation")) {
        c.approximation = n.at("approximation").parsed<Approximation>(parse_approximation);
        if (c.approximation == Approximation::exact) n.at("approximation").fail("sweeps work on samples");
    }
    if (n.has("batch")) c.batch = parse_batch(n.at("batch"), c.batch);
    if (n.has("noise")) c.noise = n.at("noise").parsed<NoiseSeverity>(parse_noise_severity);
    if (n.has("coverage")) c.coverage = n.at("coverage").parsed<CoverageBasis>(parse_coverage_basis);
    if (n.has("seed")) c.seed = n.at("seed").uint();
    if (n.has("threads")) c.threads = n.at("threads").uint();
}

void parse_figure2(const Node& n, Figure2Cfg& c) {
    n.expect_object({"states", "gamma", "phi_bound", "sims", "levels", "replications", "approximation", "batch",
                     "seed"});
    if (n.has("states")) c.states = u32(n.at("states"));
    if (n.has("gamma")) c.gamma = gamma_value(n.at("gamma"));
    if (n.has("phi_bound")) c.phi_bound = n.at("phi_bound").real();
    if (n.has("sims")) c.sims = n.at("sims").uint();
    if (n.has("levels")) c.levels = real_list(n.at("levels"));
    for (double l : c.levels)
        if (!(l > 0.0 && l <= 1.0)) n.fail("coverage levels must lie in (0, 1]");
    if (n.has("replications")) c.replications = n.at("replications").uint();
    if (n.has("approximation")) {
        c.approximation = n.at("approximation").parsed<Approximation>(parse_approximation);
        if (c.approximation == Approximation::exact) n.at("approximation").fail("figure2 works on samples");
    }
    if (n.has("batch")) c.batch = parse_batch(n.at("batch"), c.batch);
    if (n.has("seed")) c.seed = n.at("seed").uint();
}

void parse_knn(const Node& n, KnnCfg& c) {
    n.expect_object({"env", "reward", "shaping", "policies", "sets_per_policy", "trajectories_per_set",
                     "shaping_gamma", "train_fraction", "gammas", "ks", "cv_folds", "repeats", "methods", "approximation", "batch",
                     "seed", "threads"});
    if (n.has("env")) {
        c.env = parse_env(n.at("env"));
        if (!n.has("policies")) {
            c.policies = std::holds_alternative<GridworldCfg>(c.env) ? gridworld_classes() : bouncing_classes();
        }
    }
    if (n.has("reward")) c.reward = parse_reward(n.at("reward"), c.reward);
    if (n.has("shaping")) c.shaping = parse_shaping(n.at("shaping"), c.shaping);
    if (n.has("policies")) {
        c.policies.clear();
        for (const auto& p : n.at("policies").items()) {
            StaticPolicy pol;
            for (const auto& w : p.items()) pol.weights.push_back(static_cast<int>(w.uint()));
            try {
                validate_policy(pol, env_action_count(c.env), env_space(c.env).state_count);
            } catch (const Error& e) {
                p.fail(e.what());
            }
            c.policies.push_back(std::move(pol));
        }
    }
    if (n.has("sets_per_policy")) c.sets_per_policy = n.at("sets_per_policy").uint();
    if (n.has("trajectories_per_set")) c.trajectories_per_set = n.at("trajectories_per_set").uint();
    if (n.has("shaping_gamma")) {
        c.shaping_gamma = n.at("shaping_gamma").real();
        if (!(c.shaping_gamma >= 0.0 && c.shaping_gamma <= 1.0)) n.at("shaping_gamma").fail("must lie in [0, 1]");
    }
    if (n.has("train_fraction")) {
        c.train_fraction = n.at("train_fraction").real();
        if (!(c.train_fraction > 0.0 && c.train_fraction < 1.0)) n.at("train_fraction").fail("must lie in (0, 1)");
    }
    if (n.has("gammas")) {
        c.gammas.clear();
        for (const auto& g : n.at("gammas").items()) c.gammas.push_back(gamma_value(g));
    }
    if (n.has("ks")) c.ks = uint_list<std::size_t>(n.at("ks"));
    if (n.has("cv_folds")) {
        c.cv_folds = n.at("cv_folds").uint();
        if (c.cv_folds < 2) n.at("cv_folds").fail("need at least two folds");
    }
    if (n.has("repeats")) c.repeats = n.at("repeats").uint();
    if (n.has("methods")) c.methods = parse_methods(n.at("methods"));
    if (n.has("approximation")) {
        c.approximation = n.at("approximation").parsed<Approximation>(parse_approximation);
        if (c.approximation == Approximation::exact) n.at("approximation").fail("classification works on samples");
    }
    if (n.has("batch")) c.batch = parse_batch(n.at("batch"), c.batch);
    if (n.has("seed")) c.seed = n.at("seed").uint();
    if (n.has("threads")) c.threads = n.at("threads").uint();
}

void parse_regret(const Node& n, RegretCfg& c) {
    n.expect_object({"cases", "max_states", "max_actions", "gamma", "perturbation", "seed"});
    if (n.has("cases")) c.cases = n.at("cases").uint();
    if (n.has("max_states")) {
        c.max_states = n.at("max_states").uint();
        if (c.max_states < 2) n.at("max_states").fail("need at least 2 states");
    }
    if (n.has("max_actions")) {
        c.max_actions = n.at("max_actions").uint();
        if (c.max_actions < 1) n.at("max_actions").fail("need at least 1 action");
    }
    if (n.has("gamma")) {
        c.gamma = n.at("gamma").real();
        if (!(c.gamma >= 0.0 && c.gamma < 1.0)) n.at("gamma").fail("gamma must lie in [0, 1)");
    }
    if (n.has("perturbation")) c.perturbation = n.at("perturbation").real();
    if (n.has("seed")) c.seed = n.at("seed").uint();
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, bool paper_scale) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(std::string("config: invalid JSON: ") + e.what());
    }
    ExperimentConfig cfg;
    cfg.sparsity = sweep_defaults(paper_scale);
    cfg.classify = knn_defaults(paper_scale);
    const Node root(j, "");
    root.expect_object({"seed", "out_dir", "sparsity", "figure2", "classify", "regret"});
    if (root.has("seed")) apply_seed(cfg, root.at("seed").uint());
    if (root.has("out_dir")) cfg.out_dir = root.at("out_dir").str();
    if (root.has("sparsity")) parse_sweep(root.at("sparsity"), cfg.sparsity);
    if (root.has("figure2")) parse_figure2(root.at("figure2"), cfg.figure2);
    if (root.has("classify")) parse_knn(root.at("classify"), cfg.classify);
    if (root.has("regret")) parse_regret(root.at("regret"), cfg.regret);
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path, bool paper_scale) {
    std::ifstream in(path);
    if (!in) throw Error("config: cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), paper_scale);
}

void apply_seed(ExperimentConfig& cfg, std::uint64_t seed) {
    cfg.sparsity.seed = seed;
    cfg.figure2.seed = seed;
    cfg.classify.seed = seed;
    cfg.regret.seed = seed;
}

}  // namespace srrd::harness
