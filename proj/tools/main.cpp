#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "srrd/harness/config.hpp"
#include "srrd/harness/figure2.hpp"
#include "srrd/harness/knn.hpp"
#include "srrd/harness/regret.hpp"
#include "srrd/harness/sparsity.hpp"
#include "srrd/metric.hpp"

namespace fs = std::filesystem;
using namespace srrd;
using namespace srrd::harness;

namespace {

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    bool paper_scale = false;
    std::optional<std::size_t> threads;
};

ExperimentConfig load(const Common& c) {
    ExperimentConfig cfg = c.config.empty() ? parse_config("{}", c.paper_scale) : load_config(c.config, c.paper_scale);
    if (c.seed) apply_seed(cfg, *c.seed);
    if (!c.out_dir.empty()) cfg.out_dir = c.out_dir;
    if (c.threads) {
        cfg.sparsity.threads = *c.threads;
        cfg.classify.threads = *c.threads;
    }
    return cfg;
}

std::ofstream open_output(const fs::path& dir, const std::string& name) {
    fs::create_directories(dir);
    const fs::path path = dir / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    std::cout << path.string() << '\n';
    return out;
}

// Optional string overrides applied only when the flag was given.
struct BatchFlags {
    std::string approximation, missing_mode, x_sets;
    std::optional<std::size_t> n_m;

    void add(CLI::App* app) {
        app->add_option("--approximation", approximation, "double_batch or unbiased");
        app->add_option("--missing-mode", missing_mode, "zero_fill or renormalize (double_batch)");
        app->add_option("--x-sets", x_sets, "batch_pairs or batch_actions (double_batch)");
        app->add_option("--n-m", n_m, "state-action batch size; 0 = every explored pair");
    }
    void apply(Approximation& a, BatchCfg& b) const {
        if (!approximation.empty()) a = parse_approximation(approximation);
        if (!missing_mode.empty()) b.missing_mode = parse_missing_mode(missing_mode);
        if (!x_sets.empty()) b.x_sets = parse_x_set_mode(x_sets);
        if (n_m) b.n_m = *n_m;
    }
};

std::vector<Method> parse_method_list(const std::vector<std::string>& names) {
    std::vector<Method> out;
    for (const auto& n : names) out.push_back(parse_method(n));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reward-function comparison: canonicalization, distances and experiment drivers."};
    app.require_subcommand(1);
    Common common;
    app.add_option("--config", common.config, "JSON experiment config")->check(CLI::ExistingFile);
    app.add_option("--seed", common.seed, "master seed for every driver");
    app.add_option("--out-dir", common.out_dir, "directory for CSV output");
    app.add_flag("--paper-scale", common.paper_scale, "use the full-scale experiment sizes");
    app.add_option("--threads", common.threads, "worker threads; 0 = hardware concurrency");

    // sparsity
    auto* sp = app.add_subcommand("sparsity", "coverage sweep: distance between a reward and its shaped copy");
    BatchFlags sp_batch;
    sp_batch.add(sp);
    std::optional<double> sp_eps;
    std::optional<std::size_t> sp_trials;
    std::string sp_kind, sp_noise, sp_basis;
    sp->add_option("--epsilon", sp_eps, "random-jump probability of the environment");
    sp->add_option("--trials", sp_trials, "trials per rollout count");
    sp->add_option("--reward-kind", sp_kind, "linear, polynomial, sinusoidal or random");
    sp->add_option("--noise", sp_noise, "none, mild or high");
    sp->add_option("--coverage-basis", sp_basis, "full (|S x A x S|) or feasible");

    // figure2
    auto* f2 = app.add_subcommand("figure2", "spread of one canonical value under random potentials");
    BatchFlags f2_batch;
    f2_batch.add(f2);
    std::optional<std::size_t> f2_reps, f2_sims;
    f2->add_option("--replications", f2_reps, "independent replications per coverage level");
    f2->add_option("--sims", f2_sims, "random potentials per replication");

    // classify
    auto* cl = app.add_subcommand("classify", "k-NN behaviour classification from reward samples");
    BatchFlags cl_batch;
    cl_batch.add(cl);
    std::optional<std::size_t> cl_repeats;
    std::vector<std::string> cl_methods;
    cl->add_option("--repeats", cl_repeats, "train/test resplits");
    cl->add_option("--methods", cl_methods, "subset of DIRECT EPIC DARD SRRD");

    // distance
    auto* di = app.add_subcommand("distance", "distance between reward-sample CSVs (s,a,s_next,reward)");
    BatchFlags di_batch;
    di_batch.add(di);
    std::vector<std::string> di_files;
    std::uint32_t di_states = 0, di_actions = 0;
    std::string di_method = "SRRD";
    double di_gamma = 0.7;
    di->add_option("files", di_files, "two or more sample CSVs")->required()->expected(2, -1)->check(CLI::ExistingFile);
    di->add_option("--states", di_states, "state count of the ambient space")->required();
    di->add_option("--actions", di_actions, "action count of the ambient space")->required();
    di->add_option("--method", di_method, "DIRECT, EPIC, DARD or SRRD");
    di->add_option("--gamma", di_gamma, "discount used by the canonicalization");

    // regret-check
    auto* rc = app.add_subcommand("regret-check", "regret bound check on random small MDPs");
    std::optional<std::size_t> rc_cases;
    rc->add_option("--cases", rc_cases, "random MDPs per pair kind");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sp) {
            ExperimentConfig cfg = load(common);
            SweepCfg& s = cfg.sparsity;
            sp_batch.apply(s.approximation, s.batch);
            if (s.approximation == Approximation::exact) throw Error("sweeps work on samples");
            if (sp_eps) std::visit([&](auto& e) { e.epsilon = *sp_eps; }, s.env);
            if (sp_trials) s.trials = *sp_trials;
            if (!sp_kind.empty()) s.reward.kind = parse_function_kind(sp_kind);
            if (!sp_noise.empty()) s.noise = parse_noise_severity(sp_noise);
            if (!sp_basis.empty()) s.coverage = parse_coverage_basis(sp_basis);
            auto out = open_output(cfg.out_dir, "sparsity.csv");
            write_sweep_csv(out, run_sparsity(s));
        } else if (*f2) {
            ExperimentConfig cfg = load(common);
            Figure2Cfg& f = cfg.figure2;
            f2_batch.apply(f.approximation, f.batch);
            if (f.approximation == Approximation::exact) throw Error("figure2 works on samples");
            if (f2_reps) f.replications = *f2_reps;
            if (f2_sims) f.sims = *f2_sims;
            auto out = open_output(cfg.out_dir, "figure2.csv");
            write_figure2_csv(out, run_figure2(f));
        } else if (*cl) {
            ExperimentConfig cfg = load(common);
            KnnCfg& k = cfg.classify;
            cl_batch.apply(k.approximation, k.batch);
            if (k.approximation == Approximation::exact) throw Error("classification works on samples");
            if (cl_repeats) k.repeats = *cl_repeats;
            if (!cl_methods.empty()) k.methods = parse_method_list(cl_methods);
            const KnnResult result = run_knn(k);
            auto out = open_output(cfg.out_dir, "classify.csv");
            write_knn_csv(out, result);
            auto summary = open_output(cfg.out_dir, "classify_summary.csv");
            write_knn_summary_csv(summary, result);
        } else if (*di) {
            const Space space{di_states, di_actions};
            std::vector<RewardSample> samples;
            for (const auto& f : di_files) {
                std::ifstream in(f);
                samples.push_back(read_sample_csv(in, space));
            }
            DistanceCfg dcfg;
            dcfg.method = parse_method(di_method);
            dcfg.gamma = di_gamma;
            di_batch.apply(dcfg.approximation, dcfg.batch);
            if (dcfg.approximation == Approximation::exact) throw Error("distance works on samples");
            if (common.seed) dcfg.batch.batch_seed = *common.seed;
            std::vector<CanonResult> canon;
            for (const auto& s : samples) canon.push_back(canonicalize(s, dcfg));
            if (samples.size() == 2) {
                const DistanceResult r = canonical_distance(canon[0], canon[1]);
                std::cout << "distance,support,flags\n"
                          << r.distance << ',' << r.support << ',' << flags_to_string(r.flags) << '\n';
            } else {
                std::vector<std::vector<double>> matrix(samples.size(), std::vector<double>(samples.size(), 0.0));
                for (std::size_t i = 0; i < samples.size(); ++i)
                    for (std::size_t j = i + 1; j < samples.size(); ++j)
                        matrix[i][j] = matrix[j][i] = canonical_distance(canon[i], canon[j]).distance;
                write_distance_matrix_csv(std::cout, di_files, matrix);
            }
        } else if (*rc) {
            ExperimentConfig cfg = load(common);
            if (rc_cases) cfg.regret.cases = *rc_cases;
            const auto cases = run_regret(cfg.regret);
            auto out = open_output(cfg.out_dir, "regret.csv");
            write_regret_csv(out, cases);
            std::size_t held = 0;
            for (const auto& c : cases) held += c.report.holds ? 1 : 0;
            std::cout << held << " of " << cases.size() << " pairs satisfy the bound\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
