// Runs the nine acceptance checks and prints one PASS/FAIL line each.
// Usage: srrd_acceptance [--criterion N]... ; exit status is the number of failures.
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "srrd/canon.hpp"
#include "srrd/harness/config.hpp"
#include "srrd/harness/figure2.hpp"
#include "srrd/harness/knn.hpp"
#include "srrd/harness/regret.hpp"
#include "srrd/harness/sparsity.hpp"
#include "srrd/harness/stats.hpp"
#include "srrd/metric.hpp"
#include "srrd/shaping.hpp"

using namespace srrd;
using namespace srrd::harness;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

RewardTable random_table(std::mt19937_64& rng, std::size_t n, std::size_t na) {
    std::uniform_real_distribution<double> d(-10.0, 10.0);
    std::vector<double> v(n * n * na);
    for (auto& x : v) x = d(rng);
    return RewardTable(Space{n, na}, std::move(v));
}

PotentialFn random_phi(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> d(-20.0, 20.0);
    PotentialFn p;
    for (std::size_t i = 0; i < n; ++i) p.values.push_back(d(rng));
    return p;
}

double max_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

constexpr Method kCanonical[] = {Method::epic, Method::dard, Method::srrd};

// 1: exact SRRD is unchanged by potential shaping.
Outcome shaping_invariance() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(101);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const std::size_t n = 2 + rng() % 11, na = 1 + rng() % 4;
        const double g = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        const auto r = random_table(rng, n, na);
        const auto shaped = apply_shaping(r, random_phi(rng, n), g);
        worst = std::max(worst, max_diff(canon_exact(r, Method::srrd, g).values,
                                         canon_exact(shaped, Method::srrd, g).values));
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    return {worst < 1e-9 && secs < 30.0,
            "200 triples up to 12x4, max |dC| = " + fmt("%.2e", worst) + ", " + fmt("%.2f", secs) + " s"};
}

// 2: the three methods agree on full tables and are idempotent.
Outcome equivalence_idempotence() {
    std::mt19937_64 rng(202);
    double agree = 0.0, idem = 0.0;
    for (int i = 0; i < 100; ++i) {
        const std::size_t n = 2 + rng() % 9, na = 1 + rng() % 4;
        const double g = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        const auto r = random_table(rng, n, na);
        const auto epic = canon_exact(r, Method::epic, g);
        for (auto m : kCanonical) {
            const auto c = canon_exact(r, m, g);
            agree = std::max(agree, max_diff(c.values, epic.values));
            const auto cc = canon_exact(RewardTable(r.space(), c.values), m, g);
            idem = std::max(idem, max_diff(cc.values, c.values));
        }
    }
    return {agree < 1e-9 && idem < 1e-9,
            "100 tables, max method gap " + fmt("%.2e", agree) + ", max |C(C(R)) - C(R)| " + fmt("%.2e", idem)};
}

// 3: spread of the probe value under random potentials.
Outcome figure2() {
    const Figure2Cfg cfg;  // 8 states, gamma 0.5, |phi| <= 20, 1000 sims, 20 replications
    const auto r = run_figure2(cfg);
    double full_std = 0.0;
    std::size_t ordered = 0, low_rows = 0;
    const double low = *std::min_element(cfg.levels.begin(), cfg.levels.end());
    for (const auto& row : r.rows) {
        if (row.level == 1.0) full_std = std::max(full_std, row.stddev[0]);
        if (row.level == low) {
            ++low_rows;
            // stddev order: EPIC, DARD, SRRD
            if (row.stddev[2] < row.stddev[1] && row.stddev[1] < row.stddev[0]) ++ordered;
        }
    }
    const bool pass = full_std < 1e-9 && low_rows == cfg.replications && ordered * 100 >= 95 * low_rows;
    return {pass, "full-coverage sigma_EPIC " + fmt("%.1e", full_std) + "; SRRD < DARD < EPIC in " +
                      std::to_string(ordered) + "/" + std::to_string(low_rows) + " replications at level " +
                      fmt("%.2f", low)};
}

struct Sweeps {
    // [epsilon index][reward kind index]
    std::vector<std::vector<SweepResult>> unbiased, zero_fill;
    double seconds = 0.0;
};

constexpr double kEpsilons[] = {0.1, 0.0};
constexpr FunctionKind kKinds[] = {FunctionKind::polynomial, FunctionKind::random};

SweepCfg sweep_cfg(double epsilon, FunctionKind kind) {
    SweepCfg c = sweep_defaults(false);
    std::visit([&](auto& e) { e.epsilon = epsilon; }, c.env);
    c.reward.kind = kind;
    c.seed = 404;
    return c;
}

const Sweeps& sweeps() {
    static const Sweeps s = [] {
        Sweeps out;
        const auto t0 = Clock::now();
        for (double eps : kEpsilons) {
            out.unbiased.emplace_back();
            out.zero_fill.emplace_back();
            for (auto kind : kKinds) {
                SweepCfg c = sweep_cfg(eps, kind);
                c.approximation = Approximation::unbiased;
                out.unbiased.back().push_back(run_sparsity(c));
                c.approximation = Approximation::double_batch;
                c.batch.missing_mode = MissingMode::zero_fill;
                out.zero_fill.back().push_back(run_sparsity(c));
            }
        }
        out.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
        return out;
    }();
    return s;
}

std::size_t col(const SweepResult& r, Method m) {
    return static_cast<std::size_t>(std::find(r.methods.begin(), r.methods.end(), m) - r.methods.begin());
}

double mean_of(const SweepRow& row, const SweepResult& r, Method m) { return row.methods[col(r, m)].mean; }

// 4: sparsity sweeps at desk scale.
Outcome experiment1() {
    const Sweeps& s = sweeps();
    bool pass = s.seconds < 15 * 60;
    std::ostringstream d;
    for (std::size_t k = 0; k < 2; ++k) {
        const char* kind = k == 0 ? "polynomial" : "random";
        // (a) epsilon 0.1
        const SweepResult& a = s.unbiased[0][k];
        std::size_t points = 0, violations = 0;
        std::string where;
        for (const auto& row : a.rows) {
            if (row.coverage >= 0.2) continue;
            ++points;
            const double sr = mean_of(row, a, Method::srrd), da = mean_of(row, a, Method::dard),
                         ep = mean_of(row, a, Method::epic);
            if (!(sr <= da && da <= ep)) {
                ++violations;
                where += (where.empty() ? "" : " ") + std::to_string(row.rollouts);
            }
        }
        const double srrd_end = mean_of(a.rows.back(), a, Method::srrd);
        pass = pass && violations == 0 && srrd_end < 0.1;
        d << kind << " eps=0.1: order SRRD<=DARD<=EPIC broken at " << violations << "/" << points << " points"
          << (where.empty() ? "" : " (rollouts " + where + ")") << ", SRRD_end " << fmt("%.3f", srrd_end) << "; ";
        // (b) epsilon 0
        const SweepResult& b = s.unbiased[1][k];
        double max_cov = 0.0, gap_avg = 0.0;
        for (const auto& row : b.rows) {
            max_cov = std::max(max_cov, row.coverage);
            gap_avg += std::abs(mean_of(row, b, Method::epic) - mean_of(row, b, Method::direct));
        }
        gap_avg /= static_cast<double>(b.rows.size());
        const auto& last = b.rows.back();
        const double gap_end = std::abs(mean_of(last, b, Method::epic) - mean_of(last, b, Method::direct));
        const double srrd0 = mean_of(last, b, Method::srrd);
        pass = pass && max_cov < 0.1 && gap_end < 0.15 && srrd0 < 0.2;
        d << kind << " eps=0: max coverage " << fmt("%.4f", max_cov) << ", |EPIC-DIRECT|_end " << fmt("%.3f", gap_end)
          << " (curve mean " << fmt("%.3f", gap_avg) << "), SRRD_end " << fmt("%.3f", srrd0) << "; ";
    }
    d << "sweeps " << fmt("%.0f", s.seconds) << " s";
    return {pass, d.str()};
}

// 5: unbiased estimates against the zero-filled double-batch form.
Outcome unbiased_vs_batch() {
    const Sweeps& s = sweeps();
    std::size_t points = 0, worse = 0;
    double ub_sum = 0.0, db_sum = 0.0;
    std::string where;
    for (std::size_t e = 0; e < 2; ++e)
        for (std::size_t k = 0; k < 2; ++k) {
            const SweepResult& u = s.unbiased[e][k];
            const SweepResult& z = s.zero_fill[e][k];
            for (std::size_t i = 0; i < u.rows.size(); ++i) {
                if (u.rows[i].coverage >= 0.2) continue;
                ++points;
                const double ub = mean_of(u.rows[i], u, Method::srrd), db = mean_of(z.rows[i], z, Method::srrd);
                ub_sum += ub;
                db_sum += db;
                if (ub > db) {
                    ++worse;
                    where += std::string(where.empty() ? "" : ", ") + (e == 0 ? "eps=0.1 " : "eps=0 ") +
                             (k == 0 ? "polynomial" : "random") + " at " + std::to_string(u.rows[i].rollouts) +
                             " rollouts (" + fmt("%.3f", ub) + " vs " + fmt("%.3f", db) + ")";
                }
            }
        }
    return {worse == 0, "unbiased SRRD > double-batch SRRD at " + std::to_string(worse) + "/" +
                            std::to_string(points) + " points below 20% coverage; means " +
                            fmt("%.3f", ub_sum / points) + " vs " + fmt("%.3f", db_sum / points) +
                            (where.empty() ? "" : "; " + where)};
}

// 6: heavy non-potential noise makes every method look like DIRECT.
Outcome noise() {
    SweepCfg c = sweep_cfg(0.1, FunctionKind::polynomial);
    c.noise = NoiseSeverity::high;
    c.approximation = Approximation::unbiased;
    const auto r = run_sparsity(c);
    double worst = 0.0;
    for (const auto& row : r.rows) {
        const double direct = mean_of(row, r, Method::direct);
        for (auto m : kCanonical) worst = std::max(worst, std::abs(mean_of(row, r, m) - direct));
    }
    return {worst < 0.1, "max over rollout counts and methods of |D_m - D_DIRECT| = " + fmt("%.3f", worst) +
                             " (50 trials per point)"};
}

// 7: regret bound on random small MDPs.
Outcome regret() {
    const auto cases = run_regret(RegretCfg{});
    std::size_t checked = 0, held = 0, flagged = 0, shaped_bad = 0;
    double shaped_regret = 0.0, shaped_dist = 0.0;
    for (const auto& c : cases) {
        if (c.report.flags != kFlagNone) {
            ++flagged;
        } else {
            ++checked;
            held += c.report.holds ? 1 : 0;
        }
        if (c.kind == PairKind::shaped) {
            shaped_regret = std::max(shaped_regret, std::abs(c.report.regret));
            shaped_dist = std::max(shaped_dist, c.report.distance);
            if (std::abs(c.report.regret) > 1e-9 || c.report.distance >= 1e-9) ++shaped_bad;
        }
    }
    return {held == checked && shaped_bad == 0,
            std::to_string(held) + "/" + std::to_string(checked) + " unflagged pairs within the bound (" +
                std::to_string(flagged) + " flagged); shaped pairs max |regret| " + fmt("%.1e", shaped_regret) +
                ", max D " + fmt("%.1e", shaped_dist)};
}

// 8: k-NN behaviour classification.
Outcome knn() {
    KnnCfg c = knn_defaults(false);
    c.seed = 808;
    const auto r = run_knn(c);
    auto find = [&](Method m) -> const KnnMethodResult& {
        return *std::find_if(r.methods.begin(), r.methods.end(), [&](const auto& x) { return x.method == m; });
    };
    auto acc = [](const KnnMethodResult& m) {
        std::vector<double> v;
        for (const auto& o : m.repeats) v.push_back(o.accuracy);
        return v;
    };
    const auto& s = find(Method::srrd);
    const auto& d = find(Method::direct);
    const auto& e = find(Method::epic);
    const auto& da = find(Method::dard);
    const auto w = welch_t_test(acc(s), acc(d));
    const bool pass = s.accuracy.mean > d.accuracy.mean && w.p_one_sided < 0.05 && s.accuracy.mean >= e.accuracy.mean;
    return {pass, std::to_string(c.repeats) + " repeats, mean accuracy SRRD " + fmt("%.3f", s.accuracy.mean) +
                      ", EPIC " + fmt("%.3f", e.accuracy.mean) + ", DARD " + fmt("%.3f", da.accuracy.mean) +
                      ", DIRECT " + fmt("%.3f", d.accuracy.mean) + "; Welch SRRD > DIRECT p = " +
                      fmt("%.2e", w.p_one_sided)};
}

// 9: pseudometric axioms of the sample-based distance on a fixed support. A support on which some
// canonical term has no defined rewards is redrawn: the estimate scores such a term as 0, so an
// added constant no longer cancels.
Outcome pseudometric() {
    std::mt19937_64 rng(909);
    std::uniform_real_distribution<double> u(-5.0, 5.0), pos(0.1, 10.0), unit(0.0, 1.0);
    auto random_support = [&] {
        const std::size_t n = 4 + rng() % 7, na = 1 + rng() % 3;
        std::vector<std::pair<TransitionKey, double>> t;
        for (std::uint32_t s = 0; s < n; ++s)
            for (std::uint32_t a = 0; a < na; ++a)
                for (std::uint32_t y = 0; y < n; ++y)
                    if (unit(rng) < 0.35) t.push_back({{{s}, {a}, {y}}, 0.0});
        t.push_back({{{0}, {0}, {1}}, 0.0});
        t.push_back({{{1}, {0}, {0}}, 0.0});
        return build_sample(t, Space{n, na});
    };
    auto randomize = [&](const RewardSample& s) {
        std::vector<double> v(s.size());
        for (auto& x : v) x = u(rng);
        return with_rewards(s, v);
    };
    double premetric = 0.0, symmetry = 0.0, affine = 0.0, triangle = 0.0;
    std::size_t cases = 0, redrawn = 0;
    for (int i = 0; i < 1000; ++i) {
        DistanceCfg cfg;
        cfg.method = std::array{Method::direct, Method::epic, Method::dard, Method::srrd}[i % 4];
        cfg.approximation = i % 2 == 0 ? Approximation::double_batch : Approximation::unbiased;
        cfg.gamma = unit(rng);
        auto support = random_support();
        while (canonicalize(support, cfg).stats.empty_terms > 0) {
            ++redrawn;
            support = random_support();
        }
        const auto a = randomize(support), b = randomize(support), c = randomize(support);
        const double aa = reward_distance(a, a, cfg).distance;
        const double ab = reward_distance(a, b, cfg).distance;
        const double ba = reward_distance(b, a, cfg).distance;
        const double bc = reward_distance(b, c, cfg).distance;
        const double ac = reward_distance(a, c, cfg).distance;
        const double scale = pos(rng), shift = u(rng);
        std::vector<double> moved;
        for (double r : b.rewards()) moved.push_back(scale * r + shift);
        const double ab2 = reward_distance(a, with_rewards(b, moved), cfg).distance;
        premetric = std::max(premetric, std::abs(aa));
        symmetry = std::max(symmetry, std::abs(ab - ba));
        affine = std::max(affine, std::abs(ab - ab2));
        triangle = std::max(triangle, ac - (ab + bc));
        ++cases;
    }
    const bool pass = premetric < 1e-9 && symmetry < 1e-9 && affine < 1e-9 && triangle <= 1e-12;
    return {pass, std::to_string(cases) + " cases per property (" + std::to_string(redrawn) +
                      " supports with undefined terms redrawn): max d(a,a) " + fmt("%.1e", premetric) +
                      ", max |d(a,b)-d(b,a)| " + fmt("%.1e", symmetry) + ", max affine change " +
                      fmt("%.1e", affine) + ", max triangle excess " + fmt("%.1e", triangle)};
}

struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> all{
        {1, "shaping invariance", shaping_invariance},
        {2, "full-coverage equivalence and idempotence", equivalence_idempotence},
        {3, "canonical spread under unsampled transitions", figure2},
        {4, "sparsity sweeps", experiment1},
        {5, "unbiased vs double-batch", unbiased_vs_batch},
        {6, "noise degradation", noise},
        {7, "regret bound", regret},
        {8, "k-NN ordering", knn},
        {9, "pseudometric properties", pseudometric},
    };
    std::set<int> wanted;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--criterion" && i + 1 < argc) {
            wanted.insert(std::atoi(argv[++i]));
        } else {
            std::fprintf(stderr, "usage: %s [--criterion N]...\n", argv[0]);
            return 64;
        }
    }
    int failures = 0;
    for (const auto& c : all) {
        if (!wanted.empty() && !wanted.count(c.id)) continue;
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::printf("criterion %d (%s): %s: %s\n", c.id, c.name, o.pass ? "PASS" : "FAIL", o.detail.c_str());
        std::fflush(stdout);
    }
    return failures;
}
