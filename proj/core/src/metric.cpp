#include "srrd/metric.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "srrd/csv.hpp"

namespace srrd {

std::string flags_to_string(unsigned flags) {
    std::string out;
    auto add = [&](const char* name) {
        if (!out.empty()) out += '|';
        out += name;
    };
    if (flags & kFlagDegenerateVariance) add("degenerate_variance");
    if (flags & kFlagEmptySupport) add("empty_support");
    return out;
}

PearsonResult pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw Error("pearson: length mismatch (" + std::to_string(x.size()) + " vs " + std::to_string(y.size()) + ")");
    }
    if (x.size() < 2) throw Error("pearson: need at least two entries");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    PearsonResult r;
    // Relative threshold so that rounding residue of a constant vector counts as zero.
    auto negligible = [&](double ss, double mean, std::span<const double> v) {
        double scale = std::abs(mean);
        for (double e : v) scale = std::max(scale, std::abs(e));
        return ss <= n * std::pow(scale * 1e-13, 2);
    };
    if (negligible(sxx, mx, x) || negligible(syy, my, y)) {
        r.distance = 0.5;
        r.rho = 0.0;
        r.flags = kFlagDegenerateVariance;
        return r;
    }
    r.rho = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
    // sqrt((1 - rho) / 2) is half the Euclidean distance between the
    // standardized vectors; summing that directly keeps near-zero distances
    // accurate instead of amplifying the rounding in 1 - rho.
    const double nx = std::sqrt(sxx), ny = std::sqrt(syy);
    double d2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = (x[i] - mx) / nx - (y[i] - my) / ny;
        d2 += d * d;
    }
    r.distance = std::min(1.0, 0.5 * std::sqrt(d2));
    return r;
}

double pearson_distance(std::span<const double> x, std::span<const double> y) { return pearson(x, y).distance; }

std::string_view to_string(Approximation a) {
    switch (a) {
        case Approximation::exact: return "exact";
        case Approximation::double_batch: return "double_batch";
        case Approximation::unbiased: return "unbiased";
    }
    return "?";
}

Approximation parse_approximation(std::string_view name) {
    if (name == "exact") return Approximation::exact;
    if (name == "double_batch") return Approximation::double_batch;
    if (name == "unbiased") return Approximation::unbiased;
    throw Error("unknown approximation `" + std::string(name) + "`");
}

CanonResult canonicalize(const RewardSample& sample, const DistanceCfg& cfg) {
    switch (cfg.approximation) {
        case Approximation::double_batch: return canon_sampled(sample, cfg.method, cfg.gamma, cfg.batch);
        case Approximation::unbiased: return canon_unbiased(sample, cfg.method, cfg.gamma);
        case Approximation::exact: break;
    }
    throw Error("exact canonicalization needs a RewardTable");
}

DistanceResult canonical_distance(const CanonResult& a, const CanonResult& b) {
    std::vector<double> x, y;
    std::size_t i = 0, j = 0;
    while (i < a.keys.size() && j < b.keys.size()) {
        if (a.keys[i] < b.keys[j]) {
            ++i;
        } else if (b.keys[j] < a.keys[i]) {
            ++j;
        } else {
            x.push_back(a.values[i++]);
            y.push_back(b.values[j++]);
        }
    }
    DistanceResult out;
    out.support = x.size();
    if (x.size() < 2) {
        out.distance = 1.0;
        out.flags = kFlagEmptySupport;
        return out;
    }
    const PearsonResult p = pearson(x, y);
    out.distance = p.distance;
    out.flags = p.flags;
    return out;
}

DistanceResult reward_distance(const RewardSample& a, const RewardSample& b, const DistanceCfg& cfg) {
    if (a.space() != b.space()) throw Error("reward_distance: samples live in different spaces");
    return canonical_distance(canonicalize(a, cfg), canonicalize(b, cfg));
}

DistanceResult reward_distance(const RewardTable& a, const RewardTable& b, const DistanceCfg& cfg) {
    if (a.space() != b.space()) throw Error("reward_distance: tables live in different spaces");
    if (cfg.approximation == Approximation::exact) {
        return canonical_distance(canon_exact(a, cfg.method, cfg.gamma), canon_exact(b, cfg.method, cfg.gamma));
    }
    return reward_distance(full_sample(a), full_sample(b), cfg);
}

RseReport rse_report(const RewardSample& unshaped, std::span<const PotentialFn> potentials) {
    RseReport r;
    r.Z = unshaped.max_abs_reward();
    if (!(r.Z > 0.0)) throw Error("rse_report: the unshaped sample must contain a non-zero reward");
    for (const auto& phi : potentials) {
        for (StateId s : unshaped.sampled_states()) {
            if (s.index >= phi.values.size()) throw Error("rse_report: potential does not cover state " + std::to_string(s.index));
            r.M = std::max(r.M, std::abs(phi(s)));
        }
    }
    r.bounds.srrd = r.M / (3.0 * r.Z);
    r.bounds.dard = 2.0 * r.M / (3.0 * r.Z);
    r.bounds.epic = r.M / r.Z;
    return r;
}

void write_distance_matrix_csv(std::ostream& os, std::span<const std::string> ids,
                               std::span<const std::vector<double>> matrix) {
    if (matrix.size() != ids.size()) throw Error("distance matrix: row count does not match ids");
    csv::Writer w(os);
    w.cell("id");
    for (const auto& id : ids) w.cell(id);
    w.end_row();
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (matrix[i].size() != ids.size()) throw Error("distance matrix: row " + std::to_string(i) + " is not square");
        w.cell(ids[i]);
        for (double d : matrix[i]) w.cell(d);
        w.end_row();
    }
}

}  // namespace srrd
