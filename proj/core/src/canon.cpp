#include "srrd/canon.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <map>
#include <ostream>
#include <string>
#include <unordered_map>

#include "srrd/csv.hpp"
#include "srrd/rng.hpp"

namespace srrd {

std::string_view to_string(Method m) {
    switch (m) {
        case Method::direct: return "DIRECT";
        case Method::epic: return "EPIC";
        case Method::dard: return "DARD";
        case Method::srrd: return "SRRD";
    }
    return "?";
}

Method parse_method(std::string_view name) {
    std::string up(name);
    for (char& c : up) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (up == "DIRECT") return Method::direct;
    if (up == "EPIC") return Method::epic;
    if (up == "DARD") return Method::dard;
    if (up == "SRRD") return Method::srrd;
    throw Error("unknown method `" + std::string(name) + "`");
}

std::string_view to_string(MissingMode m) { return m == MissingMode::zero_fill ? "zero_fill" : "renormalize"; }

MissingMode parse_missing_mode(std::string_view name) {
    if (name == "zero_fill") return MissingMode::zero_fill;
    if (name == "renormalize") return MissingMode::renormalize;
    throw Error("unknown missing mode `" + std::string(name) + "`");
}

std::string_view to_string(XSetMode m) { return m == XSetMode::batch_pairs ? "batch_pairs" : "batch_actions"; }

XSetMode parse_x_set_mode(std::string_view name) {
    if (name == "batch_pairs") return XSetMode::batch_pairs;
    if (name == "batch_actions") return XSetMode::batch_actions;
    throw Error("unknown x-set mode `" + std::string(name) + "`");
}

namespace {

void check_gamma(double gamma) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw Error("discount must lie in [0, 1], got " + std::to_string(gamma));
}

CanonResult direct_result(std::vector<TransitionKey> keys, std::vector<double> values, double gamma) {
    CanonResult out;
    out.keys = std::move(keys);
    out.values = std::move(values);
    out.method = Method::direct;
    out.gamma = gamma;
    return out;
}

// ---------------------------------------------------------------------------
// Exact mode. Under the uniform distribution over the full space every
// successor set is the whole state set, so each expectation is either a
// per-state row mean E[R(x, A, S)] or the grand mean E[R(S, A, S)].

struct FullSpaceMeans {
    std::vector<double> row;
    double total = 0.0;
};

FullSpaceMeans full_space_means(const RewardTable& t) {
    FullSpaceMeans m;
    const std::size_t n = t.state_count();
    const std::size_t per_row = t.action_count() * n;
    m.row.assign(n, 0.0);
    for (std::size_t s = 0; s < n; ++s) {
        double acc = 0.0;
        for (std::size_t a = 0; a < t.action_count(); ++a)
            for (std::size_t x = 0; x < n; ++x) acc += t.at(s, a, x);
        m.row[s] = acc / static_cast<double>(per_row);
        m.total += acc;
    }
    m.total /= static_cast<double>(n * per_row);
    return m;
}

// ---------------------------------------------------------------------------
// Double-batch mode.

// A set of state-action pairs, stored as a per-state bitmask of actions.
struct PairSet {
    std::vector<std::uint32_t> mask;
    std::vector<StateId> states;
    std::size_t size = 0;

    [[nodiscard]] bool has(StateId x, ActionId u) const { return (mask[x.index] >> u.index) & 1U; }
    [[nodiscard]] unsigned count(StateId x) const { return static_cast<unsigned>(std::popcount(mask[x.index])); }
};

struct TermSum {
    double sum = 0.0;
    double defined = 0.0;
    double expected = 0.0;
};

class BatchEvaluator {
public:
    BatchEvaluator(const RewardSample& sample, const BatchCfg& cfg, CanonStats& stats)
        : sample_(sample), cfg_(cfg), stats_(stats), n_(sample.space().state_count) {
        if (sample.space().action_count > 32) throw Error("double-batch mode supports at most 32 actions");
        const auto batch = draw_state_action_batch(sample, cfg);
        stats_.batch_size = batch.size();
        batch_.mask.assign(n_, 0);
        for (const auto& [x, u] : batch) {
            batch_.mask[x.index] |= 1U << u.index;
            batch_actions_ |= 1U << u.index;
        }
        finish(batch_);
    }

    [[nodiscard]] const PairSet& batch() const { return batch_; }

    // Restrict the batch to states in `states`.
    [[nodiscard]] PairSet restrict(std::span<const StateId> states) const {
        PairSet p;
        p.mask.assign(n_, 0);
        for (StateId x : states) {
            p.mask[x.index] = cfg_.x_sets == XSetMode::batch_pairs ? batch_.mask[x.index] : batch_actions_;
        }
        finish(p);
        return p;
    }

    // sum over (y, u) in Y of R(s, u, y)
    [[nodiscard]] TermSum single(StateId s, const PairSet& y) const {
        TermSum t;
        t.expected = static_cast<double>(y.size);
        const auto edges = sample_.outgoing(s);
        stats_.reward_visits += edges.size();
        for (const auto& e : edges) {
            if (y.has(e.s_next, e.a)) {
                t.sum += e.reward;
                t.defined += 1.0;
            }
        }
        return t;
    }

    // sum over (x, u) in X, (y, .) in Y of R(x, u, y): action taken from X.
    [[nodiscard]] TermSum double_first(const PairSet& x, const PairSet& y) const {
        TermSum t;
        t.expected = static_cast<double>(x.size) * static_cast<double>(y.size);
        if (y.size == 0) return t;
        for (StateId xs : x.states) {
            const auto edges = sample_.outgoing(xs);
            stats_.reward_visits += edges.size();
            for (const auto& e : edges) {
                if (!x.has(xs, e.a)) continue;
                const double w = y.count(e.s_next);
                t.sum += w * e.reward;
                t.defined += w;
            }
        }
        return t;
    }

    // sum over (x, .) in X, (y, u) in Y of R(x, u, y): action taken from Y.
    [[nodiscard]] TermSum double_second(const PairSet& x, const PairSet& y) const {
        TermSum t;
        t.expected = static_cast<double>(x.size) * static_cast<double>(y.size);
        if (y.size == 0) return t;
        for (StateId xs : x.states) {
            const double w = x.count(xs);
            const auto edges = sample_.outgoing(xs);
            stats_.reward_visits += edges.size();
            for (const auto& e : edges) {
                if (!y.has(e.s_next, e.a)) continue;
                t.sum += w * e.reward;
                t.defined += w;
            }
        }
        return t;
    }

    // Rewards leaving X, accumulated per landing pair (y, u) with X's state
    // multiplicities as weights. double_second(X, Y) == gather(landing(X), X, Y).
    struct Landing {
        std::vector<double> sum;
        std::vector<double> weight;
    };

    [[nodiscard]] Landing landing(const PairSet& x) const {
        const std::size_t a = sample_.space().action_count;
        Landing l{std::vector<double>(n_ * a, 0.0), std::vector<double>(n_ * a, 0.0)};
        for (StateId xs : x.states) {
            const double w = x.count(xs);
            const auto edges = sample_.outgoing(xs);
            stats_.reward_visits += edges.size();
            for (const auto& e : edges) {
                l.sum[e.s_next.index * a + e.a.index] += w * e.reward;
                l.weight[e.s_next.index * a + e.a.index] += w;
            }
        }
        return l;
    }

    [[nodiscard]] TermSum gather(const Landing& l, const PairSet& x, const PairSet& y) const {
        const std::size_t a = sample_.space().action_count;
        TermSum t;
        t.expected = static_cast<double>(x.size) * static_cast<double>(y.size);
        for (StateId ys : y.states) {
            for (std::uint32_t bits = y.mask[ys.index]; bits != 0; bits &= bits - 1) {
                const std::size_t slot = ys.index * a + static_cast<std::size_t>(std::countr_zero(bits));
                t.sum += l.sum[slot];
                t.defined += l.weight[slot];
            }
            stats_.reward_visits += y.count(ys);
        }
        return t;
    }

    [[nodiscard]] double value(const TermSum& t) const {
        if (t.expected == 0.0) {
            ++stats_.empty_terms;
            return 0.0;
        }
        if (cfg_.missing_mode == MissingMode::zero_fill) return t.sum / t.expected;
        return t.defined > 0.0 ? t.sum / t.defined : 0.0;
    }

private:
    void finish(PairSet& p) const {
        p.states.clear();
        p.size = 0;
        for (std::uint32_t x = 0; x < n_; ++x) {
            if (p.mask[x] != 0) {
                p.states.push_back({x});
                p.size += static_cast<std::size_t>(std::popcount(p.mask[x]));
            }
        }
    }

    const RewardSample& sample_;
    BatchCfg cfg_;
    CanonStats& stats_;
    std::size_t n_;
    PairSet batch_;
    std::uint32_t batch_actions_ = 0;
};

// ---------------------------------------------------------------------------
// Set helpers shared by the sampled modes.

std::vector<StateId> successors_of(const RewardSample& sample, std::span<const StateId> from) {
    std::vector<char> seen(sample.space().state_count, 0);
    std::vector<StateId> out;
    for (StateId x : from)
        for (StateId y : sample.successors(x))
            if (!seen[y.index]) {
                seen[y.index] = 1;
                out.push_back(y);
            }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<StateId> non_terminal(const RewardSample& sample, std::span<const StateId> states) {
    std::vector<StateId> out;
    for (StateId x : states)
        if (!sample.is_terminal(x)) out.push_back(x);
    return out;
}

// Sets that depend on s' only: S1, S5.
struct NextSets {
    std::vector<StateId> s1, s5;
};
// Sets that depend on s only: S2, S6.
struct CurrentSets {
    std::vector<StateId> s2, s6;
};

NextSets next_sets(const RewardSample& sample, StateId s_next) {
    NextSets n;
    const auto succ = sample.successors(s_next);
    n.s1.assign(succ.begin(), succ.end());
    n.s5 = successors_of(sample, n.s1);
    return n;
}

CurrentSets current_sets(const RewardSample& sample, StateId s) {
    CurrentSets c;
    c.s2 = non_terminal(sample, sample.successors(s));
    c.s6 = successors_of(sample, c.s2);
    return c;
}

// Caches a per-state quantity over the states actually used as s or s'.
template <typename F>
std::vector<double> per_state(const RewardSample& sample, bool as_source, F&& f) {
    std::vector<double> out(sample.space().state_count, 0.0);
    std::vector<char> done(sample.space().state_count, 0);
    for (const auto& k : sample.keys()) {
        const StateId x = as_source ? k.s : k.s_next;
        if (done[x.index]) continue;
        done[x.index] = 1;
        out[x.index] = f(x);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Unbiased mode: means over sampled transitions (x, u, y) with x in X, y in Y.

class MeanEvaluator {
public:
    MeanEvaluator(const RewardSample& sample, CanonStats& stats)
        : sample_(sample), stats_(stats), n_(sample.space().state_count) {}

    struct Mask {
        std::vector<char> in;
        std::vector<StateId> states;
    };

    [[nodiscard]] Mask mask(std::span<const StateId> states) const {
        Mask m;
        m.in.assign(n_, 0);
        for (StateId x : states) m.in[x.index] = 1;
        m.states.assign(states.begin(), states.end());
        return m;
    }

    // Mean over sampled transitions from X into Y; 0 when none exist.
    [[nodiscard]] double mean(const Mask& x, const Mask& y) const {
        std::size_t out_work = 0, in_work = 0;
        for (StateId s : x.states) out_work += sample_.outgoing(s).size();
        for (StateId s : y.states) in_work += sample_.incoming(s).size();
        double sum = 0.0;
        std::size_t count = 0;
        if (out_work <= in_work) {
            stats_.reward_visits += out_work;
            for (StateId s : x.states)
                for (const auto& e : sample_.outgoing(s))
                    if (y.in[e.s_next.index]) {
                        sum += e.reward;
                        ++count;
                    }
        } else {
            stats_.reward_visits += in_work;
            for (StateId s : y.states)
                for (const auto& e : sample_.incoming(s))
                    if (x.in[e.s.index]) {
                        sum += e.reward;
                        ++count;
                    }
        }
        if (count == 0) {
            ++stats_.empty_terms;
            return 0.0;
        }
        return sum / static_cast<double>(count);
    }

    // Mean over every transition leaving s.
    [[nodiscard]] double mean_out(StateId s) const {
        const auto edges = sample_.outgoing(s);
        stats_.reward_visits += edges.size();
        if (edges.empty()) {
            ++stats_.empty_terms;
            return 0.0;
        }
        double sum = 0.0;
        for (const auto& e : edges) sum += e.reward;
        return sum / static_cast<double>(edges.size());
    }

private:
    const RewardSample& sample_;
    CanonStats& stats_;
    std::size_t n_;
};

}  // namespace

CanonResult canon_exact(const RewardTable& table, Method method, double gamma, std::size_t cap) {
    check_gamma(gamma);
    if (table.space().transition_count() > cap) {
        throw Error("table has " + std::to_string(table.space().transition_count()) +
                    " transitions, above the exact-mode cap of " + std::to_string(cap) + "; use canon_sampled");
    }
    auto keys = table.keys();
    std::vector<double> raw(table.values().begin(), table.values().end());
    if (method == Method::direct) return direct_result(std::move(keys), std::move(raw), gamma);

    const FullSpaceMeans m = full_space_means(table);
    const double g = gamma;
    CanonResult out;
    out.method = method;
    out.gamma = gamma;
    out.values.reserve(keys.size());
    out.stats.reward_visits = table.values().size();
    for (std::size_t i = 0; i < keys.size(); ++i) {
        const auto& k = keys[i];
        const double r = raw[i];
        const double from_next = m.row[k.s_next.index];
        const double from_cur = m.row[k.s.index];
        double c = 0.0;
        switch (method) {
            case Method::epic:
                // R + E[g R(s',A,S') - R(s,A,S') - g R(S,A,S')]
                c = r + g * from_next - from_cur - g * m.total;
                break;
            case Method::dard:
                // R + E[g R(s',A,S'') - R(s,A,S') - g R(S',A,S'')]
                c = r + g * from_next - from_cur - g * m.total;
                break;
            case Method::srrd:
                // R + E[g R(s',A,S1) - R(s,A,S2) - g R(S3,A,S4) + g^2 R(S1,A,S5)
                //       - g R(S2,A,S6) + g R(S3,A,S6) - g^2 R(S4,A,S5)]
                c = r + g * from_next - from_cur - g * m.total + g * g * m.total - g * m.total + g * m.total -
                    g * g * m.total;
                break;
            case Method::direct: break;
        }
        out.values.push_back(c);
    }
    out.keys = std::move(keys);
    return out;
}

SrrdSets derive_srrd_sets(const RewardSample& sample, const TransitionKey& key) {
    if (!sample.contains(key)) throw Error("transition " + to_string(key) + " is not in the sample");
    SrrdSets sets;
    const NextSets n = next_sets(sample, key.s_next);
    const CurrentSets c = current_sets(sample, key.s);
    sets.s1 = n.s1;
    sets.s5 = n.s5;
    sets.s2 = c.s2;
    sets.s6 = c.s6;
    sets.s3 = sample.initiators();
    sets.s4 = sample.all_successors();
    return sets;
}

std::vector<std::pair<StateId, ActionId>> draw_state_action_batch(const RewardSample& sample, const BatchCfg& batch) {
    std::vector<std::pair<StateId, ActionId>> pool;
    pool.reserve(sample.sampled_states().size() * sample.sampled_actions().size());
    for (StateId x : sample.sampled_states())
        for (ActionId u : sample.sampled_actions()) pool.emplace_back(x, u);
    const std::size_t take = batch.n_m == 0 ? pool.size() : std::min(batch.n_m, pool.size());
    if (take == pool.size()) return pool;
    Rng rng(derive_seed(batch.batch_seed, {0xb47c}));
    // Partial Fisher-Yates: the first `take` slots become a uniform draw without replacement.
    for (std::size_t i = 0; i < take; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(take);
    return pool;
}

CanonResult canon_sampled(const RewardSample& sample, Method method, double gamma, const BatchCfg& batch) {
    check_gamma(gamma);
    if (sample.empty()) throw Error("empty sample");
    if (method == Method::direct) return direct_result(sample.keys(), sample.rewards(), gamma);

    CanonResult out;
    out.method = method;
    out.gamma = gamma;
    const BatchEvaluator ev(sample, batch, out.stats);
    const double g = gamma;
    out.keys = sample.keys();
    out.values.resize(sample.size());

    if (method == Method::epic) {
        const PairSet& b = ev.batch();
        const double all = ev.value(ev.double_second(b, b));
        const auto from = per_state(sample, true, [&](StateId s) { return ev.value(ev.single(s, b)); });
        const auto to = per_state(sample, false, [&](StateId s) { return ev.value(ev.single(s, b)); });
        for (std::size_t i = 0; i < sample.size(); ++i) {
            const auto& k = sample.keys()[i];
            out.values[i] = sample.rewards()[i] + g * to[k.s_next.index] - from[k.s.index] - g * all;
        }
        return out;
    }

    if (method == Method::dard) {
        std::vector<PairSet> succ_sets(sample.space().state_count);
        std::vector<char> built(sample.space().state_count, 0);
        auto succ_of = [&](StateId x) -> const PairSet& {
            if (!built[x.index]) {
                succ_sets[x.index] = ev.restrict(sample.successors(x));
                built[x.index] = 1;
            }
            return succ_sets[x.index];
        };
        const auto from = per_state(sample, true, [&](StateId x) { return ev.value(ev.single(x, succ_of(x))); });
        const auto to = per_state(sample, false, [&](StateId x) { return ev.value(ev.single(x, succ_of(x))); });
        // Keys are sorted by s, so each run of equal s shares one landing table.
        std::unordered_map<std::uint32_t, double> cross;
        for (std::size_t begin = 0; begin < sample.size();) {
            const StateId s = sample.keys()[begin].s;
            std::size_t end = begin;
            while (end < sample.size() && sample.keys()[end].s == s) ++end;
            const PairSet& x1 = succ_of(s);  // S'
            const auto land = ev.landing(x1);
            cross.clear();
            for (std::size_t i = begin; i < end; ++i) {
                const auto& k = sample.keys()[i];
                auto [it, fresh] = cross.try_emplace(k.s_next.index, 0.0);
                if (fresh) it->second = ev.value(ev.gather(land, x1, succ_of(k.s_next)));  // S''
                out.values[i] = sample.rewards()[i] + g * to[k.s_next.index] - from[k.s.index] - g * it->second;
            }
            begin = end;
        }
        return out;
    }

    // SRRD
    const PairSet x3 = ev.restrict(sample.initiators());
    const PairSet x4 = ev.restrict(sample.all_successors());
    const double t34 = ev.value(ev.double_first(x3, x4));
    const auto next_part = per_state(sample, false, [&](StateId sn) {
        const NextSets n = next_sets(sample, sn);
        const PairSet x1 = ev.restrict(n.s1);
        const PairSet x5 = ev.restrict(n.s5);
        return g * ev.value(ev.single(sn, x1)) + g * g * ev.value(ev.double_first(x1, x5)) -
               g * g * ev.value(ev.double_first(x4, x5));
    });
    const auto cur_part = per_state(sample, true, [&](StateId s) {
        const CurrentSets c = current_sets(sample, s);
        const PairSet x2 = ev.restrict(c.s2);
        const PairSet x6 = ev.restrict(c.s6);
        return -ev.value(ev.single(s, x2)) - g * ev.value(ev.double_first(x2, x6)) +
               g * ev.value(ev.double_first(x3, x6));
    });
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const auto& k = sample.keys()[i];
        out.values[i] = sample.rewards()[i] + next_part[k.s_next.index] + cur_part[k.s.index] - g * t34;
    }
    return out;
}

CanonResult canon_unbiased(const RewardSample& sample, Method method, double gamma) {
    check_gamma(gamma);
    if (sample.empty()) throw Error("empty sample");
    if (method == Method::direct) return direct_result(sample.keys(), sample.rewards(), gamma);

    CanonResult out;
    out.method = method;
    out.gamma = gamma;
    const MeanEvaluator ev(sample, out.stats);
    const double g = gamma;
    out.keys = sample.keys();
    out.values.resize(sample.size());

    if (method == Method::epic) {
        const double all = [&] {
            double sum = 0.0;
            for (double r : sample.rewards()) sum += r;
            out.stats.reward_visits += sample.size();
            return sum / static_cast<double>(sample.size());
        }();
        const auto from = per_state(sample, true, [&](StateId s) { return ev.mean_out(s); });
        const auto to = per_state(sample, false, [&](StateId s) { return ev.mean_out(s); });
        for (std::size_t i = 0; i < sample.size(); ++i) {
            const auto& k = sample.keys()[i];
            out.values[i] = sample.rewards()[i] + g * to[k.s_next.index] - from[k.s.index] - g * all;
        }
        return out;
    }

    if (method == Method::dard) {
        const auto from = per_state(sample, true, [&](StateId s) { return ev.mean_out(s); });
        const auto to = per_state(sample, false, [&](StateId s) { return ev.mean_out(s); });
        std::vector<double> sum(sample.space().state_count), count(sample.space().state_count);
        std::unordered_map<std::uint32_t, double> cross;
        for (std::size_t begin = 0; begin < sample.size();) {
            const StateId s = sample.keys()[begin].s;
            std::size_t end = begin;
            while (end < sample.size() && sample.keys()[end].s == s) ++end;
            // Rewards of transitions leaving S' (successors of s), by landing state.
            std::fill(sum.begin(), sum.end(), 0.0);
            std::fill(count.begin(), count.end(), 0.0);
            for (StateId x : sample.successors(s)) {
                const auto edges = sample.outgoing(x);
                out.stats.reward_visits += edges.size();
                for (const auto& e : edges) {
                    sum[e.s_next.index] += e.reward;
                    count[e.s_next.index] += 1.0;
                }
            }
            cross.clear();
            for (std::size_t i = begin; i < end; ++i) {
                const auto& k = sample.keys()[i];
                auto [it, fresh] = cross.try_emplace(k.s_next.index, 0.0);
                if (fresh) {
                    double total = 0.0, n = 0.0;
                    for (StateId y : sample.successors(k.s_next)) {  // S''
                        total += sum[y.index];
                        n += count[y.index];
                    }
                    out.stats.reward_visits += sample.successors(k.s_next).size();
                    if (n == 0.0) ++out.stats.empty_terms;
                    it->second = n > 0.0 ? total / n : 0.0;
                }
                out.values[i] = sample.rewards()[i] + g * to[k.s_next.index] - from[k.s.index] - g * it->second;
            }
            begin = end;
        }
        return out;
    }

    const auto m3 = ev.mask(sample.initiators());
    const auto m4 = ev.mask(sample.all_successors());
    const double t34 = ev.mean(m3, m4);
    const auto next_part = per_state(sample, false, [&](StateId sn) {
        const NextSets n = next_sets(sample, sn);
        const StateId self[] = {sn};
        const auto m1 = ev.mask(n.s1);
        const auto m5 = ev.mask(n.s5);
        return g * ev.mean(ev.mask(self), m1) + g * g * ev.mean(m1, m5) - g * g * ev.mean(m4, m5);
    });
    const auto cur_part = per_state(sample, true, [&](StateId s) {
        const CurrentSets c = current_sets(sample, s);
        const StateId self[] = {s};
        const auto m2 = ev.mask(c.s2);
        const auto m6 = ev.mask(c.s6);
        return -ev.mean(ev.mask(self), m2) - g * ev.mean(m2, m6) + g * ev.mean(m3, m6);
    });
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const auto& k = sample.keys()[i];
        out.values[i] = sample.rewards()[i] + next_part[k.s_next.index] + cur_part[k.s.index] - g * t34;
    }
    return out;
}

void write_canon_csv(std::ostream& os, const CanonResult& result) {
    os << "s,a,s_next,canonical_value\n";
    for (std::size_t i = 0; i < result.keys.size(); ++i) {
        const auto& k = result.keys[i];
        os << k.s.index << ',' << k.a.index << ',' << k.s_next.index << ',' << csv::format_real(result.values[i])
           << '\n';
    }
}

}  // namespace srrd
