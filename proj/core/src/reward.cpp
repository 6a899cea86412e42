#include "srrd/reward.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "srrd/csv.hpp"

namespace srrd {

std::string to_string(const TransitionKey& key) {
    std::ostringstream os;
    os << '(' << key.s.index << ',' << key.a.index << ',' << key.s_next.index << ')';
    return os.str();
}

RewardTable::RewardTable(Space space, std::vector<double> values) : space_(space), values_(std::move(values)) {
    if (values_.size() != space_.transition_count()) {
        throw Error("reward table size " + std::to_string(values_.size()) + " does not match S*A*S = " +
                    std::to_string(space_.transition_count()));
    }
    for (double v : values_) {
        if (!std::isfinite(v)) throw Error("reward table contains a non-finite value");
    }
}

RewardTable::RewardTable(Space space) : space_(space), values_(space.transition_count(), 0.0) {}

std::vector<TransitionKey> RewardTable::keys() const {
    std::vector<TransitionKey> out;
    out.reserve(values_.size());
    for (std::uint32_t s = 0; s < space_.state_count; ++s)
        for (std::uint32_t a = 0; a < space_.action_count; ++a)
            for (std::uint32_t t = 0; t < space_.state_count; ++t) out.push_back({{s}, {a}, {t}});
    return out;
}

namespace {

template <typename T>
std::span<const T> csr_row(const std::vector<std::size_t>& offsets, const std::vector<T>& data, std::uint32_t row) {
    if (row + 1 >= offsets.size()) return {};
    return std::span<const T>(data).subspan(offsets[row], offsets[row + 1] - offsets[row]);
}

}  // namespace

std::optional<double> RewardSample::find(const TransitionKey& k) const {
    auto it = std::lower_bound(keys_.begin(), keys_.end(), k);
    if (it == keys_.end() || *it != k) return std::nullopt;
    return rewards_[static_cast<std::size_t>(it - keys_.begin())];
}

std::span<const StateId> RewardSample::successors(StateId s) const { return csr_row(succ_offsets_, succ_, s.index); }
std::span<const OutEdge> RewardSample::outgoing(StateId s) const { return csr_row(out_offsets_, out_, s.index); }
std::span<const InEdge> RewardSample::incoming(StateId s) const { return csr_row(in_offsets_, in_, s.index); }

bool RewardSample::is_terminal(StateId s) const {
    return std::binary_search(terminals_.begin(), terminals_.end(), s);
}

double RewardSample::max_abs_reward() const {
    double m = 0.0;
    for (double r : rewards_) m = std::max(m, std::abs(r));
    return m;
}

RewardSample build_sample(std::span<const std::pair<TransitionKey, double>> transitions, Space space) {
    if (transitions.empty()) throw Error("empty sample");
    if (space.state_count == 0 || space.action_count == 0) throw Error("sample space must be non-empty");

    // Stable sort keeps the first occurrence of each duplicate in front.
    std::vector<std::pair<TransitionKey, double>> sorted(transitions.begin(), transitions.end());
    for (const auto& [k, r] : sorted) {
        if (!space.contains(k)) throw Error("transition " + to_string(k) + " outside the state/action space");
        if (!std::isfinite(r)) throw Error("non-finite reward at " + to_string(k));
    }
    std::stable_sort(sorted.begin(), sorted.end(), [](const auto& x, const auto& y) { return x.first < y.first; });

    RewardSample out;
    out.space_ = space;
    for (const auto& [k, r] : sorted) {
        if (!out.keys_.empty() && out.keys_.back() == k) continue;
        out.keys_.push_back(k);
        out.rewards_.push_back(r);
    }

    const std::size_t n = space.state_count;
    std::vector<char> seen_state(n, 0), is_init(n, 0), is_succ(n, 0);
    std::vector<char> seen_action(space.action_count, 0);
    std::vector<std::size_t> out_count(n, 0), in_count(n, 0);
    for (const auto& k : out.keys_) {
        seen_state[k.s.index] = seen_state[k.s_next.index] = 1;
        seen_action[k.a.index] = 1;
        is_init[k.s.index] = 1;
        is_succ[k.s_next.index] = 1;
        ++out_count[k.s.index];
        ++in_count[k.s_next.index];
    }
    for (std::uint32_t s = 0; s < n; ++s) {
        if (seen_state[s]) out.sampled_states_.push_back({s});
        if (is_init[s]) out.initiators_.push_back({s});
        if (is_succ[s]) out.all_successors_.push_back({s});
        if (is_succ[s] && !is_init[s]) out.terminals_.push_back({s});
    }
    for (std::uint32_t a = 0; a < space.action_count; ++a)
        if (seen_action[a]) out.sampled_actions_.push_back({a});

    out.out_offsets_.assign(n + 1, 0);
    out.in_offsets_.assign(n + 1, 0);
    for (std::size_t s = 0; s < n; ++s) {
        out.out_offsets_[s + 1] = out.out_offsets_[s] + out_count[s];
        out.in_offsets_[s + 1] = out.in_offsets_[s] + in_count[s];
    }
    out.out_.resize(out.keys_.size());
    out.in_.resize(out.keys_.size());
    std::vector<std::size_t> out_pos(out.out_offsets_.begin(), out.out_offsets_.end() - 1);
    std::vector<std::size_t> in_pos(out.in_offsets_.begin(), out.in_offsets_.end() - 1);
    for (std::size_t i = 0; i < out.keys_.size(); ++i) {
        const auto& k = out.keys_[i];
        out.out_[out_pos[k.s.index]++] = {k.a, k.s_next, out.rewards_[i]};
        out.in_[in_pos[k.s_next.index]++] = {k.s, k.a, out.rewards_[i]};
    }

    out.succ_offsets_.assign(n + 1, 0);
    for (std::uint32_t s = 0; s < n; ++s) {
        auto edges = out.outgoing({s});
        std::vector<StateId> succ;
        succ.reserve(edges.size());
        for (const auto& e : edges) succ.push_back(e.s_next);
        std::sort(succ.begin(), succ.end());
        succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
        out.succ_.insert(out.succ_.end(), succ.begin(), succ.end());
        out.succ_offsets_[s + 1] = out.succ_.size();
    }
    return out;
}

RewardSample build_sample(const std::vector<std::pair<TransitionKey, double>>& transitions, Space space) {
    return build_sample(std::span<const std::pair<TransitionKey, double>>(transitions), space);
}

RewardSample with_rewards(const RewardSample& sample, std::span<const double> rewards) {
    if (rewards.size() != sample.size()) throw Error("reward vector does not match sample size");
    std::vector<std::pair<TransitionKey, double>> entries;
    entries.reserve(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) entries.emplace_back(sample.keys()[i], rewards[i]);
    return build_sample(entries, sample.space());
}

RewardSample full_sample(const RewardTable& table) {
    std::vector<std::pair<TransitionKey, double>> entries;
    const auto keys = table.keys();
    entries.reserve(keys.size());
    for (const auto& k : keys) entries.emplace_back(k, table.at(k));
    return build_sample(entries, table.space());
}

std::vector<TransitionKey> common_support(const RewardSample& a, const RewardSample& b) {
    if (a.space() != b.space()) throw Error("samples live in different state/action spaces");
    std::vector<TransitionKey> out;
    std::set_intersection(a.keys().begin(), a.keys().end(), b.keys().begin(), b.keys().end(),
                          std::back_inserter(out));
    return out;
}

double coverage(const RewardSample& sample) { return coverage(sample, sample.space().transition_count()); }

double coverage(const RewardSample& sample, std::size_t feasible_count) {
    if (feasible_count == 0) return 0.0;
    return static_cast<double>(sample.size()) / static_cast<double>(feasible_count);
}

void write_sample_csv(std::ostream& os, const RewardSample& sample) {
    os << "s,a,s_next,reward\n";
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const auto& k = sample.keys()[i];
        os << k.s.index << ',' << k.a.index << ',' << k.s_next.index << ',' << csv::format_real(sample.rewards()[i])
           << '\n';
    }
}

RewardSample read_sample_csv(std::istream& is, Space space) {
    std::string line;
    if (!std::getline(is, line) || csv::trim(line) != "s,a,s_next,reward") {
        throw Error("expected CSV header `s,a,s_next,reward`");
    }
    std::vector<std::pair<TransitionKey, double>> entries;
    std::size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (csv::trim(line).empty()) continue;
        const auto fields = csv::split(line);
        if (fields.size() != 4) throw Error("line " + std::to_string(line_no) + ": expected 4 fields");
        try {
            TransitionKey k{{static_cast<std::uint32_t>(std::stoul(fields[0]))},
                            {static_cast<std::uint32_t>(std::stoul(fields[1]))},
                            {static_cast<std::uint32_t>(std::stoul(fields[2]))}};
            entries.emplace_back(k, std::stod(fields[3]));
        } catch (const std::logic_error&) {
            throw Error("line " + std::to_string(line_no) + ": malformed number");
        }
    }
    return build_sample(entries, space);
}

}  // namespace srrd
