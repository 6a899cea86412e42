#ifndef SRRD_HARNESS_KNN_HPP
#define SRRD_HARNESS_KNN_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "srrd/harness/config.hpp"
#include "srrd/harness/stats.hpp"

namespace srrd::harness {

/// One labelled reward sample.
struct KnnItem {
    RewardSample sample;
    std::size_t label = 0;
};

/// Neighbourhood size and discount picked by cross-validation.
struct KnnChoice {
    double gamma = 0.0;
    std::size_t k = 0;
    double cv_accuracy = 0.0;
};

struct KnnOutcome {
    double accuracy = 0.0;
    KnnChoice choice;
    /// Test items that shared fewer than two transitions with every training
    /// item and were given the majority training label.
    std::size_t no_neighbour = 0;
};

/// Majority vote over the k nearest references (distance, then index).
/// Vote ties go to the label whose tied neighbours have the smallest mean
/// distance, then to the smallest label. `distances[j]` is the distance to
/// reference j. Throws Error if k is 0 or exceeds the number of references.
std::size_t knn_vote(std::span<const double> distances, std::span<const std::size_t> labels, std::size_t k);

/// Grid-searches (gamma, k) by cv_folds-fold cross-validation on `train`
/// (skipping k larger than a fold's reference set) and classifies `test`.
/// Ties in CV accuracy keep the earlier grid point. DIRECT ignores gamma and
/// uses only the first one.
KnnOutcome classify_split(const std::vector<KnnItem>& train, const std::vector<KnnItem>& test, const KnnCfg& cfg,
                          Method method, std::uint64_t seed);

struct KnnMethodResult {
    Method method = Method::srrd;
    std::vector<KnnOutcome> repeats;
    Summary accuracy;
};

struct KnnResult {
    std::vector<KnnMethodResult> methods;
};

/// Builds `sets_per_policy` labelled samples per policy (each class has its
/// own ground-truth reward; each set gets its own scaled potential), shuffles,
/// splits by train_fraction and classifies with every configured method.
KnnResult run_knn(const KnnCfg& cfg);

/// Columns: method, repeat, accuracy, gamma, k, cv_accuracy, flags
/// (`no_neighbour=count`).
void write_knn_csv(std::ostream& os, const KnnResult& result);

/// Columns: method, mean, std, n, then Welch t and one-sided p against each
/// other method: `t_vs_<M>`, `p_vs_<M>` (empty on the diagonal or when the
/// test is undefined).
void write_knn_summary_csv(std::ostream& os, const KnnResult& result);

}  // namespace srrd::harness

#endif  // SRRD_HARNESS_KNN_HPP
