#include "srrd/rng.hpp"

#include <numeric>

namespace srrd {

std::size_t Rng::weighted(std::span<const double> weights) {
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    double x = uniform01() * total;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (x < weights[i]) return i;
        x -= weights[i];
    }
    // Rounding can leave x just above the last bucket; pick the last non-zero weight.
    for (std::size_t i = weights.size(); i > 0; --i)
        if (weights[i - 1] > 0) return i - 1;
    return 0;
}

}  // namespace srrd
