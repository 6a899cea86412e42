#ifndef SRRD_HARNESS_STATS_HPP
#define SRRD_HARNESS_STATS_HPP

#include <span>

namespace srrd::harness {

struct Summary {
    double mean = 0.0;
    /// Sample standard deviation (n - 1); 0 for fewer than two values.
    double stddev = 0.0;
    std::size_t n = 0;
};

Summary summarize(std::span<const double> values);

struct WelchResult {
    double t = 0.0;
    double df = 0.0;
    /// P(T >= t) under the null, i.e. the one-sided p for mean(a) > mean(b).
    double p_one_sided = 0.5;
};

/// Welch's unequal-variance t-test with Welch-Satterthwaite degrees of
/// freedom. Throws Error if either side has fewer than two values or both
/// variances are zero.
WelchResult welch_t_test(std::span<const double> a, std::span<const double> b);

}  // namespace srrd::harness

#endif  // SRRD_HARNESS_STATS_HPP
