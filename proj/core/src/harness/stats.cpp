#include "srrd/harness/stats.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <cmath>

#include "srrd/types.hpp"

namespace srrd::harness {

Summary summarize(std::span<const double> values) {
    Summary s;
    s.n = values.size();
    if (values.empty()) return s;
    for (double v : values) s.mean += v;
    s.mean /= static_cast<double>(values.size());
    if (values.size() < 2) return s;
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
    return s;
}

WelchResult welch_t_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2) throw Error("welch_t_test: each group needs at least two values");
    const Summary sa = summarize(a);
    const Summary sb = summarize(b);
    const double va = sa.stddev * sa.stddev / static_cast<double>(sa.n);
    const double vb = sb.stddev * sb.stddev / static_cast<double>(sb.n);
    if (va + vb == 0.0) throw Error("welch_t_test: both groups have zero variance");
    WelchResult r;
    r.t = (sa.mean - sb.mean) / std::sqrt(va + vb);
    r.df = (va + vb) * (va + vb) /
           (va * va / static_cast<double>(sa.n - 1) + vb * vb / static_cast<double>(sb.n - 1));
    const boost::math::students_t dist(r.df);
    r.p_one_sided = boost::math::cdf(boost::math::complement(dist, r.t));
    return r;
}

}  // namespace srrd::harness
