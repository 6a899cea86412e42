#ifndef SRRD_DETAIL_FEATURE_TERMS_HPP
#define SRRD_DETAIL_FEATURE_TERMS_HPP

#include <cmath>

#include "srrd/features.hpp"

namespace srrd::detail {

// Integer power by repeated multiplication; negative bases keep their sign
// pattern (odd degrees stay negative).
inline double int_pow(double x, int degree) {
    double out = 1.0;
    for (int i = 0; i < degree; ++i) out *= x;
    return out;
}

// Per-feature basis function of a reward/potential family. `random` has no
// basis and is handled by the callers.
inline double feature_term(FunctionKind kind, double x, int degree) {
    switch (kind) {
        case FunctionKind::linear: return x;
        case FunctionKind::polynomial: return int_pow(x, degree);
        case FunctionKind::sinusoidal: return std::sin(x);
        case FunctionKind::random: return 0.0;
    }
    return 0.0;
}

}  // namespace srrd::detail

#endif
