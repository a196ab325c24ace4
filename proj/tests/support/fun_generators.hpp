#pragma once

#include "qplane/funalg.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace qplane::testing {

using FunRng = std::mt19937;

inline Complex random_complex(FunRng& rng) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    return {d(rng), d(rng)};
}

/// Smooth decaying profile from a small pool, times x when n != 0 and y
/// when m != 0 so the boundary conditions hold exactly.
inline CoeffFunction random_coeff(FunRng& rng, int n, int m) {
    const int kind = std::uniform_int_distribution<int>(0, 3)(rng);
    const double a = std::uniform_real_distribution<double>(0.5, 2.0)(rng);
    const double b = std::uniform_real_distribution<double>(0.5, 2.0)(rng);
    const Complex c = random_complex(rng);
    const bool fx = n != 0, fy = m != 0;
    CoeffFunction out;
    out.f = [=](double x, double y) {
        double base = 0.0;
        switch (kind) {
            case 0: base = std::exp(-a * x - b * y); break;
            case 1: base = std::exp(-(x - a) * (x - a) - (y - b) * (y - b)); break;
            case 2: base = std::exp(-x * x - b * y) * (1.0 + a * x); break;
            default: base = std::exp(-a * x - y * y) * std::cos(b * y); break;
        }
        return c * base * (fx ? x : 1.0) * (fy ? y : 1.0);
    };
    out.vanishes_at_s0 = fx;
    out.vanishes_at_t0 = fy;
    return out;
}

/// 1 to max_terms terms with bidegrees in [-max_shift, max_shift]^2.
inline FunElement random_fun_element(FunRng& rng, double q, int max_terms = 3, int max_shift = 2) {
    std::uniform_int_distribution<int> shift(-max_shift, max_shift);
    std::vector<CoeffTerm> terms;
    const int count = std::uniform_int_distribution<int>(1, max_terms)(rng);
    for (int i = 0; i < count; ++i) {
        const int n = shift(rng), m = shift(rng);
        terms.push_back({n, m, random_coeff(rng, n, m)});
    }
    return make_element(q, terms);
}

/// Compactly supported bump max(0, r^2 - (x-cx)^2 - (y-cy)^2) with a phase.
inline CoeffFunction bump(double cx, double cy, double r, Complex phase = 1.0) {
    CoeffFunction out;
    out.f = [=](double x, double y) {
        return phase * std::max(0.0, r * r - (x - cx) * (x - cx) - (y - cy) * (y - cy));
    };
    out.vanishes_at_s0 = cx > r;
    out.vanishes_at_t0 = cy > r;
    return out;
}

}  // namespace qplane::testing
