#ifndef HEUN_TESTS_SUPPORT_HPP
#define HEUN_TESTS_SUPPORT_HPP

#include <cmath>
#include <random>

#include "heun/identities.hpp"
#include "heun/params.hpp"

namespace heun::testing {

inline double rel_err(double got, double want) {
    const double den = std::max(std::abs(got), std::abs(want));
    if (den == 0.0) return 0.0;
    return std::abs(got - want) / den;
}

inline bool away_from_integers(double x, double margin) {
    return std::abs(x - std::round(x)) > margin;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// a > 1 or a < 0, keeping (0, radius) singularity-free on the real line.
inline double draw_admissible_a(std::mt19937_64& rng) {
    return (rng() & 1) ? uniform(rng, 1.5, 3.0) : uniform(rng, -3.0, -0.5);
}

// Generic parameters with all three local exponent parameters kept away
// from integers, so both branches exist at every finite point.
inline HeunParams draw_params(std::mt19937_64& rng, double margin = 0.15) {
    for (;;) {
        const double a = draw_admissible_a(rng);
        const double alpha = uniform(rng, -3.0, 3.0);
        const double beta = uniform(rng, -3.0, 3.0);
        const double gamma = uniform(rng, -3.0, 3.0);
        const double delta = uniform(rng, -3.0, 3.0);
        const double epsilon = 1.0 + alpha + beta - gamma - delta;
        if (std::abs(epsilon) > 3.0) continue; // keep every parameter in [-3, 3]
        if (!away_from_integers(gamma, margin) ||
            !away_from_integers(delta, margin) ||
            !away_from_integers(epsilon, margin)) {
            continue;
        }
        const double q = uniform(rng, -3.0, 3.0);
        return HeunParams{a, q, alpha, beta, gamma, delta, epsilon};
    }
}

// The default region of the q = a*alpha*beta expansions: gamma, delta in
// (0, 1) and non-integer epsilon, so every family and branch is available.
inline HeunParams draw_accessory_params(std::mt19937_64& rng,
                                    double a_fixed = 0.0) {
    for (;;) {
        const double a = (a_fixed != 0.0) ? a_fixed : uniform(rng, 1.5, 3.0);
        const double alpha = uniform(rng, 0.5, 2.5);
        const double beta = uniform(rng, 0.5, 2.5);
        const double gamma = uniform(rng, 0.1, 0.9);
        const double delta = uniform(rng, 0.1, 0.9);
        const double epsilon = 1.0 + alpha + beta - gamma - delta;
        if (!away_from_integers(epsilon, 0.1)) continue;
        const double q = a * (alpha * beta);
        return HeunParams{a, q, alpha, beta, gamma, delta, epsilon};
    }
}

// One admissible parameter draw per case tag. The defining condition is
// imposed exactly; exponent parameters stay away from integers so both
// branches and the mapped first branch exist.
inline HeunParams draw_for_case(std::mt19937_64& rng, CaseTag tag) {
    for (;;) {
        const double a = draw_admissible_a(rng);
        double alpha = uniform(rng, -3.0, 3.0);
        const double beta = uniform(rng, -3.0, 3.0);
        const double gamma = uniform(rng, -3.0, 3.0);
        const double delta = uniform(rng, -3.0, 3.0);
        if (tag == CaseTag::AlphaBetaZero) alpha = 0.0;
        const double epsilon = 1.0 + alpha + beta - gamma - delta;
        if (std::abs(epsilon) > 3.0) continue;
        if (!away_from_integers(gamma, 0.15) ||
            !away_from_integers(delta, 0.15) ||
            !away_from_integers(epsilon, 0.15)) {
            continue;
        }
        double q = 0.0;
        switch (tag) {
            case CaseTag::QZero: q = 0.0; break;
            case CaseTag::QAlphaBeta: q = alpha * beta; break;
            case CaseTag::QAAlphaBeta: q = a * (alpha * beta); break;
            case CaseTag::AlphaBetaZero: q = uniform(rng, -3.0, 3.0); break;
        }
        const HeunParams p{a, q, alpha, beta, gamma, delta, epsilon};
        if (tag != CaseTag::AlphaBetaZero && std::abs(p.alpha * p.beta) < 0.05)
            continue; // keep clear of the alpha beta = 0 degeneracy
        if (tag == CaseTag::AlphaBetaZero && std::abs(q) < 0.05) continue;
        return p;
    }
}

} // namespace heun::testing

#endif
