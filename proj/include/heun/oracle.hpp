#ifndef HEUN_ORACLE_HPP
#define HEUN_ORACLE_HPP

#include <functional>
#include <utility>

#include "heun/params.hpp"

namespace heun {

// Independent ground truth for the series machinery: direct numerical
// integration of the equation, seeded from a short local series, plus
// double-exponential quadrature for the integral representations. The
// only series code these routines share with the evaluators is the
// 20-term Frobenius seed.
struct IntegrationSpec {
    HeunParams params;
    PointTag seed_point = PointTag::Zero;
    Branch branch = Branch::First;
    double seed_offset = 0.0; // distance from the singular point; 0 picks 0.02 * radius
    double tolerance = 1e-10;
};

inline constexpr double kDefaultSeedFraction = 0.02;
inline constexpr int kSeedTerms = 20;

// Integrates (u, u')' = (u', -f u' - g u) from the seed to target_z with an
// embedded Runge-Kutta 5(4) pair and PI step control; local error per step
// is kept at or below spec.tolerance. Initial values are read off a
// kSeedTerms-term Frobenius series at seed_point +/- seed_offset (the side
// facing the target). Returns (u, u').
std::pair<double, double> integrate_heun(const IntegrationSpec& spec,
                                         double target_z);

// Double-exponential (tanh-sinh) quadrature of f over (0, upper).
// endpoint_exponent is the algebraic behavior f ~ t^p at t -> 0+, used to
// reject non-integrable inputs (p <= -1). Stops once successive level
// refinements agree to tolerance * (1 + |I|).
double adaptive_quadrature(const std::function<double(double)>& f,
                           double endpoint_exponent, double upper,
                           double tolerance);

} // namespace heun

#endif
