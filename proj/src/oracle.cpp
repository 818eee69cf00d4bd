#include "heun/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "heun/errors.hpp"
#include "heun/series.hpp"

namespace heun {

namespace {

struct State {
    double u;
    double v; // u'
};

State rhs(const HeunParams& params, double z, const State& y) {
    const auto [f, g] = heun_coefficients(params, z);
    return {y.v, -f * y.v - g * y.u};
}

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// 4th-order weights (for the embedded error estimate).
constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
                 e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;

} // namespace

std::pair<double, double> integrate_heun(const IntegrationSpec& spec,
                                         double target_z) {
    const HeunParams& params = spec.params;
    const SingularPoint point = singular_point(params, spec.seed_point);
    if (spec.seed_point == PointTag::Infinity) {
        throw InvalidParameters("seed point must be finite");
    }
    const double radius = convergence_radius(params, spec.seed_point);

    double offset = spec.seed_offset;
    if (offset == 0.0) offset = kDefaultSeedFraction * radius;
    if (offset <= 0.0 || offset > 0.1 * radius) {
        throw InvalidParameters("seed offset must lie in (0, 0.1 * radius]");
    }

    const double direction = (target_z >= point.location) ? 1.0 : -1.0;
    const double z0 = point.location + direction * offset;

    // The whole path, seed included, must stay clear of 0, 1, a.
    const double lo = std::min(z0, target_z);
    const double hi = std::max(z0, target_z);
    for (double s : {0.0, 1.0, params.a}) {
        if (s >= lo && s <= hi) {
            throw PathThroughSingularity("a singular point lies on the integration path");
        }
    }

    const LocalSeries seed =
        frobenius_series(params, spec.seed_point, spec.branch, kSeedTerms);
    State y{eval_series(seed, z0), eval_series_derivative(seed, z0)};
    double z = z0;
    if (target_z == z0) return {y.u, y.v};

    // Steer each step two decades below the requested tolerance so the
    // accumulated error over the whole path stays near spec.tolerance.
    const double tol = std::max(1e-14, 0.01 * spec.tolerance);
    const double span = hi - lo;
    double h = direction * std::min(0.1 * span, 1e-3);
    State k1 = rhs(params, z, y);

    double prev_err = 1.0;
    const int max_steps = 1000000;
    for (int step = 0; step < max_steps; ++step) {
        if (std::abs(h) < 1e-14 * span) {
            throw ToleranceNotMet("step size underflow");
        }
        bool last = false;
        if ((z + h - target_z) * direction >= 0.0) {
            h = target_z - z;
            last = true;
        }

        const State k2 = rhs(params, z + c2 * h,
                             {y.u + h * a21 * k1.u, y.v + h * a21 * k1.v});
        const State k3 = rhs(params, z + c3 * h,
                             {y.u + h * (a31 * k1.u + a32 * k2.u),
                              y.v + h * (a31 * k1.v + a32 * k2.v)});
        const State k4 = rhs(params, z + c4 * h,
                             {y.u + h * (a41 * k1.u + a42 * k2.u + a43 * k3.u),
                              y.v + h * (a41 * k1.v + a42 * k2.v + a43 * k3.v)});
        const State k5 =
            rhs(params, z + c5 * h,
                {y.u + h * (a51 * k1.u + a52 * k2.u + a53 * k3.u + a54 * k4.u),
                 y.v + h * (a51 * k1.v + a52 * k2.v + a53 * k3.v + a54 * k4.v)});
        const State k6 =
            rhs(params, z + h,
                {y.u + h * (a61 * k1.u + a62 * k2.u + a63 * k3.u + a64 * k4.u +
                            a65 * k5.u),
                 y.v + h * (a61 * k1.v + a62 * k2.v + a63 * k3.v + a64 * k4.v +
                            a65 * k5.v)});
        const State y5{
            y.u + h * (b1 * k1.u + b3 * k3.u + b4 * k4.u + b5 * k5.u + b6 * k6.u),
            y.v + h * (b1 * k1.v + b3 * k3.v + b4 * k4.v + b5 * k5.v + b6 * k6.v)};
        const State k7 = rhs(params, z + h, y5);
        const State y4{
            y.u + h * (e1 * k1.u + e3 * k3.u + e4 * k4.u + e5 * k5.u +
                       e6 * k6.u + e7 * k7.u),
            y.v + h * (e1 * k1.v + e3 * k3.v + e4 * k4.v + e5 * k5.v +
                       e6 * k6.v + e7 * k7.v)};

        const double scale_u = tol + tol * std::max(std::abs(y.u), std::abs(y5.u));
        const double scale_v = tol + tol * std::max(std::abs(y.v), std::abs(y5.v));
        const double eu = (y5.u - y4.u) / scale_u;
        const double ev = (y5.v - y4.v) / scale_v;
        const double err = std::sqrt(0.5 * (eu * eu + ev * ev));

        if (err <= 1.0) {
            z += h;
            y = y5;
            k1 = k7; // FSAL
            if (last) return {y.u, y.v};
            const double e = std::max(err, 1e-10);
            double factor = 0.9 * std::pow(e, -0.7 / 5.0) * std::pow(prev_err, 0.4 / 5.0);
            factor = std::clamp(factor, 0.2, 5.0);
            prev_err = e;
            h *= factor;
        } else {
            h *= std::max(0.2, 0.9 * std::pow(err, -1.0 / 5.0));
        }
    }
    throw ToleranceNotMet("step limit exceeded");
}

double adaptive_quadrature(const std::function<double(double)>& f,
                           double endpoint_exponent, double upper,
                           double tolerance) {
    if (endpoint_exponent <= -1.0) {
        throw NonintegrableEndpoint("integrand exponent at 0 must exceed -1");
    }
    if (upper <= 0.0) {
        throw InvalidParameters("upper limit must be positive");
    }

    // Substitution t = upper * x, x = 1/(1 + exp(-pi sinh u)); then
    // dx/du = pi cosh(u) x (1-x). Both x and 1-x are computed without
    // cancellation, so algebraic endpoint singularities are tamed.
    const double kUMax = 6.5;
    auto node_sum = [&](double h, bool odd_only) {
        double acc = 0.0;
        const int kmax = static_cast<int>(kUMax / h);
        for (int k = -kmax; k <= kmax; ++k) {
            if (odd_only && k % 2 == 0) continue;
            const double u = k * h;
            const double s = M_PI * std::sinh(u);
            const double x = 1.0 / (1.0 + std::exp(-s));
            const double xc = 1.0 / (1.0 + std::exp(s)); // 1 - x
            const double w = M_PI * std::cosh(u) * x * xc;
            if (w == 0.0 || x == 0.0 || xc == 0.0) continue;
            const double t = upper * x;
            if (t <= 0.0 || t >= upper) continue;
            const double val = f(t);
            if (std::isfinite(val)) acc += w * val;
        }
        return acc;
    };

    double h = 1.0;
    double total = node_sum(h, false);
    double integral = upper * h * total;
    const int max_levels = 12;
    for (int level = 1; level <= max_levels; ++level) {
        h *= 0.5;
        total += node_sum(h, true);
        const double refined = upper * h * total;
        const double change = std::abs(refined - integral);
        integral = refined;
        if (level >= 3 && change <= tolerance * (1.0 + std::abs(integral))) {
            return integral;
        }
    }
    throw ToleranceNotMet("quadrature level cap reached");
}

} // namespace heun
