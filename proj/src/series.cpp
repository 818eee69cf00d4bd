#include "heun/series.hpp"

#include <cmath>
#include <sstream>

#include "heun/errors.hpp"

namespace heun {

namespace {

double point_location(const OdeView& ode, PointTag point) {
    switch (point) {
        case PointTag::Zero: return 0.0;
        case PointTag::One: return 1.0;
        case PointTag::A: return ode.a;
        default:
            throw InvalidParameters("Frobenius series require a finite singular point");
    }
}

bool near_integer(double x) {
    return std::abs(x - std::round(x)) <= kExponentIntegerTol;
}

// Local exponent parameter at the point: gamma at 0, delta at 1, epsilon at a.
double local_exponent_parameter(const OdeView& ode, PointTag point) {
    switch (point) {
        case PointTag::Zero: return ode.gamma;
        case PointTag::One: return ode.delta;
        default: return ode.epsilon;
    }
}

} // namespace

OdeView ode_view(const HeunParams& params) {
    return {params.a, params.q, params.alpha * params.beta,
            params.gamma, params.delta, params.epsilon};
}

namespace {

template <typename Real>
std::vector<Real> frobenius_recurrence(const OdeView& ode, PointTag point,
                                       double exponent, int n_terms) {
    if (n_terms < 1) {
        throw InvalidTermCount("term count must be at least 1");
    }
    const double p = point_location(ode, point);

    // Multiply the equation by z(z-1)(z-a) and shift to t = z - p:
    //   P(t) u'' + Q(t) u' + R(t) u = 0
    // with P = t(t^2 + s1 t + s2), Q = q2 t^2 + q1 t + q0, R = r1 t + r0.
    const Real o1 = (point == PointTag::Zero) ? p - 1.0 : p;
    const Real o2 = (point == PointTag::A) ? Real(p) - 1.0 : Real(p) - ode.a;
    const Real s1 = o1 + o2;
    const Real s2 = o1 * o2;

    const Real q0 = Real(ode.gamma) * (Real(p) - 1.0) * (Real(p) - ode.a) +
                    Real(ode.delta) * p * (Real(p) - ode.a) +
                    Real(ode.epsilon) * p * (Real(p) - 1.0);
    const Real q1 = Real(ode.gamma) * ((Real(p) - 1.0) + (Real(p) - ode.a)) +
                    Real(ode.delta) * (Real(p) + (Real(p) - ode.a)) +
                    Real(ode.epsilon) * (Real(p) + (Real(p) - 1.0));
    const Real q2 = Real(ode.gamma) + ode.delta + ode.epsilon;

    const Real r1 = ode.alpha_beta;
    const Real r0 = Real(ode.alpha_beta) * p - ode.q;

    const Real rho = exponent;
    std::vector<Real> c(static_cast<size_t>(n_terms) + 1);
    c[0] = 1.0;
    for (int m = 1; m <= n_terms; ++m) {
        const Real A = (m + rho) * ((m + rho - 1.0) * s2 + q0);
        if (std::abs(double(A)) <= 1e-9 * std::abs(double(s2)) * m) {
            std::ostringstream msg;
            msg << "recurrence denominator vanishes at order " << m;
            throw DegenerateExponents(msg.str());
        }
        const Real B = (m - 1.0 + rho) * (m - 2.0 + rho) * s1 +
                       (m - 1.0 + rho) * q1 + r0;
        Real acc = B * c[m - 1];
        if (m >= 2) {
            const Real C = (m - 2.0 + rho) * (m - 3.0 + rho) +
                           (m - 2.0 + rho) * q2 + r1;
            acc += C * c[m - 2];
        }
        c[m] = -acc / A;
    }
    return c;
}

} // namespace

std::vector<double> frobenius_coefficients(const OdeView& ode, PointTag point,
                                           double exponent, int n_terms) {
    return frobenius_recurrence<double>(ode, point, exponent, n_terms);
}

std::vector<long double> frobenius_coefficients_ext(const OdeView& ode,
                                                    PointTag point,
                                                    double exponent,
                                                    int n_terms) {
    return frobenius_recurrence<long double>(ode, point, exponent, n_terms);
}

LocalSeries frobenius_series(const HeunParams& params, PointTag point,
                             Branch branch, int n_terms) {
    if (point == PointTag::Infinity) {
        throw InvalidParameters("Frobenius series require a finite singular point");
    }
    const OdeView ode = ode_view(params);
    const double gp = local_exponent_parameter(ode, point);

    double rho;
    if (branch == Branch::First) {
        rho = 0.0;
        // Recurrence denominators at exponent 0 contain (m - 1 + gp).
        if (gp <= kExponentIntegerTol && near_integer(gp)) {
            throw DegenerateExponents(
                "local exponent parameter is a non-positive integer");
        }
    } else {
        // Exponent difference (1 - gp) must stay away from integers.
        if (near_integer(gp)) {
            throw DegenerateExponents(
                "integer exponent difference at the expansion point");
        }
        rho = 1.0 - gp;
    }

    LocalSeries series;
    series.point = singular_point(params, point);
    series.exponent = rho;
    series.coeffs = frobenius_coefficients(ode, point, rho, n_terms);
    series.radius = convergence_radius(params, point);
    return series;
}

std::array<double, 4> eval_series_jet(const LocalSeries& series, double z,
                                      int orders) {
    if (orders < 0 || orders > 3) {
        throw InvalidParameters("derivative order must be between 0 and 3");
    }
    const double t = z - series.point.location;
    const double rho = series.exponent;
    if (std::abs(t) >= series.radius) {
        throw OutsideConvergenceDomain("z outside the series disk");
    }
    const bool integer_rho = near_integer(rho);
    if (t < 0.0 && !integer_rho) {
        throw OutsideConvergenceDomain(
            "fractional power of a negative base; evaluate on the other side");
    }

    std::array<double, 4> sums{};
    if (t == 0.0) {
        // Only the term with exponent rho + k - j == 0 survives; terms with a
        // negative exponent carry a vanishing falling factorial when rho is a
        // non-negative integer, and diverge otherwise.
        const long m0 = integer_rho ? std::lround(rho) : -1;
        if (m0 < 0) {
            throw PoleEvaluation("series value diverges at the expansion point");
        }
        double factorial = 1.0;
        for (int j = 0; j <= orders; ++j) {
            if (j > 0) factorial *= j;
            const long k = j - m0;
            if (k >= 0 && k < static_cast<long>(series.coeffs.size())) {
                sums[static_cast<size_t>(j)] =
                    series.coeffs[static_cast<size_t>(k)] * factorial;
            }
        }
        return sums;
    }

    // Term of order k of the j-th derivative:
    //   c_k * (rho+k)(rho+k-1)...(rho+k-j+1) * t^(rho+k-j).
    // Smallness is judged against the largest partial-sum magnitude seen so
    // far, which keeps the rule meaningful when a sum passes through zero.
    std::array<double, 4> power{};
    std::array<double, 4> peak{};
    const double rho_eff = integer_rho ? std::round(rho) : rho;
    for (int j = 0; j <= orders; ++j) {
        power[static_cast<size_t>(j)] = std::pow(t, rho_eff - j);
    }

    int consecutive_small = 0;
    bool converged = false;
    double tk = 1.0; // t^k
    for (size_t k = 0; k < series.coeffs.size(); ++k) {
        const double ck = series.coeffs[k];
        double fall = 1.0;
        bool small = true;
        for (int j = 0; j <= orders; ++j) {
            const auto ju = static_cast<size_t>(j);
            const double term = ck * fall * power[ju] * tk;
            sums[ju] += term;
            peak[ju] = std::max(peak[ju], std::abs(sums[ju]));
            if (std::abs(term) > kSeriesTol * peak[ju]) small = false;
            fall *= (rho + static_cast<double>(k) - j);
        }
        consecutive_small = small ? consecutive_small + 1 : 0;
        if (consecutive_small >= kSeriesConsecutive) {
            converged = true;
            break;
        }
        tk *= t;
    }
    if (!converged) {
        throw NonconvergentSeries(
            "series coefficients exhausted before the convergence rule");
    }
    return sums;
}

double eval_series(const LocalSeries& series, double z) {
    return eval_series_jet(series, z, 0)[0];
}

double eval_series_derivative(const LocalSeries& series, double z) {
    return eval_series_jet(series, z, 1)[1];
}

double ode_residual(const HeunParams& params, const LocalSeries& series,
                    double z) {
    const auto jet = eval_series_jet(series, z, 2);
    const auto [f, g] = heun_coefficients(params, z);
    return jet[2] + f * jet[1] + g * jet[0];
}

} // namespace heun
