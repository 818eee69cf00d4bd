#include "heun/params.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "heun/errors.hpp"

namespace heun {

HeunParams validate_params(double a, double q, double alpha, double beta,
                           double gamma, double delta,
                           std::optional<double> epsilon) {
    if (a == 0.0 || a == 1.0) {
        throw SingularityCollision("a must be distinct from 0 and 1");
    }
    double eps;
    if (epsilon.has_value()) {
        eps = *epsilon;
        double residual = 1.0 + alpha + beta - gamma - delta - eps;
        if (std::abs(residual) > kFuchsianTol) {
            std::ostringstream msg;
            msg << "Fuchsian condition 1+alpha+beta = gamma+delta+epsilon "
                   "violated by " << residual;
            throw FuchsianViolation(msg.str());
        }
    } else {
        eps = 1.0 + alpha + beta - gamma - delta;
    }
    return HeunParams{a, q, alpha, beta, gamma, delta, eps};
}

SingularPoint singular_point(const HeunParams& params, PointTag tag) {
    switch (tag) {
        case PointTag::Zero: return {tag, 0.0};
        case PointTag::One: return {tag, 1.0};
        case PointTag::A: return {tag, params.a};
        default: return {tag, std::numeric_limits<double>::infinity()};
    }
}

std::pair<double, double> heun_coefficients(const HeunParams& params, double z) {
    if (z == 0.0 || z == 1.0 || z == params.a) {
        throw PoleEvaluation("z coincides with a singular point");
    }
    double f = params.gamma / z + params.delta / (z - 1.0) +
               params.epsilon / (z - params.a);
    double g = (params.alpha * params.beta * z - params.q) /
               (z * (z - 1.0) * (z - params.a));
    return {f, g};
}

IndicialExponents indicial_exponents(const HeunParams& params, PointTag point) {
    double rho1 = 0.0;
    double rho2 = 0.0;
    switch (point) {
        case PointTag::Zero: rho2 = 1.0 - params.gamma; break;
        case PointTag::One: rho2 = 1.0 - params.delta; break;
        case PointTag::A: rho2 = 1.0 - params.epsilon; break;
        case PointTag::Infinity:
            rho1 = params.alpha;
            rho2 = params.beta;
            break;
    }
    double diff = rho2 - rho1;
    bool degenerate =
        std::abs(diff - std::round(diff)) <= kExponentIntegerTol;
    return {rho1, rho2, degenerate};
}

double convergence_radius(const HeunParams& params, PointTag point) {
    double a = params.a;
    switch (point) {
        case PointTag::Zero: return std::min(1.0, std::abs(a));
        case PointTag::One: return std::min(1.0, std::abs(a - 1.0));
        case PointTag::A: return std::min(std::abs(a), std::abs(a - 1.0));
        default:
            throw InvalidParameters("convergence radius is defined at finite points only");
    }
}

} // namespace heun
