#ifndef HEUN_PARAMS_HPP
#define HEUN_PARAMS_HPP

#include <optional>
#include <utility>

namespace heun {

// Parameters of the general Heun equation
//
//   u'' + (gamma/z + delta/(z-1) + epsilon/(z-a)) u'
//      + (alpha*beta*z - q) / (z(z-1)(z-a)) u = 0
//
// with regular singular points z = 0, 1, a, infinity and the Fuchsian
// constraint 1 + alpha + beta = gamma + delta + epsilon.
struct HeunParams {
    double a;
    double q;       // accessory parameter
    double alpha;
    double beta;
    double gamma;
    double delta;
    double epsilon;
};

inline constexpr double kFuchsianTol = 1e-12;

// Tolerance used whenever an exponent has to be compared against an integer
// (degenerate-exponent rejection, branch classification).
inline constexpr double kExponentIntegerTol = 1e-9;

enum class PointTag { Zero, One, A, Infinity };

struct SingularPoint {
    PointTag tag;
    double location; // 0, 1, a; +infinity for PointTag::Infinity
};

enum class Branch { First, Second };

struct IndicialExponents {
    double rho1; // exponent of the First branch (0 at finite points)
    double rho2; // exponent of the Second branch (1-gamma, 1-delta, 1-epsilon)
    bool degenerate; // exponent difference within kExponentIntegerTol of an integer
};

// Checks the Fuchsian condition (to kFuchsianTol) and a not in {0, 1}.
// If epsilon is omitted it is resolved as 1 + alpha + beta - gamma - delta.
// Throws FuchsianViolation or SingularityCollision.
HeunParams validate_params(double a, double q, double alpha, double beta,
                           double gamma, double delta,
                           std::optional<double> epsilon = std::nullopt);

SingularPoint singular_point(const HeunParams& params, PointTag tag);

// Coefficients (f, g) of u' and u at a regular point z.
// Throws PoleEvaluation when z is one of 0, 1, a.
std::pair<double, double> heun_coefficients(const HeunParams& params, double z);

IndicialExponents indicial_exponents(const HeunParams& params, PointTag point);

// Distance from a finite singular point to the nearest of the other two.
double convergence_radius(const HeunParams& params, PointTag point);

} // namespace heun

#endif
