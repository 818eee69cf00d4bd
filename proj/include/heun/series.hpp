#ifndef HEUN_SERIES_HPP
#define HEUN_SERIES_HPP

#include <array>
#include <vector>

#include "heun/params.hpp"

namespace heun {

// Hard cap on the number of series terms summed by any evaluator.
inline constexpr int kSeriesCap = 1000;

// A sum is declared converged once three consecutive term magnitudes fall
// below this fraction of the running sum magnitude.
inline constexpr double kSeriesTol = 1e-16;
inline constexpr int kSeriesConsecutive = 3;

// The equation seen by the coefficient recurrences: alpha and beta enter
// only through their product, so a mapped equation known in sum-product
// form can drive the same code path.
struct OdeView {
    double a;
    double q;
    double alpha_beta;
    double gamma;
    double delta;
    double epsilon;
};

OdeView ode_view(const HeunParams& params);

// Frobenius local solution (z-p)^rho * sum c_n (z-p)^n at a finite
// singular point, normalized to c_0 = 1.
struct LocalSeries {
    SingularPoint point;
    double exponent; // rho
    std::vector<double> coeffs; // c_0 .. c_N
    double radius;
};

// Coefficients c_0..c_N of the local solution with the given exponent,
// from the three-term recurrence obtained by substituting the ansatz into
// the equation. Throws DegenerateExponents when a recurrence denominator
// vanishes (integer exponent pathologies).
std::vector<double> frobenius_coefficients(const OdeView& ode, PointTag point,
                                           double exponent, int n_terms);

// Extended-precision variant used where two coefficient sequences are
// compared order by order and rounding growth over many orders matters.
std::vector<long double> frobenius_coefficients_ext(const OdeView& ode,
                                                    PointTag point,
                                                    double exponent,
                                                    int n_terms);

// The generalized power-series solution of the given branch at a finite
// singular point. n_terms = N produces coefficients c_0..c_N.
LocalSeries frobenius_series(const HeunParams& params, PointTag point,
                             Branch branch, int n_terms);

// Value of the series at z. Throws OutsideConvergenceDomain when
// |z - p| >= radius, or when z sits on the side of p where a fractional
// power (z-p)^rho is not real. Throws NonconvergentSeries when the stored
// coefficients run out before the convergence rule triggers.
double eval_series(const LocalSeries& series, double z);

// Termwise derivative of the series at z.
double eval_series_derivative(const LocalSeries& series, double z);

// Value and termwise derivatives up to order `orders` (at most 3).
// Entry [k] is the k-th derivative.
std::array<double, 4> eval_series_jet(const LocalSeries& series, double z,
                                      int orders);

// u'' + f u' + g u with u, u', u'' read off the series termwise.
double ode_residual(const HeunParams& params, const LocalSeries& series,
                    double z);

} // namespace heun

#endif
