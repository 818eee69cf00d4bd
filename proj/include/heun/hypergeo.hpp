#ifndef HEUN_HYPERGEO_HPP
#define HEUN_HYPERGEO_HPP

#include "heun/params.hpp"

namespace heun {

// Gauss 2F1 parameters in sum-product form. The series term ratio
//   T_{k+1}/T_k = (P + k S + k^2) z / ((C + k)(k + 1))
// depends on the numerator pair (A, B) only through S = A+B and P = A*B,
// so a pair known from a quadratic (possibly with complex roots) can be
// used without ever extracting A and B.
struct Gauss2F1Spec {
    double sum;     // A + B
    double product; // A * B
    double c;

    static Gauss2F1Spec from_ab(double a, double b, double c);
    static Gauss2F1Spec from_sum_product(double sum, double product, double c);
};

// Series value of 2F1 for |z| < 1.
// Throws InvalidParameters (c a non-positive integer),
// OutsideConvergenceDomain (|z| >= 1), NonconvergentSeries (cap hit).
double gauss_2f1(const Gauss2F1Spec& spec, double z);

// Incomplete beta function B_z(p, q) = integral of t^(p-1) (1-t)^(q-1)
// over (0, z), computed as z^p/p * 2F1(p, 1-q; p+1; z). Requires p > 0
// and z in (0, 1); q may be any real.
double incomplete_beta(double p, double q, double z);

struct AppellF1Spec {
    double a;
    double b1;
    double b2;
    double c;
};

// Appell F1 double series, summed by anti-diagonals m + n = k.
// Requires |x| < 1 and |y| < 1 and c not a non-positive integer.
double appell_f1(const AppellF1Spec& spec, double x, double y);

// I_n(z) = integral of t^(n-gamma) (1-t)^(-delta) (1-t/a)^(-epsilon)
// over (0, z), expressed through Appell F1:
//   I_n(z) = z^(1+n-gamma)/(1+n-gamma)
//            * F1(1+n-gamma; delta, epsilon; 2+n-gamma; z, z/a).
// All factors of the integrand are kept positive on the interval, which
// multiplies the textbook antiderivative by a constant only. Requires
// n >= 0, 1 + n - gamma > 0, a > 1 or a < 0, and z in (0, min(1, |a|)).
double antiderivative_term(int n, const HeunParams& params, double z);

// Integral of t^(n-gamma) (1-t^2)^(-delta) over (0, z): the epsilon = delta,
// a = -1 instance collapses to a single Gauss function of argument z^2,
//   z^(1+n-gamma)/(1+n-gamma) * 2F1((1-gamma+n)/2, delta; (3-gamma+n)/2; z^2).
double square_argument_reduction(int n, double gamma, double delta, double z);

} // namespace heun

#endif
