#ifndef HEUN_EXPANSIONS_HPP
#define HEUN_EXPANSIONS_HPP

#include <span>
#include <vector>

#include "heun/params.hpp"

namespace heun {

// Series solutions of the q = a*alpha*beta case, built from the derivative
// identity at z = a: the derivative of the sought solution factors as
// z^(-gamma) (1-z)^(-delta) (a-z)^s times an auxiliary Heun function whose
// Taylor coefficients a_n follow the standard three-term recurrence.
// Integrating termwise gives three families representing the z^(1-gamma)
// branch at 0 up to one constant:
//   Appell: sum a_n I_n(z) with the s = -epsilon coefficients,
//   Beta:   sum a_n [a B_z(1-gamma+n, 1-delta) - B_z(2-gamma+n, 1-delta)]
//           with the s = 1 coefficients,
//   TwoF1:  the same bracket written through Gauss functions,
//           a z^p/p 2F1(p, delta; p+1; z) - z^(p+1)/(p+1) 2F1(p+1, delta;
//           p+2; z), p = 1-gamma+n.
// ClosedForm is the two-hypergeometric solution available when
// epsilon = -1, q = 0 and the mapped equation degenerates to Gauss form.
enum class ExpansionKind { Appell, Beta, TwoF1, ClosedForm };

// Taylor coefficients a_0..a_N of the auxiliary function for prefactor
// exponent s in {1, -epsilon}. Requires q = a*alpha*beta (within the case
// slack) and gamma not a positive integer.
std::vector<double> auxiliary_coefficients(const HeunParams& params, double s,
                                       int n_terms);

struct ExpansionSeries {
    ExpansionKind kind;
    HeunParams params;
    std::vector<double> coeffs; // a_n; ClosedForm stores the 2F1 Taylor terms
    double domain_upper;        // min(1, |a|)
    double constant = 0.0;      // ClosedForm: leading-coefficient constant

    struct Eval {
        double value;
        // Set when the last retained term still exceeds 1e-12 of the sum.
        bool truncation_warning;
    };

    Eval evaluate(double z) const;
    double operator()(double z) const { return evaluate(z).value; }

    // Contribution of index n at z (series kinds), or of the n-th Gauss
    // coefficient of the integrated closed form.
    double term(int n, double z) const;
};

// Requires q = a*alpha*beta and gamma < 1 (every antiderivative then
// vanishes at 0, pinning the pure z^(1-gamma) branch); the Appell family
// additionally needs a > 1 or a < 0.
ExpansionSeries expand_appell(const HeunParams& params, int n_terms);
ExpansionSeries expand_beta(const HeunParams& params, int n_terms);
ExpansionSeries expand_2f1(const HeunParams& params, int n_terms);

// The exponent-0 solution 1 + C * integral of t * 2F1(alpha', beta';
// gamma+2; t), with C fitted from the leading derivative coefficient.
// Throws NotAdmissible unless closed_form_admissible passes.
ExpansionSeries expand_closed_form(const HeunParams& params, int n_terms);
double closed_form_solution(const HeunParams& params, double z);

// Log-log slope estimates of an individual TwoF1-form term near both ends
// of the domain; probes_at_zero approach 0, probes_at_one approach 1.
struct TermExponentEstimate {
    double at_zero; // expect 1 - gamma + n
    double at_one;  // expect min(0, 1 - delta): bounded terms give ~0
};

TermExponentEstimate term_singular_exponent(const HeunParams& params, int n,
                                            std::span<const double> probes_at_zero,
                                            std::span<const double> probes_at_one);

} // namespace heun

#endif
