#ifndef HEUN_IDENTITIES_HPP
#define HEUN_IDENTITIES_HPP

#include <span>
#include <utility>
#include <vector>

#include "heun/params.hpp"

namespace heun {

// The four accessory-parameter cases in which the derivative of a Heun
// solution solves another Heun equation.
enum class CaseTag { QZero, QAlphaBeta, QAAlphaBeta, AlphaBetaZero };

// Prefactor-exponent choice for a case: SBranch::Plus is s = 1,
// SBranch::Minus is s = -gamma / -delta / -epsilon depending on the case.
// AlphaBetaZero has no prefactor and ignores the choice.
enum class SBranch { Plus, Minus };

struct IdentityCase {
    CaseTag tag;
    double s; // 1, or minus the local exponent parameter; 0 for AlphaBetaZero
};

IdentityCase make_case(const HeunParams& params, CaseTag tag,
                       SBranch branch = SBranch::Plus);

// Tolerance of the boolean case check.
inline constexpr double kCaseConditionTol = 1e-12;

// Computations proceed as long as the defining residual stays below this
// slack, so that near-miss parameters produce a failing report instead of
// an exception (grossly wrong inputs still throw CaseConditionViolation).
inline constexpr double kCaseConditionSlack = 0.05;

// Parameters of the mapped equation, with the alpha'/beta' pair kept in
// sum-product form (the pair may have complex roots; nothing downstream
// needs the roots themselves).
struct PrimedParams {
    double a;
    double q_prime;
    double gamma_prime;
    double delta_prime;
    double epsilon_prime;
    double sum_prime;     // alpha' + beta'
    double product_prime; // alpha' * beta'
    SingularPoint prefactor_point;
    double prefactor_exponent; // s; 0 for AlphaBetaZero
};

struct VerificationReport {
    double fitted_constant = 0.0;
    double max_coeff_deviation = 0.0;
    double max_point_deviation = 0.0;
    bool degenerate = false;
    bool pass = false;
};

// True iff the case's defining equation holds to kCaseConditionTol.
bool case_condition(const HeunParams& params, const IdentityCase& idcase);

// The exact parameter map of the case. Throws CaseConditionViolation when
// the defining residual exceeds kCaseConditionSlack, InvalidParameters when
// s is neither 1 nor minus the local exponent parameter.
PrimedParams map_case(const HeunParams& params, const IdentityCase& idcase);

// Coefficients (f1, g1) of the second-order equation satisfied by u' when
// the accessory parameter sits at one of the four special values; evaluated
// literally, including the extra apparent pole at z = q/(alpha beta).
std::pair<double, double> derived_coefficients(const HeunParams& params,
                                               double z);

// Which local solution's derivative the case's prefactor matches:
// s = 1 pairs with the exponent-0 branch, s = -gamma/-delta/-epsilon with
// the other one; AlphaBetaZero pairs with the exponent-0 branch at 0.
std::pair<PointTag, Branch> lhs_branch_for(const IdentityCase& idcase);

// Order-by-order check of d/dz(local solution) against
// constant * prefactor * (mapped first-branch solution), both expanded as
// generalized power series at the case's point. The constant is the ratio
// of leading coefficients; deviations are reported per compared order and,
// as a smoke check, at the given sample points (positive side of the point,
// truncations aligned order-for-order).
VerificationReport verify_identity(const HeunParams& params,
                                   const IdentityCase& idcase, int order,
                                   std::span<const double> samples,
                                   double tolerance = 1e-10);

// Same check, keeping the per-order data for reporting.
struct IdentityComparison {
    VerificationReport report;
    std::vector<double> lhs_coeffs;   // derivative coefficients, aligned
    std::vector<double> rhs_coeffs;   // constant * mapped coefficients
    std::vector<double> deviations;   // relative, per compared order
};

IdentityComparison verify_identity_detail(const HeunParams& params,
                                          const IdentityCase& idcase, int order,
                                          std::span<const double> samples,
                                          double tolerance = 1e-10);

// Admissibility of the two-hypergeometric closed form: epsilon = -1, q = 0,
// and q' = a * alpha'beta' under the QZero s = 1 map (the condition that
// actually turns the mapped equation into the Gauss equation). The
// alternative constraint gamma + alpha = a(alpha beta + gamma + delta) is
// reported as a residual for comparison but does not gate admissibility;
// the two coincide only when alpha = a.
struct ClosedFormDiagnostic {
    bool admissible = false;
    double epsilon_residual = 0.0;   // epsilon + 1
    double q_residual = 0.0;         // q
    double map_residual = 0.0;       // q' - a * alpha'beta'
    double alt_constraint_residual = 0.0;
};

ClosedFormDiagnostic closed_form_admissible(const HeunParams& params);

} // namespace heun

#endif
