#include "heun/identities.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "heun/errors.hpp"
#include "heun/series.hpp"

namespace heun {

namespace {

double local_parameter(const HeunParams& params, CaseTag tag) {
    switch (tag) {
        case CaseTag::QZero: return params.gamma;
        case CaseTag::QAlphaBeta: return params.delta;
        case CaseTag::QAAlphaBeta: return params.epsilon;
        default: return 0.0;
    }
}

double case_residual(const HeunParams& params, CaseTag tag) {
    const double ab = params.alpha * params.beta;
    switch (tag) {
        case CaseTag::QZero: return params.q;
        case CaseTag::QAlphaBeta: return params.q - ab;
        case CaseTag::QAAlphaBeta: return params.q - params.a * ab;
        default: return ab;
    }
}

// Aligned coefficient arrays of both sides of the identity:
// lhs[n] multiplies t^(rho-1+n); rhs starts k0 orders higher.
// Both recurrences run in extended precision: the order-by-order match is
// held to 1e-10 over dozens of orders, so double rounding growth would eat
// most of that budget.
struct IdentitySeries {
    std::vector<long double> lhs; // derivative coefficients d_n = (rho+n) c_n
    std::vector<long double> rhs; // mapped first-branch coefficients c'_m
    double exponent_lhs;          // rho - 1
    int k0;                       // rhs order offset: s + 1 - rho
    PointTag point;
};

IdentitySeries build_identity_series(const HeunParams& params,
                                     const IdentityCase& idcase, int order) {
    const auto [point, branch] = lhs_branch_for(idcase);
    // Runs the branch admissibility checks; the coefficients themselves are
    // recomputed below in extended precision.
    const LocalSeries local = frobenius_series(params, point, branch, 1);
    const double rho = local.exponent;

    std::vector<long double> lhs =
        frobenius_coefficients_ext(ode_view(params), point, rho, order);
    for (size_t n = 0; n < lhs.size(); ++n) {
        lhs[n] *= rho + static_cast<double>(n);
    }

    const PrimedParams primed = map_case(params, idcase);
    const OdeView mapped{primed.a,           primed.q_prime,
                         primed.product_prime, primed.gamma_prime,
                         primed.delta_prime, primed.epsilon_prime};
    std::vector<long double> rhs =
        frobenius_coefficients_ext(mapped, point, 0.0, order);

    const double s = primed.prefactor_exponent;
    const double k0_exact = s + 1.0 - rho;
    const int k0 = static_cast<int>(std::lround(k0_exact));
    if (std::abs(k0_exact - k0) > 1e-6 || k0 < 0) {
        throw InvalidParameters("prefactor exponent does not align with the branch");
    }
    return {std::move(lhs), std::move(rhs), rho - 1.0, k0, point};
}

} // namespace

IdentityCase make_case(const HeunParams& params, CaseTag tag, SBranch branch) {
    if (tag == CaseTag::AlphaBetaZero) {
        return {tag, 0.0};
    }
    const double s =
        (branch == SBranch::Plus) ? 1.0 : -local_parameter(params, tag);
    return {tag, s};
}

bool case_condition(const HeunParams& params, const IdentityCase& idcase) {
    return std::abs(case_residual(params, idcase.tag)) <= kCaseConditionTol;
}

PrimedParams map_case(const HeunParams& params, const IdentityCase& idcase) {
    const double residual = case_residual(params, idcase.tag);
    if (std::abs(residual) > kCaseConditionSlack) {
        throw CaseConditionViolation("case condition grossly violated");
    }
    const double a = params.a;
    const double ab = params.alpha * params.beta;
    const double ga = params.gamma, de = params.delta, ep = params.epsilon;
    const double s = idcase.s;

    if (idcase.tag != CaseTag::AlphaBetaZero) {
        const double gp = local_parameter(params, idcase.tag);
        if (std::abs(s - 1.0) > kExponentIntegerTol &&
            std::abs(s + gp) > kExponentIntegerTol) {
            throw InvalidParameters("s must be 1 or minus the local exponent parameter");
        }
    }

    PrimedParams out;
    out.a = a;
    switch (idcase.tag) {
        case CaseTag::QZero:
            out.gamma_prime = 2.0 * s + ga;
            out.delta_prime = de + 1.0;
            out.product_prime = ab + (2.0 * ga + de + ep) + s * (de + ep + 2.0);
            out.sum_prime = ga + de + ep + 2.0 * (s + 1.0) - 1.0;
            out.q_prime = ga * (1.0 + a) + s * (a * (de + 1.0) + (ep + 1.0));
            out.prefactor_point = singular_point(params, PointTag::Zero);
            out.prefactor_exponent = s;
            break;
        case CaseTag::QAlphaBeta:
            out.gamma_prime = ga + 1.0;
            out.delta_prime = 2.0 * s + de;
            out.product_prime = ab + (ga + 2.0 * de + ep) + s * (ga + ep + 2.0);
            out.sum_prime = ga + de + ep + 2.0 * (s + 1.0) - 1.0;
            out.q_prime = params.q + (ga + ep + a * de) + a * (ga + 1.0) * s;
            out.prefactor_point = singular_point(params, PointTag::One);
            out.prefactor_exponent = s;
            break;
        case CaseTag::QAAlphaBeta:
            out.gamma_prime = ga + 1.0;
            out.delta_prime = de + 1.0;
            out.product_prime = ab + (ga + de + 2.0 * ep) + s * (ga + de + 2.0);
            out.sum_prime = ga + de + ep + 2.0 * (s + 1.0) - 1.0;
            out.q_prime = a * ab + a * (ga + de) + ep + s * (ga + 1.0);
            out.prefactor_point = singular_point(params, PointTag::A);
            out.prefactor_exponent = s;
            break;
        case CaseTag::AlphaBetaZero:
            out.gamma_prime = ga + 1.0;
            out.delta_prime = de + 1.0;
            out.product_prime = 2.0 * (ga + de + ep);
            out.sum_prime = (ga + de + ep) + 3.0 - 1.0;
            out.q_prime = params.q + ga * (1.0 + a) + de * a + ep;
            out.prefactor_point = singular_point(params, PointTag::Zero);
            out.prefactor_exponent = 0.0;
            break;
    }
    // epsilon' is pinned by the Fuchsian condition in primed variables.
    out.epsilon_prime =
        1.0 + out.sum_prime - out.gamma_prime - out.delta_prime;
    return out;
}

std::pair<double, double> derived_coefficients(const HeunParams& params,
                                               double z) {
    const double a = params.a;
    const double ab = params.alpha * params.beta;
    if (z == 0.0 || z == 1.0 || z == a || ab * z - params.q == 0.0) {
        throw PoleEvaluation("z coincides with a pole of the derived equation");
    }
    const double ga = params.gamma, de = params.delta, ep = params.epsilon;
    const double pole = ab / (ab * z - params.q);

    const double f1 = (ga + 1.0) / z + (de + 1.0) / (z - 1.0) +
                      (ep + 1.0) / (z - a) - pole;
    const double f = ga / z + de / (z - 1.0) + ep / (z - a);
    const double g1 = -(ga / (z * z) + de / ((z - 1.0) * (z - 1.0)) +
                        ep / ((z - a) * (z - a))) +
                      (ab * z - params.q) / (z * (z - 1.0) * (z - a)) +
                      f * ((1.0 / z + 1.0 / (z - 1.0) + 1.0 / (z - a)) - pole);
    return {f1, g1};
}

std::pair<PointTag, Branch> lhs_branch_for(const IdentityCase& idcase) {
    PointTag point = PointTag::Zero;
    switch (idcase.tag) {
        case CaseTag::QAlphaBeta: point = PointTag::One; break;
        case CaseTag::QAAlphaBeta: point = PointTag::A; break;
        default: break;
    }
    if (idcase.tag == CaseTag::AlphaBetaZero) {
        return {point, Branch::First};
    }
    const Branch branch = (std::abs(idcase.s - 1.0) <= kCaseConditionTol)
                              ? Branch::First
                              : Branch::Second;
    return {point, branch};
}

IdentityComparison verify_identity_detail(const HeunParams& params,
                                          const IdentityCase& idcase, int order,
                                          std::span<const double> samples,
                                          double tolerance) {
    if (order < 4) {
        throw InvalidTermCount("verification order must be at least 4");
    }
    const IdentitySeries s = build_identity_series(params, idcase, order);

    IdentityComparison out;
    VerificationReport& report = out.report;
    long double lhs_peak = 0.0;
    for (long double d : s.lhs) lhs_peak = std::max(lhs_peak, std::abs(d));
    if (lhs_peak <= 1e-100L) {
        // The local solution is constant: its derivative vanishes
        // identically and there is nothing to fit.
        report.degenerate = true;
        report.pass = true;
        return out;
    }

    const size_t k0 = static_cast<size_t>(s.k0);
    const long double C = s.lhs[k0];
    report.fitted_constant = static_cast<double>(C);

    long double worst = 0.0;
    // Orders below the leading one must vanish; compare them against the
    // leading scale.
    for (size_t n = 0; n < k0 && n < s.lhs.size(); ++n) {
        const long double den = std::max(std::abs(C), std::abs(s.lhs[n]));
        if (den > 0.0) worst = std::max(worst, std::abs(s.lhs[n]) / den);
    }
    const size_t compared = std::min(s.lhs.size() - k0, s.rhs.size());
    // Deviation at an order is measured against the local coefficient scale
    // (the order and its neighbors): the sequence can pass through an
    // accidental zero, where a self-relative measure means nothing.
    auto scale_at = [&](size_t m) {
        long double sc = 0.0;
        const size_t lo = (m == 0) ? 0 : m - 1;
        for (size_t k = lo; k <= m + 1 && k < compared; ++k) {
            sc = std::max({sc, std::abs(s.lhs[k + k0]), std::abs(C * s.rhs[k])});
        }
        return sc;
    };
    for (size_t m = 0; m < compared; ++m) {
        const long double lhs = s.lhs[m + k0];
        const long double rhs = C * s.rhs[m];
        const long double den = scale_at(m);
        const long double dev = (den > 0.0) ? std::abs(lhs - rhs) / den : 0.0;
        out.lhs_coeffs.push_back(static_cast<double>(lhs));
        out.rhs_coeffs.push_back(static_cast<double>(rhs));
        out.deviations.push_back(static_cast<double>(dev));
        worst = std::max(worst, dev);
    }
    report.max_coeff_deviation = static_cast<double>(worst);

    // Smoke check at sample points: both sides as truncated generalized
    // polynomials over the same orders.
    long double worst_point = 0.0;
    const double p = (s.point == PointTag::Zero)  ? 0.0
                     : (s.point == PointTag::One) ? 1.0
                                                  : params.a;
    for (double z : samples) {
        const double t = z - p;
        if (t <= 0.0) {
            throw OutsideConvergenceDomain(
                "sample points must lie on the positive side of the point");
        }
        const long double base = std::pow(static_cast<long double>(t),
                                          static_cast<long double>(s.exponent_lhs));
        long double lhs_val = 0.0, rhs_val = 0.0, tn = 1.0;
        for (size_t n = 0; n < s.lhs.size(); ++n) {
            lhs_val += s.lhs[n] * base * tn;
            if (n >= k0 && n - k0 < s.rhs.size()) {
                rhs_val += C * s.rhs[n - k0] * base * tn;
            }
            tn *= t;
        }
        const long double den =
            std::max({std::abs(lhs_val), std::abs(rhs_val), 1e-300L});
        worst_point = std::max(worst_point,
                               std::abs(lhs_val - rhs_val) / den);
    }
    report.max_point_deviation = static_cast<double>(worst_point);

    report.pass = report.max_coeff_deviation <= tolerance;
    return out;
}

VerificationReport verify_identity(const HeunParams& params,
                                   const IdentityCase& idcase, int order,
                                   std::span<const double> samples,
                                   double tolerance) {
    return verify_identity_detail(params, idcase, order, samples, tolerance)
        .report;
}

ClosedFormDiagnostic closed_form_admissible(const HeunParams& params) {
    ClosedFormDiagnostic diag;
    diag.epsilon_residual = params.epsilon + 1.0;
    diag.q_residual = params.q;

    // Primed values of the QZero, s = 1 map.
    const double a = params.a;
    const double ab = params.alpha * params.beta;
    const double ga = params.gamma, de = params.delta, ep = params.epsilon;
    const double product = ab + (2.0 * ga + de + ep) + (de + ep + 2.0);
    const double q_prime = ga * (1.0 + a) + (a * (de + 1.0) + (ep + 1.0));
    diag.map_residual = q_prime - a * product;
    diag.alt_constraint_residual = ga + params.alpha - a * (ab + ga + de);

    const double tol = 1e-9;
    diag.admissible = std::abs(diag.epsilon_residual) <= tol &&
                      std::abs(diag.q_residual) <= tol &&
                      std::abs(diag.map_residual) <= tol;
    return diag;
}

} // namespace heun
