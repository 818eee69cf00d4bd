#include "heun/expansions.hpp"

#include <algorithm>
#include <cmath>

#include "heun/errors.hpp"
#include "heun/hypergeo.hpp"
#include "heun/identities.hpp"
#include "heun/series.hpp"

namespace heun {

namespace {

constexpr double kTruncationWarnTol = 1e-12;

void require_accessory_case(const HeunParams& params) {
    const double residual = params.q - params.a * (params.alpha * params.beta);
    if (std::abs(residual) > kCaseConditionSlack) {
        throw CaseConditionViolation("requires q = a * alpha * beta");
    }
}

void require_gamma_below_one(const HeunParams& params) {
    if (params.gamma >= 1.0) {
        throw InvalidParameters("requires gamma < 1");
    }
}

} // namespace

std::vector<double> auxiliary_coefficients(const HeunParams& params, double s,
                                           int n_terms) {
    require_accessory_case(params);
    const double ep = params.epsilon;
    if (std::abs(s - 1.0) > kExponentIntegerTol &&
        std::abs(s + ep) > kExponentIntegerTol) {
        throw InvalidParameters("s must be 1 or -epsilon");
    }
    const double ga1 = 1.0 - params.gamma;
    if (ga1 <= kExponentIntegerTol &&
        std::abs(ga1 - std::round(ga1)) <= kExponentIntegerTol) {
        throw DegenerateExponents("gamma must not be a positive integer");
    }
    const double shift = ep + s;
    const OdeView aux{params.a,
                      params.a * (params.alpha * params.beta) +
                          shift * (1.0 - params.gamma),
                      params.alpha * params.beta +
                          shift * (2.0 - params.gamma - params.delta),
                      ga1, 1.0 - params.delta, ep + 2.0 * s};
    return frobenius_coefficients(aux, PointTag::Zero, 0.0, n_terms);
}

ExpansionSeries::Eval ExpansionSeries::evaluate(double z) const {
    if (z <= 0.0 || z >= domain_upper) {
        throw OutsideConvergenceDomain("z must lie in (0, min(1, |a|))");
    }
    if (kind == ExpansionKind::ClosedForm) {
        // 1 + C * sum T_k z^(k+2)/(k+2), the termwise integral of
        // t * 2F1(alpha', beta'; gamma+2; t).
        double sum = 0.0;
        double peak = 0.0;
        double zk = z * z;
        int consecutive_small = 0;
        bool converged = false;
        for (size_t k = 0; k < coeffs.size(); ++k) {
            const double term = coeffs[k] * zk / (static_cast<double>(k) + 2.0);
            sum += term;
            peak = std::max(peak, std::abs(sum));
            if (std::abs(term) <= kSeriesTol * std::max(peak, 1.0)) {
                if (++consecutive_small >= kSeriesConsecutive) {
                    converged = true;
                    break;
                }
            } else {
                consecutive_small = 0;
            }
            zk *= z;
        }
        if (!converged) {
            throw NonconvergentSeries("closed-form series cap reached");
        }
        return {1.0 + constant * sum, false};
    }

    double sum = 0.0;
    double peak = 0.0;
    double last = 0.0;
    int consecutive_small = 0;
    bool early_stop = false;
    for (size_t n = 0; n < coeffs.size(); ++n) {
        last = term(static_cast<int>(n), z);
        sum += last;
        peak = std::max(peak, std::abs(sum));
        if (std::abs(last) <= kSeriesTol * peak) {
            if (++consecutive_small >= kSeriesConsecutive) {
                early_stop = true;
                break;
            }
        } else {
            consecutive_small = 0;
        }
    }
    const bool warn =
        !early_stop && std::abs(last) > kTruncationWarnTol * std::abs(sum);
    return {sum, warn};
}

double ExpansionSeries::term(int n, double z) const {
    if (n < 0 || static_cast<size_t>(n) >= coeffs.size()) {
        throw InvalidParameters("term index out of range");
    }
    const double an = coeffs[static_cast<size_t>(n)];
    const double a = params.a;
    const double ga = params.gamma;
    const double de = params.delta;
    switch (kind) {
        case ExpansionKind::Appell:
            if (an == 0.0) return 0.0;
            return an * antiderivative_term(n, params, z);
        case ExpansionKind::Beta:
            if (an == 0.0) return 0.0;
            return an * (a * incomplete_beta(1.0 - ga + n, 1.0 - de, z) -
                         incomplete_beta(2.0 - ga + n, 1.0 - de, z));
        case ExpansionKind::TwoF1: {
            if (an == 0.0) return 0.0;
            const double p = 1.0 - ga + n;
            const double f_low =
                gauss_2f1(Gauss2F1Spec::from_ab(p, de, p + 1.0), z);
            const double f_high =
                gauss_2f1(Gauss2F1Spec::from_ab(p + 1.0, de, p + 2.0), z);
            return an * std::pow(z, p) *
                   (a / p * f_low - z / (p + 1.0) * f_high);
        }
        default:
            return constant * coeffs[static_cast<size_t>(n)] *
                   std::pow(z, n + 2.0) / (n + 2.0);
    }
}

ExpansionSeries expand_appell(const HeunParams& params, int n_terms) {
    require_accessory_case(params);
    require_gamma_below_one(params);
    if (!(params.a > 1.0 || params.a < 0.0)) {
        throw InvalidParameters("requires a > 1 or a < 0");
    }
    ExpansionSeries s;
    s.kind = ExpansionKind::Appell;
    s.params = params;
    s.coeffs = auxiliary_coefficients(params, -params.epsilon, n_terms);
    s.domain_upper = std::min(1.0, std::abs(params.a));
    return s;
}

ExpansionSeries expand_beta(const HeunParams& params, int n_terms) {
    require_accessory_case(params);
    require_gamma_below_one(params);
    ExpansionSeries s;
    s.kind = ExpansionKind::Beta;
    s.params = params;
    s.coeffs = auxiliary_coefficients(params, 1.0, n_terms);
    s.domain_upper = std::min(1.0, std::abs(params.a));
    return s;
}

ExpansionSeries expand_2f1(const HeunParams& params, int n_terms) {
    require_accessory_case(params);
    require_gamma_below_one(params);
    ExpansionSeries s;
    s.kind = ExpansionKind::TwoF1;
    s.params = params;
    s.coeffs = auxiliary_coefficients(params, 1.0, n_terms);
    s.domain_upper = std::min(1.0, std::abs(params.a));
    return s;
}

ExpansionSeries expand_closed_form(const HeunParams& params, int n_terms) {
    const ClosedFormDiagnostic diag = closed_form_admissible(params);
    if (!diag.admissible) {
        throw NotAdmissible("not admissible: needs epsilon = -1, q = 0 and a "
                            "hypergeometric mapped equation");
    }
    if (n_terms < 1) {
        throw InvalidTermCount("term count must be at least 1");
    }
    const IdentityCase idcase = make_case(params, CaseTag::QZero, SBranch::Plus);
    const VerificationReport fit =
        verify_identity(params, idcase, 12, std::span<const double>{});
    const PrimedParams primed = map_case(params, idcase);

    // Taylor coefficients of 2F1(alpha', beta'; gamma+2; t) from the
    // sum-product term ratio.
    std::vector<double> terms(static_cast<size_t>(n_terms) + 1);
    terms[0] = 1.0;
    const double c = params.gamma + 2.0;
    for (int k = 0; k < n_terms; ++k) {
        const double kk = static_cast<double>(k);
        terms[static_cast<size_t>(k) + 1] =
            terms[static_cast<size_t>(k)] *
            (primed.product_prime + kk * primed.sum_prime + kk * kk) /
            ((c + kk) * (kk + 1.0));
    }

    ExpansionSeries s;
    s.kind = ExpansionKind::ClosedForm;
    s.params = params;
    s.coeffs = std::move(terms);
    s.domain_upper = std::min(1.0, std::abs(params.a));
    s.constant = fit.fitted_constant;
    return s;
}

double closed_form_solution(const HeunParams& params, double z) {
    return expand_closed_form(params, kSeriesCap)(z);
}

namespace {

double log_log_slope(std::span<const double> xs, std::span<const double> ys) {
    // Least-squares slope of ys against xs (both already logarithmic).
    const size_t n = xs.size();
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    return sxy / sxx;
}

} // namespace

TermExponentEstimate term_singular_exponent(
    const HeunParams& params, int n, std::span<const double> probes_at_zero,
    std::span<const double> probes_at_one) {
    if (probes_at_zero.size() < 2 || probes_at_one.size() < 2) {
        throw InvalidParameters("need at least two probes per endpoint");
    }
    const ExpansionSeries series = expand_2f1(params, std::max(n, 1));

    std::vector<double> lx, ly;
    for (double z : probes_at_zero) {
        lx.push_back(std::log(z));
        ly.push_back(std::log(std::abs(series.term(n, z))));
    }
    const double at_zero = log_log_slope(lx, ly);

    lx.clear();
    ly.clear();
    for (double z : probes_at_one) {
        lx.push_back(std::log(1.0 - z));
        ly.push_back(std::log(std::abs(series.term(n, z))));
    }
    const double at_one = log_log_slope(lx, ly);
    return {at_zero, at_one};
}

} // namespace heun
