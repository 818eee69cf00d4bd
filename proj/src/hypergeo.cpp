#include "heun/hypergeo.hpp"

#include <cmath>
#include <vector>

#include "heun/errors.hpp"
#include "heun/series.hpp"

namespace heun {

namespace {

bool non_positive_integer(double x) {
    return x <= kExponentIntegerTol &&
           std::abs(x - std::round(x)) <= 1e-12;
}

} // namespace

Gauss2F1Spec Gauss2F1Spec::from_ab(double a, double b, double c) {
    return {a + b, a * b, c};
}

Gauss2F1Spec Gauss2F1Spec::from_sum_product(double sum, double product,
                                            double c) {
    return {sum, product, c};
}

double gauss_2f1(const Gauss2F1Spec& spec, double z) {
    if (non_positive_integer(spec.c)) {
        throw InvalidParameters("2F1 denominator parameter is a non-positive integer");
    }
    if (std::abs(z) >= 1.0) {
        throw OutsideConvergenceDomain("2F1 series requires |z| < 1");
    }
    if (z == 0.0) return 1.0;

    double term = 1.0;
    double sum = 1.0;
    double peak = 1.0;
    int consecutive_small = 0;
    for (int k = 0; k < kSeriesCap; ++k) {
        const double kk = static_cast<double>(k);
        term *= (spec.product + kk * spec.sum + kk * kk) * z /
                ((spec.c + kk) * (kk + 1.0));
        sum += term;
        peak = std::max(peak, std::abs(sum));
        if (std::abs(term) <= kSeriesTol * peak) {
            if (++consecutive_small >= kSeriesConsecutive) return sum;
        } else {
            consecutive_small = 0;
        }
    }
    throw NonconvergentSeries("2F1 series cap reached");
}

double incomplete_beta(double p, double q, double z) {
    if (p <= 0.0) {
        throw InvalidParameters("incomplete beta requires p > 0");
    }
    if (z <= 0.0 || z >= 1.0) {
        throw OutsideConvergenceDomain("incomplete beta requires z in (0, 1)");
    }
    return std::pow(z, p) / p * gauss_2f1(Gauss2F1Spec::from_ab(p, 1.0 - q, p + 1.0), z);
}

double appell_f1(const AppellF1Spec& spec, double x, double y) {
    if (non_positive_integer(spec.c)) {
        throw InvalidParameters("F1 denominator parameter is a non-positive integer");
    }
    if (std::abs(x) >= 1.0 || std::abs(y) >= 1.0) {
        throw OutsideConvergenceDomain("F1 double series requires |x| < 1 and |y| < 1");
    }

    // u_m = (b1)_m x^m / m!, v_n = (b2)_n y^n / n!; anti-diagonal k sums
    // (a)_k/(c)_k * sum_{m+n=k} u_m v_n.
    std::vector<double> u{1.0};
    std::vector<double> v{1.0};
    double ac = 1.0; // (a)_k / (c)_k
    double sum = 0.0;
    double peak = 0.0;
    int consecutive_small = 0;
    for (int k = 0; k < kSeriesCap; ++k) {
        double inner = 0.0;
        for (int m = 0; m <= k; ++m) {
            inner += u[static_cast<size_t>(m)] * v[static_cast<size_t>(k - m)];
        }
        const double diag = ac * inner;
        sum += diag;
        peak = std::max(peak, std::abs(sum));
        if (std::abs(diag) <= kSeriesTol * peak) {
            if (++consecutive_small >= kSeriesConsecutive) return sum;
        } else {
            consecutive_small = 0;
        }
        const double kk = static_cast<double>(k);
        ac *= (spec.a + kk) / (spec.c + kk);
        u.push_back(u.back() * (spec.b1 + kk) * x / (kk + 1.0));
        v.push_back(v.back() * (spec.b2 + kk) * y / (kk + 1.0));
    }
    throw NonconvergentSeries("F1 double series cap reached");
}

double antiderivative_term(int n, const HeunParams& params, double z) {
    if (n < 0) {
        throw InvalidParameters("term index must be non-negative");
    }
    const double p = 1.0 + n - params.gamma;
    if (p <= 0.0) {
        throw InvalidParameters("integrand exponent at 0 must exceed -1");
    }
    if (!(params.a > 1.0 || params.a < 0.0)) {
        throw InvalidParameters("requires a > 1 or a < 0");
    }
    const double upper = std::min(1.0, std::abs(params.a));
    if (z <= 0.0 || z >= upper) {
        throw OutsideConvergenceDomain("z must lie in (0, min(1, |a|))");
    }
    const AppellF1Spec f1{p, params.delta, params.epsilon, p + 1.0};
    return std::pow(z, p) / p * appell_f1(f1, z, z / params.a);
}

double square_argument_reduction(int n, double gamma, double delta, double z) {
    if (n < 0) {
        throw InvalidParameters("term index must be non-negative");
    }
    const double p = 1.0 + n - gamma;
    if (p <= 0.0) {
        throw InvalidParameters("integrand exponent at 0 must exceed -1");
    }
    if (z <= 0.0 || z >= 1.0) {
        throw OutsideConvergenceDomain("z must lie in (0, 1)");
    }
    const auto spec = Gauss2F1Spec::from_ab(0.5 * p, delta, 0.5 * p + 1.0);
    return std::pow(z, p) / p * gauss_2f1(spec, z * z);
}

} // namespace heun
