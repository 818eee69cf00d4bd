#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"

#include "heun/errors.hpp"
#include "heun/expansions.hpp"
#include "heun/hypergeo.hpp"
#include "heun/identities.hpp"
#include "heun/oracle.hpp"
#include "heun/series.hpp"
#include "support.hpp"

using namespace heun;
using namespace heun::testing;

TEST_CASE("auxiliary coefficients: worked s = 1 example") {
    const HeunParams p = validate_params(2.0, 4.0, 1.0, 2.0, 0.5, 0.5, 3.0);
    const auto a = auxiliary_coefficients(p, 1.0, 8);
    CHECK(a[0] == 1.0);
    // q1 = a alpha beta + (epsilon+1)(1-gamma) = 4 + 4*0.5 = 6; gamma1 = 0.5.
    CHECK(a[1] == doctest::Approx(6.0).epsilon(1e-14));
}

TEST_CASE("auxiliary coefficients: a1 = q1/(a gamma1) in general") {
    std::mt19937_64 rng(601);
    for (int i = 0; i < 20; ++i) {
        const HeunParams p = draw_accessory_params(rng);
        for (double s : {1.0, -p.epsilon}) {
            const auto a = auxiliary_coefficients(p, s, 4);
            const double q1 = p.a * (p.alpha * p.beta) +
                              (p.epsilon + s) * (1.0 - p.gamma);
            CHECK(rel_err(a[1], q1 / (p.a * (1.0 - p.gamma))) <= 1e-13);
        }
    }
}

TEST_CASE("s = -epsilon coefficients equal the sign-flipped Heun series") {
    std::mt19937_64 rng(607);
    for (int i = 0; i < 10; ++i) {
        const HeunParams p = draw_accessory_params(rng);
        const auto a = auxiliary_coefficients(p, -p.epsilon, 50);
        const HeunParams flipped = validate_params(
            p.a, p.a * (p.alpha * p.beta), -p.alpha, -p.beta, 1.0 - p.gamma,
            1.0 - p.delta);
        const LocalSeries s =
            frobenius_series(flipped, PointTag::Zero, Branch::First, 50);
        for (int n = 0; n <= 50; ++n) {
            CHECK(rel_err(a[n], s.coeffs[n]) <= 1e-12);
        }
    }
}

TEST_CASE("case precondition is enforced") {
    const HeunParams p = validate_params(2.0, 0.9, 1.0, 2.0, 0.5, 0.5);
    CHECK_THROWS_AS(auxiliary_coefficients(p, 1.0, 10), CaseConditionViolation);
    CHECK_THROWS_AS(expand_beta(p, 10), CaseConditionViolation);
}

TEST_CASE("gamma above one is rejected for the expansion families") {
    const HeunParams p = validate_params(2.0, 2.0 * 0.5 * 0.8, 0.5, 0.8, 1.3, 0.4);
    CHECK_THROWS_AS(expand_2f1(p, 10), InvalidParameters);
}

TEST_CASE("beta and 2F1 routes agree pointwise") {
    std::mt19937_64 rng(613);
    for (int i = 0; i < 6; ++i) {
        const HeunParams p = draw_accessory_params(rng);
        const ExpansionSeries beta = expand_beta(p, 200);
        const ExpansionSeries twof1 = expand_2f1(p, 200);
        for (int j = 1; j <= 8; ++j) {
            const double z = 0.1 * j * beta.domain_upper;
            CHECK(rel_err(beta(z), twof1(z)) <= 1e-10);
        }
    }
}

TEST_CASE("Appell route agrees after one constant fit") {
    std::mt19937_64 rng(617);
    for (int i = 0; i < 3; ++i) {
        const HeunParams p = draw_accessory_params(rng);
        const ExpansionSeries appell = expand_appell(p, 120);
        const ExpansionSeries twof1 = expand_2f1(p, 200);
        const double z1 = 0.1 * appell.domain_upper;
        const double fit = twof1(z1) / appell(z1);
        // Leading orders pin the constant to a (the z^(1-gamma) prefactors
        // carry a/(1-gamma) and 1/(1-gamma) respectively).
        CHECK(fit == doctest::Approx(p.a).epsilon(1e-6));
        for (int j = 2; j <= 7; ++j) {
            const double z = 0.1 * j * appell.domain_upper;
            CHECK(rel_err(fit * appell(z), twof1(z)) <= 1e-8);
        }
    }
}

TEST_CASE("each family represents the z^(1-gamma) branch at 0") {
    std::mt19937_64 rng(619);
    const HeunParams p = draw_accessory_params(rng);
    const LocalSeries u2 = frobenius_series(p, PointTag::Zero, Branch::Second, 600);
    const ExpansionSeries twof1 = expand_2f1(p, 200);
    const ExpansionSeries appell = expand_appell(p, 120);

    const double c_2f1 = p.a / (1.0 - p.gamma);
    const double c_appell = 1.0 / (1.0 - p.gamma);
    for (double frac : {0.1, 0.2, 0.3, 0.4}) {
        const double z = frac * u2.radius;
        const double ref = eval_series(u2, z);
        CHECK(rel_err(twof1(z), c_2f1 * ref) <= 1e-6);
        CHECK(rel_err(appell(z), c_appell * ref) <= 1e-6);
    }
}

TEST_CASE("leading behavior of the 2F1 family at 0") {
    const HeunParams p = validate_params(2.0, 2.0 * 1.0 * 1.2, 1.0, 1.2, 0.5, 0.4);
    const ExpansionSeries e = expand_2f1(p, 50);
    const double z = 1e-6;
    CHECK(e(z) * std::pow(z, p.gamma - 1.0) ==
          doctest::Approx(p.a / (1.0 - p.gamma)).epsilon(1e-4));
}

TEST_CASE("delta = 0 collapses every Gauss factor to 1") {
    const double alpha = 0.9, beta = 1.1, gamma = 0.4;
    const double delta = 0.0;
    const HeunParams p = validate_params(2.0, 2.0 * alpha * beta, alpha, beta,
                                         gamma, delta);
    const auto a_n = auxiliary_coefficients(p, 1.0, 60);
    const ExpansionSeries e = expand_2f1(p, 60);
    const double z = 0.35;
    double expected = 0.0;
    for (int n = 0; n <= 60; ++n) {
        const double pn = 1.0 - gamma + n;
        expected += a_n[n] * (p.a * std::pow(z, pn) / pn -
                              std::pow(z, pn + 1.0) / (pn + 1.0));
    }
    CHECK(rel_err(e(z), expected) <= 1e-12);
}

TEST_CASE("alpha beta = 0 with q = 0 collapses to a single antiderivative") {
    const HeunParams p = validate_params(2.0, 0.0, 0.0, 1.4, 0.45, 0.55);
    const ExpansionSeries e = expand_appell(p, 30);
    CHECK(e.coeffs[0] == 1.0);
    for (size_t n = 1; n < e.coeffs.size(); ++n) CHECK(e.coeffs[n] == 0.0);
    const double z = 0.3;
    CHECK(e(z) == doctest::Approx(antiderivative_term(0, p, z)).epsilon(1e-14));
}

TEST_CASE("2F1-family evaluator solves the equation (finite differences)") {
    std::mt19937_64 rng(631);
    const HeunParams p = draw_accessory_params(rng, 2.0);
    const ExpansionSeries e = expand_2f1(p, 200);
    const double h = 1e-4;
    for (double z : {0.15, 0.3, 0.45}) {
        const double u = e(z);
        const double up = (e(z + h) - e(z - h)) / (2 * h);
        const double upp = (e(z + h) - 2 * u + e(z - h)) / (h * h);
        const auto [f, g] = heun_coefficients(p, z);
        const double res = upp + f * up + g * u;
        const double scale =
            std::max({std::abs(upp), std::abs(f * up), std::abs(g * u)});
        CHECK(std::abs(res) <= 1e-6 * scale);
    }
}

TEST_CASE("truncation warning fires when the tail is still fat") {
    const HeunParams p = validate_params(2.0, 2.0 * 1.0 * 1.2, 1.0, 1.2, 0.5, 0.4);
    const ExpansionSeries coarse = expand_2f1(p, 8);
    const auto r = coarse.evaluate(0.8);
    CHECK(r.truncation_warning);
    const ExpansionSeries fine = expand_2f1(p, 400);
    CHECK_FALSE(fine.evaluate(0.2).truncation_warning);
}

TEST_CASE("term magnitudes decay geometrically at the predicted rate") {
    std::mt19937_64 rng(641);
    const HeunParams p = draw_accessory_params(rng, 2.0);
    const ExpansionSeries e = expand_2f1(p, 90);
    const double z = 0.4;
    const double predicted = z / std::min(1.0, std::abs(p.a));
    const double hi = std::abs(e.term(80, z));
    const double lo = std::abs(e.term(40, z));
    const double ratio = std::pow(hi / lo, 1.0 / 40.0);
    CHECK(ratio > predicted / 2.0);
    CHECK(ratio < predicted * 2.0);
}

TEST_CASE("individual term exponents at the ends of the domain") {
    const HeunParams p = validate_params(2.0, 2.0 * 1.0 * 1.2, 1.0, 1.2, 0.5, 0.4);
    const std::array<double, 3> near0{1e-4, 3e-4, 1e-3};
    const std::array<double, 3> near1{0.9, 0.93, 0.96};
    const ExpansionSeries e = expand_2f1(p, 4);
    for (int n : {0, 2}) {
        const auto est = term_singular_exponent(p, n, near0, near1);
        CHECK(std::abs(est.at_zero - (1.0 - p.gamma + n)) <= 0.01);
        // The term increases toward a finite limit at 1 (delta < 1), so the
        // log-log slope against (1-z) is mildly negative: bounded behavior,
        // nothing like a pole and nothing like the vanishing branch 1-delta.
        CHECK(est.at_one > -(1.0 - p.delta));
        CHECK(est.at_one < 0.05);

        // Boundedness outright: the term never exceeds its full-interval
        // integral (positive integrand, so the partial integral is monotone).
        // Split at 1/2 so each endpoint singularity sits at a quadrature
        // lower limit, where nodes carry no cancellation.
        const double pn = 1.0 - p.gamma + n;
        const double full =
            adaptive_quadrature(
                [&](double t) {
                    return std::pow(t, pn - 1.0) *
                           std::pow(1.0 - t, -p.delta) * (p.a - t);
                },
                pn - 1.0, 0.5, 1e-10) +
            adaptive_quadrature(
                [&](double t) {
                    return std::pow(1.0 - t, pn - 1.0) *
                           std::pow(t, -p.delta) * (p.a - 1.0 + t);
                },
                -p.delta, 0.5, 1e-10);
        const double bound = std::abs(e.coeffs[static_cast<size_t>(n)]) * full;
        for (double z : near1) {
            CHECK(std::abs(e.term(n, z)) <= bound * (1.0 + 1e-9));
        }
    }
}

TEST_CASE("closed form: value 1 and slope 0 at the left end") {
    const double a = 2.0, beta = 0.8, delta = 0.6;
    const double alpha = -7.0 / 13.0;
    const double gamma = 2.0 + alpha + beta - delta;
    const HeunParams p = validate_params(a, 0.0, alpha, beta, gamma, delta, -1.0);
    const ExpansionSeries cf = expand_closed_form(p, 200);
    CHECK(cf(1e-5) == doctest::Approx(1.0).epsilon(1e-9));
    // Quadratic approach: H - 1 ~ C z^2 / 2.
    const double d1 = cf(2e-4) - 1.0;
    const double d2 = cf(1e-4) - 1.0;
    CHECK(d1 / d2 == doctest::Approx(4.0).epsilon(1e-3));
}

TEST_CASE("closed form matches the integrated equation") {
    const double a = 2.0, beta = 0.8, delta = 0.6;
    const double alpha = -7.0 / 13.0;
    const double gamma = 2.0 + alpha + beta - delta;
    const HeunParams p = validate_params(a, 0.0, alpha, beta, gamma, delta, -1.0);
    IntegrationSpec spec;
    spec.params = p;
    for (double z : {0.1, 0.225, 0.35, 0.475, 0.6}) {
        const auto [u, v] = integrate_heun(spec, z);
        (void)v;
        CHECK(rel_err(closed_form_solution(p, z), u) <= 1e-6);
    }
}

TEST_CASE("closed form satisfies the equation (finite differences)") {
    const double a = 2.0, beta = 0.8, delta = 0.6;
    const double alpha = -7.0 / 13.0;
    const double gamma = 2.0 + alpha + beta - delta;
    const HeunParams p = validate_params(a, 0.0, alpha, beta, gamma, delta, -1.0);
    const ExpansionSeries cf = expand_closed_form(p, 300);
    const double h = 1e-4;
    for (double z : {0.2, 0.35, 0.5}) {
        const double u = cf(z);
        const double up = (cf(z + h) - cf(z - h)) / (2 * h);
        const double upp = (cf(z + h) - 2 * u + cf(z - h)) / (h * h);
        const auto [f, g] = heun_coefficients(p, z);
        const double res = upp + f * up + g * u;
        const double scale =
            std::max({std::abs(upp), std::abs(f * up), std::abs(g * u), 1e-12});
        CHECK(std::abs(res) <= 1e-6 * scale);
    }
}

TEST_CASE("closed form termwise integral matches quadrature of t * 2F1") {
    const double a = 2.0, beta = 0.8, delta = 0.6;
    const double alpha = -7.0 / 13.0;
    const double gamma = 2.0 + alpha + beta - delta;
    const HeunParams p = validate_params(a, 0.0, alpha, beta, gamma, delta, -1.0);

    const ExpansionSeries cf = expand_closed_form(p, 400);
    const PrimedParams m = map_case(p, make_case(p, CaseTag::QZero, SBranch::Plus));
    const Gauss2F1Spec f21 = Gauss2F1Spec::from_sum_product(
        m.sum_prime, m.product_prime, p.gamma + 2.0);
    const double z = 0.5;
    const double integral = adaptive_quadrature(
        [&](double t) { return t * gauss_2f1(f21, t); }, 1.0, z, 1e-12);
    CHECK(rel_err(cf(z) - 1.0, cf.constant * integral) <= 1e-10);
}

TEST_CASE("closed form refuses inadmissible parameters") {
    const HeunParams p = validate_params(2.0, 0.0, 1.3, 0.7, 0.4, 0.6);
    CHECK_THROWS_AS(expand_closed_form(p, 50), NotAdmissible);
    CHECK_THROWS_AS(closed_form_solution(p, 0.3), NotAdmissible);
}
