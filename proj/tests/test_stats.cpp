#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rulkit/errors.hpp"
#include "rulkit/stats.hpp"

using namespace rulkit;

namespace {

// Independent oracle: chi-square CDF by Simpson quadrature over the density
// after the substitution x = u^2, which removes the dof=1 singularity at the
// origin. Inverted by bisection; shares nothing with the incomplete-gamma path.
double chi2_cdf_quadrature(double x, int k) {
    const auto integrand = [k](double u) {
        const double a = 0.5 * k;
        return 2.0 * std::exp((k - 1) * std::log(std::max(u, 1e-300)) - 0.5 * u * u -
                              a * std::log(2.0) - std::lgamma(a));
    };
    const int steps = 20000;
    const double upper = std::sqrt(x);
    const double h = upper / steps;
    double sum = integrand(0.0) + integrand(upper);
    for (int i = 1; i < steps; ++i) sum += integrand(i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

double chi2_quantile_oracle(double p, int k) {
    double lo = 0.0, hi = 1.0;
    while (chi2_cdf_quadrature(hi, k) < p) hi *= 2.0;
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        (chi2_cdf_quadrature(mid, k) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Normal quantile oracle: bisection straight on erfc.
double normal_quantile_oracle(double p) {
    double lo = -15.0, hi = 15.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (0.5 * std::erfc(-mid / std::sqrt(2.0)) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

TEST_CASE("normal quantile matches bisection oracle to 1e-9") {
    const double ps[] = {1e-6, 0.001, 0.005, 0.025, 0.1, 0.25, 0.5, 0.75, 0.9, 0.975, 0.995, 0.999, 1.0 - 1e-6};
    for (double p : ps) {
        const double got = stats::normal_quantile(p);
        const double want = normal_quantile_oracle(p);
        CHECK(std::fabs(got - want) < 1e-9);
    }
}

TEST_CASE("normal quantile round-trips through the CDF") {
    for (double p = 0.0005; p < 1.0; p += 0.0173) {
        const double x = stats::normal_quantile(p);
        CHECK(stats::normal_cdf(x) == doctest::Approx(p).epsilon(1e-11));
    }
}

TEST_CASE("normal quantile rejects out-of-range probabilities") {
    CHECK_THROWS_AS(stats::normal_quantile(0.0), Error);
    CHECK_THROWS_AS(stats::normal_quantile(1.0), Error);
    CHECK_THROWS_AS(stats::normal_quantile(-0.3), Error);
}

TEST_CASE("chi-square quantile matches quadrature oracle") {
    for (int dof : {1, 2, 3, 5, 8, 20}) {
        for (double p : {0.5, 0.9, 0.9545, 0.99}) {
            const double got = stats::chi_square_quantile(p, dof);
            const double want = chi2_quantile_oracle(p, dof);
            CHECK(got == doctest::Approx(want).epsilon(1e-6));
        }
    }
}

TEST_CASE("chi-square at the two-sigma level, one dof, is 4") {
    // P(|Z| <= 2) = 0.95449973...; the quantile of Z^2 at that level is exactly 4.
    const double p = std::erf(2.0 / std::sqrt(2.0));
    CHECK(stats::chi_square_quantile(p, 1) == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("regularized gamma P basics") {
    CHECK(stats::regularized_gamma_p(1.0, 0.0) == 0.0);
    // P(1, x) = 1 - e^-x
    CHECK(stats::regularized_gamma_p(1.0, 2.0) == doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-12));
    CHECK(stats::regularized_gamma_p(3.5, 400.0) == doctest::Approx(1.0).epsilon(1e-12));
}
