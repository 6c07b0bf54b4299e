#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "rulkit/ts_model.hpp"

using namespace rulkit;

namespace {

FuzzyRule rule(Vec center, Mat disp, Vec theta) {
    const std::size_t n = center.size();
    return FuzzyRule(std::move(center), std::move(disp), std::move(theta),
                     Mat::identity(n + 1, 1e3));
}

TSModel random_model(std::mt19937_64& rng, int max_rules = 10, int max_dim = 8) {
    std::normal_distribution<double> d(0.0, 2.0);
    const int n = 1 + static_cast<int>(rng() % max_dim);
    const int c = 1 + static_cast<int>(rng() % max_rules);
    TSModel m;
    m.n_x = n;
    for (int r = 0; r < c; ++r) {
        Vec center(n);
        for (auto& v : center) v = d(rng);
        Mat a(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a(i, j) = d(rng);
        Mat spd(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (int k = 0; k < n; ++k) s += a(k, i) * a(k, j);
                spd(i, j) = s + (i == j ? 0.5 : 0.0);
            }
        Vec theta(n + 1);
        for (auto& v : theta) v = d(rng);
        m.rules.push_back(rule(std::move(center), std::move(spd), std::move(theta)));
    }
    return m;
}

} // namespace

TEST_CASE("membership at the center is exactly one") {
    const auto r = rule({0.0, 0.0}, Mat::identity(2), {0.0, 0.0, 0.0});
    CHECK(membership(r, {0.0, 0.0}) == 1.0);
}

TEST_CASE("membership of a unit offset under identity dispersion") {
    const auto r = rule({0.0, 0.0}, Mat::identity(2), {0.0, 0.0, 0.0});
    CHECK(membership(r, {1.0, 0.0}) == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
}

TEST_CASE("scalar Mahalanobis membership") {
    const auto r = rule({1.0}, Mat::identity(1, 4.0), {0.0, 0.0});
    // (3-1)^2 / 4 = 1 -> exp(-0.5)
    CHECK(membership(r, {3.0}) == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
}

TEST_CASE("single rule always has activation one") {
    TSModel m;
    m.n_x = 1;
    m.rules.push_back(rule({0.0}, Mat::identity(1), {0.0, 1.0}));
    const Vec h = activations(m, {123.0});
    REQUIRE(h.size() == 1);
    CHECK(h[0] == 1.0);
}

TEST_CASE("identical rules split activation evenly") {
    TSModel m;
    m.n_x = 1;
    m.rules.push_back(rule({2.0}, Mat::identity(1), {0.0, 1.0}));
    m.rules.push_back(rule({2.0}, Mat::identity(1), {1.0, 0.0}));
    const Vec h = activations(m, {-4.0});
    CHECK(h[0] == doctest::Approx(0.5));
    CHECK(h[1] == doctest::Approx(0.5));
}

TEST_CASE("activations are plain normalized memberships") {
    // memberships 0.6 and 0.2 -> weights 0.75 / 0.25; realized via centers
    // whose Mahalanobis distances produce exactly those kernel values
    TSModel m;
    m.n_x = 1;
    const double d1 = std::sqrt(-2.0 * std::log(0.6));
    const double d2 = std::sqrt(-2.0 * std::log(0.2));
    m.rules.push_back(rule({-d1}, Mat::identity(1), {0.0, 0.0}));
    m.rules.push_back(rule({d2}, Mat::identity(1), {0.0, 0.0}));
    const Vec h = activations(m, {0.0});
    CHECK(h[0] == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(h[1] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("far extrapolation falls back to uniform weights") {
    TSModel m;
    m.n_x = 1;
    m.rules.push_back(rule({0.0}, Mat::identity(1), {0.0, 1.0}));
    m.rules.push_back(rule({1.0}, Mat::identity(1), {0.0, 1.0}));
    m.rules.push_back(rule({2.0}, Mat::identity(1), {0.0, 1.0}));
    const Vec h = activations(m, {1e6});
    for (double v : h) CHECK(v == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("identity consequent returns its input") {
    TSModel m;
    m.n_x = 1;
    m.rules.push_back(rule({0.0}, Mat::identity(1), {0.0, 1.0}));
    CHECK(infer(m, {3.0}) == doctest::Approx(3.0));
}

TEST_CASE("equally activated rules average their local outputs") {
    TSModel m;
    m.n_x = 1;
    m.rules.push_back(rule({5.0}, Mat::identity(1), {2.0, 0.0}));
    m.rules.push_back(rule({5.0}, Mat::identity(1), {4.0, 0.0}));
    CHECK(infer(m, {5.0}) == doctest::Approx(3.0));
}

TEST_CASE("convex combination with 0.75/0.25 weights") {
    TSModel m;
    m.n_x = 1;
    const double d1 = std::sqrt(-2.0 * std::log(0.6));
    const double d2 = std::sqrt(-2.0 * std::log(0.2));
    m.rules.push_back(rule({-d1}, Mat::identity(1), {8.0, 0.0}));
    m.rules.push_back(rule({d2}, Mat::identity(1), {0.0, 0.0}));
    CHECK(infer(m, {0.0}) == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("property: activations are convex weights") {
    std::mt19937_64 rng(101);
    std::normal_distribution<double> d(0.0, 5.0);
    for (int rep = 0; rep < 1000; ++rep) {
        const TSModel m = random_model(rng);
        Vec x(m.n_x);
        for (auto& v : x) v = d(rng);
        const Vec h = activations(m, x);
        double sum = 0.0;
        for (double v : h) {
            CHECK(v >= 0.0);
            sum += v;
        }
        CHECK(std::fabs(sum - 1.0) < 1e-12);
    }
}

TEST_CASE("property: output stays inside the hull of local outputs") {
    std::mt19937_64 rng(202);
    std::normal_distribution<double> d(0.0, 5.0);
    for (int rep = 0; rep < 1000; ++rep) {
        const TSModel m = random_model(rng);
        Vec x(m.n_x);
        for (auto& v : x) v = d(rng);
        const Vec locals = local_outputs(m, x);
        const double lo = *std::min_element(locals.begin(), locals.end());
        const double hi = *std::max_element(locals.begin(), locals.end());
        const double y = infer(m, x);
        const double slack = 1e-9 * (1.0 + std::fabs(lo) + std::fabs(hi));
        CHECK(y >= lo - slack);
        CHECK(y <= hi + slack);
    }
}

TEST_CASE("property: summation form equals the matrix form") {
    std::mt19937_64 rng(303);
    std::normal_distribution<double> d(0.0, 3.0);
    for (int rep = 0; rep < 500; ++rep) {
        const TSModel m = random_model(rng);
        Vec x(m.n_x);
        for (auto& v : x) v = d(rng);

        // summation form: sum_i h_i * (theta_i' x~)
        const Vec h = activations(m, x);
        const Vec locals = local_outputs(m, x);
        double sum_form = 0.0;
        for (std::size_t i = 0; i < h.size(); ++i) sum_form += h[i] * locals[i];

        // matrix form: h' Theta' x~ with Theta columns = theta_i
        Vec xt(m.n_x + 1, 1.0);
        for (int j = 0; j < m.n_x; ++j) xt[j + 1] = x[j];
        double mat_form = 0.0;
        for (std::size_t i = 0; i < m.rules.size(); ++i) {
            double row = 0.0;
            for (std::size_t j = 0; j < xt.size(); ++j) row += m.rules[i].theta[j] * xt[j];
            mat_form += h[i] * row;
        }

        const double scale = 1.0 + std::fabs(sum_form) + std::fabs(mat_form);
        CHECK(std::fabs(sum_form - mat_form) < 1e-12 * scale);
        CHECK(infer(m, x) == doctest::Approx(sum_form).epsilon(1e-12));
    }
}

TEST_CASE("property: membership strictly decreases along rays from the center") {
    std::mt19937_64 rng(404);
    std::normal_distribution<double> d(0.0, 1.0);
    for (int rep = 0; rep < 500; ++rep) {
        const TSModel m = random_model(rng, 1);
        const FuzzyRule& r = m.rules[0];
        Vec dir(m.n_x);
        double norm = 0.0;
        for (auto& v : dir) {
            v = d(rng);
            norm += v * v;
        }
        if (norm < 1e-12) continue;
        double prev = membership(r, r.center());
        for (double t : {0.5, 1.0, 2.0, 4.0, 8.0}) {
            Vec x = r.center();
            for (int j = 0; j < m.n_x; ++j) x[j] += t * dir[j];
            const double cur = membership(r, x);
            CHECK(cur < prev);
            prev = cur;
        }
    }
}
