#include "rulkit/ts_model.hpp"

#include <cmath>

#include "rulkit/errors.hpp"

namespace rulkit {

FuzzyRule::FuzzyRule(Vec center, Mat dispersion, Vec theta_in, Mat rls_cov_in)
    : theta(std::move(theta_in)), rls_cov(std::move(rls_cov_in)), center_(std::move(center)) {
    if (theta.size() != center_.size() + 1) throw Error("FuzzyRule: theta must have length n_x + 1");
    set_dispersion(std::move(dispersion));
}

void FuzzyRule::set_dispersion(Mat d) {
    if (d.rows() != center_.size() || d.cols() != center_.size())
        throw Error("FuzzyRule: dispersion shape mismatch");
    symmetrize(d);
    disp_inv_ = invert_spd(d);
    dispersion_ = std::move(d);
}

double mahalanobis_sq(const FuzzyRule& rule, const Vec& x) {
    const Vec& c = rule.center();
    Vec diff(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) diff[i] = x[i] - c[i];
    const double d2 = quadratic_form(rule.dispersion_inverse(), diff);
    return d2 > 0.0 ? d2 : 0.0;
}

double membership(const FuzzyRule& rule, const Vec& x) {
    return std::exp(-0.5 * mahalanobis_sq(rule, x));
}

Vec activations(const TSModel& model, const Vec& x) {
    if (model.empty()) throw Error("activations: model has no rules");
    const std::size_t c = model.rules.size();
    Vec h(c, 0.0);
    double sum = 0.0;
    for (std::size_t i = 0; i < c; ++i) {
        h[i] = membership(model.rules[i], x);
        sum += h[i];
    }
    if (sum < 1e-300) {
        // far extrapolation: every kernel underflowed
        const double u = 1.0 / static_cast<double>(c);
        for (auto& v : h) v = u;
        return h;
    }
    for (auto& v : h) v /= sum;
    return h;
}

Vec local_outputs(const TSModel& model, const Vec& x) {
    Vec out(model.rules.size(), 0.0);
    for (std::size_t i = 0; i < model.rules.size(); ++i) {
        const Vec& th = model.rules[i].theta;
        double y = th[0];
        for (std::size_t j = 0; j < x.size(); ++j) y += th[j + 1] * x[j];
        out[i] = y;
    }
    return out;
}

Vec effective_coefficients(const TSModel& model, const Vec& weights) {
    if (model.empty()) throw Error("effective_coefficients: model has no rules");
    Vec coef(model.rules[0].theta.size(), 0.0);
    for (std::size_t i = 0; i < model.rules.size(); ++i) {
        const Vec& th = model.rules[i].theta;
        for (std::size_t j = 0; j < coef.size(); ++j) coef[j] += weights[i] * th[j];
    }
    return coef;
}

double infer(const TSModel& model, const Vec& x) {
    const Vec h = activations(model, x);
    const Vec coef = effective_coefficients(model, h);
    double y = coef[0];
    for (std::size_t j = 0; j < x.size(); ++j) y += coef[j + 1] * x[j];
    return y;
}

} // namespace rulkit
