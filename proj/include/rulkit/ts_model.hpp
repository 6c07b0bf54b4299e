#pragma once

#include <vector>

#include "rulkit/evolve_config.hpp"
#include "rulkit/linalg.hpp"

namespace rulkit {

/// One Takagi-Sugeno rule: a multivariate Gaussian antecedent over the lag
/// space and an affine consequent (bias-first coefficient vector) with its
/// own RLS covariance. The dispersion inverse is refreshed eagerly on every
/// antecedent change, so inference stays read-only and safe to share.
class FuzzyRule {
  public:
    FuzzyRule(Vec center, Mat dispersion, Vec theta, Mat rls_cov);

    const Vec& center() const { return center_; }
    const Mat& dispersion() const { return dispersion_; }
    const Mat& dispersion_inverse() const { return disp_inv_; }

    void set_center(Vec c) { center_ = std::move(c); }
    void set_dispersion(Mat d);

    Vec theta;
    Mat rls_cov;
    long long support = 1;

  private:
    Vec center_;
    Mat dispersion_;
    Mat disp_inv_;
};

struct TSModel {
    std::vector<FuzzyRule> rules;
    int n_x = 0;
    EvolveConfig config;

    std::size_t rule_count() const { return rules.size(); }
    bool empty() const { return rules.empty(); }
};

/// Gaussian membership exp(-1/2 (x-c)' S^-1 (x-c)), in (0,1].
double membership(const FuzzyRule& rule, const Vec& x);

/// Squared Mahalanobis distance of x to the rule center.
double mahalanobis_sq(const FuzzyRule& rule, const Vec& x);

/// Normalized activation degrees: nonnegative, summing to one. When every
/// membership underflows (far extrapolation) the weights fall back to 1/C
/// so the convex-sum contract holds everywhere.
Vec activations(const TSModel& model, const Vec& x);

/// Per-rule affine outputs theta_i' * [1 x].
Vec local_outputs(const TSModel& model, const Vec& x);

/// Activation-weighted sum of rule coefficient vectors (the effective
/// affine map at x), bias first, length n_x + 1.
Vec effective_coefficients(const TSModel& model, const Vec& weights);

/// Model output: convex combination of the local affine outputs.
double infer(const TSModel& model, const Vec& x);

} // namespace rulkit
