#pragma once

#include "rulkit/errors.hpp"

namespace rulkit {

/// Single-pass tracker of the one-step prediction residuals seen during
/// online learning. Keeps the running count, mean and sum of squares so the
/// residual variance is available at any time without storing the stream.
class ErrorTracker {
  public:
    void push(double eps) {
        ++n_;
        const double delta = eps - mean_;
        mean_ += delta / static_cast<double>(n_);
        m2_ += delta * (eps - mean_);
    }

    long long count() const { return n_; }
    double mean() const { return mean_; }
    double sum_squares() const { return m2_; }

    /// Unbiased residual variance (Bessel-corrected). Needs two samples.
    double variance() const {
        if (n_ < 2) throw InsufficientData("residual variance needs at least two samples");
        return m2_ / static_cast<double>(n_ - 1);
    }

    double variance_or(double fallback) const { return n_ < 2 ? fallback : variance(); }

    void restore(long long n, double mean, double m2) {
        n_ = n;
        mean_ = mean;
        m2_ = m2;
    }

  private:
    long long n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

} // namespace rulkit
