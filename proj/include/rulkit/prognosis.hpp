#pragma once

#include <optional>
#include <ostream>
#include <string>

#include "rulkit/linalg.hpp"
#include "rulkit/ts_model.hpp"

namespace rulkit {

/// Regressor vector for an N-step-ahead prediction, newest entry first.
/// known[i] is true when values[i] is an observed sample rather than a
/// previously forecast estimate.
struct LagVector {
    Vec values;
    std::vector<bool> known;
};

/// Assembles the lag vector for forecast step N (1-based) from the observed
/// history (oldest first, last element = current sample) and the estimates
/// produced so far (estimates[0] = one step ahead).
LagVector build_lag_vector(const Vec& history, const Vec& estimates, int step, int lags);

struct CorrelationEstimate {
    Mat rho;         // lags x lags, symmetric, unit diagonal, clamped to [-1,1]
    bool degenerate; // some lagged window had zero variance
};

/// Pearson correlations between the series lagged by i and by j over their
/// overlapping window, for i, j in 1..lags.
CorrelationEstimate estimate_correlations(const Vec& history, int lags);

/// Multi-step forecast: per-step expected value and closed-form variance.
struct ForecastPath {
    int horizon = 0;
    Vec means;         // index N-1 holds the N-step-ahead expectation
    Vec variances;     // same indexing; variances[0] == sigma_eps2
    Mat corr;          // the correlation matrix used
    double sigma_eps2 = 0.0;

    double stddev(int step) const; // nu_N, step is 1-based
};

/// Iterated prediction with analytic uncertainty propagation. Activations
/// are evaluated at the expected lag vector and treated as constants; the
/// step variance is the quadratic form of the effective coefficients over
/// the augmented lag covariance plus the one-step noise variance.
ForecastPath forecast(const TSModel& model, const Vec& history, double sigma_eps2,
                      const Mat& corr, int max_horizon);

/// Whether the health index approaches the threshold from above (decay,
/// the battery case) or from below (growing degradation measures).
enum class ThresholdDirection { Decay, Growth };

ThresholdDirection resolve_direction(double first_hi, double eta);

struct RulEstimate {
    std::optional<int> point;
    std::optional<int> lower;
    std::optional<int> upper;
    double threshold = 0.0;
    double alpha = 0.0;
};

/// First-crossing scan of the mean path and its confidence bands against the
/// threshold. A band that never crosses within the path horizon is reported
/// as unset (the infeasibility case).
RulEstimate estimate_rul(const ForecastPath& path, double eta, double alpha,
                         ThresholdDirection direction);

/// CSV trace: N, mean, variance, lower_band, upper_band (bands at +-z sigma).
void write_forecast_csv(std::ostream& out, const ForecastPath& path, double z);

/// Same trace as a JSON document.
std::string forecast_to_json(const ForecastPath& path, double z);

} // namespace rulkit
