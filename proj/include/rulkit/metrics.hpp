#pragma once

#include <optional>
#include <ostream>
#include <vector>

#include "rulkit/dataio.hpp"
#include "rulkit/forecaster.hpp"

namespace rulkit {

/// Mean absolute percentage error, in percent.
double mape(const Vec& actual, const Vec& predicted);

/// Relative accuracy 1 - |r - r_hat| / r; negative for gross misses.
double relative_accuracy(double true_rul, double est_rul);

enum class SweepStatus {
    Ok,         // RUL point estimate produced
    Infeasible, // forecast never crossed the threshold ("--")
    Skipped     // prognosis not carried out at this t_P ("*")
};

struct AlphaLambdaRecord {
    int t_p = 0;
    int s_i = 0;      // aligned start sample, s_i = t_P - (lags - 3)
    int true_rul = 0; // failure cycle - t_P
    std::optional<int> est_rul;
    std::optional<int> lower;
    std::optional<int> upper;
    std::optional<double> ra;
    bool in_goal = false;
    SweepStatus status = SweepStatus::Skipped;
    std::optional<ForecastPath> path;
};

struct SweepOptions {
    std::vector<int> t_p = {20, 40, 60, 80, 100};
    double alpha_goal = 0.2;
    double eta = 70.0;
    double confidence = 0.99;
    int max_horizon = 2000;
    bool keep_paths = false;
};

/// The alpha-lambda protocol: for every starting point t_P, a fresh model is
/// fitted on the training series, fed the unit-under-test stream up to the
/// aligned sample s_i, and its RUL triple is scored against the true RUL.
/// Infeasible points are recorded, never fatal.
std::vector<AlphaLambdaRecord> alpha_lambda_sweep(const ForecasterFactory& factory,
                                                  const Vec& train_series,
                                                  const DegradationSeries& uut,
                                                  const SweepOptions& opt);

/// One row per t_P, matching the alpha-lambda plot data.
void write_alpha_lambda_csv(std::ostream& out, const std::vector<AlphaLambdaRecord>& records);

/// Same records as a JSON document (RUL triple per starting point).
std::string alpha_lambda_to_json(const std::vector<AlphaLambdaRecord>& records);

} // namespace rulkit
