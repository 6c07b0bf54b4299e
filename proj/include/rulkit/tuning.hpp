#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "rulkit/forecaster.hpp"
#include "rulkit/linalg.hpp"

namespace rulkit {

/// Double-exponential capacity model C(k) = c1 e^{c2 k} + c3 e^{c4 k}.
struct ExpModel {
    std::array<double, 4> c{0.0, 0.0, 0.0, 0.0};
    double eval(double k) const;
};

struct ExpFitResult {
    ExpModel model;       // best parameters found
    double cost = 0.0;    // sum of squared residuals at `model`
    int iterations = 0;
    bool converged = false;
    bool diverged = false; // cost blew up; `model` holds the best-so-far
};

/// Damped Gauss-Newton (Levenberg-Marquardt) least-squares fit of the
/// exponential model over k = 1..n. Stops when the relative cost decrease
/// drops below rel_tol or after max_iters iterations.
ExpFitResult fit_exponential(const Vec& series, const std::array<double, 4>& c0,
                             int max_iters = 500, double rel_tol = 1e-10);

/// Cycles from k until the average of the two fitted curves falls to eta;
/// unset when it stays above eta within the horizon.
std::optional<int> pseudo_rul(const ExpModel& train_model, const ExpModel& test_model,
                              double eta, int k, int horizon);

/// Validation index: RA + (1 - MAPE/100) + (1 - lags/20).
double compute_index(double ra, double mape_pct, int lags);

/// Lagged training pairs: row t = [x_{t+L-1} ... x_t] (newest first),
/// target x_{t+L}; one row per admissible t.
struct HankelData {
    Mat inputs;
    Vec targets;
};
HankelData hankel(const Vec& series, int lags);

struct LagCandidate {
    int lags = 0;
    std::array<double, 4> index_at{}; // at the validation checkpoints
    double mean_index = 0.0;
};

struct LagSelection {
    std::string battery;
    std::string algorithm;
    int chosen = 0;
    std::vector<LagCandidate> table;
    int lag_min = 0;
    int lag_max = 0;
    std::array<double, 4> train_coeffs{};
    std::array<double, 4> head_coeffs{};
};

struct TuningOptions {
    int lag_min = 1;
    int lag_max = 20;
    double eta = 70.0;
    std::array<int, 4> checkpoints{5, 10, 15, 20};
    int head_samples = 20;   // test samples available for validation
    int horizon_mult = 10;   // pseudo-RUL horizon = mult * train length
};

/// Index of the candidate with the highest mean index; ties resolve to the
/// earliest entry (the smallest lag, given the table is in search order).
std::size_t pick_best_candidate(const std::vector<LagCandidate>& table);

/// The validation protocol: fit the exponential model to the training data
/// and to the first samples of the test battery, build the pseudo ground
/// truth from their average, then score every candidate lag count by the
/// mean index over the checkpoints. Ties resolve to the smallest lag.
LagSelection select_lags(const std::string& battery, const std::string& algorithm,
                         const Vec& train_series, const Vec& test_head,
                         const LagForecasterFactory& factory, const TuningOptions& opt);

/// Tuning report: the per-lag index table and the chosen lag count.
std::string tuning_report_json(const LagSelection& sel);

} // namespace rulkit
