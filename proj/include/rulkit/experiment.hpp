#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rulkit/dataio.hpp"
#include "rulkit/metrics.hpp"
#include "rulkit/tuning.hpp"

namespace rulkit {

/// Everything one experiment run needs; loadable from a versioned JSON
/// document, with CLI flags overriding individual fields.
struct ExperimentConfig {
    std::string train_battery = "B0006";
    std::vector<std::string> test_batteries = {"B0005", "B0007", "B0018"};
    std::vector<std::string> algorithms = {"ebets", "exts", "emg", "arma"};
    std::vector<int> t_p = {20, 40, 60, 80, 100};
    double confidence = 0.99;
    double eta = 70.0;
    double rated_ah = 2.0;
    int lag_min = 1;
    int lag_max = 20;
    int arma_p_min = 1;
    int arma_p_max = 10;
    int arma_q = 0;
    int max_horizon = 0; // 0 = auto: min(2000, 5x training length)
    int jobs = 1;
    std::uint64_t seed = 0;
    std::string data_dir = "data";
    std::string out_dir = "out";

    void validate() const;
    static ExperimentConfig from_json_text(const std::string& text);
    std::string to_json_text() const;
};

struct PairResult {
    std::string battery;
    std::string algorithm;
    LagSelection selection;
    std::vector<AlphaLambdaRecord> records;
};

struct ExperimentResult {
    std::vector<PairResult> pairs;
};

/// Runs the full pipeline (tune, train, sweep, report) and writes the
/// artifact tree under config.out_dir. Deterministic for a fixed config.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Table 2-style summary: one row per (battery, algorithm), RA per t_P,
/// `--` for infeasible points and `*` for points not carried out.
std::string render_summary_text(const ExperimentConfig& config, const ExperimentResult& result);
std::string render_summary_csv(const ExperimentConfig& config, const ExperimentResult& result);

} // namespace rulkit
