// Experiment runner: tune the lag count per battery-algorithm pair, train,
// sweep the prognosis starting points and emit all report/plot data.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rulkit/experiment.hpp"
#include "rulkit/io_util.hpp"

int main(int argc, char** argv) {
    CLI::App app{"rulkit - streaming RUL prognostics with evolving Takagi-Sugeno models"};

    std::string config_path;
    std::string train, data_dir, out_dir;
    std::vector<std::string> test, algos;
    std::vector<int> tp;
    double confidence = -1.0, eta = -1.0;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int jobs = 0, horizon = -1;

    app.add_option("--config", config_path, "Experiment config JSON (schema 1)")
        ->check(CLI::ExistingFile);
    app.add_option("--train", train, "Training battery id (default B0006)");
    app.add_option("--test", test, "Test battery ids");
    app.add_option("--algo", algos, "Algorithms: ebets, exts, emg, arma");
    app.add_option("--tp", tp, "Prognosis starting cycles");
    app.add_option("--confidence", confidence, "Confidence level for RUL bounds, in (0,1)");
    app.add_option("--eta", eta, "Fault threshold in percent of rated capacity");
    app.add_option("--data", data_dir, "Directory with <battery>.csv files");
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--seed", seed, "Run seed recorded in the config echo")
        ->each([&seed_set](const std::string&) { seed_set = true; });
    app.add_option("--jobs", jobs, "Parallel battery-algorithm pairs");
    app.add_option("--horizon", horizon, "Forecast horizon cap (0 = auto)");

    CLI11_PARSE(app, argc, argv);

    try {
        rulkit::ExperimentConfig cfg;
        if (!config_path.empty())
            cfg = rulkit::ExperimentConfig::from_json_text(rulkit::read_text_file(config_path));

        if (!train.empty()) cfg.train_battery = train;
        if (!test.empty()) cfg.test_batteries = test;
        if (!algos.empty()) cfg.algorithms = algos;
        if (!tp.empty()) cfg.t_p = tp;
        if (confidence >= 0.0) cfg.confidence = confidence;
        if (eta >= 0.0) cfg.eta = eta;
        if (!data_dir.empty()) cfg.data_dir = data_dir;
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (seed_set) cfg.seed = seed;
        if (jobs > 0) cfg.jobs = jobs;
        if (horizon >= 0) cfg.max_horizon = horizon;

        const auto result = rulkit::run_experiment(cfg);
        std::printf("%s", rulkit::render_summary_text(cfg, result).c_str());
        std::printf("\nartifacts written to %s\n", cfg.out_dir.c_str());
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
