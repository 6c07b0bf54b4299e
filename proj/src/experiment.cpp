#include "rulkit/experiment.hpp"

#include <algorithm>
#include <future>
#include <mutex>
#include <sstream>

#include <json.hpp>

#include "rulkit/errors.hpp"
#include "rulkit/io_util.hpp"
#include "rulkit/stats.hpp"

namespace rulkit {

namespace fs = std::filesystem;
using nlohmann::json;

void ExperimentConfig::validate() const {
    for (const auto& id : test_batteries)
        if (id == train_battery)
            throw Error("config: training battery '" + train_battery + "' must not be in the test set");
    if (!(confidence > 0.0 && confidence < 1.0)) throw Error("config: confidence must be in (0,1)");
    if (t_p.empty()) throw Error("config: t_P list is empty");
    if (algorithms.empty()) throw Error("config: algorithm list is empty");
    for (const auto& a : algorithms)
        if (!is_known_algorithm(a)) throw Error("config: unknown algorithm '" + a + "'");
    if (lag_min < 1 || lag_max < lag_min) throw Error("config: bad lag range");
    if (arma_p_min < 1 || arma_p_max < arma_p_min) throw Error("config: bad ARMA order range");
    if (arma_q < 0) throw Error("config: arma_q must be >= 0");
    if (jobs < 1) throw Error("config: jobs must be >= 1");
    if (!(rated_ah > 0.0)) throw Error("config: rated_ah must be positive");
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    const json doc = json::parse(text);
    if (doc.contains("schema") && doc.at("schema").get<int>() != 1)
        throw SchemaError("config: unsupported schema version");

    ExperimentConfig c;
    const auto get = [&doc](const char* key, auto& field) {
        if (doc.contains(key)) field = doc.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("train_battery", c.train_battery);
    get("test_batteries", c.test_batteries);
    get("algorithms", c.algorithms);
    get("tp", c.t_p);
    get("confidence", c.confidence);
    get("eta", c.eta);
    get("rated_ah", c.rated_ah);
    get("lag_min", c.lag_min);
    get("lag_max", c.lag_max);
    get("arma_p_min", c.arma_p_min);
    get("arma_p_max", c.arma_p_max);
    get("arma_q", c.arma_q);
    get("max_horizon", c.max_horizon);
    get("jobs", c.jobs);
    get("seed", c.seed);
    get("data_dir", c.data_dir);
    get("out_dir", c.out_dir);
    return c;
}

std::string ExperimentConfig::to_json_text() const {
    json doc;
    doc["schema"] = 1;
    doc["train_battery"] = train_battery;
    doc["test_batteries"] = test_batteries;
    doc["algorithms"] = algorithms;
    doc["tp"] = t_p;
    doc["confidence"] = confidence;
    doc["eta"] = eta;
    doc["rated_ah"] = rated_ah;
    doc["lag_min"] = lag_min;
    doc["lag_max"] = lag_max;
    doc["arma_p_min"] = arma_p_min;
    doc["arma_p_max"] = arma_p_max;
    doc["arma_q"] = arma_q;
    doc["max_horizon"] = max_horizon;
    doc["jobs"] = jobs;
    doc["seed"] = seed;
    doc["data_dir"] = data_dir;
    doc["out_dir"] = out_dir;
    return doc.dump(2);
}

namespace {

DegradationSeries load_battery(const ExperimentConfig& cfg, const std::string& id) {
    const fs::path path = fs::path(cfg.data_dir) / (id + ".csv");
    if (!fs::exists(path))
        throw Error("dataset file not found: " + path.string() +
                    " (expected a 'cycle,capacity_ah' CSV for battery " + id + ")");
    return load_capacity(path, cfg.rated_ah, cfg.eta);
}

PairResult run_pair_impl(const ExperimentConfig& cfg, const Vec& train,
                         const DegradationSeries& uut, const std::string& algo,
                         int max_horizon) {
    PairResult pr;
    pr.battery = uut.battery_id;
    pr.algorithm = algo;

    const bool is_arma = algo == "arma";
    const int arma_q = cfg.arma_q;
    const LagForecasterFactory factory =
        is_arma ? LagForecasterFactory([arma_q](int p) {
            return std::unique_ptr<Forecaster>(std::make_unique<ArmaForecaster>(p, arma_q));
        })
                : make_algorithm_factory(algo);

    TuningOptions topt;
    topt.lag_min = is_arma ? cfg.arma_p_min : cfg.lag_min;
    topt.lag_max = is_arma ? cfg.arma_p_max : cfg.lag_max;
    topt.eta = cfg.eta;
    pr.selection = select_lags(uut.battery_id, algo, train, uut.hi, factory, topt);

    SweepOptions sopt;
    sopt.t_p = cfg.t_p;
    sopt.eta = cfg.eta;
    sopt.confidence = cfg.confidence;
    sopt.max_horizon = max_horizon;
    sopt.keep_paths = true;
    const int lags = pr.selection.chosen;
    pr.records = alpha_lambda_sweep([&factory, lags]() { return factory(lags); }, train, uut, sopt);
    return pr;
}

PairResult run_pair(const ExperimentConfig& cfg, const Vec& train, const DegradationSeries& uut,
                    const std::string& algo, int max_horizon) {
    try {
        return run_pair_impl(cfg, train, uut, algo, max_horizon);
    } catch (const Error& e) {
        throw Error("pair " + uut.battery_id + "/" + algo + ": " + e.what());
    }
}

std::string pair_model_snapshot(const ExperimentConfig& cfg, const Vec& train,
                                const PairResult& pr) {
    const int lags = pr.selection.chosen;
    if (pr.algorithm == "arma") {
        ArmaModel m = fit_arma(train, lags, cfg.arma_q);
        json doc;
        doc["schema"] = 1;
        doc["type"] = "arma";
        doc["p"] = m.p;
        doc["q"] = m.q;
        doc["phi"] = m.phi;
        doc["theta_ma"] = m.theta_ma;
        doc["intercept"] = m.intercept;
        doc["sigma2"] = m.sigma2;
        doc["ridged"] = m.ridged;
        return doc.dump(2);
    }
    auto f = make_algorithm_factory(pr.algorithm)(lags);
    f->fit(train);
    auto* efs = dynamic_cast<EfsForecaster*>(f.get());
    return model_to_json(efs->model(), efs->tracker());
}

} // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
    config.validate();

    const DegradationSeries train = load_battery(config, config.train_battery);
    std::vector<DegradationSeries> tests;
    for (const auto& id : config.test_batteries) tests.push_back(load_battery(config, id));

    const int max_horizon =
        config.max_horizon > 0
            ? config.max_horizon
            : std::min(2000, 5 * static_cast<int>(train.size()));

    struct PairSpec {
        const DegradationSeries* uut;
        std::string algo;
    };
    std::vector<PairSpec> specs;
    for (const auto& uut : tests)
        for (const auto& algo : config.algorithms) specs.push_back({&uut, algo});

    // Pairs are independent; compute in parallel, then write everything from
    // this thread in a fixed pair order so the output tree is deterministic.
    std::vector<PairResult> results(specs.size());
    std::size_t next = 0;
    const int workers = std::min<int>(config.jobs, static_cast<int>(specs.size()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < specs.size(); ++i)
            results[i] = run_pair(config, train.hi, *specs[i].uut, specs[i].algo, max_horizon);
    } else {
        std::mutex mu;
        std::vector<std::future<void>> futs;
        for (int w = 0; w < workers; ++w) {
            futs.push_back(std::async(std::launch::async, [&] {
                for (;;) {
                    std::size_t i;
                    {
                        std::lock_guard<std::mutex> lock(mu);
                        if (next >= specs.size()) return;
                        i = next++;
                    }
                    results[i] =
                        run_pair(config, train.hi, *specs[i].uut, specs[i].algo, max_horizon);
                }
            }));
        }
        for (auto& f : futs) f.get();
    }

    ExperimentResult res;
    res.pairs = std::move(results);

    const fs::path out_root(config.out_dir);
    fs::create_directories(out_root);
    write_text_file(out_root / "config.json", config.to_json_text() + "\n");

    const double z = stats::normal_quantile(1.0 - 0.5 * (1.0 - config.confidence));
    for (const auto& pr : res.pairs) {
        const fs::path dir = out_root / pr.battery / pr.algorithm;
        fs::create_directories(dir);
        write_text_file(dir / "tuning.json", tuning_report_json(pr.selection) + "\n");
        {
            std::ostringstream csv;
            write_alpha_lambda_csv(csv, pr.records);
            write_text_file(dir / "alpha_lambda.csv", csv.str());
            write_text_file(dir / "alpha_lambda.json", alpha_lambda_to_json(pr.records) + "\n");
        }
        for (const auto& rec : pr.records) {
            if (!rec.path) continue;
            char name[40];
            std::snprintf(name, sizeof(name), "forecast_tp%03d.csv", rec.t_p);
            std::ostringstream csv;
            write_forecast_csv(csv, *rec.path, z);
            write_text_file(dir / name, csv.str());
        }
        write_text_file(dir / "model.json", pair_model_snapshot(config, train.hi, pr) + "\n");
    }

    write_text_file(out_root / "summary.csv", render_summary_csv(config, res));
    write_text_file(out_root / "summary.txt", render_summary_text(config, res));
    return res;
}

namespace {

std::string cell_text(const AlphaLambdaRecord& rec) {
    switch (rec.status) {
        case SweepStatus::Ok: return fmt_fixed(*rec.ra, 2);
        case SweepStatus::Infeasible: return "--";
        case SweepStatus::Skipped: return "*";
    }
    return "?";
}

} // namespace

std::string render_summary_csv(const ExperimentConfig& config, const ExperimentResult& result) {
    std::ostringstream out;
    out << "battery,algorithm,lags";
    for (int tp : config.t_p) out << ",ra_tp" << tp;
    out << '\n';
    for (const auto& pr : result.pairs) {
        out << pr.battery << ',' << pr.algorithm << ',' << pr.selection.chosen;
        for (const auto& rec : pr.records) {
            out << ',';
            if (rec.status == SweepStatus::Ok)
                out << fmt_fixed(*rec.ra, 4);
            else
                out << cell_text(rec);
        }
        out << '\n';
    }
    return out.str();
}

std::string render_summary_text(const ExperimentConfig& config, const ExperimentResult& result) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header = {"battery", "algorithm", "lags"};
    for (int tp : config.t_p) header.push_back("tp=" + std::to_string(tp));
    rows.push_back(header);
    for (const auto& pr : result.pairs) {
        std::vector<std::string> row = {pr.battery, pr.algorithm, std::to_string(pr.selection.chosen)};
        for (const auto& rec : pr.records) row.push_back(cell_text(rec));
        rows.push_back(std::move(row));
    }

    std::vector<std::size_t> width(header.size(), 0);
    for (const auto& row : rows)
        for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());

    std::ostringstream out;
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) out << "  ";
            // numbers right-aligned, names left-aligned
            const bool left = i < 2;
            const int pad = static_cast<int>(width[i] - row[i].size());
            if (left)
                out << row[i] << std::string(pad, ' ');
            else
                out << std::string(pad, ' ') << row[i];
        }
        out << '\n';
    }
    return out.str();
}

} // namespace rulkit
