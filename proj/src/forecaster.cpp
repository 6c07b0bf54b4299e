#include "rulkit/forecaster.hpp"

#include <cmath>

#include "rulkit/errors.hpp"

namespace rulkit {

EfsForecaster::EfsForecaster(int lags, EvolveConfig cfg) : lags_(lags) {
    if (lags < 1) throw Error("EfsForecaster: lags must be >= 1");
    cfg.validate();
    model_.n_x = lags;
    model_.config = cfg;
}

void EfsForecaster::learn_from(const Vec& series) {
    const int n = static_cast<int>(series.size());
    for (int t = lags_; t < n; ++t) {
        Vec x(lags_);
        for (int i = 0; i < lags_; ++i) x[i] = series[t - 1 - i]; // newest first
        learn_step(model_, x, series[t], tracker_);
    }
}

void EfsForecaster::fit(const Vec& train_series) {
    if (static_cast<int>(train_series.size()) <= lags_)
        throw HistoryTooShort("EfsForecaster::fit: training series shorter than the lag order");
    // Anchor the new-rule dispersion scale to the training data spread.
    double mu = 0.0;
    for (double v : train_series) mu += v;
    mu /= static_cast<double>(train_series.size());
    double var = 0.0;
    for (double v : train_series) var += (v - mu) * (v - mu);
    var /= static_cast<double>(train_series.size());
    model_.config.input_scale = var > 1e-18 ? std::sqrt(var) : 1.0;

    learn_from(train_series);
}

void EfsForecaster::observe(double hi) {
    stream_.push_back(hi);
    const int n = static_cast<int>(stream_.size());
    if (n >= lags_ + 1) {
        Vec x(lags_);
        for (int i = 0; i < lags_; ++i) x[i] = stream_[n - 2 - i];
        learn_step(model_, x, stream_[n - 1], tracker_);
    }
}

ForecastPath EfsForecaster::forecast(int max_horizon) const {
    if (!ready()) throw HistoryTooShort("EfsForecaster::forecast: not enough observed samples");
    Mat corr;
    if (static_cast<int>(stream_.size()) >= lags_ + 2)
        corr = estimate_correlations(stream_, lags_).rho;
    else
        corr = Mat::identity(lags_);
    return rulkit::forecast(model_, stream_, tracker_.variance_or(0.0), corr, max_horizon);
}

void ArmaForecaster::fit(const Vec& train_series) {
    model_ = fit_arma(train_series, p_, q_);
}

ForecastPath ArmaForecaster::forecast(int max_horizon) const {
    if (!ready()) throw HistoryTooShort("ArmaForecaster::forecast: not enough observed samples");
    return forecast_arma(model_, stream_, max_horizon);
}

LagForecasterFactory make_algorithm_factory(const std::string& name) {
    if (name == "ebets")
        return [](int lags) { return std::make_unique<EfsForecaster>(lags, EvolveConfig::ebets(lags)); };
    if (name == "exts")
        return [](int lags) { return std::make_unique<EfsForecaster>(lags, EvolveConfig::exts(lags)); };
    if (name == "emg")
        return [](int lags) { return std::make_unique<EfsForecaster>(lags, EvolveConfig::emg(lags)); };
    if (name == "arma")
        return [](int p) { return std::make_unique<ArmaForecaster>(p); };
    throw Error("unknown algorithm '" + name + "' (expected ebets, exts, emg or arma)");
}

bool is_known_algorithm(const std::string& name) {
    return name == "ebets" || name == "exts" || name == "emg" || name == "arma";
}

} // namespace rulkit
