#pragma once

#include <functional>
#include <memory>

#include "rulkit/arma.hpp"
#include "rulkit/error_tracker.hpp"
#include "rulkit/evolve.hpp"
#include "rulkit/prognosis.hpp"

namespace rulkit {

/// A trainable multi-step predictor: fitted once on the training battery,
/// then fed the unit-under-test stream sample by sample. Evolving models
/// keep learning from the stream; the ARMA baseline only buffers it as lag
/// initial conditions.
class Forecaster {
  public:
    virtual ~Forecaster() = default;

    virtual int lags() const = 0;
    virtual void fit(const Vec& train_series) = 0;
    virtual void observe(double hi) = 0;
    virtual bool ready() const = 0;
    virtual ForecastPath forecast(int max_horizon) const = 0;
};

class EfsForecaster final : public Forecaster {
  public:
    EfsForecaster(int lags, EvolveConfig cfg);

    int lags() const override { return lags_; }
    void fit(const Vec& train_series) override;
    void observe(double hi) override;
    bool ready() const override { return static_cast<int>(stream_.size()) >= lags_; }
    ForecastPath forecast(int max_horizon) const override;

    const TSModel& model() const { return model_; }
    const ErrorTracker& tracker() const { return tracker_; }

  private:
    void learn_from(const Vec& series);

    int lags_;
    TSModel model_;
    ErrorTracker tracker_;
    Vec stream_; // observed UUT samples
};

class ArmaForecaster final : public Forecaster {
  public:
    explicit ArmaForecaster(int p, int q = 0) : p_(p), q_(q) {}

    int lags() const override { return p_; }
    void fit(const Vec& train_series) override;
    void observe(double hi) override { stream_.push_back(hi); }
    bool ready() const override { return static_cast<int>(stream_.size()) >= p_; }
    ForecastPath forecast(int max_horizon) const override;

    const ArmaModel& model() const { return model_; }

  private:
    int p_;
    int q_;
    ArmaModel model_;
    Vec stream_;
};

using ForecasterFactory = std::function<std::unique_ptr<Forecaster>()>;
using LagForecasterFactory = std::function<std::unique_ptr<Forecaster>(int lags)>;

/// Factory for one of the named algorithm presets:
/// "ebets", "exts", "emg" (evolving presets) or "arma" (the baseline).
LagForecasterFactory make_algorithm_factory(const std::string& name);

bool is_known_algorithm(const std::string& name);

} // namespace rulkit
