#include "rulkit/prognosis.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "rulkit/errors.hpp"
#include "rulkit/io_util.hpp"
#include "rulkit/stats.hpp"

namespace rulkit {

LagVector build_lag_vector(const Vec& history, const Vec& estimates, int step, int lags) {
    if (lags < 1) throw Error("build_lag_vector: lags must be >= 1");
    if (step < 1) throw Error("build_lag_vector: step must be >= 1");
    if (static_cast<int>(history.size()) < lags)
        throw HistoryTooShort("build_lag_vector: need at least `lags` observed samples");
    if (static_cast<int>(estimates.size()) < step - 1)
        throw Error("build_lag_vector: estimates up to step-1 required");

    LagVector lv;
    lv.values.resize(lags);
    lv.known.resize(lags);
    for (int i = 0; i < lags; ++i) {
        const int offset = step - 1 - i; // time k + offset
        if (offset >= 1) {
            lv.values[i] = estimates[offset - 1];
            lv.known[i] = false;
        } else {
            lv.values[i] = history[history.size() - 1 + offset];
            lv.known[i] = true;
        }
    }
    return lv;
}

CorrelationEstimate estimate_correlations(const Vec& history, int lags) {
    const int n = static_cast<int>(history.size());
    if (lags < 1) throw Error("estimate_correlations: lags must be >= 1");
    if (n < lags + 2) throw HistoryTooShort("estimate_correlations: need at least lags + 2 samples");

    CorrelationEstimate est{Mat::identity(lags), false};
    for (int i = 1; i <= lags; ++i) {
        for (int j = i + 1; j <= lags; ++j) {
            const int t0 = j; // = max(i, j)
            const int m = n - t0;
            double ma = 0.0, mb = 0.0;
            for (int t = t0; t < n; ++t) {
                ma += history[t - i];
                mb += history[t - j];
            }
            ma /= m;
            mb /= m;
            double saa = 0.0, sbb = 0.0, sab = 0.0;
            for (int t = t0; t < n; ++t) {
                const double da = history[t - i] - ma;
                const double db = history[t - j] - mb;
                saa += da * da;
                sbb += db * db;
                sab += da * db;
            }
            double r;
            if (saa <= 0.0 || sbb <= 0.0) {
                r = 0.0;
                est.degenerate = true;
            } else {
                r = sab / std::sqrt(saa * sbb);
                r = std::clamp(r, -1.0, 1.0);
            }
            est.rho(i - 1, j - 1) = r;
            est.rho(j - 1, i - 1) = r;
        }
    }
    return est;
}

double ForecastPath::stddev(int step) const {
    return std::sqrt(variances.at(static_cast<std::size_t>(step) - 1));
}

ForecastPath forecast(const TSModel& model, const Vec& history, double sigma_eps2,
                      const Mat& corr, int max_horizon) {
    if (model.empty()) throw Error("forecast: model has no rules");
    if (max_horizon < 1) throw Error("forecast: max_horizon must be >= 1");
    const int lags = model.n_x;
    if (static_cast<int>(history.size()) < lags)
        throw HistoryTooShort("forecast: history shorter than the lag order");

    Mat rho = corr;
    if (rho.empty()) rho = Mat::identity(lags);
    if (rho.rows() != static_cast<std::size_t>(lags) || rho.cols() != static_cast<std::size_t>(lags))
        throw Error("forecast: correlation matrix shape mismatch");

    ForecastPath path;
    path.horizon = max_horizon;
    path.corr = rho;
    path.sigma_eps2 = sigma_eps2;
    path.means.reserve(max_horizon);
    path.variances.reserve(max_horizon);

    Vec lambda; // per-step standard deviations, lambda[N-1]
    lambda.reserve(max_horizon);

    for (int step = 1; step <= max_horizon; ++step) {
        const LagVector lv = build_lag_vector(history, path.means, step, lags);
        const Vec h = activations(model, lv.values);
        const Vec coef = effective_coefficients(model, h); // bias first

        double mean = coef[0];
        for (int i = 0; i < lags; ++i) mean += coef[i + 1] * lv.values[i];

        // Quadratic form over the augmented lag covariance; the bias row and
        // column are zero, and lambda_m = 0 for m <= 0 (observed states).
        double q = 0.0;
        for (int i = 1; i <= lags; ++i) {
            const int mi = step - i;
            if (mi < 1) break; // subsequent entries are observed as well
            for (int j = 1; j <= lags; ++j) {
                const int mj = step - j;
                if (mj < 1) continue;
                q += coef[i] * coef[j] * lambda[mi - 1] * lambda[mj - 1] * rho(i - 1, j - 1);
            }
        }
        // Pairwise-estimated correlations need not form a PSD matrix; the
        // variance contract (var >= sigma_eps2) is enforced by clamping.
        if (q < 0.0) q = 0.0;

        const double var = q + sigma_eps2;
        path.means.push_back(mean);
        path.variances.push_back(var);
        lambda.push_back(std::sqrt(var));
    }
    return path;
}

ThresholdDirection resolve_direction(double first_hi, double eta) {
    return first_hi >= eta ? ThresholdDirection::Decay : ThresholdDirection::Growth;
}

RulEstimate estimate_rul(const ForecastPath& path, double eta, double alpha,
                         ThresholdDirection direction) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error("estimate_rul: alpha must be in (0,1)");

    RulEstimate est;
    est.threshold = eta;
    est.alpha = alpha;
    const double z = stats::normal_quantile(1.0 - 0.5 * alpha);
    const bool decay = direction == ThresholdDirection::Decay;

    for (int step = 1; step <= path.horizon; ++step) {
        const double mean = path.means[step - 1];
        const double nu = path.stddev(step);
        const double lo_band = mean - z * nu;
        const double hi_band = mean + z * nu;
        if (decay) {
            if (!est.lower && lo_band <= eta) est.lower = step;
            if (!est.point && mean <= eta) est.point = step;
            if (!est.upper && hi_band <= eta) est.upper = step;
        } else {
            if (!est.lower && hi_band >= eta) est.lower = step;
            if (!est.point && mean >= eta) est.point = step;
            if (!est.upper && lo_band >= eta) est.upper = step;
        }
        if (est.lower && est.point && est.upper) break;
    }
    return est;
}

void write_forecast_csv(std::ostream& out, const ForecastPath& path, double z) {
    out << "N,mean,variance,lower_band,upper_band\n";
    for (int step = 1; step <= path.horizon; ++step) {
        const double mean = path.means[step - 1];
        const double var = path.variances[step - 1];
        const double nu = std::sqrt(var);
        out << step << ',' << fmt_g17(mean) << ',' << fmt_g17(var) << ','
            << fmt_g17(mean - z * nu) << ',' << fmt_g17(mean + z * nu) << '\n';
    }
}

std::string forecast_to_json(const ForecastPath& path, double z) {
    nlohmann::json doc;
    doc["horizon"] = path.horizon;
    doc["sigma_eps2"] = path.sigma_eps2;
    doc["z"] = z;
    doc["mean"] = path.means;
    doc["variance"] = path.variances;
    nlohmann::json lo = nlohmann::json::array();
    nlohmann::json hi = nlohmann::json::array();
    for (int step = 1; step <= path.horizon; ++step) {
        const double nu = std::sqrt(path.variances[step - 1]);
        lo.push_back(path.means[step - 1] - z * nu);
        hi.push_back(path.means[step - 1] + z * nu);
    }
    doc["lower_band"] = std::move(lo);
    doc["upper_band"] = std::move(hi);
    return doc.dump(2);
}

} // namespace rulkit
