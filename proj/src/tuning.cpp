#include "rulkit/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "rulkit/errors.hpp"
#include "rulkit/metrics.hpp"

namespace rulkit {

namespace {

// exp with the argument clamped so cost/Jacobian stay finite while the
// solver is still far from the decaying basin.
double safe_exp(double arg) {
    return std::exp(std::clamp(arg, -745.0, 705.0));
}

double sq(double v) { return v * v; }

} // namespace

double ExpModel::eval(double k) const {
    return c[0] * safe_exp(c[1] * k) + c[2] * safe_exp(c[3] * k);
}

namespace {

double fit_cost(const Vec& series, const ExpModel& m) {
    double cost = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double r = series[i] - m.eval(static_cast<double>(i + 1));
        cost += sq(std::clamp(r, -1e150, 1e150));
    }
    return cost;
}

} // namespace

ExpFitResult fit_exponential(const Vec& series, const std::array<double, 4>& c0,
                             int max_iters, double rel_tol) {
    if (series.empty()) throw Error("fit_exponential: empty series");
    const int n = static_cast<int>(series.size());

    ExpFitResult res;
    res.model.c = c0;
    res.cost = fit_cost(series, res.model);
    if (!std::isfinite(res.cost)) {
        res.diverged = true;
        return res;
    }

    ExpModel cur = res.model;
    double cost = res.cost;
    double mu = 1e-3;
    const double step_cap = 10.0;

    for (int iter = 0; iter < max_iters; ++iter) {
        res.iterations = iter + 1;

        // Normal equations of the linearized problem.
        Mat jtj(4, 4);
        Vec jtr(4, 0.0);
        for (int i = 0; i < n; ++i) {
            const double k = static_cast<double>(i + 1);
            const double e1 = safe_exp(cur.c[1] * k);
            const double e2 = safe_exp(cur.c[3] * k);
            const double jrow[4] = {e1, std::clamp(cur.c[0] * k * e1, -1e150, 1e150), e2,
                                    std::clamp(cur.c[2] * k * e2, -1e150, 1e150)};
            const double r = std::clamp(series[i] - (cur.c[0] * e1 + cur.c[2] * e2), -1e150, 1e150);
            for (int a = 0; a < 4; ++a) {
                jtr[a] += jrow[a] * r;
                for (int b = a; b < 4; ++b) jtj(a, b) += jrow[a] * jrow[b];
            }
        }
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < a; ++b) jtj(a, b) = jtj(b, a);

        bool improved = false;
        for (int attempt = 0; attempt < 60; ++attempt) {
            Mat damped = jtj;
            for (int a = 0; a < 4; ++a)
                damped(a, a) += mu * std::max(jtj(a, a), 1e-12); // Marquardt scaling
            Vec delta;
            try {
                delta = solve_spd(std::move(damped), jtr);
            } catch (const Error&) {
                mu *= 10.0;
                continue;
            }

            // Trust-region style step cap (per component): without it the
            // Gauss-Newton direction can jump into degenerate
            // huge-coefficient valleys when started far from the basin.
            for (double& d : delta) d = std::clamp(d, -step_cap, step_cap);

            ExpModel trial = cur;
            bool finite = true;
            for (int a = 0; a < 4; ++a) {
                trial.c[a] += delta[a];
                finite = finite && std::isfinite(trial.c[a]);
            }
            const double trial_cost = finite ? fit_cost(series, trial)
                                             : std::numeric_limits<double>::infinity();
            if (trial_cost < cost) {
                cur = trial;
                const double drop = (cost - trial_cost) / std::max(cost, 1e-300);
                cost = trial_cost;
                mu = std::max(mu / 3.0, 1e-12);
                improved = true;
                if (cost < res.cost) {
                    res.cost = cost;
                    res.model = cur;
                }
                if (drop < rel_tol) res.converged = true;
                break;
            }
            mu *= 10.0;
            if (mu > 1e100) break;
        }

        if (!improved) {
            // No descent direction left at any damping: treat as converged
            // at the current point.
            res.converged = true;
            break;
        }
        if (res.converged) break;
    }

    res.model = cur;
    res.cost = cost;
    if (!std::isfinite(cost)) res.diverged = true;
    return res;
}

std::optional<int> pseudo_rul(const ExpModel& train_model, const ExpModel& test_model,
                              double eta, int k, int horizon) {
    for (int step = 1; step <= horizon; ++step) {
        const double kk = static_cast<double>(k + step);
        const double avg = 0.5 * (train_model.eval(kk) + test_model.eval(kk));
        if (avg <= eta) return step;
    }
    return std::nullopt;
}

double compute_index(double ra, double mape_pct, int lags) {
    if (lags < 1 || lags > 20) throw Error("compute_index: lags must be in [1,20]");
    return ra + (1.0 - mape_pct / 100.0) + (1.0 - static_cast<double>(lags) / 20.0);
}

HankelData hankel(const Vec& series, int lags) {
    const int n = static_cast<int>(series.size());
    if (lags < 1) throw Error("hankel: lags must be >= 1");
    if (n <= lags) throw HistoryTooShort("hankel: series length must exceed the lag count");

    HankelData h;
    const int rows = n - lags;
    h.inputs = Mat(rows, lags);
    h.targets.resize(rows);
    for (int t = 0; t < rows; ++t) {
        for (int i = 0; i < lags; ++i) h.inputs(t, i) = series[t + lags - 1 - i];
        h.targets[t] = series[t + lags];
    }
    return h;
}

LagSelection select_lags(const std::string& battery, const std::string& algorithm,
                         const Vec& train_series, const Vec& test_head,
                         const LagForecasterFactory& factory, const TuningOptions& opt) {
    if (static_cast<int>(test_head.size()) < opt.head_samples)
        throw HistoryTooShort("select_lags: need " + std::to_string(opt.head_samples) +
                              " test samples for validation");
    if (opt.lag_min < 1 || opt.lag_max < opt.lag_min)
        throw Error("select_lags: bad lag search range");

    const Vec head(test_head.begin(), test_head.begin() + opt.head_samples);

    const std::array<double, 4> c0{1.0, 1.0, 1.0, 0.0};
    const ExpFitResult train_fit = fit_exponential(train_series, c0);
    const ExpFitResult head_fit = fit_exponential(head, train_fit.model.c);

    const int horizon = opt.horizon_mult * static_cast<int>(train_series.size());

    // Pseudo ground truth per checkpoint: RUL and trajectory of the averaged
    // exponential curves.
    std::array<std::optional<int>, 4> truth_rul;
    for (std::size_t ji = 0; ji < opt.checkpoints.size(); ++ji)
        truth_rul[ji] = pseudo_rul(train_fit.model, head_fit.model, opt.eta,
                                   opt.checkpoints[ji], horizon);

    LagSelection sel;
    sel.battery = battery;
    sel.algorithm = algorithm;
    sel.lag_min = opt.lag_min;
    sel.lag_max = opt.lag_max;
    sel.train_coeffs = train_fit.model.c;
    sel.head_coeffs = head_fit.model.c;

    for (int lags = opt.lag_min; lags <= opt.lag_max; ++lags) {
        LagCandidate cand;
        cand.lags = lags;

        auto model = factory(lags);
        model->fit(train_series);

        int fed = 0;
        double sum = 0.0;
        for (std::size_t ji = 0; ji < opt.checkpoints.size(); ++ji) {
            const int j = opt.checkpoints[ji];
            for (; fed < j; ++fed) model->observe(head[fed]);

            double ra = 0.0;
            double mape_pct = 100.0;
            if (model->ready() && truth_rul[ji]) {
                const int r_true = *truth_rul[ji];
                const ForecastPath path = model->forecast(std::max(horizon, r_true));
                const RulEstimate rul =
                    estimate_rul(path, opt.eta, 0.01, ThresholdDirection::Decay);
                if (rul.point) ra = relative_accuracy(r_true, *rul.point);
                // Trajectory error against the averaged curve up to the
                // pseudo failure point.
                Vec truth(r_true), pred(r_true);
                for (int s = 1; s <= r_true; ++s) {
                    const double kk = static_cast<double>(j + s);
                    truth[s - 1] =
                        0.5 * (train_fit.model.eval(kk) + head_fit.model.eval(kk));
                    pred[s - 1] = path.means[s - 1];
                }
                try {
                    mape_pct = mape(truth, pred);
                } catch (const ZeroReference&) {
                    mape_pct = 100.0; // degenerate pseudo truth: keep the worst-case score
                }
            }
            const double idx = compute_index(ra, mape_pct, lags);
            cand.index_at[ji] = idx;
            sum += idx;
        }
        cand.mean_index = sum / static_cast<double>(opt.checkpoints.size());
        sel.table.push_back(cand);
    }
    sel.chosen = sel.table[pick_best_candidate(sel.table)].lags;
    return sel;
}

std::size_t pick_best_candidate(const std::vector<LagCandidate>& table) {
    if (table.empty()) throw Error("pick_best_candidate: empty table");
    std::size_t best = 0;
    for (std::size_t i = 1; i < table.size(); ++i)
        if (table[i].mean_index > table[best].mean_index) best = i; // strict: ties keep the earlier
    return best;
}

std::string tuning_report_json(const LagSelection& sel) {
    nlohmann::json doc;
    doc["battery"] = sel.battery;
    doc["algorithm"] = sel.algorithm;
    doc["chosen_lags"] = sel.chosen;
    doc["lag_min"] = sel.lag_min;
    doc["lag_max"] = sel.lag_max;
    doc["train_exp_coeffs"] = sel.train_coeffs;
    doc["head_exp_coeffs"] = sel.head_coeffs;
    nlohmann::json table = nlohmann::json::array();
    for (const auto& cand : sel.table) {
        table.push_back({{"lags", cand.lags},
                         {"index_at_checkpoints", cand.index_at},
                         {"mean_index", cand.mean_index}});
    }
    doc["candidates"] = std::move(table);
    return doc.dump(2);
}

} // namespace rulkit
