#include "rulkit/arma.hpp"

#include <algorithm>
#include <cmath>

#include "rulkit/errors.hpp"

namespace rulkit {

namespace {

double mean_of(const Vec& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// Least squares on rows of regressors vs targets; ridge fallback on
// rank deficiency keeps degenerate inputs (constant series) well-defined.
Vec least_squares(const std::vector<Vec>& rows, const Vec& targets, bool* ridged) {
    const std::size_t dim = rows[0].size();
    Mat ata(dim, dim);
    Vec atb(dim, 0.0);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const Vec& x = rows[r];
        for (std::size_t i = 0; i < dim; ++i) {
            atb[i] += x[i] * targets[r];
            for (std::size_t j = i; j < dim; ++j) ata(i, j) += x[i] * x[j];
        }
    }
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < i; ++j) ata(i, j) = ata(j, i);
    return solve_spd(std::move(ata), atb, ridged);
}

} // namespace

ArmaModel fit_ar(const Vec& series, int p) {
    const int n = static_cast<int>(series.size());
    if (p < 1) throw Error("fit_ar: p must be >= 1");
    if (n <= p + 2) throw HistoryTooShort("fit_ar: series length must exceed p + 2");

    // Centered lag columns keep the normal equations well conditioned on
    // level-heavy data; the explicit intercept column absorbs transients.
    const double mu = mean_of(series);
    std::vector<Vec> rows;
    Vec targets;
    rows.reserve(n - p);
    targets.reserve(n - p);
    for (int t = p; t < n; ++t) {
        Vec x(p + 1);
        x[0] = 1.0;
        for (int i = 0; i < p; ++i) x[i + 1] = series[t - 1 - i] - mu;
        rows.push_back(std::move(x));
        targets.push_back(series[t]);
    }

    ArmaModel m;
    m.p = p;
    m.q = 0;
    const Vec beta = least_squares(rows, targets, &m.ridged);
    m.phi.assign(beta.begin() + 1, beta.end());

    double phi_sum = 0.0;
    for (double c : m.phi) phi_sum += c;
    m.intercept = beta[0] - mu * phi_sum;

    double sse = 0.0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const double e = targets[r] - dot(rows[r], beta);
        sse += e * e;
    }
    const int dof = static_cast<int>(rows.size()) - p - 1;
    m.sigma2 = sse / static_cast<double>(std::max(dof, 1));
    return m;
}

ArmaModel fit_arma(const Vec& series, int p, int q) {
    if (q == 0) return fit_ar(series, p);
    const int n = static_cast<int>(series.size());
    if (p < 1 || q < 0) throw Error("fit_arma: invalid orders");

    // Stage 1: long AR to estimate innovations.
    const int long_p = std::min(n / 3, std::max(2 * (p + q), 10));
    if (n <= long_p + 2) throw HistoryTooShort("fit_arma: series too short for the long AR stage");
    const ArmaModel long_ar = fit_ar(series, long_p);

    Vec eps(n, 0.0);
    for (int t = long_p; t < n; ++t) {
        double pred = long_ar.intercept;
        for (int i = 0; i < long_p; ++i) pred += long_ar.phi[i] * series[t - 1 - i];
        eps[t] = series[t] - pred;
    }

    // Stage 2: regression on lagged values and lagged innovations.
    const int start = std::max(p, long_p + q);
    if (n - start < p + q + 2) throw HistoryTooShort("fit_arma: series too short for stage two");
    std::vector<Vec> rows;
    Vec targets;
    for (int t = start; t < n; ++t) {
        Vec x(1 + p + q);
        x[0] = 1.0;
        for (int i = 0; i < p; ++i) x[1 + i] = series[t - 1 - i];
        for (int j = 0; j < q; ++j) x[1 + p + j] = eps[t - 1 - j];
        rows.push_back(std::move(x));
        targets.push_back(series[t]);
    }

    ArmaModel m;
    m.p = p;
    m.q = q;
    const Vec beta = least_squares(rows, targets, &m.ridged);
    m.intercept = beta[0];
    m.phi.assign(beta.begin() + 1, beta.begin() + 1 + p);
    m.theta_ma.assign(beta.begin() + 1 + p, beta.end());

    double sse = 0.0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const double e = targets[r] - dot(rows[r], beta);
        sse += e * e;
    }
    const int dof = static_cast<int>(rows.size()) - (1 + p + q);
    m.sigma2 = sse / static_cast<double>(std::max(dof, 1));
    return m;
}

Vec psi_weights(const ArmaModel& model, int count) {
    Vec psi(count, 0.0);
    if (count == 0) return psi;
    psi[0] = 1.0;
    for (int m = 1; m < count; ++m) {
        double s = 0.0;
        for (int i = 1; i <= std::min(m, model.p); ++i) s += model.phi[i - 1] * psi[m - i];
        if (m <= model.q) s += model.theta_ma[m - 1];
        psi[m] = s;
    }
    return psi;
}

ForecastPath forecast_arma(const ArmaModel& model, const Vec& history, int max_horizon) {
    const int n = static_cast<int>(history.size());
    if (n < model.p) throw HistoryTooShort("forecast_arma: history shorter than p");
    if (max_horizon < 1) throw Error("forecast_arma: max_horizon must be >= 1");

    // Innovation states for the MA part, reconstructed over the history.
    Vec eps(n, 0.0);
    if (model.q > 0) {
        for (int t = model.p; t < n; ++t) {
            double pred = model.intercept;
            for (int i = 0; i < model.p; ++i) pred += model.phi[i] * history[t - 1 - i];
            for (int j = 0; j < model.q; ++j)
                if (t - 1 - j >= 0) pred += model.theta_ma[j] * eps[t - 1 - j];
            eps[t] = history[t] - pred;
        }
    }

    ForecastPath path;
    path.horizon = max_horizon;
    path.sigma_eps2 = model.sigma2;
    path.means.reserve(max_horizon);
    path.variances.reserve(max_horizon);

    const Vec psi = psi_weights(model, max_horizon);
    double psi_sq_sum = 0.0;

    auto value_at = [&](int idx) -> double {
        // idx counts from the start of the history, continuing into forecasts
        return idx < n ? history[idx] : path.means[idx - n];
    };

    for (int step = 1; step <= max_horizon; ++step) {
        const int t = n + step - 1;
        double pred = model.intercept;
        for (int i = 0; i < model.p; ++i) pred += model.phi[i] * value_at(t - 1 - i);
        for (int j = 0; j < model.q; ++j) {
            const int te = t - 1 - j;
            if (te < n && te >= 0) pred += model.theta_ma[j] * eps[te]; // future innovations are zero
        }
        psi_sq_sum += psi[step - 1] * psi[step - 1];
        path.means.push_back(pred);
        path.variances.push_back(model.sigma2 * psi_sq_sum);
    }
    return path;
}

} // namespace rulkit
