#pragma once

#include "rulkit/linalg.hpp"
#include "rulkit/prognosis.hpp"

namespace rulkit {

/// Non-evolving AR(p)/ARMA(p,q) baseline fitted by conditional least squares.
struct ArmaModel {
    int p = 0;
    int q = 0;
    Vec phi;        // AR coefficients, phi[0] multiplies x_{t-1}
    Vec theta_ma;   // MA coefficients, theta_ma[0] multiplies e_{t-1}
    double intercept = 0.0;
    double sigma2 = 0.0; // innovation variance
    bool ridged = false; // rank-deficient design handled with a ridge
};

/// Conditional least squares AR(p) fit on the demeaned series.
ArmaModel fit_ar(const Vec& series, int p);

/// ARMA(p,q) via the Hannan-Rissanen two-stage regression (q > 0);
/// falls back to fit_ar when q == 0.
ArmaModel fit_arma(const Vec& series, int p, int q);

/// psi-weights of the MA(infinity) expansion, psi[0] = 1.
Vec psi_weights(const ArmaModel& model, int count);

/// Iterated mean forecast with textbook variance bands
/// lambda_N^2 = sigma2 * sum_{j<N} psi_j^2.
ForecastPath forecast_arma(const ArmaModel& model, const Vec& history, int max_horizon);

} // namespace rulkit
