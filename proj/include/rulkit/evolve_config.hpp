#pragma once

#include "rulkit/errors.hpp"

namespace rulkit {

/// Knobs of the evolving learner. The presets map the published
/// hyperparameters of the EBeTS / exTS / eMG algorithms onto this one
/// generic mechanism; no behavioral fidelity to their internals is implied.
struct EvolveConfig {
    /// Compatibility confidence level: a sample whose Mahalanobis distance to
    /// every rule exceeds the chi-square quantile at this level spawns a rule.
    double omega = 0.9545;
    /// Support count from which a rule's consequent is considered mature.
    /// Bookkeeping only; immature rules are never suppressed from inference.
    int tau = 2;
    /// Antecedent learning rate; the effective step is gamma/support.
    double gamma = 0.5;
    /// RLS covariance initialization scale (P0 = delta * I).
    double delta = 1e3;
    /// New-rule dispersion scale, dimensionless: the initial dispersion is
    /// sigma_init * input_scale^2 * I.
    double sigma_init = 1e-2;
    /// Data scale (std-dev units of the inputs). Callers that know the
    /// training series set this; 1.0 leaves sigma_init absolute.
    double input_scale = 1.0;
    /// Keep dispersions diagonal (product of univariate Gaussians).
    bool diagonal_dispersion = false;

    void validate() const {
        if (!(omega > 0.0 && omega < 1.0)) throw Error("EvolveConfig: omega must be in (0,1)");
        if (!(gamma > 0.0 && gamma <= 1.0)) throw Error("EvolveConfig: gamma must be in (0,1]");
        if (!(delta > 0.0)) throw Error("EvolveConfig: delta must be positive");
        if (tau < 1) throw Error("EvolveConfig: tau must be >= 1");
        if (!(sigma_init > 0.0)) throw Error("EvolveConfig: sigma_init must be positive");
        if (!(input_scale > 0.0)) throw Error("EvolveConfig: input_scale must be positive");
    }

    static EvolveConfig ebets(int lags) {
        EvolveConfig c;
        c.omega = 0.9545;
        c.tau = lags + 1;
        c.gamma = 0.5;
        c.delta = 1e3;
        return c;
    }

    static EvolveConfig exts(int lags) {
        EvolveConfig c = ebets(lags);
        c.delta = 1e3; // Omega_exTS
        c.diagonal_dispersion = true;
        return c;
    }

    static EvolveConfig emg(int lags) {
        EvolveConfig c;
        c.omega = 0.99; // unilateral compatibility interval alpha = 0.01
        c.tau = lags + 1;
        c.gamma = 0.05; // beta
        c.delta = 1e3;
        c.sigma_init = 1e-3; // Sigma_init, relative to input scale
        return c;
    }
};

} // namespace rulkit
