#pragma once

#include "volspill/optim.hpp"

namespace volspill {

/// GARCH(1,1) with an AR(p) mean equation. The variance recursion is
///   sigma2_t = omega + alpha * eps_{t-1}^2 + beta * sigma2_{t-1}.
struct GarchParams {
    double mean_intercept = 0.0;
    Vector ar;  // AR coefficients of the mean equation, length p >= 0
    double omega = 1e-6;
    double alpha = 0.0;
    double beta = 0.0;

    int mean_lag() const { return static_cast<int>(ar.size()); }
    double persistence() const { return alpha + beta; }
    /// Throws unless omega > 0, alpha >= 0, beta >= 0, alpha + beta < bound.
    void validate(double stationarity_bound = 1.0) const;
};

struct GarchConfig {
    int mean_lag = 0;
    double stationarity_bound = 0.9999;
    bool allow_igarch = false;  // relaxes the bound to 1.2
    int restarts = 4;           // jittered starts in addition to the base start
    int min_observations = 250;
    bool sandwich = false;      // robust (QML) standard errors
    OptimOptions optim;

    double bound() const { return allow_igarch ? 1.2 : stationarity_bound; }
};

struct GarchFilterOutput {
    Vector residuals;      // eps_t, t = p .. T-1
    Vector cond_variance;  // sigma2_t, same indexing
};

/// Runs the mean and variance recursions at fixed parameters. The first
/// conditional variance is the sample variance of the mean-equation
/// residuals. Requires returns.size() > p and finite input.
GarchFilterOutput garch_filter(const GarchParams& params, const Vector& returns);

/// Gaussian negative log-likelihood 0.5 * sum(ln 2pi + ln sigma2_t + eps_t^2 / sigma2_t).
double garch_negloglik(const GarchParams& params, const Vector& returns);

struct GarchFit {
    GarchParams params;
    Vector residuals;
    Vector cond_variance;
    Vector std_residuals;  // eps_t / sigma_t
    double loglik = 0;
    InferenceResult inference;                 // over (phi0, ar..., omega, alpha, beta)
    std::vector<std::string> parameter_names;  // aligned with inference
    bool converged = false;
    int iterations = 0;
    std::vector<std::string> warnings;
};

/// Quasi-MLE of the GARCH(1,1) model. Internally rescales returns to unit
/// variance (results are mapped back exactly), runs a multi-start BFGS under
/// a persistence/ratio reparameterization, and reports inverse-information
/// standard errors in the natural parameterization.
GarchFit fit_garch11(const Vector& returns, const GarchConfig& config = {});

}  // namespace volspill
