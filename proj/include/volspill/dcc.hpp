#pragma once

#include "volspill/garch.hpp"

namespace volspill {

/// Conditional-correlation dynamics
///   Q_t = (1 - theta - eta) * Qbar + theta * z_{t-1} z_{t-1}' + eta * Q_{t-1},
///   R_t = diag(Q_t)^-1/2 Q_t diag(Q_t)^-1/2,
/// started at Q_1 = Qbar (correlation targeting).
struct DccParams {
    double theta = 0.0;
    double eta = 0.0;
    void validate() const;  // theta, eta >= 0 and theta + eta < 1
};

struct DccConfig {
    GarchConfig garch;  // applied to every series
    int restarts = 4;
    bool sandwich = false;
    OptimOptions optim;
};

struct DccFilterOutput {
    std::vector<Matrix> correlations;  // R_t
    double negloglik = 0;              // correlation part only
};

/// Runs the correlation recursion at fixed parameters over standardized
/// residuals z (rows = time). qbar must be a correlation matrix.
DccFilterOutput dcc_filter(const DccParams& params, const Matrix& z, const Matrix& qbar);

/// Correlation-part negative log-likelihood
///   0.5 * sum_t [ ln|R_t| + z_t' R_t^-1 z_t - z_t' z_t ],
/// without storing the R_t path.
double dcc_corr_negloglik(const DccParams& params, const Matrix& z, const Matrix& qbar);

/// Summary of one dynamic-correlation series: mean level and a z statistic
/// mean / (sd / sqrt(T)) for "is the average correlation nonzero".
struct CorrelationStats {
    double mean = 0;
    double stddev = 0;
    double z = 0;
    Eigen::Index n = 0;
};

CorrelationStats mean_dynamic_correlation(const Vector& series);

struct DccFit {
    std::vector<GarchFit> garch;  // one per column of the input
    Matrix std_residuals;         // rows = time
    Matrix qbar;
    DccParams params;
    InferenceResult inference;  // over (theta, eta), correlation step only
    std::vector<std::string> parameter_names;
    double corr_loglik = 0;
    double joint_loglik = 0;  // sum of univariate logliks + correlation part
    std::vector<Matrix> correlations;
    bool converged = false;
    int iterations = 0;
    std::vector<std::string> warnings;
};

/// Two-step quasi-MLE: univariate GARCH(1,1) per column, then (theta, eta)
/// on the standardized residuals of all columns jointly.
DccFit fit_dcc(const Matrix& returns, const DccConfig& config = {});

/// rho_ij,t as a series (i != j).
Vector correlation_series(const DccFit& fit, int i, int j);

/// Conditional covariance H_t = D_t R_t D_t at one time index.
Matrix dcc_covariance(const DccFit& fit, Eigen::Index t);

struct DccPairFit {
    int i = 0, j = 0;
    DccParams params;
    InferenceResult inference;
    CorrelationStats corr;
    double corr_loglik = 0;
    bool converged = false;
    std::vector<std::string> warnings;
};

/// Correlation step re-estimated for every pair of series separately, with
/// the univariate stage shared. Pairs are ordered (0,1), (0,2), ..., (N-2,N-1).
std::vector<DccPairFit> fit_dcc_pairwise(const Matrix& returns, const DccConfig& config = {});

}  // namespace volspill
