#pragma once

#include "volspill/optim.hpp"

namespace volspill {

/// Full BEKK(1,1):
///   H_t = C C' + A' e_{t-1} e_{t-1}' A + B' H_{t-1} B,
/// with a constant mean per series and H_1 set to the sample covariance of
/// the residuals. Element a(i,j) carries series i's shock into series j's
/// conditional variance; b(i,j) does the same for persistence.
struct BekkParams {
    Vector mu;  // per-series mean
    Matrix c;   // lower triangular, positive diagonal
    Matrix a;
    Matrix b;

    int dim() const { return static_cast<int>(mu.size()); }
    /// Throws on shape mismatch, non-lower-triangular c, or c diagonal <= 0.
    void validate() const;
};

struct BekkConfig {
    bool diagonal = false;           // restrict A and B to diagonals
    bool variance_targeting = false; // intercept implied by the sample covariance
    int restarts = 3;
    int min_observations = 250;
    int max_dimension = 6;     // full BEKK beyond this needs force_dimension
    bool force_dimension = false;
    bool sandwich = false;
    OptimOptions optim;
};

struct BekkFilterOutput {
    Matrix residuals;                     // rows = time
    std::vector<Matrix> cond_covariance;  // H_t
};

BekkFilterOutput bekk_filter(const BekkParams& params, const Matrix& returns);

/// Gaussian negative log-likelihood
///   0.5 * sum_t [ N ln 2pi + ln|H_t| + e_t' H_t^-1 e_t ].
/// Returns +infinity when the recursion leaves the positive-definite cone.
double bekk_negloglik(const BekkParams& params, const Matrix& returns);

/// Largest modulus eigenvalue of A (x) A + B (x) B; the covariance process
/// is stationary when this is below one.
double bekk_persistence(const Matrix& a, const Matrix& b);

struct BekkFit {
    BekkParams params;
    double loglik = 0;
    InferenceResult inference;  // ordered as parameter_names
    std::vector<std::string> parameter_names;
    Matrix a_tstat;  // t statistics arranged like A (NaN where not estimated)
    Matrix b_tstat;
    Matrix residuals;
    std::vector<Matrix> cond_covariance;
    double persistence = 0;
    bool converged = false;
    int iterations = 0;
    std::vector<std::string> warnings;
};

BekkFit fit_bekk(const Matrix& returns, const BekkConfig& config = {});

/// Shock-transmission verdict for the ordered pair (from, to): significant
/// when either a(from,to) or b(from,to) clears the two-sided normal critical
/// value at `level`.
struct SpilloverDirection {
    int from = 0;
    int to = 0;
    double a_t = 0;
    double b_t = 0;
    bool significant = false;
};

std::vector<SpilloverDirection> classify_directions(const BekkFit& fit, double level = 0.05);

}  // namespace volspill
