#pragma once

#include "volspill/panel.hpp"

#include <string>
#include <vector>

namespace volspill {

struct VarConfig {
    // Residual-covariance denominator: T - p by default, or additionally
    // adjusted for the N*p + 1 estimated coefficients per equation.
    bool df_adjust = false;
};

struct VarFit {
    int lag = 0;
    Vector intercept;
    std::vector<Matrix> phi;  // coefficient matrices, phi[k] multiplies y_{t-k-1}
    Matrix sigma;             // residual covariance
    Matrix residuals;         // rows = time, T - p of them
    Eigen::Index n_obs = 0;   // estimation sample length T - p
    std::vector<std::string> warnings;
};

/// Equation-by-equation OLS with intercept on y (rows = time).
/// Errors on a rank-deficient regressor matrix, naming the offending columns.
VarFit fit_var(const Matrix& y, int lag, const VarConfig& config = {});

/// AIC-minimizing lag over 1..max_lag, every candidate fit on the common
/// sample that drops the first max_lag rows. Ties go to the smaller lag.
int select_lag(const Matrix& y, int max_lag, const VarConfig& config = {});

/// MA coefficients A_0..A_{H-1}: A_0 = I, A_h = sum_{k=1..min(h,p)} phi_k A_{h-k}.
std::vector<Matrix> ma_coefficients(const VarFit& fit, int horizon);

/// How the h-step shock contributions are scaled in the generalized FEVD:
/// by the shock source's residual variance (the KPPS/DY convention), or by
/// the responding variable's own variance (a variant kept for comparison).
enum class ShockScaling { SourceVariance, ReceiverVariance };

struct FevdMatrix {
    int horizon = 0;
    Matrix raw;         // theta(i,j): share of i's H-step variance due to j
    Matrix normalized;  // rows sum to one
};

/// Generalized (order-invariant) forecast-error variance decomposition.
FevdMatrix gfevd(const VarFit& fit, int horizon,
                 ShockScaling scaling = ShockScaling::SourceVariance);

/// Wraps an externally supplied percent decomposition (rows summing to
/// roughly 100) so its margins can be recomputed; rows are renormalized.
FevdMatrix fevd_from_percent(const Matrix& percent);

struct SpilloverTable {
    std::vector<std::string> names;
    Matrix percent;       // 100 * normalized FEVD; row = receiver, column = source
    Vector from_others;   // row sums without the diagonal
    Vector to_others;     // column sums without the diagonal
    Vector net;           // to_others - from_others
    Matrix net_pairwise;  // (i,j): transmitted i->j minus received j->i; antisymmetric
    double total = 0;     // grand off-diagonal share, percent
};

/// Directional, net, pairwise, and total indices from a normalized FEVD.
/// `flip_pairwise_sign` reverses the net-pairwise orientation.
SpilloverTable build_spillover_table(const FevdMatrix& fevd,
                                     const std::vector<std::string>& names,
                                     bool flip_pairwise_sign = false);

}  // namespace volspill
