#pragma once

#include "volspill/bekk.hpp"
#include "volspill/dcc.hpp"
#include "volspill/garch.hpp"

#include <cstdint>
#include <random>

namespace volspill {

/// Seeded draws with fully specified arithmetic (raw mt19937_64 output plus
/// Box-Muller), so simulations do not depend on standard-library
/// distribution internals.
class SimRng {
public:
    explicit SimRng(std::uint64_t seed) : engine_(seed) {}
    double uniform();     // [0, 1)
    double normal();      // standard normal
private:
    std::mt19937_64 engine_;
};

/// Path from the GARCH(1,1) recursion, variance started at its unconditional
/// level, first `burn` draws discarded.
Vector simulate_garch_returns(const GarchParams& params, Eigen::Index n, std::uint64_t seed,
                              Eigen::Index burn = 500);

/// Multivariate path with per-series GARCH variances and correlation
/// dynamics driven by qbar (the targeting matrix, unit diagonal).
Matrix simulate_dcc_returns(const std::vector<GarchParams>& garch, const DccParams& dcc,
                            const Matrix& qbar, Eigen::Index n, std::uint64_t seed,
                            Eigen::Index burn = 500);

Matrix simulate_bekk_returns(const BekkParams& params, Eigen::Index n, std::uint64_t seed,
                             Eigen::Index burn = 500);

struct VarProcess {
    Vector intercept;
    std::vector<Matrix> phi;
    Matrix sigma;  // innovation covariance, positive definite
};

Matrix simulate_var_path(const VarProcess& process, Eigen::Index n, std::uint64_t seed,
                         Eigen::Index burn = 200);

/// Consecutive weekdays (Mondays through Fridays) starting at the given ISO
/// date, which itself shifts forward over a weekend.
std::vector<std::string> trading_dates(const std::string& start_iso, Eigen::Index n);

/// Close-only panel: close = 100 * exp(cumulated log returns).
PricePanel price_panel_from_returns(const Matrix& returns, const std::vector<std::string>& names,
                                    const std::string& start_iso);

/// Ranged panel whose high/low spread reproduces the given annualized
/// percent volatilities exactly under the matching range estimator; the
/// close path is a seeded random walk scaled to those volatilities.
PricePanel price_panel_from_volatility(const Matrix& vol, const std::vector<std::string>& names,
                                       const std::string& start_iso, std::uint64_t seed,
                                       double range_constant = 0.361,
                                       int annualization_days = 365);

}  // namespace volspill
