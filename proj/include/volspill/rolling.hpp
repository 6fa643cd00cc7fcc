#pragma once

#include "volspill/spillover.hpp"

namespace volspill {

struct RollingConfig {
    int window = 104;  // trading days per estimation window
    int horizon = 10;
    int lag = 4;
    int step = 1;  // days between consecutive window starts
    bool select_lag_per_window = false;  // AIC per window instead of a fixed lag
    int max_lag = 8;                     // search bound when selecting per window
    VarConfig var;
    ShockScaling scaling = ShockScaling::SourceVariance;
    bool flip_pairwise_sign = false;
    int threads = 0;  // 0 = hardware concurrency
};

/// Dated spillover-index paths, one slot per window. Windows whose VAR fails
/// (e.g. singular OLS) stay as gaps: ok = 0, values NaN, reason recorded.
struct RollingSeries {
    std::vector<std::string> dates;  // window end dates
    std::vector<std::string> names;
    std::vector<char> ok;
    Vector total;
    Matrix to, from, net;          // rows = windows, columns = markets
    std::vector<Matrix> pairwise;  // antisymmetric N x N per window
    std::vector<std::string> gap_reasons;

    Eigen::Index n_windows() const { return total.size(); }
    Eigen::Index n_ok() const;
};

/// Re-runs VAR + generalized FEVD + index construction over successive
/// windows. Windows are independent; evaluation order never changes the
/// result. Throws when no window succeeds.
RollingSeries rolling_spillover(const VolatilityPanel& panel, const RollingConfig& config);

struct RangeSummary {
    std::string measure;  // "total", "to", "from", "net"
    std::string market;   // empty for the total index
    double min_value = 0;
    double max_value = 0;
    double mean = 0;
    std::string min_date, max_date;
    Eigen::Index n = 0;  // windows contributing (gaps skipped)
};

/// Extrema and means of every series in the bundle, total first, then
/// to/from/net per market. Throws when every window is a gap.
std::vector<RangeSummary> summarize_range(const RollingSeries& series);

}  // namespace volspill
