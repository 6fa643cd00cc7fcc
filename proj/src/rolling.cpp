#include "volspill/rolling.hpp"

#include "volspill/parallel.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace volspill {

Eigen::Index RollingSeries::n_ok() const {
    Eigen::Index n = 0;
    for (char c : ok) n += c != 0;
    return n;
}

RollingSeries rolling_spillover(const VolatilityPanel& panel, const RollingConfig& config) {
    const Eigen::Index T = panel.vol.rows();
    const Eigen::Index N = panel.vol.cols();
    if (N < 2) throw std::invalid_argument("rolling: need at least two series");
    if (config.step < 1) throw std::invalid_argument("rolling: step must be at least one");
    if (config.horizon < 1) throw std::invalid_argument("rolling: horizon must be at least one");
    if (config.lag < 1) throw std::invalid_argument("rolling: lag must be at least one");
    if (config.window <= N * config.lag + 10) {
        std::ostringstream msg;
        msg << "rolling: window " << config.window << " is too short for lag " << config.lag
            << " with " << N << " series (need more than " << N * config.lag + 10 << ")";
        throw std::invalid_argument(msg.str());
    }
    if (T < config.window) {
        std::ostringstream msg;
        msg << "rolling: panel has " << T << " rows, shorter than the " << config.window
            << "-day window";
        throw std::invalid_argument(msg.str());
    }

    const Eigen::Index n_win = (T - config.window) / config.step + 1;
    const double nan = std::numeric_limits<double>::quiet_NaN();

    RollingSeries s;
    s.names = panel.names;
    s.dates.resize(static_cast<std::size_t>(n_win));
    s.ok.assign(static_cast<std::size_t>(n_win), 0);
    s.gap_reasons.resize(static_cast<std::size_t>(n_win));
    s.total = Vector::Constant(n_win, nan);
    s.to = Matrix::Constant(n_win, N, nan);
    s.from = Matrix::Constant(n_win, N, nan);
    s.net = Matrix::Constant(n_win, N, nan);
    s.pairwise.assign(static_cast<std::size_t>(n_win), Matrix::Constant(N, N, nan));

    parallel_for(static_cast<std::size_t>(n_win), [&](std::size_t k) {
        const Eigen::Index start = static_cast<Eigen::Index>(k) * config.step;
        const Eigen::Index end = start + config.window - 1;
        s.dates[k] = panel.dates[static_cast<std::size_t>(end)];
        try {
            const Matrix slice = panel.vol.middleRows(start, config.window);
            const int lag = config.select_lag_per_window
                                ? select_lag(slice, config.max_lag, config.var)
                                : config.lag;
            const VarFit fit = fit_var(slice, lag, config.var);
            const FevdMatrix fevd = gfevd(fit, config.horizon, config.scaling);
            const SpilloverTable table =
                build_spillover_table(fevd, panel.names, config.flip_pairwise_sign);

            const Eigen::Index row = static_cast<Eigen::Index>(k);
            s.total(row) = table.total;
            s.to.row(row) = table.to_others.transpose();
            s.from.row(row) = table.from_others.transpose();
            s.net.row(row) = table.net.transpose();
            s.pairwise[k] = table.net_pairwise;
            s.ok[k] = 1;
        } catch (const std::exception& e) {
            s.gap_reasons[k] = e.what();
        }
    }, config.threads);

    if (s.n_ok() == 0) {
        std::string first;
        for (const std::string& r : s.gap_reasons)
            if (!r.empty()) { first = r; break; }
        throw std::runtime_error("rolling: every window failed; first error: " + first);
    }
    return s;
}

namespace {

RangeSummary summarize_one(const std::string& measure, const std::string& market,
                           const Vector& values, const RollingSeries& s) {
    RangeSummary out;
    out.measure = measure;
    out.market = market;
    double sum = 0;
    for (Eigen::Index k = 0; k < values.size(); ++k) {
        if (!s.ok[static_cast<std::size_t>(k)]) continue;
        const double v = values(k);
        if (out.n == 0 || v < out.min_value) {
            out.min_value = v;
            out.min_date = s.dates[static_cast<std::size_t>(k)];
        }
        if (out.n == 0 || v > out.max_value) {
            out.max_value = v;
            out.max_date = s.dates[static_cast<std::size_t>(k)];
        }
        sum += v;
        ++out.n;
    }
    out.mean = out.n > 0 ? sum / static_cast<double>(out.n) : 0.0;
    return out;
}

}  // namespace

std::vector<RangeSummary> summarize_range(const RollingSeries& series) {
    if (series.n_windows() == 0 || series.n_ok() == 0)
        throw std::invalid_argument("rolling: nothing to summarize; every window is a gap");
    std::vector<RangeSummary> out;
    out.push_back(summarize_one("total", "", series.total, series));
    const Eigen::Index N = series.to.cols();
    for (Eigen::Index j = 0; j < N; ++j) {
        const std::string& name = series.names[static_cast<std::size_t>(j)];
        out.push_back(summarize_one("to", name, series.to.col(j), series));
        out.push_back(summarize_one("from", name, series.from.col(j), series));
        out.push_back(summarize_one("net", name, series.net.col(j), series));
    }
    return out;
}

}  // namespace volspill
