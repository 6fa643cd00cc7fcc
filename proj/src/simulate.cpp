#include "volspill/simulate.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace volspill {

double SimRng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double SimRng::normal() {
    // Box-Muller; u1 shifted into (0, 1] so the log stays finite.
    const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

Vector simulate_garch_returns(const GarchParams& params, Eigen::Index n, std::uint64_t seed,
                              Eigen::Index burn) {
    params.validate(std::numeric_limits<double>::infinity());
    if (n < 1) throw std::invalid_argument("simulate: need a positive path length");
    const int p = params.mean_lag();
    SimRng rng(seed);

    const double persistence = std::min(params.persistence(), 0.999);
    double v = params.omega / (1.0 - persistence);
    std::vector<double> recent(static_cast<std::size_t>(std::max(p, 1)), 0.0);

    Vector out(n);
    double prev_e = 0.0;
    bool first = true;
    for (Eigen::Index t = -burn; t < n; ++t) {
        if (!first) v = params.omega + params.alpha * prev_e * prev_e + params.beta * v;
        first = false;
        const double e = std::sqrt(v) * rng.normal();
        double mean = params.mean_intercept;
        for (int i = 0; i < p; ++i) mean += params.ar(i) * recent[static_cast<std::size_t>(i)];
        const double r = mean + e;
        for (int i = p - 1; i > 0; --i) recent[static_cast<std::size_t>(i)] = recent[static_cast<std::size_t>(i - 1)];
        if (p > 0) recent[0] = r;
        prev_e = e;
        if (t >= 0) out(t) = r;
    }
    return out;
}

Matrix simulate_dcc_returns(const std::vector<GarchParams>& garch, const DccParams& dcc,
                            const Matrix& qbar, Eigen::Index n, std::uint64_t seed,
                            Eigen::Index burn) {
    const Eigen::Index N = static_cast<Eigen::Index>(garch.size());
    if (N < 2) throw std::invalid_argument("simulate: dcc needs at least two series");
    dcc.validate();
    if (qbar.rows() != N || qbar.cols() != N)
        throw std::invalid_argument("simulate: qbar dimension mismatch");
    for (const GarchParams& g : garch) {
        g.validate(std::numeric_limits<double>::infinity());
        if (g.mean_lag() != garch.front().mean_lag())
            throw std::invalid_argument("simulate: mixed mean lags across series");
    }
    if (n < 1) throw std::invalid_argument("simulate: need a positive path length");

    const int p = garch.front().mean_lag();
    SimRng rng(seed);

    Vector v(N);
    for (Eigen::Index i = 0; i < N; ++i) {
        const GarchParams& g = garch[static_cast<std::size_t>(i)];
        v(i) = g.omega / (1.0 - std::min(g.persistence(), 0.999));
    }
    Matrix q = qbar;
    Matrix recent = Matrix::Zero(std::max(p, 1), N);

    Matrix out(n, N);
    Vector z(N), u(N), e(N);
    bool first = true;
    for (Eigen::Index t = -burn; t < n; ++t) {
        if (!first) {
            for (Eigen::Index i = 0; i < N; ++i) {
                const GarchParams& g = garch[static_cast<std::size_t>(i)];
                v(i) = g.omega + g.alpha * e(i) * e(i) + g.beta * v(i);
            }
            q = (1.0 - dcc.theta - dcc.eta) * qbar + dcc.theta * (z * z.transpose()) +
                dcc.eta * q;
        }
        first = false;

        const Vector d = q.diagonal().cwiseSqrt().cwiseInverse();
        const Matrix r = d.asDiagonal() * q * d.asDiagonal();
        const Eigen::LLT<Matrix> llt(r);
        if (llt.info() != Eigen::Success)
            throw std::runtime_error("simulate: correlation matrix left the positive-definite cone");
        for (Eigen::Index i = 0; i < N; ++i) u(i) = rng.normal();
        z = llt.matrixL() * u;
        e = v.cwiseSqrt().cwiseProduct(z);

        Vector row(N);
        for (Eigen::Index i = 0; i < N; ++i) {
            const GarchParams& g = garch[static_cast<std::size_t>(i)];
            double mean = g.mean_intercept;
            for (int k = 0; k < p; ++k) mean += g.ar(k) * recent(k, i);
            row(i) = mean + e(i);
        }
        for (int k = p - 1; k > 0; --k) recent.row(k) = recent.row(k - 1);
        if (p > 0) recent.row(0) = row.transpose();
        if (t >= 0) out.row(t) = row.transpose();
    }
    return out;
}

Matrix simulate_bekk_returns(const BekkParams& params, Eigen::Index n, std::uint64_t seed,
                             Eigen::Index burn) {
    params.validate();
    if (n < 1) throw std::invalid_argument("simulate: need a positive path length");
    const Eigen::Index N = params.dim();
    SimRng rng(seed);

    const Matrix intercept = params.c * params.c.transpose();
    // Unconditional covariance from the vec-form fixed point, if it exists.
    Matrix h = intercept;
    if (bekk_persistence(params.a, params.b) < 0.999) {
        Matrix k = Matrix::Zero(N * N, N * N);
        for (Eigen::Index i = 0; i < N; ++i)
            for (Eigen::Index j = 0; j < N; ++j)
                k.block(i * N, j * N, N, N) =
                    params.a.transpose()(i, j) * params.a.transpose() +
                    params.b.transpose()(i, j) * params.b.transpose();
        Vector vec_m(N * N);
        for (Eigen::Index j = 0; j < N; ++j) vec_m.segment(j * N, N) = intercept.col(j);
        const Vector vec_h = (Matrix::Identity(N * N, N * N) - k).lu().solve(vec_m);
        for (Eigen::Index j = 0; j < N; ++j) h.col(j) = vec_h.segment(j * N, N);
        h = 0.5 * (h + h.transpose());
    }

    Matrix out(n, N);
    Vector u(N), e(N);
    bool first = true;
    for (Eigen::Index t = -burn; t < n; ++t) {
        if (!first) {
            const Vector w = params.a.transpose() * e;
            h = intercept + w * w.transpose() + params.b.transpose() * h * params.b;
        }
        first = false;
        const Eigen::LLT<Matrix> llt(h);
        if (llt.info() != Eigen::Success)
            throw std::runtime_error("simulate: covariance left the positive-definite cone");
        for (Eigen::Index i = 0; i < N; ++i) u(i) = rng.normal();
        e = llt.matrixL() * u;
        if (t >= 0) out.row(t) = (params.mu + e).transpose();
    }
    return out;
}

Matrix simulate_var_path(const VarProcess& process, Eigen::Index n, std::uint64_t seed,
                         Eigen::Index burn) {
    const Eigen::Index N = process.intercept.size();
    const int p = static_cast<int>(process.phi.size());
    if (N < 1) throw std::invalid_argument("simulate: empty process");
    if (p < 1) throw std::invalid_argument("simulate: var needs at least one lag matrix");
    for (const Matrix& m : process.phi)
        if (m.rows() != N || m.cols() != N)
            throw std::invalid_argument("simulate: coefficient shapes disagree");
    const Eigen::LLT<Matrix> llt(process.sigma);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument("simulate: innovation covariance is not positive definite");
    if (n < 1) throw std::invalid_argument("simulate: need a positive path length");

    // Start at the unconditional mean when the process is stable.
    Matrix phi_sum = Matrix::Zero(N, N);
    for (const Matrix& m : process.phi) phi_sum += m;
    Vector mean = process.intercept;
    {
        const Matrix imp = Matrix::Identity(N, N) - phi_sum;
        const Eigen::FullPivLU<Matrix> lu(imp);
        if (lu.isInvertible()) mean = lu.solve(process.intercept);
    }

    SimRng rng(seed);
    Matrix lags(p, N);
    for (int k = 0; k < p; ++k) lags.row(k) = mean.transpose();

    Matrix out(n, N);
    Vector u(N);
    for (Eigen::Index t = -burn; t < n; ++t) {
        Vector y = process.intercept;
        for (int k = 0; k < p; ++k)
            y += process.phi[static_cast<std::size_t>(k)] * lags.row(k).transpose();
        for (Eigen::Index i = 0; i < N; ++i) u(i) = rng.normal();
        y += llt.matrixL() * u;
        for (int k = p - 1; k > 0; --k) lags.row(k) = lags.row(k - 1);
        lags.row(0) = y.transpose();
        if (t >= 0) out.row(t) = y.transpose();
    }
    return out;
}

std::vector<std::string> trading_dates(const std::string& start_iso, Eigen::Index n) {
    int y = 0, m = 0, d = 0;
    if (!parse_iso_date(start_iso, y, m, d))
        throw std::invalid_argument("simulate: start date must be YYYY-MM-DD, got '" + start_iso +
                                    "'");
    long dn = day_number_from_civil(y, m, d);
    std::vector<std::string> out;
    out.reserve(static_cast<std::size_t>(n));
    while (static_cast<Eigen::Index>(out.size()) < n) {
        // Day number 0 is a Thursday; 2 and 3 mod 7 land on weekends.
        const long wd = ((dn % 7) + 7) % 7;
        if (wd != 2 && wd != 3) out.push_back(iso_date_from_day_number(dn));
        ++dn;
    }
    return out;
}

PricePanel price_panel_from_returns(const Matrix& returns, const std::vector<std::string>& names,
                                    const std::string& start_iso) {
    const Eigen::Index T = returns.rows() + 1;
    const Eigen::Index N = returns.cols();
    if (static_cast<Eigen::Index>(names.size()) != N)
        throw std::invalid_argument("simulate: name count does not match the series count");

    PricePanel panel;
    panel.names = names;
    panel.dates = trading_dates(start_iso, T);
    panel.close.resize(T, N);
    panel.close.row(0).setConstant(100.0);
    for (Eigen::Index t = 1; t < T; ++t)
        panel.close.row(t) = panel.close.row(t - 1).array() * returns.row(t - 1).array().exp();
    panel.validate();
    return panel;
}

PricePanel price_panel_from_volatility(const Matrix& vol, const std::vector<std::string>& names,
                                       const std::string& start_iso, std::uint64_t seed,
                                       double range_constant, int annualization_days) {
    const Eigen::Index T = vol.rows();
    const Eigen::Index N = vol.cols();
    if (static_cast<Eigen::Index>(names.size()) != N)
        throw std::invalid_argument("simulate: name count does not match the series count");
    if (vol.minCoeff() < 0)
        throw std::invalid_argument("simulate: volatilities must be nonnegative");
    if (!(range_constant > 0) || annualization_days < 1)
        throw std::invalid_argument("simulate: invalid range-volatility constants");

    // Invert the range estimator: the annualized percent value v corresponds
    // to a log high/low spread of v / (100 * sqrt(days * constant)).
    const double spread_scale =
        100.0 * std::sqrt(static_cast<double>(annualization_days) * range_constant);

    SimRng rng(seed);
    PricePanel panel;
    panel.names = names;
    panel.dates = trading_dates(start_iso, T);
    panel.close.resize(T, N);
    panel.high = Matrix(T, N);
    panel.low = Matrix(T, N);
    for (Eigen::Index j = 0; j < N; ++j) {
        double close = 100.0;
        for (Eigen::Index t = 0; t < T; ++t) {
            const double daily_sd =
                vol(t, j) / (100.0 * std::sqrt(static_cast<double>(annualization_days)));
            if (t > 0) close *= std::exp(daily_sd * rng.normal());
            const double spread = vol(t, j) / spread_scale;
            panel.close(t, j) = close;
            (*panel.high)(t, j) = close * std::exp(0.5 * spread);
            (*panel.low)(t, j) = close * std::exp(-0.5 * spread);
        }
    }
    panel.validate();
    return panel;
}

}  // namespace volspill
