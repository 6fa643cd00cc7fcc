#include "volspill/stats.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace volspill {

double norm_pdf(double x) {
    static const double inv_sqrt_2pi = 0.3989422804014327;
    return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double norm_ppf(double p) {
    if (!(p > 0.0) || !(p < 1.0))
        throw std::invalid_argument("norm_ppf: probability must lie strictly in (0, 1)");
    // Bisection on the monotone cdf; rarely called, so simplicity wins.
    double lo = -40.0, hi = 40.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (norm_cdf(mid) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double normal_two_sided_p(double t) {
    if (!std::isfinite(t)) return std::isnan(t) ? std::nan("") : 0.0;
    return std::erfc(std::abs(t) / std::sqrt(2.0));
}

double chi_squared_2_sf(double x) { return x <= 0.0 ? 1.0 : std::exp(-0.5 * x); }

Moments sample_moments(const Vector& x) {
    const long n = static_cast<long>(x.size());
    if (n < 4) throw std::runtime_error("sample_moments: need at least 4 observations");
    Moments m;
    m.n = n;
    m.mean = x.mean();
    m.max = x.maxCoeff();
    m.min = x.minCoeff();
    const Eigen::ArrayXd d = x.array() - m.mean;
    const double m2 = d.square().mean();
    const double m3 = d.cube().mean();
    const double m4 = d.square().square().mean();
    m.stddev = std::sqrt(d.square().sum() / static_cast<double>(n - 1));
    if (m2 > 0.0) {
        m.skewness = m3 / std::pow(m2, 1.5);
        m.kurtosis = m4 / (m2 * m2);
    } else {
        m.skewness = 0.0;
        m.kurtosis = 0.0;
    }
    return m;
}

double jarque_bera(long n, double skewness, double kurtosis) {
    const double excess = kurtosis - 3.0;
    return static_cast<double>(n) / 6.0 * (skewness * skewness + 0.25 * excess * excess);
}

// MacKinnon (1994) response-surface coefficients for the tau statistic,
// constant-only regression, a single unit-root variable. p = Phi(poly(tau)).
double mackinnon_p_value(double tau) {
    static const double tau_max = 2.74;
    static const double tau_min = -18.83;
    static const double tau_star = -1.61;
    static const double small_p[3] = {2.1659, 1.4412, 3.8269e-2};
    static const double large_p[4] = {1.7339, 9.3202e-1, -1.2745e-1, -1.0368e-2};

    if (tau > tau_max) return 1.0;
    if (tau < tau_min) return 0.0;
    double z;
    if (tau <= tau_star) {
        z = small_p[0] + tau * (small_p[1] + tau * small_p[2]);
    } else {
        z = large_p[0] + tau * (large_p[1] + tau * (large_p[2] + tau * large_p[3]));
    }
    return norm_cdf(z);
}

namespace {

struct AdfRegression {
    double t_stat;
    double bic;
    long n_obs;
};

// Delta-y on intercept, lagged level and k lagged differences, estimated on
// rows first_obs.. of the difference series so candidate lag orders share a
// sample when selecting.
AdfRegression adf_regression(const Vector& y, int k, int first_obs) {
    const long t = y.size();
    const long n_diff = t - 1;
    const long rows = n_diff - first_obs;
    const int ncol = 2 + k;
    if (rows <= ncol)
        throw std::runtime_error("adf_test: series too short for requested lag order");

    Matrix x(rows, ncol);
    Vector dy(rows);
    for (long r = 0; r < rows; ++r) {
        const long i = first_obs + r;  // index into the difference series
        dy(r) = y(i + 1) - y(i);
        x(r, 0) = 1.0;
        x(r, 1) = y(i);
        for (int j = 0; j < k; ++j) x(r, 2 + j) = y(i - j) - y(i - j - 1);
    }

    const Eigen::ColPivHouseholderQR<Matrix> qr(x);
    if (qr.rank() < ncol) throw std::runtime_error("adf_test: collinear regressors");
    const Vector beta = qr.solve(dy);
    const Vector resid = dy - x * beta;
    const double ssr = resid.squaredNorm();
    const double sigma2 = ssr / static_cast<double>(rows - ncol);
    const Matrix xtx_inv = (x.transpose() * x).inverse();
    const double se = std::sqrt(sigma2 * xtx_inv(1, 1));

    AdfRegression out;
    out.t_stat = beta(1) / se;
    // Gaussian BIC up to a constant shared across lag orders.
    out.bic = static_cast<double>(rows) * std::log(ssr / static_cast<double>(rows)) +
              static_cast<double>(ncol) * std::log(static_cast<double>(rows));
    out.n_obs = rows;
    return out;
}

}  // namespace

AdfResult adf_test(const Vector& series, const AdfConfig& config) {
    const long t = series.size();
    if (t < 10) throw std::runtime_error("adf_test: need at least 10 observations");
    for (long i = 0; i < t; ++i)
        if (!std::isfinite(series(i))) throw std::runtime_error("adf_test: non-finite input");

    int lags = config.lags;
    if (lags < 0) {
        int max_lags = config.max_lags;
        if (max_lags < 0)
            max_lags = static_cast<int>(std::floor(12.0 * std::pow(static_cast<double>(t) / 100.0, 0.25)));
        max_lags = std::min<long>(max_lags, (t - 1) / 2 - 2);
        if (max_lags < 0) max_lags = 0;
        double best_bic = std::numeric_limits<double>::infinity();
        lags = 0;
        for (int k = 0; k <= max_lags; ++k) {
            const AdfRegression cand = adf_regression(series, k, max_lags);
            if (cand.bic < best_bic) {
                best_bic = cand.bic;
                lags = k;
            }
        }
    }

    const AdfRegression fit = adf_regression(series, lags, lags);
    AdfResult out;
    out.statistic = fit.t_stat;
    out.p_value = mackinnon_p_value(fit.t_stat);
    out.lags = lags;
    out.n_obs = fit.n_obs;
    return out;
}

StatsReport descriptive_stats(const ReturnPanel& returns, const AdfConfig& adf) {
    const Eigen::Index n = returns.returns.rows();
    if (n < 30) throw std::runtime_error("descriptive_stats: need at least 30 observations");
    StatsReport report;
    for (Eigen::Index c = 0; c < returns.returns.cols(); ++c) {
        SeriesStats s;
        s.name = returns.names[c];
        const Vector col = returns.returns.col(c);
        s.moments = sample_moments(col);
        s.jb = jarque_bera(s.moments.n, s.moments.skewness, s.moments.kurtosis);
        s.jb_p = chi_squared_2_sf(s.jb);
        s.adf = adf_test(col, adf);
        report.series.push_back(std::move(s));
    }
    return report;
}

}  // namespace volspill
