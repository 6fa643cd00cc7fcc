#include "volspill/spillover.hpp"

#include <Eigen/LU>
#include <Eigen/QR>

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace volspill {

namespace {

std::string regressor_label(Eigen::Index col, Eigen::Index n_series) {
    if (col == 0) return "intercept";
    const Eigen::Index k = (col - 1) / n_series + 1;
    const Eigen::Index j = (col - 1) % n_series;
    std::ostringstream name;
    name << "series " << j + 1 << " lag " << k;
    return name.str();
}

// Regressors [1, y_{t-1}, ..., y_{t-p}] for observations first_obs..T-1.
Matrix var_design(const Matrix& y, int lag, Eigen::Index first_obs) {
    const Eigen::Index n = y.rows() - first_obs;
    const Eigen::Index N = y.cols();
    Matrix x(n, 1 + N * lag);
    x.col(0).setOnes();
    for (int k = 1; k <= lag; ++k)
        x.middleCols(1 + (k - 1) * N, N) = y.middleRows(first_obs - k, n);
    return x;
}

VarFit fit_var_from(const Matrix& y, int lag, Eigen::Index first_obs, const VarConfig& config) {
    const Eigen::Index T = y.rows();
    const Eigen::Index N = y.cols();
    if (lag < 1) throw std::invalid_argument("var: lag order must be at least one");
    if (N < 1) throw std::invalid_argument("var: empty panel");
    const Eigen::Index n = T - first_obs;
    const Eigen::Index k_reg = 1 + N * lag;
    if (n < k_reg + 1) {
        std::ostringstream msg;
        msg << "var: " << n << " usable observations cannot identify " << k_reg
            << " coefficients per equation (lag " << lag << ", " << N << " series)";
        throw std::invalid_argument(msg.str());
    }

    const Matrix x = var_design(y, lag, first_obs);
    const Matrix resp = y.bottomRows(n);

    Eigen::ColPivHouseholderQR<Matrix> qr(x);
    qr.setThreshold(1e-10);
    if (qr.rank() < k_reg) {
        const auto perm = qr.colsPermutation().indices();
        std::ostringstream msg;
        msg << "var: regressor matrix is rank deficient; dependent columns:";
        for (Eigen::Index i = qr.rank(); i < k_reg; ++i)
            msg << " [" << regressor_label(perm(i), N) << "]";
        throw std::runtime_error(msg.str());
    }
    const Matrix coef = qr.solve(resp);  // k_reg x N

    VarFit fit;
    fit.lag = lag;
    fit.n_obs = n;
    fit.intercept = coef.row(0).transpose();
    fit.phi.reserve(static_cast<std::size_t>(lag));
    for (int k = 0; k < lag; ++k)
        fit.phi.push_back(coef.middleRows(1 + k * N, N).transpose());
    fit.residuals = resp - x * coef;
    const double denom = config.df_adjust ? static_cast<double>(n - k_reg)
                                          : static_cast<double>(n);
    if (!(denom > 0)) throw std::invalid_argument("var: no degrees of freedom left");
    fit.sigma = fit.residuals.transpose() * fit.residuals / denom;

    if (n < 10 * N * lag) {
        std::ostringstream msg;
        msg << "var: only " << n << " observations for lag " << lag << " with " << N
            << " series; estimates will be noisy";
        fit.warnings.push_back(msg.str());
    }
    return fit;
}

}  // namespace

VarFit fit_var(const Matrix& y, int lag, const VarConfig& config) {
    if (!y.allFinite()) throw std::invalid_argument("var: panel contains non-finite values");
    return fit_var_from(y, lag, lag, config);
}

int select_lag(const Matrix& y, int max_lag, const VarConfig& config) {
    if (max_lag < 1) throw std::invalid_argument("var: max lag must be at least one");
    if (!y.allFinite()) throw std::invalid_argument("var: panel contains non-finite values");
    const Eigen::Index N = y.cols();
    int best_lag = 1;
    double best_aic = std::numeric_limits<double>::infinity();
    for (int p = 1; p <= max_lag; ++p) {
        // Common estimation sample regardless of p, so criteria are comparable.
        const VarFit fit = fit_var_from(y, p, max_lag, config);
        const double n = static_cast<double>(fit.n_obs);
        const Eigen::PartialPivLU<Matrix> lu(fit.sigma);
        double logdet = 0;
        for (Eigen::Index i = 0; i < N; ++i)
            logdet += std::log(std::abs(lu.matrixLU()(i, i)));
        const double k_params = static_cast<double>(N + p * N * N);
        const double aic = logdet + 2.0 * k_params / n;
        if (aic < best_aic) {
            best_aic = aic;
            best_lag = p;
        }
    }
    return best_lag;
}

std::vector<Matrix> ma_coefficients(const VarFit& fit, int horizon) {
    if (horizon < 1) throw std::invalid_argument("var: horizon must be at least one");
    const Eigen::Index N = fit.sigma.rows();
    std::vector<Matrix> a;
    a.reserve(static_cast<std::size_t>(horizon));
    a.push_back(Matrix::Identity(N, N));
    for (int h = 1; h < horizon; ++h) {
        Matrix ah = Matrix::Zero(N, N);
        const int kmax = std::min(h, fit.lag);
        for (int k = 1; k <= kmax; ++k)
            ah += fit.phi[static_cast<std::size_t>(k - 1)] * a[static_cast<std::size_t>(h - k)];
        a.push_back(std::move(ah));
    }
    return a;
}

FevdMatrix gfevd(const VarFit& fit, int horizon, ShockScaling scaling) {
    const Eigen::Index N = fit.sigma.rows();
    for (Eigen::Index j = 0; j < N; ++j) {
        if (!(fit.sigma(j, j) > 0)) {
            std::ostringstream msg;
            msg << "gfevd: residual variance of series " << j + 1 << " is not positive";
            throw std::runtime_error(msg.str());
        }
    }

    const std::vector<Matrix> a = ma_coefficients(fit, horizon);
    Matrix numer = Matrix::Zero(N, N);
    Vector mse = Vector::Zero(N);
    for (const Matrix& ah : a) {
        const Matrix as = ah * fit.sigma;                       // (i,j) = e_i' A_h Sigma e_j
        numer.array() += as.array().square();
        mse += (as * ah.transpose()).diagonal();                // e_i' A_h Sigma A_h' e_i
    }

    FevdMatrix out;
    out.horizon = horizon;
    out.raw.resize(N, N);
    for (Eigen::Index i = 0; i < N; ++i) {
        for (Eigen::Index j = 0; j < N; ++j) {
            const double scale_var =
                scaling == ShockScaling::SourceVariance ? fit.sigma(j, j) : fit.sigma(i, i);
            out.raw(i, j) = numer(i, j) / (scale_var * mse(i));
        }
    }
    out.normalized = out.raw.array().colwise() / out.raw.rowwise().sum().array();
    return out;
}

FevdMatrix fevd_from_percent(const Matrix& percent) {
    if (percent.rows() != percent.cols() || percent.rows() < 1)
        throw std::invalid_argument("fevd: decomposition matrix must be square");
    if (!percent.allFinite() || percent.minCoeff() < 0)
        throw std::invalid_argument("fevd: decomposition entries must be finite and nonnegative");
    FevdMatrix out;
    out.horizon = 0;
    out.raw = percent / 100.0;
    const Vector row_sums = out.raw.rowwise().sum();
    if (!(row_sums.minCoeff() > 0))
        throw std::invalid_argument("fevd: a decomposition row sums to zero");
    out.normalized = out.raw.array().colwise() / row_sums.array();
    return out;
}

SpilloverTable build_spillover_table(const FevdMatrix& fevd,
                                     const std::vector<std::string>& names,
                                     bool flip_pairwise_sign) {
    const Eigen::Index N = fevd.normalized.rows();
    if (static_cast<Eigen::Index>(names.size()) != N)
        throw std::invalid_argument("spillover: name count does not match the decomposition");

    SpilloverTable t;
    t.names = names;
    t.percent = 100.0 * fevd.normalized;
    t.from_others.resize(N);
    t.to_others.resize(N);
    for (Eigen::Index i = 0; i < N; ++i) {
        t.from_others(i) = t.percent.row(i).sum() - t.percent(i, i);
        t.to_others(i) = t.percent.col(i).sum() - t.percent(i, i);
    }
    t.net = t.to_others - t.from_others;
    t.total = t.from_others.sum() / static_cast<double>(N);

    t.net_pairwise = Matrix::Zero(N, N);
    const double sign = flip_pairwise_sign ? -1.0 : 1.0;
    for (Eigen::Index i = 0; i < N; ++i) {
        for (Eigen::Index j = i + 1; j < N; ++j) {
            const double v = sign * (t.percent(j, i) - t.percent(i, j));
            t.net_pairwise(i, j) = v;
            t.net_pairwise(j, i) = -v;
        }
    }
    return t;
}

}  // namespace volspill
