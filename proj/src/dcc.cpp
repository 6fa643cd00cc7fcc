#include "volspill/dcc.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace volspill {

namespace {

double huge() { return std::numeric_limits<double>::infinity(); }

double next_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Second-moment correlation target: normalize Z'Z/n to unit diagonal. The
// residuals are already mean-adjusted by the univariate stage, so no
// demeaning here.
Matrix correlation_target(const Matrix& z) {
    const Matrix s = z.transpose() * z / static_cast<double>(z.rows());
    const Vector d = s.diagonal().cwiseSqrt();
    if (!(d.minCoeff() > 0))
        throw std::runtime_error("dcc: a standardized-residual series is degenerate");
    return d.cwiseInverse().asDiagonal() * s * d.cwiseInverse().asDiagonal();
}

// Shared recursion core. When `store` is non-null every R_t is kept.
double corr_negloglik_impl(const DccParams& p, const Matrix& z, const Matrix& qbar,
                           std::vector<Matrix>* store) {
    const Eigen::Index T = z.rows();
    const Eigen::Index N = z.cols();
    if (p.theta < 0 || p.eta < 0 || p.theta + p.eta >= 1.0) return huge();

    Matrix q = qbar;
    Matrix r(N, N);
    double nll = 0;
    if (store) {
        store->clear();
        store->reserve(static_cast<std::size_t>(T));
    }
    for (Eigen::Index t = 0; t < T; ++t) {
        const Vector d = q.diagonal().cwiseSqrt().cwiseInverse();
        r = d.asDiagonal() * q * d.asDiagonal();
        if (store) store->push_back(r);

        const Eigen::LLT<Matrix> llt(r);
        if (llt.info() != Eigen::Success) return huge();
        double logdet = 0;
        for (Eigen::Index i = 0; i < N; ++i) logdet += std::log(llt.matrixL()(i, i));
        logdet *= 2.0;

        const Vector zt = z.row(t).transpose();
        const double quad = zt.dot(llt.solve(zt));
        nll += logdet + quad - zt.squaredNorm();

        q = (1.0 - p.theta - p.eta) * qbar + p.theta * (zt * zt.transpose()) + p.eta * q;
    }
    nll *= 0.5;
    return std::isfinite(nll) ? nll : huge();
}

struct CorrStepResult {
    DccParams params;
    InferenceResult inference;
    double corr_loglik = 0;
    bool converged = false;
    int iterations = 0;
    std::vector<std::string> warnings;
};

// Optimizer coordinates: s = theta + eta in (0,1), r = eta / s in (0,1).
DccParams corr_params_from(const Vector& v) {
    DccParams p;
    p.theta = v(0) * (1.0 - v(1));
    p.eta = v(0) * v(1);
    return p;
}

CorrStepResult fit_correlation_step(const Matrix& z, const Matrix& qbar,
                                    const DccConfig& config) {
    const Objective nll = [&](const Vector& v) {
        return corr_negloglik_impl(corr_params_from(v), z, qbar, nullptr);
    };
    const TransformMap map = {Transform::interval(0.0, 1.0), Transform::interval(0.0, 1.0)};

    std::vector<Vector> starts;
    {
        Vector v(2);
        v << 0.98, 0.96 / 0.98;  // theta = 0.02, eta = 0.96
        starts.push_back(v);
    }
    std::mt19937_64 rng(20021128u);
    for (int k = 0; k < config.restarts; ++k) {
        Vector v(2);
        v(0) = 0.60 + 0.395 * next_uniform(rng);
        v(1) = 0.55 + 0.44 * next_uniform(rng);
        starts.push_back(v);
    }

    const OptimResult best = minimize_multistart_strict(nll, starts, map, config.optim);

    CorrStepResult out;
    out.params = corr_params_from(best.point);
    out.converged = best.converged;
    out.iterations = best.iterations;
    out.corr_loglik = -best.objective_value;

    if (out.params.theta + out.params.eta >= 1.0 - 1e-4) {
        std::ostringstream msg;
        msg << "theta + eta = " << out.params.theta + out.params.eta
            << " sits at the unit boundary; correlation dynamics are close to integrated";
        out.warnings.push_back(msg.str());
    }

    Vector theta(2);
    theta << out.params.theta, out.params.eta;
    const Objective natural_nll = [&](const Vector& t) {
        DccParams p{t(0), t(1)};
        return corr_negloglik_impl(p, z, qbar, nullptr);
    };
    try {
        if (config.sandwich) {
            const VectorObjective per_obs = [&](const Vector& t) {
                DccParams p{t(0), t(1)};
                DccFilterOutput f = dcc_filter(p, z, qbar);
                Vector contrib(z.rows());
                for (Eigen::Index s = 0; s < z.rows(); ++s) {
                    const Matrix& r = f.correlations[static_cast<std::size_t>(s)];
                    const Eigen::LLT<Matrix> llt(r);
                    double logdet = 0;
                    for (Eigen::Index i = 0; i < r.rows(); ++i)
                        logdet += std::log(llt.matrixL()(i, i));
                    const Vector zt = z.row(s).transpose();
                    contrib(s) =
                        0.5 * (2.0 * logdet + zt.dot(llt.solve(zt)) - zt.squaredNorm());
                }
                return contrib;
            };
            out.inference = sandwich_standard_errors(natural_nll, per_obs, theta);
        } else {
            out.inference = standard_errors(natural_nll, theta);
        }
    } catch (const std::exception& e) {
        out.warnings.push_back(std::string("standard errors unavailable: ") + e.what());
        const double nan = std::numeric_limits<double>::quiet_NaN();
        out.inference.estimates = theta;
        out.inference.standard_errors = Vector::Constant(2, nan);
        out.inference.t_statistics = Vector::Constant(2, nan);
        out.inference.covariance = Matrix::Constant(2, 2, nan);
    }
    return out;
}

Matrix standardized_residual_matrix(const std::vector<GarchFit>& fits) {
    const Eigen::Index n = fits.front().std_residuals.size();
    Matrix z(n, static_cast<Eigen::Index>(fits.size()));
    for (std::size_t i = 0; i < fits.size(); ++i) {
        if (fits[i].std_residuals.size() != n)
            throw std::runtime_error("dcc: univariate stages disagree on sample length");
        z.col(static_cast<Eigen::Index>(i)) = fits[i].std_residuals;
    }
    return z;
}

}  // namespace

void DccParams::validate() const {
    if (theta < 0 || eta < 0)
        throw std::invalid_argument("dcc: theta and eta must be nonnegative");
    if (!(theta + eta < 1.0))
        throw std::invalid_argument("dcc: theta + eta must be below one");
}

DccFilterOutput dcc_filter(const DccParams& params, const Matrix& z, const Matrix& qbar) {
    params.validate();
    if (z.cols() != qbar.rows() || qbar.rows() != qbar.cols())
        throw std::invalid_argument("dcc: qbar dimension does not match the residual panel");
    DccFilterOutput out;
    out.negloglik = corr_negloglik_impl(params, z, qbar, &out.correlations);
    if (!std::isfinite(out.negloglik))
        throw std::runtime_error("dcc: correlation recursion left the positive-definite cone");
    return out;
}

double dcc_corr_negloglik(const DccParams& params, const Matrix& z, const Matrix& qbar) {
    return corr_negloglik_impl(params, z, qbar, nullptr);
}

CorrelationStats mean_dynamic_correlation(const Vector& series) {
    if (series.size() < 2)
        throw std::invalid_argument("dcc: correlation series shorter than two observations");
    CorrelationStats s;
    s.n = series.size();
    s.mean = series.mean();
    s.stddev = std::sqrt((series.array() - s.mean).square().sum() /
                         static_cast<double>(series.size() - 1));
    s.z = s.stddev > 0 ? s.mean / (s.stddev / std::sqrt(static_cast<double>(s.n)))
                       : std::numeric_limits<double>::infinity();
    return s;
}

DccFit fit_dcc(const Matrix& returns, const DccConfig& config) {
    const Eigen::Index N = returns.cols();
    if (N < 2) throw std::invalid_argument("dcc: need at least two series");

    DccFit fit;
    fit.garch.reserve(static_cast<std::size_t>(N));
    for (Eigen::Index i = 0; i < N; ++i) {
        try {
            fit.garch.push_back(fit_garch11(returns.col(i), config.garch));
        } catch (const std::exception& e) {
            std::ostringstream msg;
            msg << "dcc: univariate stage failed for series " << i << ": " << e.what();
            throw std::runtime_error(msg.str());
        }
        for (const std::string& w : fit.garch.back().warnings)
            fit.warnings.push_back("series " + std::to_string(i) + ": " + w);
    }

    fit.std_residuals = standardized_residual_matrix(fit.garch);
    fit.qbar = correlation_target(fit.std_residuals);

    CorrStepResult step = fit_correlation_step(fit.std_residuals, fit.qbar, config);
    fit.params = step.params;
    fit.inference = step.inference;
    fit.parameter_names = {"theta", "eta"};
    fit.corr_loglik = step.corr_loglik;
    fit.converged = step.converged;
    fit.iterations = step.iterations;
    for (const std::string& w : step.warnings) fit.warnings.push_back(w);

    fit.joint_loglik = fit.corr_loglik;
    for (const GarchFit& g : fit.garch) fit.joint_loglik += g.loglik;

    fit.correlations = dcc_filter(fit.params, fit.std_residuals, fit.qbar).correlations;
    return fit;
}

Vector correlation_series(const DccFit& fit, int i, int j) {
    const Eigen::Index N = fit.std_residuals.cols();
    if (i == j || i < 0 || j < 0 || i >= N || j >= N)
        throw std::invalid_argument("dcc: invalid series pair");
    Vector out(static_cast<Eigen::Index>(fit.correlations.size()));
    for (std::size_t t = 0; t < fit.correlations.size(); ++t)
        out(static_cast<Eigen::Index>(t)) = fit.correlations[t](i, j);
    return out;
}

Matrix dcc_covariance(const DccFit& fit, Eigen::Index t) {
    if (t < 0 || t >= static_cast<Eigen::Index>(fit.correlations.size()))
        throw std::invalid_argument("dcc: time index out of range");
    const Eigen::Index N = fit.std_residuals.cols();
    Vector d(N);
    for (Eigen::Index i = 0; i < N; ++i)
        d(i) = std::sqrt(fit.garch[static_cast<std::size_t>(i)].cond_variance(t));
    return d.asDiagonal() * fit.correlations[static_cast<std::size_t>(t)] * d.asDiagonal();
}

std::vector<DccPairFit> fit_dcc_pairwise(const Matrix& returns, const DccConfig& config) {
    const Eigen::Index N = returns.cols();
    if (N < 2) throw std::invalid_argument("dcc: need at least two series");

    std::vector<GarchFit> garch;
    garch.reserve(static_cast<std::size_t>(N));
    for (Eigen::Index i = 0; i < N; ++i) garch.push_back(fit_garch11(returns.col(i), config.garch));
    const Matrix z = standardized_residual_matrix(garch);

    std::vector<DccPairFit> out;
    for (Eigen::Index i = 0; i < N; ++i) {
        for (Eigen::Index j = i + 1; j < N; ++j) {
            Matrix zij(z.rows(), 2);
            zij.col(0) = z.col(i);
            zij.col(1) = z.col(j);
            const Matrix qbar = correlation_target(zij);
            CorrStepResult step = fit_correlation_step(zij, qbar, config);

            DccPairFit pf;
            pf.i = static_cast<int>(i);
            pf.j = static_cast<int>(j);
            pf.params = step.params;
            pf.inference = step.inference;
            pf.corr_loglik = step.corr_loglik;
            pf.converged = step.converged;
            pf.warnings = step.warnings;

            DccParams p = step.params;
            const DccFilterOutput filt = dcc_filter(p, zij, qbar);
            Vector rho(static_cast<Eigen::Index>(filt.correlations.size()));
            for (std::size_t t = 0; t < filt.correlations.size(); ++t)
                rho(static_cast<Eigen::Index>(t)) = filt.correlations[t](0, 1);
            pf.corr = mean_dynamic_correlation(rho);
            out.push_back(std::move(pf));
        }
    }
    return out;
}

}  // namespace volspill
