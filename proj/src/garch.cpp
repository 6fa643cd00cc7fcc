#include "volspill/garch.hpp"

#include <Eigen/QR>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace volspill {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;

double huge() { return std::numeric_limits<double>::infinity(); }

// Deterministic uniform in [0, 1) from raw engine output; avoids the
// library-dependent behaviour of std::uniform_real_distribution.
double next_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

void GarchParams::validate(double stationarity_bound) const {
    if (!(omega > 0)) throw std::invalid_argument("garch: omega must be positive");
    if (alpha < 0 || beta < 0) throw std::invalid_argument("garch: alpha and beta must be nonnegative");
    if (!(alpha + beta < stationarity_bound)) {
        std::ostringstream msg;
        msg << "garch: alpha + beta = " << alpha + beta << " violates the bound "
            << stationarity_bound;
        throw std::invalid_argument(msg.str());
    }
    if (!ar.allFinite() || !std::isfinite(mean_intercept))
        throw std::invalid_argument("garch: non-finite mean parameters");
}

GarchFilterOutput garch_filter(const GarchParams& params, const Vector& returns) {
    const int p = params.mean_lag();
    const Eigen::Index T = returns.size();
    if (T <= p + 1) throw std::invalid_argument("garch: series shorter than the mean lag");
    if (!returns.allFinite()) throw std::invalid_argument("garch: returns contain non-finite values");

    const Eigen::Index n = T - p;
    GarchFilterOutput out;
    out.residuals.resize(n);
    for (Eigen::Index t = p; t < T; ++t) {
        double mean = params.mean_intercept;
        for (int i = 1; i <= p; ++i) mean += params.ar(i - 1) * returns(t - i);
        out.residuals(t - p) = returns(t) - mean;
    }

    out.cond_variance.resize(n);
    out.cond_variance(0) = out.residuals.squaredNorm() / static_cast<double>(n);
    for (Eigen::Index t = 1; t < n; ++t) {
        const double e = out.residuals(t - 1);
        out.cond_variance(t) = params.omega + params.alpha * e * e +
                               params.beta * out.cond_variance(t - 1);
    }
    return out;
}

double garch_negloglik(const GarchParams& params, const Vector& returns) {
    if (!(params.omega > 0) || params.alpha < 0 || params.beta < 0) return huge();

    const int p = params.mean_lag();
    const Eigen::Index T = returns.size();
    if (T <= p + 1) return huge();

    // Inline filter to keep the optimizer's hot loop allocation-light.
    double mean0 = params.mean_intercept;
    double prev_e = 0, prev_v = 0, nll = 0;
    const Eigen::Index n = T - p;

    double ss = 0;
    thread_local std::vector<double> eps;
    eps.resize(static_cast<std::size_t>(n));
    for (Eigen::Index t = p; t < T; ++t) {
        double mean = mean0;
        for (int i = 1; i <= p; ++i) mean += params.ar(i - 1) * returns(t - i);
        const double e = returns(t) - mean;
        eps[static_cast<std::size_t>(t - p)] = e;
        ss += e * e;
    }
    prev_v = ss / static_cast<double>(n);
    if (!(prev_v > 0)) return huge();

    for (Eigen::Index t = 0; t < n; ++t) {
        const double v = t == 0 ? prev_v
                                : params.omega + params.alpha * prev_e * prev_e +
                                      params.beta * prev_v;
        if (!(v > 0) || !std::isfinite(v)) return huge();
        const double e = eps[static_cast<std::size_t>(t)];
        nll += std::log(v) + e * e / v;
        prev_e = e;
        prev_v = v;
    }
    nll = 0.5 * (static_cast<double>(n) * kLog2Pi + nll);
    return std::isfinite(nll) ? nll : huge();
}

namespace {

// Optimizer coordinates: [phi0, ar..., omega, s, r] with s = alpha + beta in
// (0, bound) and r = beta / s in (0, 1), so the stationarity constraint is a
// per-coordinate box.
GarchParams params_from_coords(const Vector& v, int p) {
    GarchParams out;
    out.mean_intercept = v(0);
    out.ar = v.segment(1, p);
    out.omega = v(p + 1);
    const double s = v(p + 2);
    const double r = v(p + 3);
    out.alpha = s * (1.0 - r);
    out.beta = s * r;
    return out;
}

Vector mean_equation_start(const Vector& w, int p) {
    if (p == 0) {
        Vector b(1);
        b(0) = w.mean();
        return b;
    }
    const Eigen::Index n = w.size() - p;
    Matrix X(n, p + 1);
    X.col(0).setOnes();
    for (int i = 1; i <= p; ++i) X.col(i) = w.segment(p - i, n);
    const Vector y = w.tail(n);
    return X.colPivHouseholderQr().solve(y);
}

}  // namespace

GarchFit fit_garch11(const Vector& returns, const GarchConfig& config) {
    const int p = config.mean_lag;
    if (p < 0) throw std::invalid_argument("garch: mean lag must be nonnegative");
    if (!returns.allFinite())
        throw std::invalid_argument("garch: returns contain non-finite values");
    if (returns.size() < config.min_observations) {
        std::ostringstream msg;
        msg << "garch: need at least " << config.min_observations << " observations, got "
            << returns.size();
        throw std::invalid_argument(msg.str());
    }
    const double bound = config.bound();

    // Rescale to unit variance so omega's curvature is comparable to the
    // other coefficients'; everything is mapped back exactly afterwards.
    const double sd = std::sqrt((returns.array() - returns.mean()).square().sum() /
                                static_cast<double>(returns.size() - 1));
    if (!(sd > 0)) throw std::invalid_argument("garch: returns are constant");
    const Vector w = returns / sd;

    const Objective nll = [&](const Vector& v) {
        return garch_negloglik(params_from_coords(v, p), w);
    };

    TransformMap map;
    for (int i = 0; i <= p; ++i) map.push_back(Transform::identity());
    map.push_back(Transform::positive());
    map.push_back(Transform::interval(0.0, bound));
    map.push_back(Transform::interval(0.0, 1.0));

    const Vector mean_start = mean_equation_start(w, p);
    const double var_w = [&] {
        GarchParams base;
        base.mean_intercept = mean_start(0);
        base.ar = mean_start.tail(p);
        base.omega = 1.0;  // irrelevant to the residual pass
        const GarchFilterOutput f = garch_filter(base, w);
        return f.residuals.squaredNorm() / static_cast<double>(f.residuals.size());
    }();

    std::vector<Vector> starts;
    {
        Vector v(p + 4);
        v.head(p + 1) = mean_start;
        v(p + 1) = 0.05 * var_w;
        v(p + 2) = std::min(0.95, 0.999 * bound);
        v(p + 3) = 0.90 / 0.95;
        starts.push_back(v);
    }
    std::mt19937_64 rng(20120927u);
    const double s_hi = std::min(0.995, 0.999 * bound);
    for (int k = 0; k < config.restarts; ++k) {
        Vector v(p + 4);
        v.head(p + 1) = mean_start;
        const double s = 0.70 + (s_hi - 0.70) * next_uniform(rng);
        const double r = 0.50 + 0.48 * next_uniform(rng);
        v(p + 1) = var_w * (1.0 - s) * (0.5 + 1.5 * next_uniform(rng));
        v(p + 2) = s;
        v(p + 3) = r;
        starts.push_back(v);
    }

    const OptimResult best = minimize_multistart_strict(nll, starts, map, config.optim);
    const GarchParams scaled = params_from_coords(best.point, p);

    GarchFit fit;
    fit.params = scaled;
    fit.params.mean_intercept = scaled.mean_intercept * sd;
    fit.params.omega = scaled.omega * sd * sd;
    fit.converged = best.converged;
    fit.iterations = best.iterations;

    const GarchFilterOutput filt = garch_filter(fit.params, returns);
    fit.residuals = filt.residuals;
    fit.cond_variance = filt.cond_variance;
    fit.std_residuals = filt.residuals.array() / filt.cond_variance.array().sqrt();
    fit.loglik = -garch_negloglik(fit.params, returns);

    fit.parameter_names.assign({"phi0"});
    for (int i = 1; i <= p; ++i) fit.parameter_names.push_back("ar" + std::to_string(i));
    fit.parameter_names.insert(fit.parameter_names.end(), {"omega", "alpha", "beta"});

    if (scaled.persistence() >= bound - 1e-4) {
        std::ostringstream msg;
        msg << "alpha + beta = " << scaled.persistence()
            << " sits at the stationarity bound " << bound
            << "; the variance process is not covariance stationary";
        fit.warnings.push_back(msg.str());
    }

    // Standard errors with respect to the natural parameters, computed on the
    // rescaled data (better conditioned) and mapped back through the exact
    // reparameterization Jacobian, which is diagonal here.
    Vector theta(p + 4);
    theta(0) = scaled.mean_intercept;
    theta.segment(1, p) = scaled.ar;
    theta(p + 1) = scaled.omega;
    theta(p + 2) = scaled.alpha;
    theta(p + 3) = scaled.beta;
    const Objective natural_nll = [&](const Vector& t) {
        GarchParams q;
        q.mean_intercept = t(0);
        q.ar = t.segment(1, p);
        q.omega = t(p + 1);
        q.alpha = t(p + 2);
        q.beta = t(p + 3);
        return garch_negloglik(q, w);
    };
    try {
        InferenceResult inf;
        if (config.sandwich) {
            const VectorObjective per_obs = [&](const Vector& t) {
                GarchParams q;
                q.mean_intercept = t(0);
                q.ar = t.segment(1, p);
                q.omega = t(p + 1);
                q.alpha = t(p + 2);
                q.beta = t(p + 3);
                const GarchFilterOutput f = garch_filter(q, w);
                return (0.5 * (kLog2Pi + f.cond_variance.array().log() +
                               f.residuals.array().square() / f.cond_variance.array()))
                    .matrix();
            };
            inf = sandwich_standard_errors(natural_nll, per_obs, theta);
        } else {
            inf = standard_errors(natural_nll, theta);
        }
        Vector scale_back = Vector::Ones(p + 4);
        scale_back(0) = sd;
        scale_back(p + 1) = sd * sd;
        inf.estimates.array() *= scale_back.array();
        inf.standard_errors.array() *= scale_back.array();
        inf.covariance = scale_back.asDiagonal() * inf.covariance * scale_back.asDiagonal();
        fit.inference = inf;
    } catch (const std::exception& e) {
        fit.warnings.push_back(std::string("standard errors unavailable: ") + e.what());
        const double nan = std::numeric_limits<double>::quiet_NaN();
        fit.inference.estimates = theta;
        fit.inference.estimates(0) *= sd;
        fit.inference.estimates(p + 1) *= sd * sd;
        fit.inference.standard_errors = Vector::Constant(p + 4, nan);
        fit.inference.t_statistics = Vector::Constant(p + 4, nan);
        fit.inference.covariance = Matrix::Constant(p + 4, p + 4, nan);
    }
    return fit;
}

}  // namespace volspill
