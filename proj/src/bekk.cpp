#include "volspill/bekk.hpp"

#include "volspill/stats.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace volspill {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;

double huge() { return std::numeric_limits<double>::infinity(); }

double next_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Likelihood recursion with the dimension as a compile-time constant where
// possible; the N=1..3 instantiations keep the simulation studies cheap.
template <int ND>
double nll_core(const Matrix& intercept, const Matrix& a, const Matrix& b, const Matrix& e) {
    using Mat = Eigen::Matrix<double, ND, ND>;
    using Vec = Eigen::Matrix<double, ND, 1>;
    const Eigen::Index n = e.rows();
    const Eigen::Index N = intercept.rows();

    Mat m(N, N), at(N, N), bt(N, N), h(N, N);
    m = intercept;
    at = a.transpose();
    bt = b.transpose();
    h = e.transpose() * e / static_cast<double>(n);

    double nll = 0;
    Vec et(N), v(N);
    for (Eigen::Index t = 0; t < n; ++t) {
        const Eigen::LLT<Mat> llt(h);
        if (llt.info() != Eigen::Success) return huge();
        double logdet = 0;
        for (Eigen::Index i = 0; i < N; ++i) logdet += std::log(llt.matrixL()(i, i));
        logdet *= 2.0;

        et = e.row(t).transpose();
        const double quad = et.dot(llt.solve(et));
        nll += logdet + quad;

        if (t + 1 < n) {
            v.noalias() = at * et;
            h = m + v * v.transpose() + bt * h * b;
        }
    }
    nll = 0.5 * (static_cast<double>(n * N) * kLog2Pi + nll);
    return std::isfinite(nll) ? nll : huge();
}

double nll_dispatch(const Matrix& intercept, const Matrix& a, const Matrix& b, const Matrix& e) {
    switch (intercept.rows()) {
        case 1: return nll_core<1>(intercept, a, b, e);
        case 2: return nll_core<2>(intercept, a, b, e);
        case 3: return nll_core<3>(intercept, a, b, e);
        default: return nll_core<Eigen::Dynamic>(intercept, a, b, e);
    }
}

// Natural parameter vector layout: mu, then the lower triangle of C by
// columns (omitted under variance targeting), then A, then B (row-major,
// diagonal entries only under the diagonal restriction).
struct ThetaLayout {
    int N = 0;
    bool diagonal = false;
    bool targeting = false;

    int n_c() const { return targeting ? 0 : N * (N + 1) / 2; }
    int n_ab() const { return diagonal ? N : N * N; }
    int size() const { return N + n_c() + 2 * n_ab(); }
    int c_offset() const { return N; }
    int a_offset() const { return N + n_c(); }
    int b_offset() const { return a_offset() + n_ab(); }
};

Matrix unpack_ab(const ThetaLayout& lay, const Vector& th, int offset) {
    Matrix m = Matrix::Zero(lay.N, lay.N);
    int k = offset;
    if (lay.diagonal) {
        for (int i = 0; i < lay.N; ++i) m(i, i) = th(k++);
    } else {
        for (int i = 0; i < lay.N; ++i)
            for (int j = 0; j < lay.N; ++j) m(i, j) = th(k++);
    }
    return m;
}

Matrix unpack_c(const ThetaLayout& lay, const Vector& th) {
    Matrix c = Matrix::Zero(lay.N, lay.N);
    int k = lay.c_offset();
    for (int j = 0; j < lay.N; ++j)
        for (int i = j; i < lay.N; ++i) c(i, j) = th(k++);
    return c;
}

Vector pack(const ThetaLayout& lay, const BekkParams& p) {
    Vector th(lay.size());
    th.head(lay.N) = p.mu;
    int k = lay.c_offset();
    if (!lay.targeting)
        for (int j = 0; j < lay.N; ++j)
            for (int i = j; i < lay.N; ++i) th(k++) = p.c(i, j);
    k = lay.a_offset();
    if (lay.diagonal) {
        for (int i = 0; i < lay.N; ++i) th(k++) = p.a(i, i);
        for (int i = 0; i < lay.N; ++i) th(k++) = p.b(i, i);
    } else {
        for (int i = 0; i < lay.N; ++i)
            for (int j = 0; j < lay.N; ++j) th(k++) = p.a(i, j);
        for (int i = 0; i < lay.N; ++i)
            for (int j = 0; j < lay.N; ++j) th(k++) = p.b(i, j);
    }
    return th;
}

std::vector<std::string> theta_names(const ThetaLayout& lay) {
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(lay.size()));
    for (int i = 0; i < lay.N; ++i) names.push_back("mu" + std::to_string(i + 1));
    if (!lay.targeting)
        for (int j = 0; j < lay.N; ++j)
            for (int i = j; i < lay.N; ++i)
                names.push_back("c" + std::to_string(i + 1) + std::to_string(j + 1));
    for (const char* base : {"a", "b"}) {
        if (lay.diagonal) {
            for (int i = 0; i < lay.N; ++i)
                names.push_back(base + std::to_string(i + 1) + std::to_string(i + 1));
        } else {
            for (int i = 0; i < lay.N; ++i)
                for (int j = 0; j < lay.N; ++j)
                    names.push_back(base + std::to_string(i + 1) + std::to_string(j + 1));
        }
    }
    return names;
}

// Per-entry scale factors that map estimates on sd-normalized data back to
// the original units; the covariance transforms as D Cov D.
Vector theta_scale_factors(const ThetaLayout& lay, const Vector& sd) {
    Vector d(lay.size());
    int k = 0;
    for (int i = 0; i < lay.N; ++i) d(k++) = sd(i);
    if (!lay.targeting)
        for (int j = 0; j < lay.N; ++j)
            for (int i = j; i < lay.N; ++i) d(k++) = sd(i);
    for (int rep = 0; rep < 2; ++rep) {
        if (lay.diagonal) {
            for (int i = 0; i < lay.N; ++i) d(k++) = 1.0;
        } else {
            for (int i = 0; i < lay.N; ++i)
                for (int j = 0; j < lay.N; ++j) d(k++) = sd(j) / sd(i);
        }
    }
    return d;
}

// Residuals at the given mean, plus the model intercept CC' (or the
// targeted version S - A'SA - B'SB). Returns false when targeting leaves
// the positive-definite cone.
bool build_intercept(const ThetaLayout& lay, const Vector& th, const Matrix& y, Matrix& e,
                     Matrix& intercept, Matrix& a, Matrix& b) {
    const Vector mu = th.head(lay.N);
    e = y.rowwise() - mu.transpose();
    a = unpack_ab(lay, th, lay.a_offset());
    b = unpack_ab(lay, th, lay.b_offset());
    if (lay.targeting) {
        const Matrix s = e.transpose() * e / static_cast<double>(e.rows());
        intercept = s - a.transpose() * s * a - b.transpose() * s * b;
        const Eigen::LLT<Matrix> llt(intercept);
        if (llt.info() != Eigen::Success) return false;
    } else {
        const Matrix c = unpack_c(lay, th);
        intercept = c * c.transpose();
    }
    return true;
}

}  // namespace

void BekkParams::validate() const {
    const int N = dim();
    if (N == 0) throw std::invalid_argument("bekk: empty parameter set");
    if (c.rows() != N || c.cols() != N || a.rows() != N || a.cols() != N || b.rows() != N ||
        b.cols() != N)
        throw std::invalid_argument("bekk: parameter shapes disagree");
    for (int j = 0; j < N; ++j) {
        if (!(c(j, j) > 0))
            throw std::invalid_argument("bekk: intercept factor needs a positive diagonal");
        for (int i = 0; i < j; ++i)
            if (c(i, j) != 0.0)
                throw std::invalid_argument("bekk: intercept factor must be lower triangular");
    }
    if (!mu.allFinite() || !c.allFinite() || !a.allFinite() || !b.allFinite())
        throw std::invalid_argument("bekk: non-finite parameters");
}

BekkFilterOutput bekk_filter(const BekkParams& params, const Matrix& returns) {
    params.validate();
    const int N = params.dim();
    if (returns.cols() != N) throw std::invalid_argument("bekk: data dimension mismatch");
    const Eigen::Index n = returns.rows();
    if (n < 2) throw std::invalid_argument("bekk: need at least two observations");

    BekkFilterOutput out;
    out.residuals = returns.rowwise() - params.mu.transpose();
    out.cond_covariance.reserve(static_cast<std::size_t>(n));

    const Matrix intercept = params.c * params.c.transpose();
    Matrix h = out.residuals.transpose() * out.residuals / static_cast<double>(n);
    for (Eigen::Index t = 0; t < n; ++t) {
        const Eigen::LLT<Matrix> llt(h);
        if (llt.info() != Eigen::Success) {
            std::ostringstream msg;
            msg << "bekk: conditional covariance is not positive definite at t=" << t;
            throw std::runtime_error(msg.str());
        }
        out.cond_covariance.push_back(h);
        if (t + 1 < n) {
            const Vector v = params.a.transpose() * out.residuals.row(t).transpose();
            h = intercept + v * v.transpose() + params.b.transpose() * h * params.b;
        }
    }
    return out;
}

double bekk_negloglik(const BekkParams& params, const Matrix& returns) {
    const int N = params.dim();
    if (returns.cols() != N || returns.rows() < 2)
        throw std::invalid_argument("bekk: data dimension mismatch");
    const Matrix e = returns.rowwise() - params.mu.transpose();
    const Matrix intercept = params.c * params.c.transpose();
    return nll_dispatch(intercept, params.a, params.b, e);
}

double bekk_persistence(const Matrix& a, const Matrix& b) {
    const Eigen::Index N = a.rows();
    Matrix k = Matrix::Zero(N * N, N * N);
    for (Eigen::Index i = 0; i < N; ++i)
        for (Eigen::Index j = 0; j < N; ++j)
            k.block(i * N, j * N, N, N) = a(i, j) * a + b(i, j) * b;
    const Eigen::EigenSolver<Matrix> es(k, false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

BekkFit fit_bekk(const Matrix& returns, const BekkConfig& config) {
    const int N = static_cast<int>(returns.cols());
    const Eigen::Index n = returns.rows();
    if (N < 1) throw std::invalid_argument("bekk: need at least one series");
    if (!returns.allFinite()) throw std::invalid_argument("bekk: returns contain non-finite values");
    if (n < config.min_observations) {
        std::ostringstream msg;
        msg << "bekk: need at least " << config.min_observations << " observations, got " << n;
        throw std::invalid_argument(msg.str());
    }
    ThetaLayout lay{N, config.diagonal, config.variance_targeting};
    if (!config.diagonal && N > config.max_dimension && !config.force_dimension) {
        std::ostringstream msg;
        msg << "bekk: " << N << " series means " << lay.size()
            << " parameters; refusing above " << config.max_dimension
            << " series (set force_dimension, or use the diagonal restriction)";
        throw std::invalid_argument(msg.str());
    }

    // Per-series sd normalization; mapped back exactly below.
    Vector sd(N);
    for (int i = 0; i < N; ++i) {
        const double m = returns.col(i).mean();
        sd(i) = std::sqrt((returns.col(i).array() - m).square().sum() /
                          static_cast<double>(n - 1));
        if (!(sd(i) > 0)) {
            std::ostringstream msg;
            msg << "bekk: series " << i << " is constant";
            throw std::invalid_argument(msg.str());
        }
    }
    const Matrix y = returns * sd.cwiseInverse().asDiagonal();

    const Vector mu0 = y.colwise().mean();
    const Matrix centered = y.rowwise() - mu0.transpose();
    const Matrix s0 = centered.transpose() * centered / static_cast<double>(n);
    {
        const Eigen::LLT<Matrix> llt(s0);
        if (llt.info() != Eigen::Success)
            throw std::invalid_argument("bekk: sample covariance is singular; series are collinear");
    }

    const Objective nll = [&](const Vector& th) {
        Matrix e, intercept, a, b;
        if (!build_intercept(lay, th, y, e, intercept, a, b)) return huge();
        return nll_dispatch(intercept, a, b, e);
    };

    TransformMap map;
    for (int i = 0; i < N; ++i) map.push_back(Transform::identity());
    if (!lay.targeting)
        for (int j = 0; j < N; ++j)
            for (int i = j; i < N; ++i)
                map.push_back(i == j ? Transform::positive() : Transform::identity());
    for (int i = 0; i < 2 * lay.n_ab(); ++i) map.push_back(Transform::identity());

    const auto make_start = [&](double diag_a, double diag_b) {
        BekkParams p;
        p.mu = mu0;
        p.a = diag_a * Matrix::Identity(N, N);
        p.b = diag_b * Matrix::Identity(N, N);
        const double w = 1.0 - diag_a * diag_a - diag_b * diag_b;
        const Eigen::LLT<Matrix> llt(Matrix(w * s0));
        p.c = llt.matrixL();
        return pack(lay, p);
    };

    std::vector<Vector> starts;
    starts.push_back(make_start(0.30, std::sqrt(0.85)));
    std::mt19937_64 rng(19950331u);
    for (int k = 0; k < config.restarts; ++k) {
        const double a0 = 0.15 + 0.30 * next_uniform(rng);
        const double s = 0.80 + 0.17 * next_uniform(rng);
        starts.push_back(make_start(a0, std::sqrt(s - a0 * a0)));
    }

    const OptimResult best = minimize_multistart_strict(nll, starts, map, config.optim);

    // Fix the sign indeterminacy (A, B enter quadratically) before inference.
    Vector theta = best.point;
    {
        const Matrix a = unpack_ab(lay, theta, lay.a_offset());
        const Matrix b = unpack_ab(lay, theta, lay.b_offset());
        if (a(0, 0) < 0)
            theta.segment(lay.a_offset(), lay.n_ab()) *= -1.0;
        if (b(0, 0) < 0)
            theta.segment(lay.b_offset(), lay.n_ab()) *= -1.0;
    }

    BekkFit fit;
    fit.converged = best.converged;
    fit.iterations = best.iterations;
    fit.parameter_names = theta_names(lay);

    // Natural-coordinate parameters on the normalized data.
    BekkParams scaled;
    scaled.mu = theta.head(N);
    scaled.a = unpack_ab(lay, theta, lay.a_offset());
    scaled.b = unpack_ab(lay, theta, lay.b_offset());
    if (lay.targeting) {
        Matrix e, intercept, a, b;
        build_intercept(lay, theta, y, e, intercept, a, b);
        scaled.c = Eigen::LLT<Matrix>(intercept).matrixL();
    } else {
        scaled.c = unpack_c(lay, theta);
    }

    fit.params.mu = sd.asDiagonal() * scaled.mu;
    fit.params.c = sd.asDiagonal() * scaled.c;
    fit.params.a.resize(N, N);
    fit.params.b.resize(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            fit.params.a(i, j) = scaled.a(i, j) * sd(j) / sd(i);
            fit.params.b(i, j) = scaled.b(i, j) * sd(j) / sd(i);
        }

    fit.loglik = -bekk_negloglik(fit.params, returns);
    fit.persistence = bekk_persistence(fit.params.a, fit.params.b);
    if (fit.persistence >= 1.0) {
        std::ostringstream msg;
        msg << "persistence (largest eigenvalue of A(x)A + B(x)B) = " << fit.persistence
            << "; the covariance process is not stationary";
        fit.warnings.push_back(msg.str());
    }

    const BekkFilterOutput filt = bekk_filter(fit.params, returns);
    fit.residuals = filt.residuals;
    fit.cond_covariance = filt.cond_covariance;

    const double nan = std::numeric_limits<double>::quiet_NaN();
    try {
        InferenceResult inf;
        if (config.sandwich) {
            const VectorObjective per_obs = [&](const Vector& th) {
                Matrix e, intercept, a, b;
                if (!build_intercept(lay, th, y, e, intercept, a, b))
                    throw std::runtime_error("bekk: targeting intercept not positive definite");
                BekkParams p;
                p.mu = th.head(N);
                p.a = a;
                p.b = b;
                p.c = Eigen::LLT<Matrix>(intercept).matrixL();
                const BekkFilterOutput f = bekk_filter(p, y);
                Vector contrib(e.rows());
                for (Eigen::Index t = 0; t < e.rows(); ++t) {
                    const Eigen::LLT<Matrix> llt(f.cond_covariance[static_cast<std::size_t>(t)]);
                    double logdet = 0;
                    for (int i = 0; i < N; ++i) logdet += std::log(llt.matrixL()(i, i));
                    const Vector et = e.row(t).transpose();
                    contrib(t) = 0.5 * (N * kLog2Pi + 2.0 * logdet + et.dot(llt.solve(et)));
                }
                return contrib;
            };
            inf = sandwich_standard_errors(nll, per_obs, theta);
        } else {
            inf = standard_errors(nll, theta);
        }
        const Vector d = theta_scale_factors(lay, sd);
        inf.estimates.array() *= d.array();
        inf.standard_errors.array() *= d.array();
        inf.covariance = d.asDiagonal() * inf.covariance * d.asDiagonal();
        fit.inference = inf;
    } catch (const std::exception& e) {
        fit.warnings.push_back(std::string("standard errors unavailable: ") + e.what());
        fit.inference.estimates = theta_scale_factors(lay, sd).cwiseProduct(theta);
        fit.inference.standard_errors = Vector::Constant(lay.size(), nan);
        fit.inference.t_statistics = Vector::Constant(lay.size(), nan);
        fit.inference.covariance = Matrix::Constant(lay.size(), lay.size(), nan);
    }

    fit.a_tstat = Matrix::Constant(N, N, nan);
    fit.b_tstat = Matrix::Constant(N, N, nan);
    {
        int k = lay.a_offset();
        if (lay.diagonal) {
            for (int i = 0; i < N; ++i) fit.a_tstat(i, i) = fit.inference.t_statistics(k++);
            for (int i = 0; i < N; ++i) fit.b_tstat(i, i) = fit.inference.t_statistics(k++);
        } else {
            for (int i = 0; i < N; ++i)
                for (int j = 0; j < N; ++j) fit.a_tstat(i, j) = fit.inference.t_statistics(k++);
            for (int i = 0; i < N; ++i)
                for (int j = 0; j < N; ++j) fit.b_tstat(i, j) = fit.inference.t_statistics(k++);
        }
    }
    return fit;
}

std::vector<SpilloverDirection> classify_directions(const BekkFit& fit, double level) {
    const int N = static_cast<int>(fit.a_tstat.rows());
    const double crit = norm_ppf(1.0 - 0.5 * level);
    std::vector<SpilloverDirection> out;
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            if (i == j) continue;
            SpilloverDirection d;
            d.from = i;
            d.to = j;
            d.a_t = fit.a_tstat(i, j);
            d.b_t = fit.b_tstat(i, j);
            const bool a_sig = std::isfinite(d.a_t) && std::abs(d.a_t) > crit;
            const bool b_sig = std::isfinite(d.b_t) && std::abs(d.b_t) > crit;
            d.significant = a_sig || b_sig;
            out.push_back(d);
        }
    }
    return out;
}

}  // namespace volspill
