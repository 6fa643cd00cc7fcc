#include "volspill/optim.hpp"

#include "volspill/parallel.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace volspill {

namespace {

double logistic(double u) {
    // guarded against overflow in exp
    if (u >= 0) {
        const double e = std::exp(-u);
        return 1.0 / (1.0 + e);
    }
    const double e = std::exp(u);
    return e / (1.0 + e);
}

double logit(double p) { return std::log(p) - std::log1p(-p); }

constexpr double kUnconstrainedCap = 35.0;  // keeps exp/logit finite at the edges

}  // namespace

double Transform::constrain(double u) const {
    switch (kind_) {
        case Kind::Identity:
            return u;
        case Kind::Positive:
            return std::exp(std::min(u, 700.0));
        case Kind::Interval:
            return lo_ + (hi_ - lo_) * logistic(u);
    }
    return u;
}

double Transform::unconstrain(double x) const {
    switch (kind_) {
        case Kind::Identity:
            return x;
        case Kind::Positive:
            if (!(x > 0)) throw std::runtime_error("transform: value must be positive");
            return std::log(x);
        case Kind::Interval: {
            if (!(x > lo_ && x < hi_))
                throw std::runtime_error("transform: value outside open interval");
            const double p = (x - lo_) / (hi_ - lo_);
            return std::clamp(logit(p), -kUnconstrainedCap, kUnconstrainedCap);
        }
    }
    return x;
}

Vector constrain(const TransformMap& map, const Vector& u) {
    Vector x(u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) x(i) = map[i].constrain(u(i));
    return x;
}

Vector unconstrain(const TransformMap& map, const Vector& x) {
    Vector u(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) u(i) = map[i].unconstrain(x(i));
    return u;
}

double fd_step(double x) {
    static const double cbrt_eps = std::cbrt(std::numeric_limits<double>::epsilon());
    return cbrt_eps * (1.0 + std::abs(x));
}

Vector numerical_gradient(const Objective& objective, const Vector& point, double step) {
    const Eigen::Index n = point.size();
    Vector grad(n);
    Vector probe = point;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double h = step > 0 ? step : fd_step(point(i));
        probe(i) = point(i) + h;
        const double up = objective(probe);
        probe(i) = point(i) - h;
        const double down = objective(probe);
        probe(i) = point(i);
        if (!std::isfinite(up) || !std::isfinite(down)) {
            std::ostringstream msg;
            msg << "numerical_gradient: non-finite objective probing coordinate " << i;
            throw std::runtime_error(msg.str());
        }
        grad(i) = (up - down) / (2.0 * h);
    }
    return grad;
}

Matrix numerical_hessian(const Objective& objective, const Vector& point, double step) {
    const Eigen::Index n = point.size();
    Vector h(n);
    for (Eigen::Index i = 0; i < n; ++i) h(i) = step > 0 ? step : fd_step(point(i));

    const double f0 = objective(point);
    if (!std::isfinite(f0))
        throw std::runtime_error("numerical_hessian: non-finite objective at the expansion point");

    Matrix hess(n, n);
    Vector probe = point;
    auto eval = [&](Eigen::Index i, double di, Eigen::Index j, double dj) {
        probe(i) += di;
        probe(j) += dj;
        const double f = objective(probe);
        probe(i) = point(i);
        probe(j) = point(j);
        if (!std::isfinite(f)) {
            std::ostringstream msg;
            msg << "numerical_hessian: non-finite objective probing coordinates (" << i << ", " << j
                << ")";
            throw std::runtime_error(msg.str());
        }
        return f;
    };

    for (Eigen::Index i = 0; i < n; ++i) {
        const double fp = eval(i, h(i), i, 0.0);
        const double fm = eval(i, -h(i), i, 0.0);
        hess(i, i) = (fp - 2.0 * f0 + fm) / (h(i) * h(i));
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double fpp = eval(i, h(i), j, h(j));
            const double fpm = eval(i, h(i), j, -h(j));
            const double fmp = eval(i, -h(i), j, h(j));
            const double fmm = eval(i, -h(i), j, -h(j));
            const double d = (fpp - fpm - fmp + fmm) / (4.0 * h(i) * h(j));
            hess(i, j) = d;
            hess(j, i) = d;
        }
    }
    return 0.5 * (hess + hess.transpose());
}

OptimResult minimize(const Objective& objective, const Vector& init, const TransformMap& map,
                     const OptimOptions& options) {
    const Eigen::Index n = init.size();
    if (static_cast<Eigen::Index>(map.size()) != n)
        throw std::runtime_error("minimize: transform map size does not match parameter count");

    auto f = [&](const Vector& u) { return objective(constrain(map, u)); };

    Vector u = unconstrain(map, init);
    double fu = f(u);
    if (!std::isfinite(fu)) throw std::runtime_error("minimize: objective not finite at init");

    Matrix h_inv = Matrix::Identity(n, n);
    Vector grad = numerical_gradient(f, u);

    const auto gtol = [&options](double fval) {
        return options.gradient_tol * (1.0 + std::abs(fval));
    };

    OptimResult result;
    int iter = 0;
    for (; iter < options.max_iterations; ++iter) {
        result.gradient_norm = grad.norm();
        if (result.gradient_norm <= gtol(fu)) {
            result.converged = true;
            break;
        }

        Vector direction = -(h_inv * grad);
        double slope = direction.dot(grad);
        if (!(slope < 0)) {
            h_inv.setIdentity();
            direction = -grad;
            slope = direction.dot(grad);
        }

        // Backtracking Armijo line search.
        double t = 1.0;
        const double c1 = 1e-4;
        double f_new = std::numeric_limits<double>::infinity();
        Vector u_new;
        bool improved = false;
        for (int ls = 0; ls < 60; ++ls) {
            u_new = u + t * direction;
            f_new = f(u_new);
            if (std::isfinite(f_new) && f_new <= fu + c1 * t * slope) {
                improved = true;
                break;
            }
            t *= 0.5;
        }
        if (!improved) break;  // no further descent possible at this scale

        const Vector s = u_new - u;
        Vector grad_new = numerical_gradient(f, u_new);
        const Vector y = grad_new - grad;
        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            const double rho = 1.0 / sy;
            const Matrix i_mat = Matrix::Identity(n, n);
            h_inv = (i_mat - rho * s * y.transpose()) * h_inv * (i_mat - rho * y * s.transpose()) +
                    rho * s * s.transpose();
        } else {
            h_inv.setIdentity();
        }

        u = u_new;
        fu = f_new;
        grad = std::move(grad_new);

        if (s.norm() <= options.step_tol * (1.0 + u.norm())) {
            result.gradient_norm = grad.norm();
            result.converged = result.gradient_norm <= gtol(fu);
            ++iter;
            break;
        }
    }

    result.gradient_norm = grad.norm();
    if (!result.converged) result.converged = result.gradient_norm <= gtol(fu);
    result.point = constrain(map, u);
    result.objective_value = fu;
    result.iterations = iter;
    return result;
}

namespace {

struct StartOutcomes {
    std::vector<OptimResult> results;
    std::vector<std::string> failures;  // empty string = no exception
};

StartOutcomes run_starts(const Objective& objective, const std::vector<Vector>& inits,
                         const TransformMap& map, const OptimOptions& options) {
    if (inits.empty()) throw std::runtime_error("minimize_multistart: no starting points");
    StartOutcomes out;
    out.results.resize(inits.size());
    out.failures.resize(inits.size());
    parallel_for(inits.size(), [&](std::size_t i) {
        try {
            out.results[i] = minimize(objective, inits[i], map, options);
        } catch (const std::exception& e) {
            out.results[i].objective_value = std::numeric_limits<double>::infinity();
            out.failures[i] = e.what();
        }
    });
    return out;
}

std::size_t best_index(const std::vector<OptimResult>& results, bool converged_only) {
    std::size_t best = results.size();
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (!std::isfinite(results[i].objective_value)) continue;
        if (converged_only && !results[i].converged) continue;
        if (best == results.size() ||
            results[i].objective_value < results[best].objective_value)
            best = i;
    }
    return best;
}

}  // namespace

OptimResult minimize_multistart(const Objective& objective, const std::vector<Vector>& inits,
                                const TransformMap& map, const OptimOptions& options) {
    StartOutcomes out = run_starts(objective, inits, map, options);
    const std::size_t best = best_index(out.results, false);
    if (best == out.results.size())
        throw std::runtime_error("minimize_multistart: every start failed; first error: " +
                                 out.failures[0]);
    return out.results[best];
}

OptimResult minimize_multistart_strict(const Objective& objective,
                                       const std::vector<Vector>& inits, const TransformMap& map,
                                       const OptimOptions& options) {
    StartOutcomes out = run_starts(objective, inits, map, options);
    const std::size_t best = best_index(out.results, true);
    if (best != out.results.size()) return out.results[best];

    const std::size_t fallback = best_index(out.results, false);
    std::ostringstream msg;
    msg << "optimizer did not converge from any start";
    if (fallback != out.results.size()) {
        const OptimResult& r = out.results[fallback];
        msg << " (best attempt: objective " << r.objective_value << ", gradient norm "
            << r.gradient_norm << " after " << r.iterations << " iterations)";
    } else {
        msg << "; first error: " << out.failures[0];
    }
    throw std::runtime_error(msg.str());
}

namespace {

InferenceResult inference_from_hessian(const Matrix& hess, const Vector& point) {
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(hess);
    const Vector values = eig.eigenvalues();
    const double min_eig = values.minCoeff();
    const double max_eig = values.maxCoeff();
    if (!(min_eig > 0)) {
        std::ostringstream msg;
        msg << "information matrix singular near optimum (eigenvalues in [" << min_eig << ", "
            << max_eig << "])";
        throw std::runtime_error(msg.str());
    }

    InferenceResult out;
    out.estimates = point;
    out.covariance = eig.eigenvectors() * values.cwiseInverse().asDiagonal() *
                     eig.eigenvectors().transpose();
    out.standard_errors = out.covariance.diagonal().cwiseSqrt();
    out.t_statistics = point.array() / out.standard_errors.array();
    return out;
}

}  // namespace

InferenceResult standard_errors(const Objective& nll, const Vector& point) {
    return inference_from_hessian(numerical_hessian(nll, point), point);
}

InferenceResult sandwich_standard_errors(const Objective& nll, const VectorObjective& per_obs_nll,
                                         const Vector& point) {
    const Matrix hess = numerical_hessian(nll, point);
    const Eigen::Index n = point.size();

    // Score matrix: central differences of the per-observation contributions.
    Vector probe = point;
    Matrix scores;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double h = fd_step(point(i));
        probe(i) = point(i) + h;
        const Vector up = per_obs_nll(probe);
        probe(i) = point(i) - h;
        const Vector down = per_obs_nll(probe);
        probe(i) = point(i);
        if (scores.size() == 0) scores.resize(up.size(), n);
        scores.col(i) = (up - down) / (2.0 * h);
    }

    const Matrix opg = scores.transpose() * scores;
    InferenceResult base = inference_from_hessian(hess, point);
    InferenceResult out;
    out.estimates = point;
    out.covariance = base.covariance * opg * base.covariance;
    out.standard_errors = out.covariance.diagonal().cwiseSqrt();
    out.t_statistics = point.array() / out.standard_errors.array();
    return out;
}

}  // namespace volspill
