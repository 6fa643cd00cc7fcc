#pragma once

#include "volspill/panel.hpp"

#include <functional>
#include <vector>

namespace volspill {

/// Smooth bijection between one unconstrained real coordinate and its
/// feasible-region counterpart: identity, exp for positivity, or a scaled
/// logistic for an open interval.
class Transform {
public:
    static Transform identity() { return Transform(Kind::Identity, 0, 0); }
    static Transform positive() { return Transform(Kind::Positive, 0, 0); }
    static Transform interval(double lo, double hi) { return Transform(Kind::Interval, lo, hi); }

    double constrain(double u) const;
    double unconstrain(double x) const;

private:
    enum class Kind { Identity, Positive, Interval };
    Transform(Kind kind, double lo, double hi) : kind_(kind), lo_(lo), hi_(hi) {}
    Kind kind_;
    double lo_, hi_;
};

using TransformMap = std::vector<Transform>;

Vector constrain(const TransformMap& map, const Vector& u);
Vector unconstrain(const TransformMap& map, const Vector& x);

struct OptimOptions {
    // convergence when ||grad|| <= gradient_tol * (1 + |objective|); the
    // scaling keeps the test meaningful for likelihoods far from zero
    double gradient_tol = 1e-6;
    double step_tol = 1e-9;
    int max_iterations = 2000;
};

struct OptimResult {
    Vector point;           // constrained space
    double objective_value = 0;
    bool converged = false;
    int iterations = 0;
    double gradient_norm = 0;  // in the unconstrained space
};

using Objective = std::function<double(const Vector&)>;
/// Per-observation objective contributions; their sum is the scalar objective.
using VectorObjective = std::function<Vector(const Vector&)>;

/// BFGS descent in the unconstrained space induced by `map`. The returned
/// point is in constrained coordinates and its objective never exceeds the
/// value at `init`. Hitting the iteration cap yields converged = false, not
/// an error; a non-finite objective at `init` throws.
OptimResult minimize(const Objective& objective, const Vector& init, const TransformMap& map,
                     const OptimOptions& options = {});

/// Runs minimize from every start and keeps the lowest final objective
/// (ties broken by start index, so the result is deterministic).
OptimResult minimize_multistart(const Objective& objective, const std::vector<Vector>& inits,
                                const TransformMap& map, const OptimOptions& options = {});

/// Like minimize_multistart, but only converged runs count. When no start
/// converges, throws with the best attempt's diagnostics instead of
/// returning a half-finished point.
OptimResult minimize_multistart_strict(const Objective& objective,
                                       const std::vector<Vector>& inits, const TransformMap& map,
                                       const OptimOptions& options = {});

/// Default finite-difference step: cbrt(eps) * (1 + |x|).
double fd_step(double x);

/// Central differences; step <= 0 uses fd_step per coordinate. Throws when a
/// probe evaluates non-finite, naming the coordinate.
Vector numerical_gradient(const Objective& objective, const Vector& point, double step = 0.0);
/// Central second differences, symmetrized as (H + H^T) / 2.
Matrix numerical_hessian(const Objective& objective, const Vector& point, double step = 0.0);

struct InferenceResult {
    Vector estimates;
    Vector standard_errors;
    Vector t_statistics;  // estimates / standard_errors
    Matrix covariance;
};

/// Inverse observed information at a local minimum of a negative
/// log-likelihood. Throws "information matrix singular near optimum" with
/// condition diagnostics when the Hessian is not positive definite.
InferenceResult standard_errors(const Objective& nll, const Vector& point);

/// Sandwich (QML-robust) covariance H^-1 G H^-1 where G is the outer product
/// of per-observation score vectors.
InferenceResult sandwich_standard_errors(const Objective& nll, const VectorObjective& per_obs_nll,
                                         const Vector& point);

}  // namespace volspill
