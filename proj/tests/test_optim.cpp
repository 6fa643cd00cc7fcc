#include "volspill/optim.hpp"

#include "doctest.h"

#include <cmath>

using namespace volspill;

TEST_CASE("transforms are bijections onto their ranges") {
    const Transform id = Transform::identity();
    CHECK(id.constrain(-3.7) == -3.7);
    CHECK(id.unconstrain(2.5) == 2.5);

    const Transform pos = Transform::positive();
    for (double u : {-5.0, -0.3, 0.0, 1.2, 4.0}) {
        const double x = pos.constrain(u);
        CHECK(x > 0.0);
        CHECK(pos.unconstrain(x) == doctest::Approx(u).epsilon(1e-12));
    }

    const Transform box = Transform::interval(0.2, 0.9);
    for (double u : {-6.0, -1.0, 0.0, 1.0, 6.0}) {
        const double x = box.constrain(u);
        CHECK(x > 0.2);
        CHECK(x < 0.9);
        CHECK(box.unconstrain(x) == doctest::Approx(u).epsilon(1e-9));
    }

    TransformMap map = {Transform::identity(), Transform::positive(),
                        Transform::interval(-1.0, 1.0)};
    Vector x(3);
    x << 1.5, 0.7, -0.2;
    const Vector u = unconstrain(map, x);
    const Vector back = constrain(map, u);
    for (int i = 0; i < 3; ++i) CHECK(back(i) == doctest::Approx(x(i)).epsilon(1e-12));
}

TEST_CASE("minimize solves a quadratic exactly") {
    const Objective f = [](const Vector& x) {
        return (x(0) - 3.0) * (x(0) - 3.0) + 2.0 * (x(1) + 1.0) * (x(1) + 1.0);
    };
    Vector init(2);
    init << 0.0, 0.0;
    const TransformMap map = {Transform::identity(), Transform::identity()};
    const OptimResult r = minimize(f, init, map);
    CHECK(r.converged);
    CHECK(r.point(0) == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(r.point(1) == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(r.objective_value == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
    CHECK(r.gradient_norm < 1e-5);
}

TEST_CASE("minimize crosses the rosenbrock valley") {
    const Objective f = [](const Vector& x) {
        const double a = 1.0 - x(0);
        const double b = x(1) - x(0) * x(0);
        return a * a + 100.0 * b * b;
    };
    Vector init(2);
    init << -1.2, 1.0;
    const OptimResult r = minimize(f, init, {Transform::identity(), Transform::identity()});
    CHECK(r.converged);
    CHECK(r.point(0) == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(r.point(1) == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("constrained minimize respects the feasible region") {
    // unconstrained minimum at -2; the positive transform keeps x > 0
    const Objective f = [](const Vector& x) { return (x(0) + 2.0) * (x(0) + 2.0); };
    Vector init(1);
    init << 1.0;
    const OptimResult r = minimize(f, init, {Transform::positive()});
    CHECK(r.point(0) > 0.0);
    CHECK(r.point(0) < 1e-3);  // pushed toward the boundary

    CHECK_THROWS_AS(minimize([](const Vector&) { return std::nan(""); }, init,
                             {Transform::identity()}),
                    std::runtime_error);
}

TEST_CASE("multistart keeps the lowest objective deterministically") {
    // two local minima: deep near x = -2 (value ~ -0.63), shallow near x = 4
    const Objective f = [](const Vector& x) {
        const double a = x(0) - 4.0, b = x(0) + 2.0;
        return 0.05 * a * a * b * b + 0.3 * x(0);
    };
    std::vector<Vector> inits;
    for (double s : {-3.0, -1.0, 3.0, 5.0}) {
        Vector v(1);
        v << s;
        inits.push_back(v);
    }
    const OptimResult best = minimize_multistart(f, inits, {Transform::identity()});
    CHECK(best.converged);
    CHECK(best.point(0) == doctest::Approx(-2.08).epsilon(0.01));
    CHECK(best.objective_value < 0.0);

    const OptimResult strict = minimize_multistart_strict(f, inits, {Transform::identity()});
    CHECK(strict.point(0) == doctest::Approx(best.point(0)).epsilon(1e-10));
}

TEST_CASE("strict multistart throws when nothing converges") {
    // Rosenbrock from the far corner cannot converge in two iterations
    const Objective f = [](const Vector& x) {
        const double a = 1.0 - x(0), b = x(1) - x(0) * x(0);
        return a * a + 100.0 * b * b;
    };
    Vector init(2);
    init << -1.2, 1.0;
    OptimOptions opts;
    opts.max_iterations = 2;
    CHECK_THROWS_WITH_AS(
        minimize_multistart_strict(f, {init}, {Transform::identity(), Transform::identity()},
                                   opts),
        doctest::Contains("did not converge from any start"), std::runtime_error);
}

TEST_CASE("numerical derivatives match closed forms") {
    const Objective f = [](const Vector& x) {
        return x(0) * x(0) * x(0) + 2.0 * x(0) * x(1) + std::sin(x(1));
    };
    Vector p(2);
    p << 0.7, -0.4;
    const Vector g = numerical_gradient(f, p);
    CHECK(g(0) == doctest::Approx(3.0 * 0.49 + 2.0 * -0.4).epsilon(1e-7));
    CHECK(g(1) == doctest::Approx(2.0 * 0.7 + std::cos(-0.4)).epsilon(1e-7));

    const Matrix h = numerical_hessian(f, p);
    CHECK(h(0, 0) == doctest::Approx(6.0 * 0.7).epsilon(1e-4));
    CHECK(h(0, 1) == doctest::Approx(2.0).epsilon(1e-4));
    CHECK(h(1, 0) == h(0, 1));  // symmetrized
    CHECK(h(1, 1) == doctest::Approx(-std::sin(-0.4)).epsilon(1e-3));

    const Objective partial = [](const Vector& x) {
        return x(0) < 0.0 ? std::nan("") : x(0);
    };
    Vector origin = Vector::Zero(1);
    CHECK_THROWS_WITH_AS(numerical_gradient(partial, origin),
                         doctest::Contains("probing coordinate 0"), std::runtime_error);
}

TEST_CASE("fd step grows with magnitude") {
    CHECK(fd_step(0.0) == doctest::Approx(std::cbrt(2.220446049250313e-16)).epsilon(1e-10));
    CHECK(fd_step(100.0) == doctest::Approx(101.0 * fd_step(0.0)).epsilon(1e-10));
    CHECK(fd_step(-100.0) == fd_step(100.0));
}

TEST_CASE("standard errors invert the observed information") {
    // NLL of 25 unit-variance observations with mean theta: curvature n -> SE 1/5
    const int n = 25;
    const Objective nll = [&](const Vector& t) {
        return 0.5 * n * (t(0) - 1.3) * (t(0) - 1.3);
    };
    Vector at(1);
    at << 1.3;
    const InferenceResult inf = standard_errors(nll, at);
    CHECK(inf.standard_errors(0) == doctest::Approx(0.2).epsilon(1e-5));
    CHECK(inf.t_statistics(0) == doctest::Approx(1.3 / 0.2).epsilon(1e-5));
    CHECK(inf.covariance(0, 0) == doctest::Approx(0.04).epsilon(1e-5));

    const Objective flat = [](const Vector&) { return 1.0; };
    CHECK_THROWS_WITH_AS(standard_errors(flat, at),
                         doctest::Contains("information matrix singular"), std::runtime_error);
}

TEST_CASE("sandwich errors equal plain errors for a well-specified likelihood") {
    // for the Gaussian mean model the sandwich collapses to H^-1 when the
    // per-observation scores carry the same curvature
    const int n = 400;
    std::vector<double> xs(n);
    std::uint64_t s = 9;
    double sum = 0;
    for (int i = 0; i < n; ++i) {
        s = s * 6364136223846793005ULL + 1442695040888963407ULL;
        xs[i] = static_cast<double>(s >> 11) * 0x1.0p-53 - 0.5;
        sum += xs[i];
    }
    const double mean = sum / n;

    const Objective nll = [&](const Vector& t) {
        double acc = 0;
        for (double x : xs) acc += 0.5 * (x - t(0)) * (x - t(0));
        return acc;
    };
    const VectorObjective per_obs = [&](const Vector& t) {
        Vector v(n);
        for (int i = 0; i < n; ++i) v(i) = 0.5 * (xs[i] - t(0)) * (xs[i] - t(0));
        return v;
    };
    Vector at(1);
    at << mean;
    const InferenceResult plain = standard_errors(nll, at);
    const InferenceResult robust = sandwich_standard_errors(nll, per_obs, at);
    // uniform noise: variance differs from 1, so the sandwich rescales by
    // roughly sd^2; only check it is finite, positive and in the right ballpark
    CHECK(robust.standard_errors(0) > 0.0);
    CHECK(robust.standard_errors(0) < plain.standard_errors(0));  // var(uniform) < 1
    CHECK(robust.estimates(0) == plain.estimates(0));
}
