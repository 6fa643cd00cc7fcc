#include "volspill/dcc.hpp"
#include "volspill/simulate.hpp"

#include "doctest.h"

#include <Eigen/Cholesky>

#include <cmath>

using namespace volspill;

namespace {

GarchParams simple_garch(double omega, double alpha, double beta) {
    GarchParams p;
    p.omega = omega;
    p.alpha = alpha;
    p.beta = beta;
    return p;
}

}  // namespace

TEST_CASE("correlation recursion matches the hand computation") {
    Matrix z(3, 2);
    z << 1.0, 1.0, -0.5, 0.8, 0.3, -0.2;
    Matrix qbar(2, 2);
    qbar << 1.0, 0.5, 0.5, 1.0;
    DccParams p;
    p.theta = 0.02;
    p.eta = 0.97;

    const DccFilterOutput f = dcc_filter(p, z, qbar);
    REQUIRE(f.correlations.size() == 3);
    // R_1 = qbar; Q_2 = 0.01*qbar + 0.02*z_1 z_1' + 0.97*Q_1 has unit diagonal
    CHECK(f.correlations[0](0, 1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(f.correlations[1](0, 1) == doctest::Approx(0.51).epsilon(1e-14));
    CHECK(f.correlations[1](0, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(f.correlations[2](1, 1) == doctest::Approx(1.0).epsilon(1e-15));

    CHECK(f.negloglik == doctest::Approx(-0.27666782910471155).epsilon(1e-13));
    CHECK(dcc_corr_negloglik(p, z, qbar) == doctest::Approx(f.negloglik).epsilon(1e-15));
}

TEST_CASE("filtered correlation matrices stay inside the cone") {
    SimRng rng(11);
    for (int rep = 0; rep < 20; ++rep) {
        const Eigen::Index T = 150, N = 3;
        Matrix z(T, N);
        for (Eigen::Index t = 0; t < T; ++t)
            for (Eigen::Index j = 0; j < N; ++j) z(t, j) = rng.normal();
        Matrix qbar = Matrix::Identity(N, N);
        qbar(0, 1) = qbar(1, 0) = 0.4;
        qbar(1, 2) = qbar(2, 1) = -0.2;
        DccParams p;
        p.theta = 0.05;
        p.eta = 0.90;
        const DccFilterOutput f = dcc_filter(p, z, qbar);
        for (const Matrix& r : f.correlations) {
            for (Eigen::Index i = 0; i < N; ++i)
                CHECK(r(i, i) == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(Eigen::LLT<Matrix>(r).info() == Eigen::Success);
            CHECK((r - r.transpose()).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("parameter validation") {
    DccParams p;
    p.theta = 0.02;
    p.eta = 0.97;
    CHECK_NOTHROW(p.validate());
    p.eta = 0.99;
    CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("below one"), std::invalid_argument);
    p.theta = -0.01;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("mean dynamic correlation summarises a series") {
    Vector rho(4);
    rho << 0.2, 0.4, 0.6, 0.4;
    const CorrelationStats s = mean_dynamic_correlation(rho);
    CHECK(s.mean == doctest::Approx(0.4).epsilon(1e-15));
    // sd with the n-1 divisor, z = mean / (sd / sqrt(n))
    const double sd = std::sqrt((0.04 + 0.0 + 0.04 + 0.0) / 3.0);
    CHECK(s.stddev == doctest::Approx(sd).epsilon(1e-12));
    CHECK(s.z == doctest::Approx(0.4 / (sd / 2.0)).epsilon(1e-12));
    CHECK(s.n == 4);

    Vector one(1);
    one << 0.3;
    CHECK_THROWS_AS(mean_dynamic_correlation(one), std::invalid_argument);
}

TEST_CASE("two-step estimation recovers simulated dynamics") {
    const std::vector<GarchParams> garch = {simple_garch(5e-6, 0.06, 0.90),
                                            simple_garch(8e-6, 0.09, 0.87)};
    Matrix qbar(2, 2);
    qbar << 1.0, 0.5, 0.5, 1.0;
    DccParams truth;
    truth.theta = 0.04;
    truth.eta = 0.93;
    const Matrix r = simulate_dcc_returns(garch, truth, qbar, 2500, 20220101);

    const DccFit fit = fit_dcc(r);
    CHECK(fit.converged);
    REQUIRE(fit.garch.size() == 2);
    CHECK(fit.parameter_names == std::vector<std::string>{"theta", "eta"});
    CHECK(std::abs(fit.params.theta + fit.params.eta - 0.97) < 0.08);
    CHECK(fit.params.theta > 0.0);

    // joint likelihood decomposes into the univariate and correlation parts
    double uni = 0.0;
    for (const GarchFit& g : fit.garch) uni += g.loglik;
    CHECK(fit.joint_loglik == doctest::Approx(uni + fit.corr_loglik).epsilon(1e-10));
    CHECK(fit.corr_loglik ==
          doctest::Approx(-dcc_corr_negloglik(fit.params, fit.std_residuals, fit.qbar))
              .epsilon(1e-8));

    // targeting matrix has unit diagonal and the sample cross moment off it
    CHECK(fit.qbar(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(fit.qbar(0, 1) - 0.5) < 0.1);

    REQUIRE(static_cast<Eigen::Index>(fit.correlations.size()) == fit.std_residuals.rows());
    const Vector rho = correlation_series(fit, 0, 1);
    CHECK(rho.size() == fit.std_residuals.rows());
    CHECK(rho.cwiseAbs().maxCoeff() <= 1.0);

    const Matrix h = dcc_covariance(fit, 10);
    CHECK(h(0, 1) == doctest::Approx(h(1, 0)).epsilon(1e-12));
    CHECK(h(0, 0) > 0.0);

    REQUIRE(fit.inference.estimates.size() == 2);
    CHECK(fit.inference.estimates(0) == doctest::Approx(fit.params.theta));
    CHECK(fit.inference.standard_errors.minCoeff() > 0.0);
}

TEST_CASE("pairwise estimation produces one fit per pair") {
    const std::vector<GarchParams> garch(3, simple_garch(5e-6, 0.05, 0.90));
    Matrix qbar = Matrix::Identity(3, 3);
    qbar(0, 1) = qbar(1, 0) = 0.6;
    qbar(0, 2) = qbar(2, 0) = 0.3;
    qbar(1, 2) = qbar(2, 1) = 0.2;
    DccParams truth;
    truth.theta = 0.03;
    truth.eta = 0.94;
    const Matrix r = simulate_dcc_returns(garch, truth, qbar, 1500, 5150);

    const std::vector<DccPairFit> pairs = fit_dcc_pairwise(r);
    REQUIRE(pairs.size() == 3);
    CHECK(pairs[0].i == 0);
    CHECK(pairs[0].j == 1);
    CHECK(pairs[2].i == 1);
    CHECK(pairs[2].j == 2);
    for (const DccPairFit& p : pairs) {
        CHECK(p.converged);
        CHECK(p.params.theta >= 0.0);
        CHECK(p.params.theta + p.params.eta < 1.0);
        CHECK(std::isfinite(p.corr.mean));
        CHECK(p.corr.n > 0);
    }
    // strongest targeted correlation shows up in the first pair
    CHECK(pairs[0].corr.mean > pairs[2].corr.mean);
}

TEST_CASE("estimation guards its input") {
    Matrix one_col = Matrix::Zero(400, 1);
    CHECK_THROWS_WITH_AS(fit_dcc(one_col), doctest::Contains("at least two series"),
                         std::invalid_argument);

    const std::vector<GarchParams> garch(2, simple_garch(5e-6, 0.05, 0.90));
    Matrix qbar(2, 2);
    qbar << 1.0, 0.2, 0.2, 1.0;
    DccParams p;
    p.theta = 0.02;
    p.eta = 0.95;
    Matrix r = simulate_dcc_returns(garch, p, qbar, 600, 8);
    r(5, 1) = std::nan("");
    CHECK_THROWS_WITH_AS(fit_dcc(r), doctest::Contains("univariate stage failed"),
                         std::runtime_error);
}
