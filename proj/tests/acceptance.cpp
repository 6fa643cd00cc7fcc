// End-to-end acceptance checks. Each criterion prints exactly one line:
//   [PASS] <n> <label> (<seconds>s)
//   [FAIL] <n> <label>: <reason>
// and the binary exits nonzero when any criterion fails. Tolerances are
// deliberately hard-coded next to the checks they guard.

#include "volspill/bekk.hpp"
#include "volspill/dcc.hpp"
#include "volspill/garch.hpp"
#include "volspill/panel.hpp"
#include "volspill/report.hpp"
#include "volspill/rolling.hpp"
#include "volspill/simulate.hpp"
#include "volspill/spillover.hpp"
#include "volspill/stats.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

using namespace volspill;

namespace {

struct Failure : std::runtime_error {
    explicit Failure(const std::string& msg) : std::runtime_error(msg) {}
};

void require(bool cond, const std::string& msg) {
    if (!cond) throw Failure(msg);
}

void require_close(double value, double expected, double tol, const std::string& what) {
    if (!(std::abs(value - expected) <= tol)) {
        std::ostringstream msg;
        msg.precision(12);
        msg << what << " = " << value << ", expected " << expected << " within " << tol;
        throw Failure(msg.str());
    }
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<std::string> make_names(int n) {
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back("m" + std::to_string(i + 1));
    return names;
}

int run_criterion(int id, const std::string& label, double budget_seconds,
                  const std::function<void()>& body) {
    const auto start = std::chrono::steady_clock::now();
    try {
        body();
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (elapsed >= budget_seconds) {
            std::printf("[FAIL] %d %s: took %.1fs, budget %.0fs\n", id, label.c_str(), elapsed,
                        budget_seconds);
            return 1;
        }
        std::printf("[PASS] %d %s (%.1fs)\n", id, label.c_str(), elapsed);
        return 0;
    } catch (const std::exception& e) {
        std::printf("[FAIL] %d %s: %s\n", id, label.c_str(), e.what());
        return 1;
    }
}

// ---------------------------------------------------------------- criterion 1

void five_market_margins() {
    Matrix pct(5, 5);
    pct << 69.49, 1.50, 10.35, 5.64, 13.02,
           1.93, 88.04, 3.11, 5.11, 1.80,
           8.34, 4.95, 70.50, 5.01, 11.20,
           5.12, 4.51, 7.02, 70.19, 13.16,
           9.70, 2.18, 10.21, 9.26, 68.65;
    const SpilloverTable t = build_spillover_table(fevd_from_percent(pct), make_names(5));

    const double from_ref[] = {30.51, 11.96, 29.50, 29.81, 31.35};
    const double to_ref[] = {25.10, 13.13, 30.69, 25.02, 39.18};
    for (int i = 0; i < 5; ++i) {
        require_close(t.from_others(i), from_ref[i], 0.02,
                      "from-others margin " + std::to_string(i + 1));
        require_close(t.to_others(i), to_ref[i], 0.02,
                      "to-others margin " + std::to_string(i + 1));
    }
    require_close(t.total, 26.63, 0.02, "total index");
}

// ---------------------------------------------------------------- criterion 2

void seven_market_margins() {
    Matrix pct(7, 7);
    pct << 94.22, 2.29, 0.22, 0.56, 0.66, 1.17, 0.88,
           0.68, 46.86, 4.12, 10.27, 15.72, 9.72, 12.63,
           0.26, 5.30, 46.32, 11.51, 10.52, 14.06, 12.03,
           0.56, 8.96, 7.23, 39.56, 16.19, 11.58, 15.93,
           0.36, 11.32, 6.35, 13.41, 33.68, 14.75, 20.13,
           0.51, 6.98, 8.48, 8.67, 13.00, 38.39, 23.97,
           0.53, 9.00, 6.25, 11.04, 17.43, 22.22, 33.53;
    const SpilloverTable t = build_spillover_table(fevd_from_percent(pct), make_names(7));
    require_close(t.total, 52.49, 0.02, "total index");
    require_close(t.from_others(0), 5.78, 0.02, "first market from-others");
}

// ---------------------------------------------------------------- criterion 3

void normality_statistic() {
    const double jb = jarque_bera(2877, -0.0028, 6.1062);
    const double expected = 1156.61;
    if (!(std::abs(jb - expected) <= 0.005 * expected)) {
        std::ostringstream msg;
        msg.precision(12);
        msg << "statistic " << jb << " not within 0.5% of " << expected;
        throw Failure(msg.str());
    }
}

// ---------------------------------------------------------------- criterion 4

// Decomposition recomputed with plain index loops, sharing nothing with the
// library implementation beyond the fitted coefficients.
void brute_force_decomposition(const VarFit& fit, int horizon, Matrix& raw, Matrix& normalized) {
    const int n = static_cast<int>(fit.sigma.rows());
    const int p = static_cast<int>(fit.phi.size());
    std::vector<Matrix> ma(static_cast<std::size_t>(horizon), Matrix::Zero(n, n));
    for (int i = 0; i < n; ++i) ma[0](i, i) = 1.0;
    for (int h = 1; h < horizon; ++h)
        for (int k = 1; k <= std::min(h, p); ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    for (int m = 0; m < n; ++m)
                        ma[static_cast<std::size_t>(h)](i, j) +=
                            fit.phi[static_cast<std::size_t>(k - 1)](i, m) *
                            ma[static_cast<std::size_t>(h - k)](m, j);

    raw = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        double mse = 0.0;
        for (int h = 0; h < horizon; ++h)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    mse += ma[static_cast<std::size_t>(h)](i, k) * fit.sigma(k, l) *
                           ma[static_cast<std::size_t>(h)](i, l);
        for (int j = 0; j < n; ++j) {
            double numer = 0.0;
            for (int h = 0; h < horizon; ++h) {
                double dot = 0.0;
                for (int k = 0; k < n; ++k)
                    dot += ma[static_cast<std::size_t>(h)](i, k) * fit.sigma(k, j);
                numer += dot * dot;
            }
            raw(i, j) = numer / (fit.sigma(j, j) * mse);
        }
    }
    normalized = raw;
    for (int i = 0; i < n; ++i) normalized.row(i) /= raw.row(i).sum();
}

void decomposition_oracles() {
    // white noise with correlated shocks: closed form
    VarFit fit;
    fit.lag = 1;
    fit.phi = {Matrix::Zero(2, 2)};
    fit.sigma = Matrix(2, 2);
    fit.sigma << 1.0, 0.5, 0.5, 1.0;
    fit.n_obs = 100;
    const FevdMatrix f = gfevd(fit, 1);
    require_close(f.normalized(0, 0), 0.8, 1e-10, "own share");
    require_close(f.normalized(0, 1), 0.2, 1e-10, "cross share");
    require_close(f.normalized(1, 0), 0.2, 1e-10, "cross share");
    require_close(f.normalized(1, 1), 0.8, 1e-10, "own share");
    const SpilloverTable t = build_spillover_table(f, make_names(2));
    require_close(t.total, 20.0, 1e-10, "total index");

    // a fitted bivariate system against the explicit expansion
    VarProcess proc;
    proc.intercept = Vector::Constant(2, 0.3);
    proc.phi = {Matrix(2, 2)};
    proc.phi[0] << 0.5, 0.15, 0.1, 0.4;
    proc.sigma = Matrix(2, 2);
    proc.sigma << 1.0, 0.4, 0.4, 0.8;
    const Matrix y = simulate_var_path(proc, 600, 20240801);
    const VarFit est = fit_var(y, 1);
    const FevdMatrix lib = gfevd(est, 10);
    Matrix raw, normalized;
    brute_force_decomposition(est, 10, raw, normalized);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            require_close(lib.raw(i, j), raw(i, j), 1e-10, "raw share");
            require_close(lib.normalized(i, j), normalized(i, j), 1e-10, "normalized share");
        }
}

// ---------------------------------------------------------------- criterion 5

void volatility_recovery() {
    GarchParams truth;
    truth.omega = 1e-6;
    truth.alpha = 0.05;
    truth.beta = 0.90;
    std::vector<double> err_alpha, err_beta;
    for (int k = 0; k < 50; ++k) {
        const Vector r = simulate_garch_returns(truth, 5000, 9000 + static_cast<std::uint64_t>(k));
        const GarchFit fit = fit_garch11(r);
        require(fit.converged, "path " + std::to_string(k) + " did not converge");
        err_alpha.push_back(std::abs(fit.params.alpha - truth.alpha));
        err_beta.push_back(std::abs(fit.params.beta - truth.beta));
    }
    require_close(median(err_alpha), 0.0, 0.02, "median alpha error");
    require_close(median(err_beta), 0.0, 0.03, "median beta error");
}

// ---------------------------------------------------------------- criterion 6

void correlation_recovery() {
    std::vector<GarchParams> garch(2);
    for (GarchParams& g : garch) {
        g.omega = 1e-6;
        g.alpha = 0.05;
        g.beta = 0.90;
    }
    Matrix qbar(2, 2);
    qbar << 1.0, 0.5, 0.5, 1.0;
    DccParams truth;
    truth.theta = 0.02;
    truth.eta = 0.97;

    std::vector<double> err;
    for (int k = 0; k < 50; ++k) {
        const Matrix r =
            simulate_dcc_returns(garch, truth, qbar, 3000, 40000 + static_cast<std::uint64_t>(k));
        const DccFit fit = fit_dcc(r);
        err.push_back(std::abs(fit.params.theta + fit.params.eta - 0.99));
        for (const Matrix& rho : fit.correlations) {
            for (int i = 0; i < 2; ++i)
                require(std::abs(rho(i, i) - 1.0) <= 1e-8,
                        "path " + std::to_string(k) + ": correlation diagonal drifted");
            require(Eigen::LLT<Matrix>(rho).info() == Eigen::Success,
                    "path " + std::to_string(k) + ": correlation matrix not positive definite");
        }
    }
    require_close(median(err), 0.0, 0.05, "median persistence error");
}

// ---------------------------------------------------------------- criterion 7

void transmission_power() {
    BekkParams truth;
    truth.mu = Vector::Zero(2);
    truth.a = Matrix(2, 2);
    truth.a << 0.3, 0.0, 0.15, 0.3;  // second series drives the first
    truth.b = 0.9 * Matrix::Identity(2, 2);
    const Matrix m = Matrix::Identity(2, 2) - truth.a.transpose() * truth.a -
                     truth.b.transpose() * truth.b;
    truth.c = Eigen::LLT<Matrix>(m).matrixL();

    int detected = 0;
    const int n_paths = 20;
    for (int k = 0; k < n_paths; ++k) {
        const Matrix r =
            simulate_bekk_returns(truth, 4000, 70000 + static_cast<std::uint64_t>(k));
        const BekkFit fit = fit_bekk(r);
        for (const Matrix& h : fit.cond_covariance)
            require(Eigen::LLT<Matrix>(h).info() == Eigen::Success,
                    "path " + std::to_string(k) + ": covariance not positive definite");
        for (const SpilloverDirection& d : classify_directions(fit, 0.05))
            if (d.from == 1 && d.to == 0 && d.significant) ++detected;
    }
    require(detected >= (7 * n_paths) / 10,
            "planted direction detected in only " + std::to_string(detected) + "/" +
                std::to_string(n_paths) + " paths");

    // single-series runs must collapse to the univariate recursion
    GarchParams g;
    g.omega = 5e-6;
    g.alpha = 0.07;
    g.beta = 0.90;
    const Vector r1 = simulate_garch_returns(g, 2000, 31337);
    BekkParams uni;
    uni.mu = Vector::Zero(1);
    uni.c = Matrix::Constant(1, 1, std::sqrt(g.omega));
    uni.a = Matrix::Constant(1, 1, std::sqrt(g.alpha));
    uni.b = Matrix::Constant(1, 1, std::sqrt(g.beta));
    const GarchFilterOutput gf = garch_filter(g, r1);
    const BekkFilterOutput bf = bekk_filter(uni, r1);
    for (Eigen::Index t = 0; t < gf.cond_variance.size(); ++t) {
        const double diff =
            std::abs(bf.cond_covariance[static_cast<std::size_t>(t)](0, 0) - gf.cond_variance(t));
        require(diff <= 1e-12 * std::max(1.0, std::abs(gf.cond_variance(t))),
                "univariate parity broke at t=" + std::to_string(t));
    }
}

// ---------------------------------------------------------------- criterion 8

VolatilityPanel synthetic_panel(Eigen::Index T, int n, std::uint64_t seed) {
    VarProcess p;
    p.intercept = Vector::Constant(n, 8.0);
    Matrix phi = Matrix::Constant(n, n, 0.05);
    phi.diagonal().setConstant(0.35);
    p.phi = {phi};
    p.sigma = Matrix::Constant(n, n, 0.3);
    p.sigma.diagonal().setConstant(1.0);

    VolatilityPanel panel;
    panel.vol = simulate_var_path(p, T, seed).cwiseAbs();
    panel.dates = trading_dates("2015-01-05", T);
    panel.names = make_names(n);
    return panel;
}

void rolling_engine() {
    const VolatilityPanel panel = synthetic_panel(952, 5, 1212);
    RollingConfig cfg;
    cfg.window = 104;
    cfg.horizon = 10;
    cfg.lag = 4;
    cfg.step = 1;
    const RollingSeries s = rolling_spillover(panel, cfg);
    require(s.n_windows() == 849,
            "expected 849 windows, got " + std::to_string(s.n_windows()));
    require(s.n_ok() == 849, "some windows failed");

    for (int c = 0; c < 10; ++c) {
        const Eigen::Index k = c * 848 / 9;
        const Matrix slice = panel.vol.middleRows(k, cfg.window);
        const SpilloverTable t = build_spillover_table(
            gfevd(fit_var(slice, cfg.lag, cfg.var), cfg.horizon, cfg.scaling), panel.names);
        require_close(s.total(k), t.total, 1e-12, "window total");
        for (int i = 0; i < 5; ++i) {
            require_close(s.to(k, i), t.to_others(i), 1e-12, "window to-others");
            require_close(s.from(k, i), t.from_others(i), 1e-12, "window from-others");
            require_close(s.net(k, i), t.net(i), 1e-12, "window net");
        }
        require((s.pairwise[static_cast<std::size_t>(k)] - t.net_pairwise)
                    .cwiseAbs()
                    .maxCoeff() <= 1e-12,
                "window pairwise block diverged");
    }
}

// ---------------------------------------------------------------- criterion 9

void property_suite() {
    SimRng meta(7777);

    // decomposition identities on randomized stable systems
    for (int c = 0; c < 200; ++c) {
        const int n = 2 + static_cast<int>(meta.uniform() * 3.0);  // 2..4
        VarProcess proc;
        proc.intercept = Vector::Constant(n, 1.0);
        Matrix phi = Matrix::Constant(n, n, 0.03 + 0.04 * meta.uniform());
        phi.diagonal().setConstant(0.2 + 0.25 * meta.uniform());
        proc.phi = {phi};
        proc.sigma = Matrix::Constant(n, n, 0.4 * meta.uniform());
        proc.sigma.diagonal().setConstant(1.0);
        const Matrix y = simulate_var_path(proc, 90, 500000 + static_cast<std::uint64_t>(c));

        const int lag = 1 + (c % 2);
        const int horizon = 5 + 5 * (c % 2);
        const VarFit fit = fit_var(y, lag);
        const FevdMatrix f = gfevd(fit, horizon);
        for (int i = 0; i < n; ++i)
            require(std::abs(f.normalized.row(i).sum() - 1.0) <= 1e-10,
                    "case " + std::to_string(c) + ": row sum broke");

        const SpilloverTable t = build_spillover_table(f, make_names(n));
        require(std::abs(t.net.sum()) <= 1e-9, "case " + std::to_string(c) + ": net sum broke");
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                require(t.net_pairwise(i, j) == -t.net_pairwise(j, i),
                        "case " + std::to_string(c) + ": antisymmetry broke");

        // rotating the columns must not move the total index
        Matrix rotated(y.rows(), n);
        for (int j = 0; j < n; ++j) rotated.col(j) = y.col((j + 1) % n);
        const SpilloverTable rt =
            build_spillover_table(gfevd(fit_var(rotated, lag), horizon), make_names(n));
        require(std::abs(rt.total - t.total) <= 1e-9,
                "case " + std::to_string(c) + ": total index moved under reordering");
    }

    // variance recursion stays positive for any admissible parameters
    for (int c = 0; c < 200; ++c) {
        GarchParams p;
        p.omega = 1e-6 + 1e-4 * meta.uniform();
        p.alpha = 0.3 * meta.uniform();
        p.beta = (0.98 - p.alpha) * meta.uniform();
        Vector r(300);
        for (Eigen::Index t = 0; t < r.size(); ++t) r(t) = 0.01 * meta.normal();
        const GarchFilterOutput f = garch_filter(p, r);
        require(f.cond_variance.minCoeff() > 0.0,
                "case " + std::to_string(c) + ": variance path hit zero");
    }

    // log returns ignore any common price rescaling
    for (int c = 0; c < 200; ++c) {
        PricePanel panel;
        panel.names = {"a", "b"};
        panel.dates = trading_dates("2016-01-04", 40);
        panel.close = Matrix(40, 2);
        panel.high = Matrix(40, 2);
        panel.low = Matrix(40, 2);
        for (Eigen::Index t = 0; t < 40; ++t)
            for (Eigen::Index j = 0; j < 2; ++j) {
                const double close = 100.0 * std::exp(0.02 * meta.normal());
                const double spread = 0.01 + 0.02 * meta.uniform();
                panel.close(t, j) = close;
                (*panel.high)(t, j) = close * std::exp(spread);
                (*panel.low)(t, j) = close * std::exp(-spread);
            }
        PricePanel scaled = panel;
        const double factor = std::exp(4.0 * meta.uniform() - 2.0);
        scaled.close *= factor;
        *scaled.high *= factor;
        *scaled.low *= factor;

        const Matrix r1 = log_returns(panel).returns;
        const Matrix r2 = log_returns(scaled).returns;
        require((r1 - r2).cwiseAbs().maxCoeff() <= 1e-12,
                "case " + std::to_string(c) + ": returns moved under rescaling");
        const Matrix v1 = range_volatility(panel).vol;
        const Matrix v2 = range_volatility(scaled).vol;
        require((v1 - v2).cwiseAbs().maxCoeff() <= 1e-12 * v1.maxCoeff(),
                "case " + std::to_string(c) + ": range volatility moved under rescaling");
    }

    // parallel evaluation serializes to the same bytes as sequential
    for (int c = 0; c < 200; ++c) {
        const VolatilityPanel panel =
            synthetic_panel(70, 2, 820000 + static_cast<std::uint64_t>(c));
        RollingConfig cfg;
        cfg.window = 40;
        cfg.horizon = 5;
        cfg.lag = 1;
        cfg.threads = 1;
        const std::string seq = rolling_series_csv(rolling_spillover(panel, cfg));
        cfg.threads = 3;
        const std::string par = rolling_series_csv(rolling_spillover(panel, cfg));
        require(seq == par, "case " + std::to_string(c) + ": parallel run serialized differently");
    }
}

// --------------------------------------------------------------- criterion 10

void range_volatility_spot() {
    PricePanel panel;
    panel.names = {"spot"};
    panel.dates = {"2020-06-01"};
    panel.close = Matrix::Constant(1, 1, 105.0);
    panel.high = Matrix::Constant(1, 1, 110.0);
    panel.low = Matrix::Constant(1, 1, 100.0);
    const VolatilityPanel vol = range_volatility(panel, 0.361, 365);
    require_close(vol.vol(0, 0), 109.41, 0.01, "annualized percent volatility");
}

}  // namespace

int main() {
    int failures = 0;
    failures += run_criterion(1, "five-market reference decomposition margins", 1.0,
                              five_market_margins);
    failures += run_criterion(2, "seven-market reference decomposition margins", 1.0,
                              seven_market_margins);
    failures += run_criterion(3, "normality statistic at reference moments", 1.0,
                              normality_statistic);
    failures += run_criterion(4, "closed-form and brute-force variance decompositions", 1.0,
                              decomposition_oracles);
    failures += run_criterion(5, "volatility-recursion parameter recovery", 120.0,
                              volatility_recovery);
    failures += run_criterion(6, "correlation-dynamics parameter recovery", 300.0,
                              correlation_recovery);
    failures += run_criterion(7, "cross-market transmission detection power", 900.0,
                              transmission_power);
    failures += run_criterion(8, "rolling engine window count and slice equivalence", 60.0,
                              rolling_engine);
    failures += run_criterion(9, "randomized property suite", 120.0, property_suite);
    failures += run_criterion(10, "range volatility spot value", 1.0, range_volatility_spot);

    std::printf("criteria passed: %d/10\n", 10 - failures);
    return failures == 0 ? 0 : 1;
}
