#include "volspill/rolling.hpp"
#include "volspill/simulate.hpp"

#include "doctest.h"

#include <cmath>

using namespace volspill;

namespace {

VolatilityPanel test_panel(Eigen::Index T, Eigen::Index N, std::uint64_t seed) {
    VarProcess p;
    p.intercept = Vector::Constant(N, 10.0);
    Matrix phi = Matrix::Constant(N, N, 0.05);
    phi.diagonal().setConstant(0.35);
    p.phi = {phi};
    p.sigma = Matrix::Constant(N, N, 0.2);
    p.sigma.diagonal().setConstant(1.0);

    VolatilityPanel panel;
    panel.vol = simulate_var_path(p, T, seed).cwiseAbs();
    panel.dates = trading_dates("2017-01-02", T);
    panel.names.reserve(static_cast<std::size_t>(N));
    for (Eigen::Index i = 0; i < N; ++i) panel.names.push_back("m" + std::to_string(i + 1));
    return panel;
}

RollingConfig small_config() {
    RollingConfig c;
    c.window = 60;
    c.lag = 1;
    c.horizon = 5;
    c.step = 1;
    c.threads = 1;
    return c;
}

}  // namespace

TEST_CASE("window count, dating, and slice equivalence") {
    const VolatilityPanel panel = test_panel(160, 2, 8221);
    const RollingConfig cfg = small_config();
    const RollingSeries s = rolling_spillover(panel, cfg);

    REQUIRE(s.n_windows() == 101);  // (160 - 60) / 1 + 1
    CHECK(s.n_ok() == 101);
    CHECK(s.names == panel.names);
    CHECK(s.dates.front() == panel.dates[59]);
    CHECK(s.dates.back() == panel.dates[159]);
    CHECK(s.dates[40] == panel.dates[99]);

    // any window must agree with a standalone run on the same rows
    for (Eigen::Index k : {Eigen::Index(0), Eigen::Index(47), Eigen::Index(100)}) {
        const Matrix slice = panel.vol.middleRows(k, cfg.window);
        const VarFit fit = fit_var(slice, cfg.lag, cfg.var);
        const SpilloverTable t =
            build_spillover_table(gfevd(fit, cfg.horizon, cfg.scaling), panel.names);
        CHECK(s.total(k) == doctest::Approx(t.total).epsilon(1e-12));
        CHECK(s.to(k, 0) == doctest::Approx(t.to_others(0)).epsilon(1e-12));
        CHECK(s.from(k, 1) == doctest::Approx(t.from_others(1)).epsilon(1e-12));
        CHECK(s.net(k, 0) == doctest::Approx(t.net(0)).epsilon(1e-12));
        CHECK(s.pairwise[static_cast<std::size_t>(k)](0, 1) ==
              doctest::Approx(t.net_pairwise(0, 1)).epsilon(1e-12));
    }
}

TEST_CASE("stride controls the number of windows") {
    const VolatilityPanel panel = test_panel(160, 2, 8221);
    RollingConfig cfg = small_config();
    cfg.step = 7;
    const RollingSeries s = rolling_spillover(panel, cfg);
    REQUIRE(s.n_windows() == 15);  // floor(100 / 7) + 1
    CHECK(s.dates[1] == panel.dates[7 + 59]);
    CHECK(s.n_ok() == 15);
}

TEST_CASE("thread count never changes the numbers") {
    const VolatilityPanel panel = test_panel(140, 3, 515151);
    RollingConfig cfg = small_config();
    cfg.threads = 1;
    const RollingSeries a = rolling_spillover(panel, cfg);
    cfg.threads = 4;
    const RollingSeries b = rolling_spillover(panel, cfg);

    REQUIRE(a.n_windows() == b.n_windows());
    for (Eigen::Index k = 0; k < a.n_windows(); ++k) {
        CHECK(a.total(k) == b.total(k));  // bitwise, not approximate
        CHECK((a.to.row(k) == b.to.row(k)));
        CHECK((a.net.row(k) == b.net.row(k)));
        CHECK(a.pairwise[static_cast<std::size_t>(k)] == b.pairwise[static_cast<std::size_t>(k)]);
    }
    CHECK(a.dates == b.dates);
}

TEST_CASE("failed windows become gaps instead of aborting the run") {
    VolatilityPanel panel = test_panel(160, 2, 939);
    // series 2 flat across rows [10, 80): the intercept absorbs it and OLS
    // loses rank in every window fully inside the span
    for (Eigen::Index t = 10; t < 80; ++t) panel.vol(t, 1) = 1.0;

    const RollingConfig cfg = small_config();
    const RollingSeries s = rolling_spillover(panel, cfg);
    REQUIRE(s.n_windows() == 101);
    // windows 10..20 are rank deficient; 9 and 21 brush the span edges (a
    // perfectly fitted equation at 9, a constant lagged regressor at 21)
    CHECK(s.n_ok() == 88);

    CHECK(s.ok[15] == 0);
    CHECK(std::isnan(s.total(15)));
    CHECK(std::isnan(s.to(15, 0)));
    CHECK(std::isnan(s.pairwise[15](0, 1)));
    CHECK(!s.gap_reasons[15].empty());
    CHECK(s.gap_reasons[15].find("rank deficient") != std::string::npos);
    CHECK(!s.dates[15].empty());  // gaps keep their end dates

    CHECK(s.ok[8] == 1);
    CHECK(s.ok[22] == 1);
    CHECK(std::isfinite(s.total(8)));
}

TEST_CASE("a run with no usable window throws") {
    VolatilityPanel panel = test_panel(70, 2, 41);
    panel.vol.col(1).setConstant(2.5);
    CHECK_THROWS_WITH_AS(rolling_spillover(panel, small_config()),
                         doctest::Contains("every window failed"), std::runtime_error);
}

TEST_CASE("configuration validation") {
    const VolatilityPanel panel = test_panel(160, 2, 7);

    VolatilityPanel narrow = panel;
    narrow.vol = panel.vol.leftCols(1);
    narrow.names.resize(1);
    CHECK_THROWS_WITH_AS(rolling_spillover(narrow, small_config()),
                         doctest::Contains("at least two series"), std::invalid_argument);

    RollingConfig cfg = small_config();
    cfg.step = 0;
    CHECK_THROWS_WITH_AS(rolling_spillover(panel, cfg), doctest::Contains("step"),
                         std::invalid_argument);

    cfg = small_config();
    cfg.window = 12;  // 2 series, lag 1 needs more than 12 rows
    CHECK_THROWS_WITH_AS(rolling_spillover(panel, cfg), doctest::Contains("too short for lag"),
                         std::invalid_argument);

    cfg = small_config();
    cfg.window = 200;
    CHECK_THROWS_WITH_AS(rolling_spillover(panel, cfg), doctest::Contains("-day window"),
                         std::invalid_argument);

    cfg = small_config();
    cfg.horizon = 0;
    CHECK_THROWS_AS(rolling_spillover(panel, cfg), std::invalid_argument);
}

TEST_CASE("per-window lag selection stays within bounds") {
    const VolatilityPanel panel = test_panel(150, 2, 220022);
    RollingConfig cfg = small_config();
    cfg.select_lag_per_window = true;
    cfg.max_lag = 3;
    const RollingSeries s = rolling_spillover(panel, cfg);
    CHECK(s.n_ok() == s.n_windows());
    CHECK(s.total.maxCoeff() < 100.0);
    CHECK(s.total.minCoeff() >= 0.0);
}

TEST_CASE("range summary reports extrema with their dates") {
    const VolatilityPanel panel = test_panel(160, 2, 8221);
    RollingSeries s = rolling_spillover(panel, small_config());
    const std::vector<RangeSummary> sum = summarize_range(s);

    REQUIRE(sum.size() == 1 + 3 * 2);  // total, then to/from/net per market
    CHECK(sum[0].measure == "total");
    CHECK(sum[0].market == "");
    CHECK(sum[0].n == s.n_windows());

    Eigen::Index arg_min = 0, arg_max = 0;
    s.total.minCoeff(&arg_min);
    s.total.maxCoeff(&arg_max);
    CHECK(sum[0].min_value == doctest::Approx(s.total(arg_min)));
    CHECK(sum[0].max_value == doctest::Approx(s.total(arg_max)));
    CHECK(sum[0].min_date == s.dates[static_cast<std::size_t>(arg_min)]);
    CHECK(sum[0].max_date == s.dates[static_cast<std::size_t>(arg_max)]);
    CHECK(sum[0].mean == doctest::Approx(s.total.mean()).epsilon(1e-12));

    bool saw_to_m2 = false;
    for (const RangeSummary& r : sum)
        if (r.measure == "to" && r.market == "m2") saw_to_m2 = true;
    CHECK(saw_to_m2);

    // gaps are excluded from the count and the extrema
    VolatilityPanel gappy = test_panel(160, 2, 939);
    for (Eigen::Index t = 10; t < 80; ++t) gappy.vol(t, 1) = 1.0;
    const RollingSeries g = rolling_spillover(gappy, small_config());
    const std::vector<RangeSummary> gsum = summarize_range(g);
    CHECK(gsum[0].n == g.n_ok());
    CHECK(std::isfinite(gsum[0].min_value));

    RollingSeries empty;
    CHECK_THROWS_WITH_AS(summarize_range(empty), doctest::Contains("nothing to summarize"),
                         std::invalid_argument);
}
