#pragma once

#include "volspill/panel.hpp"

namespace volspill {

double norm_pdf(double x);
double norm_cdf(double x);
/// Standard-normal quantile (inverse of norm_cdf), p in (0, 1).
double norm_ppf(double p);
/// Two-sided p-value for an asymptotically standard-normal statistic.
double normal_two_sided_p(double t);
/// Survival function of a chi-squared variate with 2 degrees of freedom.
double chi_squared_2_sf(double x);

/// Sample moments. Standard deviation uses the n-1 divisor; skewness and
/// kurtosis use the population (n) divisor; kurtosis is non-excess (normal = 3).
struct Moments {
    double mean = 0, max = 0, min = 0, stddev = 0, skewness = 0, kurtosis = 0;
    long n = 0;
};
Moments sample_moments(const Vector& x);

/// JB = n/6 * (S^2 + (K-3)^2 / 4) with K non-excess.
double jarque_bera(long n, double skewness, double kurtosis);

struct AdfConfig {
    int lags = -1;      // fixed lag order; negative selects by BIC
    int max_lags = -1;  // selection cap; negative uses floor(12 * (n/100)^0.25)
};

/// Augmented Dickey-Fuller regression with intercept, no trend.
struct AdfResult {
    double statistic = 0;
    double p_value = 1;
    int lags = 0;
    long n_obs = 0;  // observations entering the regression
};
AdfResult adf_test(const Vector& series, const AdfConfig& config = {});

/// MacKinnon (1994) approximate asymptotic p-value for the ADF t-statistic,
/// constant-only regression, one variable.
double mackinnon_p_value(double tau);

struct SeriesStats {
    std::string name;
    Moments moments;
    double jb = 0, jb_p = 1;
    AdfResult adf;
};

struct StatsReport {
    std::vector<SeriesStats> series;
};

/// Per-series descriptive and diagnostic statistics of a return panel.
/// Requires at least 30 observations per series.
StatsReport descriptive_stats(const ReturnPanel& returns, const AdfConfig& adf = {});

}  // namespace volspill
