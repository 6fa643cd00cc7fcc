// Command-line front end: loads daily price panels, runs the GARCH / DCC /
// BEKK estimators and the spillover-index pipeline, and writes CSV tables,
// SVG charts, and a manifest per run.

#include "volspill/bekk.hpp"
#include "volspill/csv.hpp"
#include "volspill/dcc.hpp"
#include "volspill/garch.hpp"
#include "volspill/panel.hpp"
#include "volspill/report.hpp"
#include "volspill/rolling.hpp"
#include "volspill/simulate.hpp"
#include "volspill/spillover.hpp"
#include "volspill/stats.hpp"
#include "volspill/svg.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace volspill;

namespace {

std::string sanitize(const std::string& name) {
    std::string out;
    for (char c : name)
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-') ? c : '_';
    return out.empty() ? std::string("series") : out;
}

std::string join_warnings(const std::vector<std::string>& warnings) {
    std::string out;
    for (const std::string& w : warnings) {
        if (!out.empty()) out += "; ";
        out += w;
    }
    for (char& c : out)
        if (c == ',' || c == '\n') c = ';';
    return out;
}

// Collects artifacts + the resolved configuration, then writes manifest.json.
struct OutputBundle {
    fs::path dir;
    bool sidecar = false;
    std::vector<ManifestEntry> entries;
    std::vector<std::pair<std::string, std::string>> config;

    void set(const std::string& key, const std::string& value) {
        config.emplace_back(key, value);
    }
    // without this overload string literals would decay to bool
    void set(const std::string& key, const char* value) { set(key, std::string(value)); }
    void set(const std::string& key, double value) { set(key, format_number_full(value)); }
    void set(const std::string& key, int value) { set(key, std::to_string(value)); }
    void set(const std::string& key, bool value) {
        set(key, std::string(value ? "true" : "false"));
    }

    void table(const std::string& name,
               const std::function<std::string(const CsvStyle&)>& render) {
        write_text_file(dir / name, render(CsvStyle{}));
        entries.push_back({name, name});
        if (sidecar) {
            const std::string full = name.substr(0, name.rfind('.')) + ".full.csv";
            write_text_file(dir / full, render(CsvStyle{true}));
            entries.push_back({full, full});
        }
    }
    void text(const std::string& name, const std::string& contents) {
        write_text_file(dir / name, contents);
        entries.push_back({name, name});
    }
    void finish() { write_text_file(dir / "manifest.json", manifest_json(entries, config)); }
};

struct InputOptions {
    std::string path;
    std::string schema = "auto";
    std::vector<std::string> series;

    PanelSchema panel_schema() const {
        PanelSchema s;
        if (schema == "close") s.layout = PanelLayout::CloseOnly;
        else if (schema == "companion") s.layout = PanelLayout::Companion;
        else if (schema == "wide") s.layout = PanelLayout::Wide;
        s.series = series;
        return s;
    }
};

struct VolOptions {
    double range_constant = 0.361;
    bool parkinson = false;
    int annualization_days = 365;
    double constant() const { return parkinson ? kParkinsonConstant : range_constant; }
};

void add_input_options(CLI::App* cmd, InputOptions& in) {
    cmd->add_option("-i,--input", in.path, "price panel CSV")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--panel-schema", in.schema, "panel layout")
        ->check(CLI::IsMember({"auto", "close", "companion", "wide"}))
        ->capture_default_str();
    cmd->add_option("--series", in.series, "subset / ordering of series names");
}

void add_output_options(CLI::App* cmd, OutputBundle& out, std::string& dir) {
    cmd->add_option("-o,--output", dir, "output directory")->capture_default_str();
    cmd->add_flag("--sidecar", out.sidecar, "also write full-precision .full.csv copies");
}

void add_vol_options(CLI::App* cmd, VolOptions& v) {
    cmd->add_option("--range-constant", v.range_constant,
                    "range-variance constant (0.361 by default)")
        ->capture_default_str();
    cmd->add_flag("--parkinson", v.parkinson, "use the exact Parkinson constant 1/(4 ln 2)");
    cmd->add_option("--annualization-days", v.annualization_days, "days per year")
        ->capture_default_str();
}

PricePanel load_panel(const InputOptions& in, OutputBundle& out) {
    out.set("input", in.path);
    out.set("panel_schema", in.schema);
    if (!in.series.empty()) {
        std::string joined;
        for (const std::string& s : in.series) joined += (joined.empty() ? "" : " ") + s;
        out.set("series", joined);
    }
    return load_price_panel(in.path, in.panel_schema());
}

VolatilityPanel make_vols(const PricePanel& panel, const VolOptions& v, OutputBundle& out) {
    if (!panel.has_range())
        throw std::runtime_error(
            "volatility analyses need high/low data; the loaded panel is close-only");
    out.set("range_constant", v.constant());
    out.set("annualization_days", v.annualization_days);
    return range_volatility(panel, v.constant(), v.annualization_days);
}

// ---- per-analysis drivers, shared between the subcommands and `all` ----

struct GarchCliOptions {
    GarchConfig config;
    void add(CLI::App* cmd) {
        cmd->add_option("--mean-lag", config.mean_lag, "AR order of the mean equation")
            ->capture_default_str();
        cmd->add_option("--stationarity-bound", config.stationarity_bound,
                        "upper bound on alpha + beta")
            ->capture_default_str();
        cmd->add_flag("--allow-igarch", config.allow_igarch,
                      "relax the stationarity bound to 1.2");
        cmd->add_option("--restarts", config.restarts, "extra jittered optimizer starts")
            ->capture_default_str();
        cmd->add_flag("--sandwich", config.sandwich, "robust (QML) standard errors");
    }
    void record(OutputBundle& out) const {
        out.set("mean_lag", config.mean_lag);
        out.set("stationarity_bound", config.stationarity_bound);
        out.set("allow_igarch", config.allow_igarch);
        out.set("restarts", config.restarts);
        out.set("sandwich", config.sandwich);
    }
};

void run_stats(const ReturnPanel& returns, const AdfConfig& adf, OutputBundle& out) {
    const StatsReport report = descriptive_stats(returns, adf);
    out.table("stats.csv", [&](const CsvStyle& s) { return stats_csv(report, s); });
}

void run_garch(const ReturnPanel& returns, const GarchCliOptions& opt, OutputBundle& out) {
    opt.record(out);
    std::ostringstream summary;
    summary << "series,loglik,persistence,converged,iterations,warnings\n";
    std::vector<LineChart> panels;
    for (Eigen::Index i = 0; i < returns.returns.cols(); ++i) {
        const std::string& name = returns.names[static_cast<std::size_t>(i)];
        const GarchFit fit = fit_garch11(returns.returns.col(i), opt.config);
        out.table("garch_" + sanitize(name) + ".csv", [&](const CsvStyle& s) {
            return coefficient_table_csv(fit.parameter_names, fit.inference, s);
        });
        summary << name << ',' << format_number(fit.loglik) << ','
                << format_number(fit.params.persistence()) << ','
                << (fit.converged ? "true" : "false") << ',' << fit.iterations << ','
                << join_warnings(fit.warnings) << '\n';

        LineChart chart;
        chart.title = name;
        chart.x_labels.assign(returns.dates.end() - fit.cond_variance.size(),
                              returns.dates.end());
        LineChart::Series s;
        s.name = "annualized vol (%)";
        s.values = (365.0 * fit.cond_variance.array()).sqrt().matrix() * 100.0;
        chart.series.push_back(std::move(s));
        panels.push_back(std::move(chart));
    }
    const std::string text = summary.str();
    out.table("garch_summary.csv", [text](const CsvStyle&) { return text; });
    out.text("garch_volatility.svg",
             render_small_multiples("Conditional volatility", panels,
                                    std::min<int>(3, static_cast<int>(panels.size()))));
}

void run_dcc(const ReturnPanel& returns, const GarchCliOptions& garch_opt, int restarts,
             bool sandwich, bool pairwise, OutputBundle& out) {
    DccConfig config;
    config.garch = garch_opt.config;
    config.restarts = restarts;
    config.sandwich = sandwich;
    garch_opt.record(out);
    out.set("dcc_restarts", restarts);
    out.set("pairwise", pairwise);

    if (pairwise) {
        const std::vector<DccPairFit> fits = fit_dcc_pairwise(returns.returns, config);
        std::ostringstream table;
        table << "market_i,market_j,theta,theta_t,eta,eta_t,mean_corr,corr_z,stars,converged\n";
        for (const DccPairFit& f : fits) {
            const double p = normal_two_sided_p(f.corr.z);
            table << returns.names[static_cast<std::size_t>(f.i)] << ','
                  << returns.names[static_cast<std::size_t>(f.j)] << ','
                  << format_number(f.params.theta) << ','
                  << format_number(f.inference.t_statistics(0)) << ','
                  << format_number(f.params.eta) << ','
                  << format_number(f.inference.t_statistics(1)) << ','
                  << format_number(f.corr.mean) << ',' << format_number(f.corr.z) << ','
                  << significance_stars(p) << ',' << (f.converged ? "true" : "false") << '\n';
        }
        const std::string text = table.str();
        out.table("dcc_pairwise.csv", [text](const CsvStyle&) { return text; });
        return;
    }

    const DccFit fit = fit_dcc(returns.returns, config);
    for (Eigen::Index i = 0; i < returns.returns.cols(); ++i) {
        const std::string& name = returns.names[static_cast<std::size_t>(i)];
        const GarchFit& g = fit.garch[static_cast<std::size_t>(i)];
        out.table("dcc_garch_" + sanitize(name) + ".csv", [&](const CsvStyle& s) {
            return coefficient_table_csv(g.parameter_names, g.inference, s);
        });
    }
    out.table("dcc.csv", [&](const CsvStyle& s) {
        return coefficient_table_csv(fit.parameter_names, fit.inference, s);
    });

    std::ostringstream summary;
    summary << "key,value\n";
    summary << "corr_loglik," << format_number(fit.corr_loglik) << '\n';
    summary << "joint_loglik," << format_number(fit.joint_loglik) << '\n';
    summary << "converged," << (fit.converged ? "true" : "false") << '\n';
    summary << "iterations," << fit.iterations << '\n';
    summary << "warnings," << join_warnings(fit.warnings) << '\n';
    const std::string summary_text = summary.str();
    out.table("dcc_summary.csv", [summary_text](const CsvStyle&) { return summary_text; });

    const Eigen::Index N = returns.returns.cols();
    std::ostringstream corr;
    corr << "market_i,market_j,mean_corr,stddev,z,p_value,stars\n";
    std::vector<LineChart> panels;
    const std::size_t offset = returns.dates.size() - fit.correlations.size();
    for (Eigen::Index i = 0; i < N; ++i)
        for (Eigen::Index j = i + 1; j < N; ++j) {
            const Vector rho = correlation_series(fit, static_cast<int>(i), static_cast<int>(j));
            const CorrelationStats cs = mean_dynamic_correlation(rho);
            const double p = normal_two_sided_p(cs.z);
            corr << returns.names[static_cast<std::size_t>(i)] << ','
                 << returns.names[static_cast<std::size_t>(j)] << ','
                 << format_number(cs.mean) << ',' << format_number(cs.stddev) << ','
                 << format_number(cs.z) << ',' << format_number(p) << ','
                 << significance_stars(p) << '\n';

            LineChart chart;
            chart.title = returns.names[static_cast<std::size_t>(i)] + " / " +
                          returns.names[static_cast<std::size_t>(j)];
            chart.x_labels.assign(returns.dates.begin() + static_cast<std::ptrdiff_t>(offset),
                                  returns.dates.end());
            chart.series.push_back({"correlation", rho});
            panels.push_back(std::move(chart));
        }
    const std::string corr_text = corr.str();
    out.table("dcc_correlations.csv", [corr_text](const CsvStyle&) { return corr_text; });
    out.text("dcc_correlations.svg",
             render_small_multiples("Dynamic conditional correlations", panels,
                                    std::min<int>(3, static_cast<int>(panels.size()))));
}

struct BekkCliOptions {
    BekkConfig config;
    double level = 0.05;
    void add(CLI::App* cmd) {
        cmd->add_flag("--diagonal", config.diagonal, "restrict A and B to diagonals");
        cmd->add_flag("--variance-targeting", config.variance_targeting,
                      "intercept implied by the sample covariance");
        cmd->add_option("--bekk-restarts", config.restarts, "extra optimizer starts")
            ->capture_default_str();
        cmd->add_flag("--force-dimension", config.force_dimension,
                      "allow full BEKK beyond 6 series");
        cmd->add_flag("--bekk-sandwich", config.sandwich, "robust standard errors");
        cmd->add_option("--level", level, "significance level for direction classification")
            ->capture_default_str();
    }
    void record(OutputBundle& out) const {
        out.set("diagonal", config.diagonal);
        out.set("variance_targeting", config.variance_targeting);
        out.set("bekk_restarts", config.restarts);
        out.set("level", level);
    }
};

void run_bekk(const ReturnPanel& returns, const BekkCliOptions& opt, OutputBundle& out) {
    opt.record(out);
    const BekkFit fit = fit_bekk(returns.returns, opt.config);
    out.table("bekk.csv", [&](const CsvStyle& s) {
        return coefficient_table_csv(fit.parameter_names, fit.inference, s);
    });

    std::ostringstream dir;
    dir << "from,to,a_t,b_t,significant\n";
    for (const SpilloverDirection& d : classify_directions(fit, opt.level)) {
        dir << returns.names[static_cast<std::size_t>(d.from)] << ','
            << returns.names[static_cast<std::size_t>(d.to)] << ',' << format_number(d.a_t)
            << ',' << format_number(d.b_t) << ',' << (d.significant ? "true" : "false") << '\n';
    }
    const std::string dir_text = dir.str();
    out.table("bekk_directions.csv", [dir_text](const CsvStyle&) { return dir_text; });

    std::ostringstream summary;
    summary << "key,value\n";
    summary << "loglik," << format_number(fit.loglik) << '\n';
    summary << "persistence," << format_number(fit.persistence) << '\n';
    summary << "converged," << (fit.converged ? "true" : "false") << '\n';
    summary << "iterations," << fit.iterations << '\n';
    summary << "warnings," << join_warnings(fit.warnings) << '\n';
    const std::string summary_text = summary.str();
    out.table("bekk_summary.csv", [summary_text](const CsvStyle&) { return summary_text; });
}

struct SpilloverCliOptions {
    int lags = 4;
    bool select_lags = false;
    int max_lags = 8;
    int horizon = 10;
    bool df_adjust = false;
    bool receiver_scaling = false;
    bool flip_pairwise = false;

    void add(CLI::App* cmd) {
        cmd->add_option("--lags", lags, "VAR lag order")->capture_default_str();
        cmd->add_flag("--select-lags", select_lags, "pick the lag by AIC");
        cmd->add_option("--max-lags", max_lags, "AIC search bound")->capture_default_str();
        cmd->add_option("--horizon", horizon, "forecast horizon H")->capture_default_str();
        cmd->add_flag("--df-adjust", df_adjust, "degrees-of-freedom adjusted covariance");
        cmd->add_flag("--receiver-scaling", receiver_scaling,
                      "scale shocks by the receiver variance instead of the source");
        cmd->add_flag("--flip-pairwise", flip_pairwise, "reverse the net-pairwise sign");
    }
    ShockScaling scaling() const {
        return receiver_scaling ? ShockScaling::ReceiverVariance : ShockScaling::SourceVariance;
    }
};

void run_spillover(const VolatilityPanel& vols, const SpilloverCliOptions& opt,
                   OutputBundle& out) {
    VarConfig vc;
    vc.df_adjust = opt.df_adjust;
    const int lag = opt.select_lags ? select_lag(vols.vol, opt.max_lags, vc) : opt.lags;
    out.set("lags", lag);
    out.set("lag_selection", opt.select_lags);
    out.set("horizon", opt.horizon);
    out.set("df_adjust", opt.df_adjust);
    out.set("receiver_scaling", opt.receiver_scaling);
    out.set("flip_pairwise", opt.flip_pairwise);

    const VarFit fit = fit_var(vols.vol, lag, vc);
    const FevdMatrix fevd = gfevd(fit, opt.horizon, opt.scaling());
    const SpilloverTable table = build_spillover_table(fevd, vols.names, opt.flip_pairwise);

    out.table("volatility.csv", [&](const CsvStyle& s) { return volatility_panel_csv(vols, s); });
    out.table("spillover_table.csv",
              [&](const CsvStyle& s) { return spillover_table_csv(table, s); });
    out.table("net_spillover.csv", [&](const CsvStyle& s) { return net_spillover_csv(table, s); });
    out.table("net_pairwise.csv", [&](const CsvStyle& s) { return net_pairwise_csv(table, s); });
    out.set("total_index", table.total);
    for (const std::string& w : fit.warnings) std::cerr << "warning: " << w << '\n';
}

struct RollingCliOptions {
    RollingConfig config;
    void add(CLI::App* cmd) {
        cmd->add_option("--window", config.window, "rolling window length (days)")
            ->capture_default_str();
        cmd->add_option("--step", config.step, "days between windows")->capture_default_str();
        cmd->add_option("--lags", config.lag, "VAR lag order")->capture_default_str();
        cmd->add_option("--horizon", config.horizon, "forecast horizon H")->capture_default_str();
        cmd->add_flag("--select-lags-per-window", config.select_lag_per_window,
                      "AIC lag choice inside each window");
        cmd->add_option("--max-lags", config.max_lag, "per-window AIC bound")
            ->capture_default_str();
        cmd->add_flag("--df-adjust", config.var.df_adjust,
                      "degrees-of-freedom adjusted covariance");
        cmd->add_flag("--flip-pairwise", config.flip_pairwise_sign,
                      "reverse the net-pairwise sign");
        cmd->add_option("--threads", config.threads, "worker threads (0 = hardware)")
            ->capture_default_str();
    }
    void record(OutputBundle& out) const {
        out.set("window", config.window);
        out.set("step", config.step);
        out.set("lags", config.lag);
        out.set("horizon", config.horizon);
        out.set("lag_selection_per_window", config.select_lag_per_window);
        out.set("df_adjust", config.var.df_adjust);
        out.set("flip_pairwise", config.flip_pairwise_sign);
    }
};

Vector pairwise_series(const RollingSeries& s, Eigen::Index i, Eigen::Index j) {
    Vector out(s.n_windows());
    for (Eigen::Index k = 0; k < out.size(); ++k)
        out(k) = s.pairwise[static_cast<std::size_t>(k)](i, j);
    return out;
}

void run_rolling(const VolatilityPanel& vols, const RollingCliOptions& opt, OutputBundle& out) {
    opt.record(out);
    const RollingSeries series = rolling_spillover(vols, opt.config);
    out.set("windows", static_cast<int>(series.n_windows()));
    out.set("windows_ok", static_cast<int>(series.n_ok()));

    out.table("rolling.csv", [&](const CsvStyle& s) { return rolling_series_csv(series, s); });

    std::ostringstream summary;
    summary << "measure,market,min,min_date,max,max_date,mean,windows\n";
    for (const RangeSummary& r : summarize_range(series)) {
        summary << r.measure << ',' << r.market << ',' << format_number(r.min_value) << ','
                << r.min_date << ',' << format_number(r.max_value) << ',' << r.max_date << ','
                << format_number(r.mean) << ',' << r.n << '\n';
    }
    const std::string summary_text = summary.str();
    out.table("rolling_summary.csv", [summary_text](const CsvStyle&) { return summary_text; });

    const Eigen::Index N = series.to.cols();
    {
        LineChart chart;
        chart.title = "Total volatility spillover (%)";
        chart.x_labels = series.dates;
        chart.series.push_back({"total", series.total});
        out.text("total_spillover.svg", render_line_chart(chart));
    }
    const auto multiples = [&](const Matrix& values, const std::string& title) {
        std::vector<LineChart> panels;
        for (Eigen::Index j = 0; j < N; ++j) {
            LineChart c;
            c.title = series.names[static_cast<std::size_t>(j)];
            c.x_labels = series.dates;
            c.series.push_back({"", values.col(j)});
            panels.push_back(std::move(c));
        }
        return render_small_multiples(title, panels, std::min<int>(3, static_cast<int>(N)));
    };
    out.text("directional_to.svg", multiples(series.to, "Directional spillover to others (%)"));
    out.text("directional_from.svg",
             multiples(series.from, "Directional spillover from others (%)"));
    out.text("net_spillover.svg", multiples(series.net, "Net spillover (%)"));
    {
        std::vector<LineChart> panels;
        for (Eigen::Index i = 0; i < N; ++i)
            for (Eigen::Index j = i + 1; j < N; ++j) {
                LineChart c;
                c.title = series.names[static_cast<std::size_t>(i)] + " -> " +
                          series.names[static_cast<std::size_t>(j)];
                c.x_labels = series.dates;
                c.series.push_back({"", pairwise_series(series, i, j)});
                panels.push_back(std::move(c));
            }
        out.text("net_pairwise.svg",
                 render_small_multiples("Net pairwise spillover (%)", panels,
                                        std::min<int>(3, static_cast<int>(panels.size()))));
    }
}

// ---- simulate ----

struct SimulateOptions {
    std::string model;
    int n = 1000;
    std::uint64_t seed = 12345;
    int n_series = 2;
    std::string file = "panel.csv";
    std::string start_date = "2015-01-05";
    // garch / dcc univariate pieces
    double phi0 = 0.0, omega = 5e-6, alpha = 0.05, beta = 0.90;
    // dcc
    double theta = 0.02, eta = 0.96, rho = 0.5;
    // bekk
    double bekk_a = 0.30, bekk_b = 0.92, a12 = 0.0;
    // var
    double var_diag = 0.4, var_cross = 0.1, var_rho = 0.3, vol_level = 20.0, vol_scale = 2.0;
    VolOptions vol;
};

GarchParams simulate_garch_params(const SimulateOptions& o) {
    GarchParams g;
    g.mean_intercept = o.phi0;
    g.ar.resize(0);
    g.omega = o.omega;
    g.alpha = o.alpha;
    g.beta = o.beta;
    return g;
}

void run_simulate(const SimulateOptions& o, OutputBundle& out) {
    out.set("model", o.model);
    out.set("n", o.n);
    out.set("seed", std::to_string(o.seed));
    out.set("start_date", o.start_date);

    PricePanel panel;
    if (o.model == "garch") {
        out.set("phi0", o.phi0);
        out.set("omega", o.omega);
        out.set("alpha", o.alpha);
        out.set("beta", o.beta);
        const Vector r = simulate_garch_returns(simulate_garch_params(o), o.n, o.seed);
        panel = price_panel_from_returns(r, {"s1"}, o.start_date);
    } else if (o.model == "dcc") {
        out.set("n_series", o.n_series);
        out.set("theta", o.theta);
        out.set("eta", o.eta);
        out.set("rho", o.rho);
        out.set("omega", o.omega);
        out.set("alpha", o.alpha);
        out.set("beta", o.beta);
        const int N = o.n_series;
        std::vector<GarchParams> garch(static_cast<std::size_t>(N), simulate_garch_params(o));
        const Matrix qbar =
            Matrix::Constant(N, N, o.rho) + (1.0 - o.rho) * Matrix::Identity(N, N);
        DccParams dcc;
        dcc.theta = o.theta;
        dcc.eta = o.eta;
        std::vector<std::string> names;
        for (int i = 0; i < N; ++i) names.push_back("s" + std::to_string(i + 1));
        const Matrix r = simulate_dcc_returns(garch, dcc, qbar, o.n, o.seed);
        panel = price_panel_from_returns(r, names, o.start_date);
    } else if (o.model == "bekk") {
        out.set("n_series", o.n_series);
        out.set("bekk_a", o.bekk_a);
        out.set("bekk_b", o.bekk_b);
        out.set("a12", o.a12);
        const int N = o.n_series;
        BekkParams p;
        p.mu = Vector::Zero(N);
        p.a = o.bekk_a * Matrix::Identity(N, N);
        p.b = o.bekk_b * Matrix::Identity(N, N);
        if (N >= 2) p.a(0, 1) = o.a12;
        const double unconditional = 1e-4;
        const double w = std::max(1e-3, 1.0 - o.bekk_a * o.bekk_a - o.bekk_b * o.bekk_b);
        p.c = std::sqrt(w * unconditional) * Matrix::Identity(N, N);
        std::vector<std::string> names;
        for (int i = 0; i < N; ++i) names.push_back("s" + std::to_string(i + 1));
        const Matrix r = simulate_bekk_returns(p, o.n, o.seed);
        panel = price_panel_from_returns(r, names, o.start_date);
    } else {  // var
        out.set("n_series", o.n_series);
        out.set("var_diag", o.var_diag);
        out.set("var_cross", o.var_cross);
        out.set("var_rho", o.var_rho);
        out.set("vol_level", o.vol_level);
        out.set("vol_scale", o.vol_scale);
        out.set("range_constant", o.vol.constant());
        out.set("annualization_days", o.vol.annualization_days);
        const int N = o.n_series;
        VarProcess proc;
        Matrix phi = o.var_diag * Matrix::Identity(N, N);
        for (int i = 0; i < N; ++i) phi(i, (i + 1) % N) += o.var_cross;
        proc.phi.push_back(phi);
        proc.sigma = o.vol_scale * o.vol_scale *
                     (Matrix::Constant(N, N, o.var_rho) +
                      (1.0 - o.var_rho) * Matrix::Identity(N, N));
        proc.intercept =
            (Matrix::Identity(N, N) - phi) * Vector::Constant(N, o.vol_level);
        std::vector<std::string> names;
        for (int i = 0; i < N; ++i) names.push_back("s" + std::to_string(i + 1));
        const Matrix path = simulate_var_path(proc, o.n, o.seed);
        const Matrix vols = path.cwiseAbs();
        panel = price_panel_from_volatility(vols, names, o.start_date, o.seed + 1,
                                            o.vol.constant(), o.vol.annualization_days);
    }

    const std::string text =
        panel.has_range() ? wide_panel_csv(panel) : close_panel_csv(panel);
    out.text(o.file, text);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"volatility spillover toolkit: GARCH(1,1), DCC, BEKK and "
                 "forecast-error-variance spillover indices on daily price panels"};
    app.set_config("--config", "", "key=value config file; command line wins");
    app.require_subcommand(1);

    // stats
    auto* c_stats = app.add_subcommand("stats", "descriptive statistics, JB and ADF tests");
    InputOptions stats_in;
    OutputBundle stats_out;
    std::string stats_dir = "out";
    AdfConfig adf;
    add_input_options(c_stats, stats_in);
    add_output_options(c_stats, stats_out, stats_dir);
    c_stats->add_option("--adf-lags", adf.lags, "fixed ADF lag order (negative = BIC)");
    c_stats->add_option("--adf-max-lags", adf.max_lags, "ADF BIC search bound");

    // garch
    auto* c_garch = app.add_subcommand("garch", "univariate GARCH(1,1) per series");
    InputOptions garch_in;
    OutputBundle garch_out;
    std::string garch_dir = "out";
    GarchCliOptions garch_opt;
    add_input_options(c_garch, garch_in);
    add_output_options(c_garch, garch_out, garch_dir);
    garch_opt.add(c_garch);

    // dcc
    auto* c_dcc = app.add_subcommand("dcc", "DCC-GARCH two-step estimation");
    InputOptions dcc_in;
    OutputBundle dcc_out;
    std::string dcc_dir = "out";
    GarchCliOptions dcc_garch_opt;
    int dcc_restarts = 4;
    bool dcc_sandwich = false, dcc_pairwise = false;
    add_input_options(c_dcc, dcc_in);
    add_output_options(c_dcc, dcc_out, dcc_dir);
    dcc_garch_opt.add(c_dcc);
    c_dcc->add_option("--dcc-restarts", dcc_restarts, "correlation-step starts")
        ->capture_default_str();
    c_dcc->add_flag("--dcc-sandwich", dcc_sandwich, "robust correlation-step errors");
    c_dcc->add_flag("--pairwise", dcc_pairwise, "re-estimate the correlation step per pair");

    // bekk
    auto* c_bekk = app.add_subcommand("bekk", "full BEKK(1,1) and direction classification");
    InputOptions bekk_in;
    OutputBundle bekk_out;
    std::string bekk_dir = "out";
    BekkCliOptions bekk_opt;
    add_input_options(c_bekk, bekk_in);
    add_output_options(c_bekk, bekk_out, bekk_dir);
    bekk_opt.add(c_bekk);

    // spillover
    auto* c_spill = app.add_subcommand("spillover", "full-sample spillover table");
    InputOptions spill_in;
    OutputBundle spill_out;
    std::string spill_dir = "out";
    VolOptions spill_vol;
    SpilloverCliOptions spill_opt;
    add_input_options(c_spill, spill_in);
    add_output_options(c_spill, spill_out, spill_dir);
    add_vol_options(c_spill, spill_vol);
    spill_opt.add(c_spill);

    // rolling
    auto* c_roll = app.add_subcommand("rolling", "rolling-window spillover series");
    InputOptions roll_in;
    OutputBundle roll_out;
    std::string roll_dir = "out";
    VolOptions roll_vol;
    RollingCliOptions roll_opt;
    add_input_options(c_roll, roll_in);
    add_output_options(c_roll, roll_out, roll_dir);
    add_vol_options(c_roll, roll_vol);
    roll_opt.add(c_roll);

    // simulate
    auto* c_sim = app.add_subcommand("simulate", "seeded synthetic panels from the model recursions");
    OutputBundle sim_out;
    std::string sim_dir = "out";
    SimulateOptions sim;
    c_sim->add_option("--model", sim.model, "garch | dcc | bekk | var")
        ->required()
        ->check(CLI::IsMember({"garch", "dcc", "bekk", "var"}));
    c_sim->add_option("-n,--observations", sim.n, "path length")->capture_default_str();
    c_sim->add_option("--seed", sim.seed, "RNG seed")->capture_default_str();
    c_sim->add_option("--n-series", sim.n_series, "series count (dcc/bekk/var)")
        ->capture_default_str();
    c_sim->add_option("--file", sim.file, "output CSV name")->capture_default_str();
    c_sim->add_option("--start-date", sim.start_date, "first trading date")
        ->capture_default_str();
    c_sim->add_option("--phi0", sim.phi0, "mean intercept")->capture_default_str();
    c_sim->add_option("--omega", sim.omega, "GARCH omega")->capture_default_str();
    c_sim->add_option("--alpha", sim.alpha, "GARCH alpha")->capture_default_str();
    c_sim->add_option("--beta", sim.beta, "GARCH beta")->capture_default_str();
    c_sim->add_option("--theta", sim.theta, "DCC theta")->capture_default_str();
    c_sim->add_option("--eta", sim.eta, "DCC eta")->capture_default_str();
    c_sim->add_option("--rho", sim.rho, "DCC targeting correlation")->capture_default_str();
    c_sim->add_option("--bekk-a", sim.bekk_a, "BEKK diagonal ARCH loading")
        ->capture_default_str();
    c_sim->add_option("--bekk-b", sim.bekk_b, "BEKK diagonal GARCH loading")
        ->capture_default_str();
    c_sim->add_option("--a12", sim.a12, "BEKK cross ARCH entry a(1,2)")->capture_default_str();
    c_sim->add_option("--var-diag", sim.var_diag, "VAR own-lag coefficient")
        ->capture_default_str();
    c_sim->add_option("--var-cross", sim.var_cross, "VAR cross-lag coefficient")
        ->capture_default_str();
    c_sim->add_option("--var-rho", sim.var_rho, "VAR innovation correlation")
        ->capture_default_str();
    c_sim->add_option("--vol-level", sim.vol_level, "mean annualized volatility (percent)")
        ->capture_default_str();
    c_sim->add_option("--vol-scale", sim.vol_scale, "VAR innovation scale")
        ->capture_default_str();
    add_vol_options(c_sim, sim.vol);
    add_output_options(c_sim, sim_out, sim_dir);

    // all
    auto* c_all = app.add_subcommand("all", "every analysis on one ranged panel");
    InputOptions all_in;
    OutputBundle all_out;
    std::string all_dir = "out";
    VolOptions all_vol;
    GarchCliOptions all_garch;
    BekkCliOptions all_bekk;
    SpilloverCliOptions all_spill;
    RollingCliOptions all_roll;
    AdfConfig all_adf;
    int all_dcc_restarts = 4;
    add_input_options(c_all, all_in);
    add_output_options(c_all, all_out, all_dir);
    add_vol_options(c_all, all_vol);
    all_garch.add(c_all);
    all_bekk.add(c_all);
    c_all->add_option("--lags", all_spill.lags, "VAR lag order")->capture_default_str();
    c_all->add_option("--horizon", all_spill.horizon, "forecast horizon H")
        ->capture_default_str();
    c_all->add_option("--window", all_roll.config.window, "rolling window length")
        ->capture_default_str();
    c_all->add_option("--threads", all_roll.config.threads, "rolling worker threads")
        ->capture_default_str();

    std::string active;
    try {
        app.parse(argc, argv);

        if (app.got_subcommand(c_stats)) {
            active = "stats";
            stats_out.dir = stats_dir;
            stats_out.set("command", "stats");
            const PricePanel panel = load_panel(stats_in, stats_out);
            run_stats(log_returns(panel), adf, stats_out);
            stats_out.finish();
        } else if (app.got_subcommand(c_garch)) {
            active = "garch";
            garch_out.dir = garch_dir;
            garch_out.set("command", "garch");
            const PricePanel panel = load_panel(garch_in, garch_out);
            run_garch(log_returns(panel), garch_opt, garch_out);
            garch_out.finish();
        } else if (app.got_subcommand(c_dcc)) {
            active = "dcc";
            dcc_out.dir = dcc_dir;
            dcc_out.set("command", "dcc");
            const PricePanel panel = load_panel(dcc_in, dcc_out);
            run_dcc(log_returns(panel), dcc_garch_opt, dcc_restarts, dcc_sandwich, dcc_pairwise,
                    dcc_out);
            dcc_out.finish();
        } else if (app.got_subcommand(c_bekk)) {
            active = "bekk";
            bekk_out.dir = bekk_dir;
            bekk_out.set("command", "bekk");
            const PricePanel panel = load_panel(bekk_in, bekk_out);
            run_bekk(log_returns(panel), bekk_opt, bekk_out);
            bekk_out.finish();
        } else if (app.got_subcommand(c_spill)) {
            active = "spillover";
            spill_out.dir = spill_dir;
            spill_out.set("command", "spillover");
            const PricePanel panel = load_panel(spill_in, spill_out);
            run_spillover(make_vols(panel, spill_vol, spill_out), spill_opt, spill_out);
            spill_out.finish();
        } else if (app.got_subcommand(c_roll)) {
            active = "rolling";
            roll_out.dir = roll_dir;
            roll_out.set("command", "rolling");
            const PricePanel panel = load_panel(roll_in, roll_out);
            run_rolling(make_vols(panel, roll_vol, roll_out), roll_opt, roll_out);
            roll_out.finish();
        } else if (app.got_subcommand(c_sim)) {
            active = "simulate";
            sim_out.dir = sim_dir;
            sim_out.set("command", "simulate");
            run_simulate(sim, sim_out);
            sim_out.finish();
        } else if (app.got_subcommand(c_all)) {
            active = "all";
            all_out.dir = all_dir;
            all_out.set("command", "all");
            const PricePanel panel = load_panel(all_in, all_out);
            const ReturnPanel returns = log_returns(panel);
            run_stats(returns, all_adf, all_out);
            run_garch(returns, all_garch, all_out);
            run_dcc(returns, all_garch, all_dcc_restarts, false, false, all_out);
            run_bekk(returns, all_bekk, all_out);
            const VolatilityPanel vols = make_vols(panel, all_vol, all_out);
            all_roll.config.lag = all_spill.lags;
            all_roll.config.horizon = all_spill.horizon;
            run_spillover(vols, all_spill, all_out);
            run_rolling(vols, all_roll, all_out);
            all_out.finish();
        }
        return 0;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << (active.empty() ? "cli" : active) << ": " << e.what() << '\n';
        return 1;
    }
}
