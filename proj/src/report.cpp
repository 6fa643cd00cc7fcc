#include "volspill/report.hpp"

#include "volspill/csv.hpp"

#include "json.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace volspill {

std::string significance_stars(double p_value) {
    if (!std::isfinite(p_value)) return "";
    if (p_value < 0.01) return "***";
    if (p_value < 0.05) return "**";
    if (p_value < 0.10) return "*";
    return "";
}

std::string CsvStyle::cell(double v) const {
    return full_precision ? format_number_full(v) : format_number(v);
}

std::string stats_csv(const StatsReport& report, const CsvStyle& style) {
    std::ostringstream out;
    out << "series,mean,max,min,stddev,skewness,kurtosis,jarque_bera,jb_pvalue,adf_stat,"
           "adf_pvalue,adf_lags,observations\n";
    for (const SeriesStats& s : report.series) {
        out << s.name << ',' << style.cell(s.moments.mean) << ',' << style.cell(s.moments.max)
            << ',' << style.cell(s.moments.min) << ',' << style.cell(s.moments.stddev) << ','
            << style.cell(s.moments.skewness) << ',' << style.cell(s.moments.kurtosis) << ','
            << style.cell(s.jb) << ',' << style.cell(s.jb_p) << ','
            << style.cell(s.adf.statistic) << ',' << style.cell(s.adf.p_value) << ','
            << s.adf.lags << ',' << s.moments.n << '\n';
    }
    return out.str();
}

std::string coefficient_table_csv(const std::vector<std::string>& names,
                                  const InferenceResult& inference, const CsvStyle& style) {
    std::ostringstream out;
    out << "parameter,estimate,std_error,t_stat,p_value,stars\n";
    for (std::size_t i = 0; i < names.size(); ++i) {
        const Eigen::Index k = static_cast<Eigen::Index>(i);
        const double t = inference.t_statistics(k);
        const double p = normal_two_sided_p(t);
        out << names[i] << ',' << style.cell(inference.estimates(k)) << ','
            << style.cell(inference.standard_errors(k)) << ',' << style.cell(t) << ','
            << style.cell(p) << ',' << significance_stars(p) << '\n';
    }
    return out.str();
}

std::string spillover_table_csv(const SpilloverTable& table, const CsvStyle& style) {
    const Eigen::Index n = table.percent.rows();
    std::ostringstream out;
    out << "market";
    for (const std::string& name : table.names) out << ',' << name;
    out << ",from_others\n";
    for (Eigen::Index i = 0; i < n; ++i) {
        out << table.names[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < n; ++j) out << ',' << style.cell(table.percent(i, j));
        out << ',' << style.cell(table.from_others(i)) << '\n';
    }
    out << "to_others";
    for (Eigen::Index j = 0; j < n; ++j) out << ',' << style.cell(table.to_others(j));
    out << ',' << style.cell(table.total) << '\n';
    out << "including_own";
    for (Eigen::Index j = 0; j < n; ++j)
        out << ',' << style.cell(table.to_others(j) + table.percent(j, j));
    out << ",\n";
    return out.str();
}

std::string net_spillover_csv(const SpilloverTable& table, const CsvStyle& style) {
    std::ostringstream out;
    out << "market,to_others,from_others,net\n";
    for (Eigen::Index i = 0; i < table.net.size(); ++i) {
        out << table.names[static_cast<std::size_t>(i)] << ','
            << style.cell(table.to_others(i)) << ',' << style.cell(table.from_others(i)) << ','
            << style.cell(table.net(i)) << '\n';
    }
    return out.str();
}

std::string net_pairwise_csv(const SpilloverTable& table, const CsvStyle& style) {
    const Eigen::Index n = table.net_pairwise.rows();
    std::ostringstream out;
    out << "market";
    for (const std::string& name : table.names) out << ',' << name;
    out << '\n';
    for (Eigen::Index i = 0; i < n; ++i) {
        out << table.names[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < n; ++j) out << ',' << style.cell(table.net_pairwise(i, j));
        out << '\n';
    }
    return out.str();
}

std::string rolling_series_csv(const RollingSeries& series, const CsvStyle& style) {
    std::ostringstream out;
    out << "date,measure,market_i,market_j,value\n";
    const Eigen::Index n_win = series.n_windows();
    const Eigen::Index n_mkt = series.to.cols();
    for (Eigen::Index k = 0; k < n_win; ++k) {
        const std::string& date = series.dates[static_cast<std::size_t>(k)];
        out << date << ",total,,," << style.cell(series.total(k)) << '\n';
        for (Eigen::Index i = 0; i < n_mkt; ++i) {
            const std::string& name = series.names[static_cast<std::size_t>(i)];
            out << date << ",to," << name << ",," << style.cell(series.to(k, i)) << '\n';
            out << date << ",from," << name << ",," << style.cell(series.from(k, i)) << '\n';
            out << date << ",net," << name << ",," << style.cell(series.net(k, i)) << '\n';
        }
        const Matrix& pw = series.pairwise[static_cast<std::size_t>(k)];
        for (Eigen::Index i = 0; i < n_mkt; ++i)
            for (Eigen::Index j = 0; j < n_mkt; ++j) {
                if (i == j) continue;
                out << date << ",net_pairwise," << series.names[static_cast<std::size_t>(i)]
                    << ',' << series.names[static_cast<std::size_t>(j)] << ','
                    << style.cell(pw(i, j)) << '\n';
            }
    }
    return out.str();
}

std::string close_panel_csv(const PricePanel& panel) {
    std::ostringstream out;
    out << "date";
    for (const std::string& name : panel.names) out << ',' << name;
    out << '\n';
    for (Eigen::Index t = 0; t < panel.rows(); ++t) {
        out << panel.dates[static_cast<std::size_t>(t)];
        for (Eigen::Index j = 0; j < panel.cols(); ++j)
            out << ',' << format_number_full(panel.close(t, j));
        out << '\n';
    }
    return out.str();
}

std::string wide_panel_csv(const PricePanel& panel) {
    if (!panel.has_range())
        throw std::invalid_argument("panel: wide serialization needs high/low columns");
    std::ostringstream out;
    out << "date";
    for (const std::string& name : panel.names)
        out << ',' << name << "_close," << name << "_high," << name << "_low";
    out << '\n';
    for (Eigen::Index t = 0; t < panel.rows(); ++t) {
        out << panel.dates[static_cast<std::size_t>(t)];
        for (Eigen::Index j = 0; j < panel.cols(); ++j)
            out << ',' << format_number_full(panel.close(t, j)) << ','
                << format_number_full((*panel.high)(t, j)) << ','
                << format_number_full((*panel.low)(t, j));
        out << '\n';
    }
    return out.str();
}

std::string volatility_panel_csv(const VolatilityPanel& panel, const CsvStyle& style) {
    std::ostringstream out;
    out << "date";
    for (const std::string& name : panel.names) out << ',' << name;
    out << '\n';
    for (Eigen::Index t = 0; t < panel.vol.rows(); ++t) {
        out << panel.dates[static_cast<std::size_t>(t)];
        for (Eigen::Index j = 0; j < panel.vol.cols(); ++j)
            out << ',' << style.cell(panel.vol(t, j));
        out << '\n';
    }
    return out.str();
}

std::string manifest_json(const std::vector<ManifestEntry>& artifacts,
                          const std::vector<std::pair<std::string, std::string>>& config) {
    nlohmann::json j;
    j["artifacts"] = nlohmann::json::array();
    for (const ManifestEntry& a : artifacts)
        j["artifacts"].push_back({{"name", a.name}, {"path", a.path}});
    j["config"] = nlohmann::json::object();
    for (const auto& kv : config) j["config"][kv.first] = kv.second;
    return j.dump(2) + "\n";
}

}  // namespace volspill
