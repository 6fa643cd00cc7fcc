#include "volspill/panel.hpp"

#include "volspill/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <stdexcept>

namespace volspill {

namespace {

constexpr int kMinRows = 30;

bool all_digits(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

bool parse_cell(const std::string& cell, double& out) {
    if (cell.empty()) return false;
    char* end = nullptr;
    out = std::strtod(cell.c_str(), &end);
    return end == cell.c_str() + cell.size() && std::isfinite(out);
}

[[noreturn]] void bad_cell(const std::filesystem::path& path, std::size_t row, const std::string& column,
                           const std::string& what) {
    throw std::runtime_error(path.string() + ": row " + std::to_string(row) + ", column '" + column +
                             "': " + what);
}

struct RawSeries {
    std::string name;
    // date -> (close, high, low); high/low NaN when absent
    std::map<std::string, std::array<double, 3>> by_date;
    bool has_range = false;
};

void check_dates_increasing(const CsvTable& table, const std::filesystem::path& path) {
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const std::string& d = table.rows[r][0];
        if (!is_iso_date(d))
            bad_cell(path, r + 2, table.header[0], "'" + d + "' is not an ISO-8601 date");
        if (r > 0 && !(table.rows[r - 1][0] < d))
            bad_cell(path, r + 2, table.header[0], "dates must be strictly increasing");
    }
}

// Column triple for one series in a wide table.
struct WideColumns {
    int close = -1, high = -1, low = -1;
};

}  // namespace

// Howard Hinnant's civil-date algorithms; day 0 is 1970-01-01.
long day_number_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const long era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long>(doe) - 719468;
}

std::string iso_date_from_day_number(long z) {
    z += 719468;
    const long era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const long y = static_cast<long>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04ld-%02u-%02u", y + (m <= 2), m, d);
    return buf;
}

bool parse_iso_date(const std::string& s, int& year, int& month, int& day) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
    const std::string ys = s.substr(0, 4), ms = s.substr(5, 2), ds = s.substr(8, 2);
    if (!all_digits(ys) || !all_digits(ms) || !all_digits(ds)) return false;
    year = std::stoi(ys);
    month = std::stoi(ms);
    day = std::stoi(ds);
    if (month < 1 || month > 12 || day < 1 || day > 31) return false;
    return true;
}

bool is_iso_date(const std::string& s) {
    int y, m, d;
    return parse_iso_date(s, y, m, d);
}

void PricePanel::validate() const {
    const Eigen::Index t = rows(), n = cols();
    if (static_cast<Eigen::Index>(dates.size()) != t)
        throw std::runtime_error("panel: date count does not match row count");
    if (static_cast<Eigen::Index>(names.size()) != n)
        throw std::runtime_error("panel: name count does not match column count");
    if (high.has_value() != low.has_value())
        throw std::runtime_error("panel: high and low must be present together");
    for (std::size_t r = 1; r < dates.size(); ++r)
        if (!(dates[r - 1] < dates[r]))
            throw std::runtime_error("panel: dates not strictly increasing at " + dates[r]);
    for (Eigen::Index r = 0; r < t; ++r)
        for (Eigen::Index c = 0; c < n; ++c) {
            if (!(close(r, c) > 0.0))
                throw std::runtime_error("panel: close <= 0 at " + dates[r] + ", " + names[c]);
            if (has_range()) {
                const double hi = (*high)(r, c), lo = (*low)(r, c);
                if (!(lo > 0.0))
                    throw std::runtime_error("panel: low <= 0 at " + dates[r] + ", " + names[c]);
                if (hi < lo)
                    throw std::runtime_error("panel: high < low at " + dates[r] + ", " + names[c]);
            }
        }
}

namespace {

PricePanel assemble(const std::vector<std::string>& names, std::vector<RawSeries>& series,
                    bool with_range) {
    // Inner join: keep dates present (with a close value) in every series.
    std::vector<std::string> dates;
    for (const auto& [date, cells] : series[0].by_date) {
        bool everywhere = !std::isnan(cells[0]);
        for (std::size_t s = 1; everywhere && s < series.size(); ++s) {
            auto it = series[s].by_date.find(date);
            everywhere = it != series[s].by_date.end() && !std::isnan(it->second[0]);
        }
        if (with_range && everywhere) {
            for (std::size_t s = 0; everywhere && s < series.size(); ++s) {
                const auto& c = series[s].by_date.at(date);
                everywhere = !std::isnan(c[1]) && !std::isnan(c[2]);
            }
        }
        if (everywhere) dates.push_back(date);
    }
    if (static_cast<int>(dates.size()) < kMinRows)
        throw std::runtime_error("insufficient data: " + std::to_string(dates.size()) +
                                 " aligned rows, need at least " + std::to_string(kMinRows));

    const Eigen::Index t = static_cast<Eigen::Index>(dates.size());
    const Eigen::Index n = static_cast<Eigen::Index>(series.size());
    PricePanel panel;
    panel.dates = dates;
    panel.names = names;
    panel.close.resize(t, n);
    if (with_range) {
        panel.high.emplace(t, n);
        panel.low.emplace(t, n);
    }
    for (Eigen::Index c = 0; c < n; ++c)
        for (Eigen::Index r = 0; r < t; ++r) {
            const auto& cells = series[c].by_date.at(dates[r]);
            panel.close(r, c) = cells[0];
            if (with_range) {
                (*panel.high)(r, c) = cells[1];
                (*panel.low)(r, c) = cells[2];
            }
        }
    panel.validate();
    return panel;
}

std::vector<RawSeries> read_simple(const std::filesystem::path& path,
                                   const std::vector<std::string>& wanted) {
    const CsvTable table = read_csv(path);
    check_dates_increasing(table, path);
    std::vector<int> cols;
    std::vector<std::string> names;
    if (wanted.empty()) {
        for (std::size_t c = 1; c < table.header.size(); ++c) {
            cols.push_back(static_cast<int>(c));
            names.push_back(table.header[c]);
        }
    } else {
        for (const auto& name : wanted) {
            const int c = table.column_index(name);
            if (c <= 0) throw std::runtime_error(path.string() + ": no column named '" + name + "'");
            cols.push_back(c);
            names.push_back(name);
        }
    }
    if (cols.empty()) throw std::runtime_error(path.string() + ": no series columns");

    std::vector<RawSeries> series(cols.size());
    for (std::size_t s = 0; s < cols.size(); ++s) series[s].name = names[s];
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        for (std::size_t s = 0; s < cols.size(); ++s) {
            const std::string& cell = row[cols[s]];
            double value = std::nan("");
            if (!cell.empty() && !parse_cell(cell, value))
                bad_cell(path, r + 2, table.header[cols[s]], "'" + cell + "' is not a number");
            series[s].by_date[row[0]] = {value, std::nan(""), std::nan("")};
        }
    }
    return series;
}

void merge_companion(std::vector<RawSeries>& series, const std::filesystem::path& path, int slot) {
    const CsvTable table = read_csv(path);
    check_dates_increasing(table, path);
    for (auto& s : series) {
        const int c = table.column_index(s.name);
        if (c <= 0)
            throw std::runtime_error(path.string() + ": no column named '" + s.name + "'");
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            const std::string& cell = table.rows[r][c];
            if (cell.empty()) continue;
            double value;
            if (!parse_cell(cell, value))
                bad_cell(path, r + 2, s.name, "'" + cell + "' is not a number");
            auto it = s.by_date.find(table.rows[r][0]);
            if (it != s.by_date.end()) it->second[slot] = value;
        }
    }
}

PricePanel load_wide(const std::filesystem::path& path, const std::vector<std::string>& wanted) {
    const CsvTable table = read_csv(path);
    check_dates_increasing(table, path);

    std::map<std::string, WideColumns> columns;
    std::vector<std::string> order;
    for (std::size_t c = 1; c < table.header.size(); ++c) {
        const std::string& h = table.header[c];
        auto tail = [&](const char* suffix) {
            const std::string suf(suffix);
            return h.size() > suf.size() && h.compare(h.size() - suf.size(), suf.size(), suf) == 0
                       ? h.substr(0, h.size() - suf.size())
                       : std::string();
        };
        std::string name;
        if (!(name = tail("_close")).empty()) {
            if (!columns.count(name)) order.push_back(name);
            columns[name].close = static_cast<int>(c);
        } else if (!(name = tail("_high")).empty()) {
            if (!columns.count(name)) order.push_back(name);
            columns[name].high = static_cast<int>(c);
        } else if (!(name = tail("_low")).empty()) {
            if (!columns.count(name)) order.push_back(name);
            columns[name].low = static_cast<int>(c);
        } else {
            throw std::runtime_error(path.string() + ": column '" + h +
                                     "' does not end in _close/_high/_low");
        }
    }
    std::vector<std::string> names = wanted.empty() ? order : wanted;
    bool with_range = true;
    for (const auto& name : names) {
        auto it = columns.find(name);
        if (it == columns.end() || it->second.close < 0)
            throw std::runtime_error(path.string() + ": no column named '" + name + "_close'");
        if (it->second.high < 0 || it->second.low < 0) with_range = false;
    }

    std::vector<RawSeries> series(names.size());
    for (std::size_t s = 0; s < names.size(); ++s) {
        series[s].name = names[s];
        const WideColumns& wc = columns.at(names[s]);
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            const auto& row = table.rows[r];
            std::array<double, 3> cells = {std::nan(""), std::nan(""), std::nan("")};
            const int idx[3] = {wc.close, with_range ? wc.high : -1, with_range ? wc.low : -1};
            for (int k = 0; k < 3; ++k) {
                if (idx[k] < 0) continue;
                const std::string& cell = row[idx[k]];
                if (cell.empty()) continue;
                if (!parse_cell(cell, cells[k]))
                    bad_cell(path, r + 2, table.header[idx[k]], "'" + cell + "' is not a number");
            }
            series[s].by_date[row[0]] = cells;
        }
    }
    return assemble(names, series, with_range);
}

bool looks_wide(const std::filesystem::path& path) {
    const CsvTable table = read_csv(path);
    for (std::size_t c = 1; c < table.header.size(); ++c) {
        const std::string& h = table.header[c];
        if (h.size() > 6 && h.compare(h.size() - 6, 6, "_close") == 0) return true;
    }
    return false;
}

std::filesystem::path companion_path(const std::filesystem::path& path, const char* which) {
    std::filesystem::path p = path;
    p.replace_extension();
    p += std::string(".") + which + ".csv";
    return p;
}

}  // namespace

PricePanel load_price_panel(const std::filesystem::path& path, const PanelSchema& schema) {
    if (!std::filesystem::exists(path))
        throw std::runtime_error("file does not exist: " + path.string());

    PanelLayout layout = schema.layout;
    if (layout == PanelLayout::Auto) {
        if (looks_wide(path))
            layout = PanelLayout::Wide;
        else if (std::filesystem::exists(companion_path(path, "high")) &&
                 std::filesystem::exists(companion_path(path, "low")))
            layout = PanelLayout::Companion;
        else
            layout = PanelLayout::CloseOnly;
    }

    switch (layout) {
        case PanelLayout::Wide:
            return load_wide(path, schema.series);
        case PanelLayout::Companion: {
            auto series = read_simple(path, schema.series);
            merge_companion(series, companion_path(path, "high"), 1);
            merge_companion(series, companion_path(path, "low"), 2);
            std::vector<std::string> names;
            for (const auto& s : series) names.push_back(s.name);
            return assemble(names, series, true);
        }
        case PanelLayout::CloseOnly:
        default: {
            auto series = read_simple(path, schema.series);
            std::vector<std::string> names;
            for (const auto& s : series) names.push_back(s.name);
            return assemble(names, series, false);
        }
    }
}

ReturnPanel log_returns(const PricePanel& panel) {
    if (panel.rows() < 2) throw std::runtime_error("log_returns: need at least 2 rows");
    ReturnPanel out;
    out.names = panel.names;
    out.dates.assign(panel.dates.begin() + 1, panel.dates.end());
    const Matrix logp = panel.close.array().log();
    out.returns = logp.bottomRows(panel.rows() - 1) - logp.topRows(panel.rows() - 1);
    return out;
}

VolatilityPanel range_volatility(const PricePanel& panel, double constant, int annualization_days) {
    if (!panel.has_range())
        throw std::runtime_error("range_volatility: panel has no high/low data");
    if (!(constant > 0.0)) throw std::runtime_error("range_volatility: constant must be > 0");
    if (annualization_days < 1)
        throw std::runtime_error("range_volatility: annualization_days must be >= 1");
    for (Eigen::Index r = 0; r < panel.rows(); ++r)
        for (Eigen::Index c = 0; c < panel.cols(); ++c)
            if ((*panel.high)(r, c) < (*panel.low)(r, c))
                throw std::runtime_error("range_volatility: high < low at " + panel.dates[r] + ", " +
                                         panel.names[c]);

    VolatilityPanel out;
    out.dates = panel.dates;
    out.names = panel.names;
    const Matrix log_range = panel.high->array().log() - panel.low->array().log();
    const Matrix daily_var = constant * log_range.array().square();
    out.vol = 100.0 * (static_cast<double>(annualization_days) * daily_var.array()).sqrt();
    return out;
}

}  // namespace volspill
