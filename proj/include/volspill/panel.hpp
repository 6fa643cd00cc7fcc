#pragma once

#include <Eigen/Core>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace volspill {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// ---- calendar helpers (proleptic Gregorian) ----

bool parse_iso_date(const std::string& s, int& year, int& month, int& day);
bool is_iso_date(const std::string& s);
long day_number_from_civil(int year, int month, int day);
std::string iso_date_from_day_number(long day);

/// Date-aligned panel of daily prices. `high`/`low` are present together or
/// not at all. Dates are ISO-8601 strings, strictly increasing.
struct PricePanel {
    std::vector<std::string> dates;
    std::vector<std::string> names;
    Matrix close;                  // T x N, all > 0
    std::optional<Matrix> high;    // T x N, high >= low > 0
    std::optional<Matrix> low;

    Eigen::Index rows() const { return close.rows(); }
    Eigen::Index cols() const { return close.cols(); }
    bool has_range() const { return high.has_value() && low.has_value(); }

    /// Throws std::runtime_error on any invariant breach, naming the cell.
    void validate() const;
};

/// Log returns of the close prices: returns(t, i) = ln close(t+1, i) - ln close(t, i).
struct ReturnPanel {
    std::vector<std::string> dates;  // length T - 1, dates of the later observation
    std::vector<std::string> names;
    Matrix returns;                  // (T-1) x N
};

/// Annualized daily percent range volatilities, one cell per (day, series).
struct VolatilityPanel {
    std::vector<std::string> dates;
    std::vector<std::string> names;
    Matrix vol;                      // T x N, all >= 0
};

enum class PanelLayout {
    Auto,       // detect: wide columns, else companion files, else close-only
    CloseOnly,  // date,<name1>,<name2>,...
    Companion,  // close file plus <stem>.high.csv / <stem>.low.csv
    Wide,       // date,<name>_close,<name>_high,<name>_low,...
};

struct PanelSchema {
    PanelLayout layout = PanelLayout::Auto;
    /// Optional subset / ordering of series names; empty keeps file order.
    std::vector<std::string> series;
};

/// Loads and aligns a daily price panel. Alignment is an inner join on dates:
/// a row survives only if every selected series has a value on that date.
/// Throws on unparseable cells (naming row and column) and when fewer than 30
/// rows survive ("insufficient data").
PricePanel load_price_panel(const std::filesystem::path& path, const PanelSchema& schema = {});

ReturnPanel log_returns(const PricePanel& panel);

/// Range-based daily variance: constant * (ln high - ln low)^2, reported as an
/// annualized percent standard deviation 100 * sqrt(days * variance).
/// The default constant 0.361 is the rounded Parkinson factor; pass
/// 1 / (4 ln 2) for the exact one.
VolatilityPanel range_volatility(const PricePanel& panel, double constant = 0.361,
                                 int annualization_days = 365);

inline constexpr double kParkinsonConstant = 0.36067376022224085;  // 1 / (4 ln 2)

}  // namespace volspill
